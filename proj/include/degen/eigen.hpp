#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "degen/matrix.hpp"
#include "degen/scalar.hpp"

namespace degen {

// Raised when the QR iteration fails to converge; info is the LAPACK code.
struct EigenSolverError : std::runtime_error {
  int info;
  EigenSolverError(const std::string& what, int info_)
      : std::runtime_error(what), info(info_) {}
};

// Eigenvalues of a general square matrix (eigenvalues only, LAPACK order).
std::vector<Complex> general_eigenvalues(const Matrix<double>& m);
std::vector<Complex> general_eigenvalues(const Matrix<Complex>& m);

// Eigenvalues of a real symmetric matrix, ascending.
std::vector<double> symmetric_eigenvalues(const Matrix<double>& m);

}  // namespace degen
