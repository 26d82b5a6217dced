#include "degen/eigen.hpp"

#include <cstdlib>
#include <mutex>

#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#define lapack_complex_float_real(z) ((z).real())
#define lapack_complex_float_imag(z) ((z).imag())
#define lapack_complex_double_real(z) ((z).real())
#define lapack_complex_double_imag(z) ((z).imag())
#include <lapacke.h>

namespace degen {

namespace {

// The runs are sized for one core per trial; a threaded BLAS underneath only
// adds oversubscription jitter. Respects an explicit user setting.
void pin_blas_threads() {
  static std::once_flag flag;
  std::call_once(flag, [] { setenv("OPENBLAS_NUM_THREADS", "1", 0); });
}

}  // namespace

std::vector<Complex> general_eigenvalues(const Matrix<double>& m) {
  pin_blas_threads();
  const int n = m.rows();
  if (!m.square()) throw std::invalid_argument("general_eigenvalues: non-square matrix");
  if (n == 0) return {};
  // Row-major data handed to a column-major routine is the transpose, which
  // has the same spectrum; this skips LAPACKE's internal transposition.
  std::vector<double> a(m.data(), m.data() + static_cast<size_t>(n) * n);
  std::vector<double> wr(n), wi(n);
  int info = LAPACKE_dgeev(LAPACK_COL_MAJOR, 'N', 'N', n, a.data(), n, wr.data(),
                           wi.data(), nullptr, 1, nullptr, 1);
  if (info != 0) throw EigenSolverError("dgeev failed to converge", info);
  std::vector<Complex> w(n);
  for (int i = 0; i < n; ++i) w[i] = Complex(wr[i], wi[i]);
  return w;
}

std::vector<Complex> general_eigenvalues(const Matrix<Complex>& m) {
  pin_blas_threads();
  const int n = m.rows();
  if (!m.square()) throw std::invalid_argument("general_eigenvalues: non-square matrix");
  if (n == 0) return {};
  std::vector<Complex> a(m.data(), m.data() + static_cast<size_t>(n) * n);
  std::vector<Complex> w(n);
  int info = LAPACKE_zgeev(LAPACK_COL_MAJOR, 'N', 'N', n, a.data(), n, w.data(),
                           nullptr, 1, nullptr, 1);
  if (info != 0) throw EigenSolverError("zgeev failed to converge", info);
  return w;
}

std::vector<double> symmetric_eigenvalues(const Matrix<double>& m) {
  pin_blas_threads();
  const int n = m.rows();
  if (!m.square()) throw std::invalid_argument("symmetric_eigenvalues: non-square matrix");
  if (n == 0) return {};
  std::vector<double> a(m.data(), m.data() + static_cast<size_t>(n) * n);
  std::vector<double> w(n);
  int info = LAPACKE_dsyev(LAPACK_COL_MAJOR, 'N', 'U', n, a.data(), n, w.data());
  if (info != 0) throw EigenSolverError("dsyev failed to converge", info);
  return w;
}

}  // namespace degen
