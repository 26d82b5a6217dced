#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "degen/asymptotics.hpp"
#include "degen/bipartite.hpp"
#include "degen/models.hpp"

namespace degen {

enum class Target { Pm, Cond41, Histogram, GapRate };

const char* target_name(Target t);
Target target_from_name(const std::string& name);
ModelKind model_from_name(const std::string& name);

struct SimulationConfig {
  ModelKind model = ModelKind::Asym;
  int n = 1;
  double c = 0.0;
  double q = 0.0;  // symmetric model only; must stay 0 for asym
  long trials = 1;
  std::uint64_t seed = 0;
  Target target = Target::Cond41;
  // Fraction of trials whose graph verdict is re-checked against a continuous
  // draw; negative selects the size-based default.
  double value_check_fraction = -1.0;
  // Fixed edge probability bypassing the (log n + c)/n schedule.
  std::optional<double> p_override;
};

// 1 at n <= 20, 0.05 up to 500, then 0.01: eigensolves dominate at large n.
double default_value_check_fraction(int n);

// Edge probability the run actually uses: override when set, else the schedule.
double effective_p(const SimulationConfig& cfg);

// True when the schedule value (log n + c)/n fell outside [0,1]; overrides never clamp.
bool schedule_clamped(const SimulationConfig& cfg);

struct EstimateReport {
  SimulationConfig config;  // echo, value_check_fraction resolved
  long successes = 0;
  double estimate = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  double prediction = 0.0;
  double abs_gap = 0.0;
  bool clamped = false;
  double runtime_seconds = 0.0;  // reported on stderr, never serialized
};

struct HistogramReport {
  SimulationConfig config;
  std::map<int, long> counts;  // isolated-point count -> occurrences
  double reference_mean = 0.0;
  double total_variation = 0.0;
  bool clamped = false;
  double runtime_seconds = 0.0;
};

// Wilson score interval; endpoints exact 0/1 on unanimous samples.
std::pair<double, double> wilson_interval(long successes, long trials, double z = 1.96);

// 1/2 sum |empirical - Poisson(mean)|, counting the Poisson mass outside the support.
double total_variation_vs_poisson(const std::map<int, long>& counts, long trials, double mean);

// Estimates P(perfect matching); prediction e^-lambda (asym) or e^-mu (sym).
EstimateReport run_matching_experiment(const SimulationConfig& cfg);

// Estimates P(Condition 4.1); a value_check_fraction subsample draws continuous
// values and must agree with the graph verdict, else std::runtime_error naming
// the seed and trial.
EstimateReport run_condition41_experiment(const SimulationConfig& cfg);

// Estimates P(no perfect matching and no isolated point); prediction 0.
EstimateReport run_gap_rate_experiment(const SimulationConfig& cfg);

// Distribution of the isolated-point count (both sides for asym, identified
// vertices for sym) against the Poisson reference.
HistogramReport run_isolated_histogram(const SimulationConfig& cfg);

struct OracleScanRow {
  int n = 0;
  bool symmetric = false;
  long masks = 0;
  long satisfied = 0;  // graph criterion true
  long disagreements = 0;
  std::vector<std::uint64_t> failing_masks;  // n*n bitmaps, bit j*n+l = edge (j,l)
};

// For every mask of every size 1..max_n, checks the graph criterion against
// the numeric distinctness verdict on samples_per_mask continuous draws.
// max_n <= 3 asymmetric, <= 4 symmetric.
std::vector<OracleScanRow> oracle_equivalence_scan(int max_n, int samples_per_mask,
                                                   bool symmetric, std::uint64_t seed);

struct ThresholdScanResult {
  int n = 0;
  long cond41_checked = 0;  // masks with #edges >= n^2-2n+2
  long cond41_violations = 0;
  long pm_checked = 0;  // masks with #edges >= n^2-n+1
  long pm_violations = 0;
  long boundary_masks = 0;  // masks with #edges exactly n^2-2n+1
  long boundary_failures = 0;  // of those, how many fail the criterion
  std::vector<std::uint64_t> violation_masks;
  std::vector<std::uint64_t> boundary_failure_masks;
};

// Exhaustive edge-count threshold check over all 2^(n^2) masks; n <= 4.
ThresholdScanResult threshold_scan(int n);

// Worker cap from DEGEN_THREADS; affects speed only, never results.
int worker_count();

std::string to_json(const EstimateReport& r);
std::string to_json(const HistogramReport& r);
std::string csv_header();
std::string csv_row(const EstimateReport& r);

}  // namespace degen
