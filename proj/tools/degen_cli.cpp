#include <cstdint>
#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "degen/asymptotics.hpp"
#include "degen/bipartite.hpp"
#include "degen/models.hpp"
#include "degen/montecarlo.hpp"
#include "degen/polynomial.hpp"
#include "degen/rng.hpp"
#include "degen/scalar.hpp"

// Exit codes: 0 success, 1 assertion/oracle failure (value-bridge disagreement,
// scan disagreement, --check not holding), 2 usage error with a diagnostic on
// stderr. Reports go to stdout, or to --out <path> instead when given.
// Vertex and row/column indices in JSON reports are 1-based.

namespace {

using nlohmann::json;

// Estimate-target runs may print timing; it never enters the report payload.
void report_runtime(double seconds) { std::cerr << "runtime_seconds " << seconds << "\n"; }

void emit(const std::string& payload, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << payload << "\n";
    return;
  }
  std::ofstream f(out_path);
  if (!f) throw std::invalid_argument("cannot open output file: " + out_path);
  f << payload << "\n";
  if (!f) throw std::invalid_argument("cannot write output file: " + out_path);
}

std::string read_input_text(const std::string& path) {
  if (path == "-") {
    return std::string(std::istreambuf_iterator<char>(std::cin),
                       std::istreambuf_iterator<char>());
  }
  std::ifstream f(path);
  if (!f) throw std::invalid_argument("cannot open input file: " + path);
  return std::string(std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>());
}

json one_based(const std::vector<int>& v) {
  json a = json::array();
  for (int x : v) a.push_back(x + 1);
  return a;
}

// ---------------------------------------------------------------------------
// simulate

struct SimulateArgs {
  std::string model, target = "cond41", out;
  int n = 0;
  double c = 0.0, q = 0.0, p_override = 0.0;
  long trials = 0;
  std::uint64_t seed = 0;
  bool have_q = false, have_p_override = false, csv = false;
};

degen::SimulationConfig config_from(const SimulateArgs& a) {
  degen::SimulationConfig cfg;
  cfg.model = degen::model_from_name(a.model);
  if (a.have_q && cfg.model == degen::ModelKind::Asym)
    throw std::invalid_argument("--q applies to the symmetric model only");
  cfg.n = a.n;
  cfg.c = a.c;
  cfg.q = a.q;
  cfg.trials = a.trials;
  cfg.seed = a.seed;
  cfg.target = degen::target_from_name(a.target);
  if (a.have_p_override) cfg.p_override = a.p_override;
  return cfg;
}

int run_simulate(const SimulateArgs& a) {
  degen::SimulationConfig cfg = config_from(a);
  if (cfg.target == degen::Target::Histogram) {
    if (a.csv) throw std::invalid_argument("--csv is defined for estimate targets only");
    degen::HistogramReport rep = degen::run_isolated_histogram(cfg);
    report_runtime(rep.runtime_seconds);
    emit(degen::to_json(rep), a.out);
    return 0;
  }
  degen::EstimateReport rep = cfg.target == degen::Target::Pm
                                  ? degen::run_matching_experiment(cfg)
                                  : cfg.target == degen::Target::Cond41
                                        ? degen::run_condition41_experiment(cfg)
                                        : degen::run_gap_rate_experiment(cfg);
  report_runtime(rep.runtime_seconds);
  if (a.csv)
    emit(degen::csv_header() + "\n" + degen::csv_row(rep), a.out);
  else
    emit(degen::to_json(rep), a.out);
  return 0;
}

// ---------------------------------------------------------------------------
// predict

int run_predict(const std::string& model_name, double c, double q, bool have_q,
                const std::string& out) {
  degen::ModelKind model = degen::model_from_name(model_name);
  if (have_q && model == degen::ModelKind::Asym)
    throw std::invalid_argument("--q applies to the symmetric model only");
  degen::Prediction pr = degen::predict_distinct(c, model, q);
  json j;
  j["model"] = degen::model_kind_name(pr.model);
  j["c"] = pr.c;
  if (pr.model == degen::ModelKind::Sym) {
    j["q_inf"] = pr.q_inf;
    j["mu"] = pr.lambda_or_mu;
  } else {
    j["lambda"] = pr.lambda_or_mu;
  }
  j["p_distinct"] = pr.p_distinct;
  emit(j.dump(), out);
  return 0;
}

// ---------------------------------------------------------------------------
// oracle

json scan_rows_json(const std::vector<degen::OracleScanRow>& rows) {
  json arr = json::array();
  for (const auto& r : rows) {
    json row;
    row["n"] = r.n;
    row["masks"] = r.masks;
    row["satisfied"] = r.satisfied;
    row["disagreements"] = r.disagreements;
    row["failing_masks"] = r.failing_masks;
    arr.push_back(std::move(row));
  }
  return arr;
}

int run_oracle(int max_n, int samples, std::uint64_t seed, const std::string& models,
               const std::string& out) {
  if (models != "both" && models != "asym" && models != "sym")
    throw std::invalid_argument("--model must be asym, sym, or both");
  json j;
  j["max_n"] = max_n;
  j["samples"] = samples;
  j["seed"] = seed;
  j["models"] = models;
  long total = 0;
  json asym_rows = json::array(), sym_rows = json::array();
  if (models != "sym") {
    auto rows = degen::oracle_equivalence_scan(max_n, samples, false, seed);
    for (const auto& r : rows) total += r.disagreements;
    asym_rows = scan_rows_json(rows);
  }
  if (models != "asym") {
    auto rows = degen::oracle_equivalence_scan(max_n, samples, true, seed);
    for (const auto& r : rows) total += r.disagreements;
    sym_rows = scan_rows_json(rows);
  }
  j["asym"] = std::move(asym_rows);
  j["sym"] = std::move(sym_rows);
  j["total_disagreements"] = total;
  emit(j.dump(), out);
  return total == 0 ? 0 : 1;
}

// ---------------------------------------------------------------------------
// threshold

json capped_mask_list(const std::vector<std::uint64_t>& masks, std::size_t cap, bool* truncated) {
  json a = json::array();
  for (std::size_t i = 0; i < masks.size() && i < cap; ++i) a.push_back(masks[i]);
  if (masks.size() > cap) *truncated = true;
  return a;
}

int run_threshold(int max_n, const std::string& out) {
  if (max_n < 1 || max_n > 4)
    throw std::invalid_argument("--max-n must lie in 1..4 for threshold scans");
  constexpr std::size_t kMaskListCap = 64;
  json results = json::array();
  long violations = 0;
  for (int n = 1; n <= max_n; ++n) {
    degen::ThresholdScanResult r = degen::threshold_scan(n);
    violations += r.cond41_violations + r.pm_violations;
    json row;
    row["n"] = r.n;
    row["cond41_checked"] = r.cond41_checked;
    row["cond41_violations"] = r.cond41_violations;
    row["pm_checked"] = r.pm_checked;
    row["pm_violations"] = r.pm_violations;
    row["boundary_masks"] = r.boundary_masks;
    row["boundary_failures"] = r.boundary_failures;
    bool truncated = false;
    row["violation_masks"] = capped_mask_list(r.violation_masks, kMaskListCap, &truncated);
    row["boundary_failure_masks"] =
        capped_mask_list(r.boundary_failure_masks, kMaskListCap, &truncated);
    row["mask_lists_truncated"] = truncated;
    results.push_back(std::move(row));
  }
  json j;
  j["max_n"] = max_n;
  j["results"] = std::move(results);
  emit(j.dump(), out);
  return violations == 0 ? 0 : 1;
}

// ---------------------------------------------------------------------------
// graph

const char* witness_side_name(degen::DeficiencyWitness::Kind k) {
  switch (k) {
    case degen::DeficiencyWitness::Kind::Left: return "left";
    case degen::DeficiencyWitness::Kind::Right: return "right";
    default: return "identified";
  }
}

int run_graph(const std::string& in, bool dump_matrix, bool exact, bool check,
              const std::string& out) {
  degen::BipartiteMask g = degen::BipartiteMask::parse_text(read_input_text(in));
  const int n = g.n();
  degen::MatchingCertificate cert = degen::condition_4_1_certificate(g);
  const bool pm = degen::has_perfect_matching(g);

  json j;
  j["n"] = n;
  j["symmetric"] = g.symmetric();
  j["edges"] = g.edge_count();
  j["perfect_matching"] = pm;
  j["criterion"] = "condition_4_1";
  j["criterion_satisfied"] = cert.satisfied;

  if (cert.satisfied) {
    json pairs = json::array();
    for (int l = 0; l < n; ++l) {
      int r = cert.matching.left_to_right[l];
      if (r >= 0) pairs.push_back(json::array({l + 1, r + 1}));
    }
    j["certificate"] = {{"removed", cert.removed < 0 ? json() : json(cert.removed + 1)},
                        {"pairs", std::move(pairs)}};
  } else {
    j["certificate"] = nullptr;
  }

  degen::IsolatedPoints iso = degen::isolated_points(g);
  j["isolated"] = {{"left", one_based(iso.left)}, {"right", one_based(iso.right)}};

  if (!pm) {
    auto w = degen::hall_violation_witness(g, n <= 12);
    if (w) {
      j["hall_witness"] = {{"side", witness_side_name(w->side)},
                           {"set", one_based(w->I)},
                           {"neighborhood", one_based(w->gamma)}};
    } else {
      j["hall_witness"] = nullptr;
    }
  } else {
    j["hall_witness"] = nullptr;
  }

  if (!cert.satisfied && n <= 12) {
    auto s = g.symmetric() ? degen::condition_5_3(g) : degen::condition_4_11(g);
    if (s) {
      j["structural_witness"] = {{"k", s->k},
                                 {"side", witness_side_name(s->side)},
                                 {"set", one_based(s->I)},
                                 {"neighborhood", one_based(s->J)}};
    } else {
      j["structural_witness"] = nullptr;
    }
  } else {
    j["structural_witness"] = nullptr;
  }

  j["witness_matrix"] = nullptr;
  j["witness_distinct_numeric"] = nullptr;
  j["witness_distinct_exact"] = nullptr;
  if ((dump_matrix || exact) && cert.satisfied) {
    if (exact && n > 16)
      throw std::invalid_argument("--exact witness verification is supported for n <= 16");
    auto w = g.symmetric() ? degen::symmetric_distinct_witness(g)
                           : degen::distinct_witness_for_mask(g);
    if (w) {
      if (dump_matrix) j["witness_matrix"] = degen::matrix_to_text(w->values);
      j["witness_distinct_numeric"] = degen::eigenvalues_distinct(*w, degen::DistinctMode::Numeric);
      if (exact)
        j["witness_distinct_exact"] = degen::eigenvalues_distinct(*w, degen::DistinctMode::Exact);
    }
  }

  emit(j.dump(), out);
  return (check && !cert.satisfied) ? 1 : 0;
}

// ---------------------------------------------------------------------------
// discriminant

// Exact tokens: integers, fractions "p/q", and decimal strings, all parsed to
// rationals with no rounding.
degen::Rational parse_rational_token(const std::string& token) {
  const auto bad = [&] {
    return std::invalid_argument("cannot parse exact coefficient: " + token);
  };
  std::size_t dot = token.find('.');
  try {
    if (dot == std::string::npos) {
      degen::Rational r;
      if (r.set_str(token, 10) != 0) throw bad();
      if (r.get_den() == 0) throw bad();
      r.canonicalize();
      return r;
    }
    std::string digits = token;
    digits.erase(dot, 1);
    const std::size_t frac_digits = token.size() - dot - 1;
    // Base must be explicit: GMP's base-0 autodetect reads "025" as octal.
    degen::BigInt num(digits, 10);
    degen::BigInt den(1);
    for (std::size_t i = 0; i < frac_digits; ++i) den *= 10;
    degen::Rational r(num, den);
    r.canonicalize();
    return r;
  } catch (const std::invalid_argument&) {
    throw bad();
  }
}

std::vector<std::string> split_coeff_list(const std::string& list) {
  std::vector<std::string> tokens;
  std::string cur;
  std::istringstream in(list);
  while (std::getline(in, cur, ',')) {
    const auto first = cur.find_first_not_of(" \t");
    if (first == std::string::npos) throw std::invalid_argument("empty coefficient in --coeffs");
    const auto last = cur.find_last_not_of(" \t");
    tokens.push_back(cur.substr(first, last - first + 1));
  }
  if (tokens.empty()) throw std::invalid_argument("--coeffs is empty");
  return tokens;
}

// --coeffs lists a_0,...,a_{n-1} of the monic p(x) = x^n + a_{n-1}x^{n-1} + ... + a_0.
int run_discriminant(const std::string& coeffs, bool exact, bool check, const std::string& out) {
  std::vector<std::string> tokens = split_coeff_list(coeffs);
  json j;
  j["degree"] = tokens.size();
  j["exact"] = exact;
  bool distinct = false;
  if (exact) {
    std::vector<degen::Rational> c;
    json echo = json::array();
    for (const auto& t : tokens) {
      c.push_back(parse_rational_token(t));
      echo.push_back(c.back().get_str());
    }
    j["coefficients"] = std::move(echo);
    degen::Rational d = degen::discriminant(degen::Polynomial<degen::Rational>(std::move(c)));
    j["discriminant"] = d.get_str();
    distinct = d != 0;
  } else {
    std::vector<double> c;
    for (const auto& t : tokens) {
      try {
        std::size_t used = 0;
        double v = std::stod(t, &used);
        if (used != t.size()) throw std::invalid_argument(t);
        c.push_back(v);
      } catch (const std::exception&) {
        throw std::invalid_argument("cannot parse coefficient: " + t);
      }
    }
    j["coefficients"] = c;
    double d = degen::discriminant(degen::Polynomial<double>(std::move(c)));
    j["discriminant"] = d;
    distinct = d != 0.0;
  }
  j["distinct_roots"] = distinct;
  emit(j.dump(), out);
  return (check && !distinct) ? 1 : 0;
}

// ---------------------------------------------------------------------------
// sweep

struct SweepPair {
  int n = 0;
  double c = 0.0;
};

// One "N c" pair per line; '#' starts a comment; blank lines are skipped.
std::vector<SweepPair> parse_sweep_pairs(const std::string& text) {
  std::vector<SweepPair> pairs;
  std::istringstream lines(text);
  std::string line;
  int lineno = 0;
  while (std::getline(lines, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream row(line);
    std::string a, b, extra;
    if (!(row >> a)) continue;
    const auto bad = [&] {
      return std::invalid_argument("sweep spec line " + std::to_string(lineno) +
                                   ": expected 'N c'");
    };
    if (!(row >> b) || (row >> extra)) throw bad();
    try {
      std::size_t used = 0;
      int n = std::stoi(a, &used);
      if (used != a.size() || n < 1) throw bad();
      double c = std::stod(b, &used);
      if (used != b.size()) throw bad();
      pairs.push_back({n, c});
    } catch (const std::invalid_argument&) {
      throw bad();
    } catch (const std::out_of_range&) {
      throw bad();
    }
  }
  if (pairs.empty()) throw std::invalid_argument("sweep spec is empty");
  return pairs;
}

// Row i runs with seed hash64(base seed, i), i counted from 0, so duplicate
// (N, c) pairs still produce independent, individually reproducible rows.
int run_sweep(const SimulateArgs& base, const std::string& in) {
  degen::SimulationConfig cfg = config_from(base);
  if (cfg.target == degen::Target::Histogram)
    throw std::invalid_argument("sweep supports estimate targets only (pm, cond41, gap_rate)");
  std::vector<SweepPair> pairs = parse_sweep_pairs(read_input_text(in));
  std::string table = degen::csv_header();
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    degen::SimulationConfig row_cfg = cfg;
    row_cfg.n = pairs[i].n;
    row_cfg.c = pairs[i].c;
    row_cfg.seed = degen::hash64(cfg.seed, static_cast<std::uint64_t>(i));
    degen::EstimateReport rep = row_cfg.target == degen::Target::Pm
                                    ? degen::run_matching_experiment(row_cfg)
                                    : row_cfg.target == degen::Target::Cond41
                                          ? degen::run_condition41_experiment(row_cfg)
                                          : degen::run_gap_rate_experiment(row_cfg);
    report_runtime(rep.runtime_seconds);
    table += "\n" + degen::csv_row(rep);
  }
  emit(table, base.out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Eigenvalue-degeneracy toolkit for Bernoulli-masked random matrices"};
  app.require_subcommand(1);

  SimulateArgs sim;
  CLI::App* simulate = app.add_subcommand(
      "simulate", "Run a Monte Carlo experiment and report the estimate");
  simulate->add_option("--model", sim.model, "Matrix model: asym or sym")->required();
  simulate->add_option("--n", sim.n, "Matrix dimension N")->required();
  simulate->add_option("--c", sim.c, "Sparsity offset in p = (log N + c)/N")->required();
  simulate->add_option("--q", sim.q, "Diagonal probability (sym model only)");
  simulate->add_option("--trials", sim.trials, "Number of Monte Carlo trials")->required();
  simulate->add_option("--seed", sim.seed, "Root RNG seed (default 0)");
  simulate->add_option("--target", sim.target,
                       "Experiment target: pm, cond41, histogram, or gap_rate");
  simulate->add_option("--p-override", sim.p_override,
                       "Fixed edge probability bypassing the (log N + c)/N schedule");
  simulate->add_flag("--csv", sim.csv, "Emit a CSV row instead of JSON");
  simulate->add_option("--out", sim.out, "Write the report to this file instead of stdout");

  std::string pr_model, pr_out;
  double pr_c = 0.0, pr_q = 0.0;
  CLI::App* predict =
      app.add_subcommand("predict", "Evaluate the limiting distinctness probability");
  predict->add_option("--model", pr_model, "Matrix model: asym or sym")->required();
  predict->add_option("--c", pr_c, "Sparsity offset in p = (log N + c)/N")->required();
  predict->add_option("--q", pr_q, "Limiting diagonal probability (sym model only)");
  predict->add_option("--out", pr_out, "Write the report to this file instead of stdout");

  int or_max_n = 3, or_samples = 25;
  std::uint64_t or_seed = 0;
  std::string or_models = "both", or_out;
  CLI::App* oracle = app.add_subcommand(
      "oracle", "Exhaustively compare the graph criterion against sampled numeric spectra");
  oracle->add_option("--max-n", or_max_n, "Scan all masks of size 1..max-n (default 3)");
  oracle->add_option("--samples", or_samples, "Numeric samples per mask (default 25)");
  oracle->add_option("--seed", or_seed, "Root RNG seed (default 0)");
  oracle->add_option("--model", or_models, "asym, sym, or both (default both)");
  oracle->add_option("--out", or_out, "Write the report to this file instead of stdout");

  int th_max_n = 0;
  std::string th_out;
  CLI::App* threshold = app.add_subcommand(
      "threshold", "Exhaustively verify the edge-count thresholds for sizes 1..max-n");
  threshold->add_option("--max-n", th_max_n, "Largest size to scan (1..4)")->required();
  threshold->add_option("--out", th_out, "Write the report to this file instead of stdout");

  std::string gr_in, gr_out;
  bool gr_dump = false, gr_exact = false, gr_check = false;
  CLI::App* graph = app.add_subcommand(
      "graph", "Analyze one mask: matchings, witnesses, and the distinctness criterion");
  graph->add_option("--in", gr_in, "Mask text file ('-' for stdin)")->required();
  graph->add_flag("--dump-matrix", gr_dump, "Include a distinct-spectrum witness matrix");
  graph->add_flag("--exact", gr_exact, "Verify the witness in exact arithmetic (n <= 16)");
  graph->add_flag("--check", gr_check, "Exit 1 when the criterion is not satisfied");
  graph->add_option("--out", gr_out, "Write the report to this file instead of stdout");

  std::string di_coeffs, di_out;
  bool di_exact = false, di_check = false;
  CLI::App* discriminant = app.add_subcommand(
      "discriminant", "Discriminant of a monic polynomial from its coefficients");
  discriminant
      ->add_option("--coeffs", di_coeffs,
                   "Comma-separated a_0,...,a_{n-1} of x^n + a_{n-1}x^{n-1} + ... + a_0")
      ->required();
  discriminant->add_flag("--exact", di_exact,
                         "Exact rational arithmetic (accepts integers, p/q, decimals)");
  discriminant->add_flag("--check", di_check, "Exit 1 when the discriminant vanishes");
  discriminant->add_option("--out", di_out, "Write the report to this file instead of stdout");

  SimulateArgs sw;
  std::string sw_in;
  CLI::App* sweep = app.add_subcommand(
      "sweep", "Run one simulate row per (N, c) pair from a spec file; CSV output");
  sweep->add_option("--in", sw_in, "Spec file of 'N c' lines ('-' for stdin)")->required();
  sweep->add_option("--model", sw.model, "Matrix model: asym or sym")->required();
  sweep->add_option("--q", sw.q, "Diagonal probability (sym model only)");
  sweep->add_option("--trials", sw.trials, "Trials per row")->required();
  sweep->add_option("--seed", sw.seed, "Base seed; row i runs with hash64(seed, i)");
  sweep->add_option("--target", sw.target, "Estimate target: pm, cond41, or gap_rate");
  sweep->add_option("--p-override", sw.p_override,
                    "Fixed edge probability bypassing the (log N + c)/N schedule");
  sweep->add_option("--out", sw.out, "Write the table to this file instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  }

  try {
    sim.have_q = simulate->count("--q") > 0;
    sim.have_p_override = simulate->count("--p-override") > 0;
    sw.have_q = sweep->count("--q") > 0;
    sw.have_p_override = sweep->count("--p-override") > 0;
    if (simulate->parsed()) return run_simulate(sim);
    if (predict->parsed())
      return run_predict(pr_model, pr_c, pr_q, predict->count("--q") > 0, pr_out);
    if (oracle->parsed()) return run_oracle(or_max_n, or_samples, or_seed, or_models, or_out);
    if (threshold->parsed()) return run_threshold(th_max_n, th_out);
    if (graph->parsed()) return run_graph(gr_in, gr_dump, gr_exact, gr_check, gr_out);
    if (discriminant->parsed()) return run_discriminant(di_coeffs, di_exact, di_check, di_out);
    if (sweep->parsed()) return run_sweep(sw, sw_in);
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "failure: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
