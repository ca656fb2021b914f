#pragma once

// Batch front end plumbing: single feasibility runs, bisection scans over
// visibility, and grid scans over swap-configuration parameters, with JSON
// and CSV reporting.

#include <atomic>
#include <cstdlib>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "netsdp/moment.hpp"
#include "netsdp/qsim.hpp"

namespace netsdp {

enum class Verdict { incompatible, not_refuted, inconclusive };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::incompatible: return "incompatible";
    // Relaxation feasibility never proves a model exists.
    case Verdict::not_refuted: return "not-refuted-at-this-level";
    default: return "inconclusive";
  }
}

struct SolverSettings {
  SolveOptions sdp;
  double incompat_eps = 1e-6;
};

struct RunReport {
  SolveReport solve;
  Verdict verdict = Verdict::inconclusive;
  ProblemStats stats;
};

// A scenario plus an assembled symbolic matrix, reusable across
// distributions (assembly does not depend on the observed data).
struct Pipeline {
  Scenario scenario;
  SymbolicMomentMatrix symbolic;

  Pipeline(Scenario sc, const LevelSpec& spec) : scenario(std::move(sc)) {
    validate_or_throw(scenario);
    symbolic = assemble(build_generators(scenario, spec), scenario);
  }

  RunReport run(const DistributionTable& dist, const SolverSettings& settings = {}) const {
    RunReport report;
    report.stats = problem_stats(symbolic);
    SdpProblem prob = to_sdp(instantiate(symbolic, dist, scenario));
    report.solve = solve(prob, settings.sdp);
    if (report.solve.status == SolveStatus::optimal)
      report.verdict = report.solve.t_star < -settings.incompat_eps ? Verdict::incompatible
                                                                    : Verdict::not_refuted;
    else
      report.verdict = Verdict::inconclusive;
    return report;
  }
};

inline nlohmann::json report_to_json(const RunReport& r) {
  nlohmann::json j;
  j["t_star"] = r.solve.t_star;
  j["gap"] = r.solve.gap;
  j["status"] = to_string(r.solve.status);
  j["verdict"] = to_string(r.verdict);
  j["iterations"] = r.solve.iterations;
  j["min_eig_check"] = r.solve.min_eig_check;
  j["dimension"] = r.stats.dimension;
  j["variables"] = r.stats.variable_count;
  j["structural_zeros"] = r.stats.structural_zeros;
  return j;
}

struct BisectRow {
  double v = 0.0;
  double t_star = 0.0;
  Verdict verdict = Verdict::inconclusive;
};

struct BisectResult {
  std::vector<BisectRow> rows;
  double lo = 0.0, hi = 0.0;   // final bracket: verdict(lo) not refuted, verdict(hi) incompatible
  double threshold = 0.0;      // bracket midpoint
  double tol = 0.0;
};

// Bisection on the mixing parameter with the incompatibility predicate
// t_star < -eps. The endpoints must bracket the threshold.
inline BisectResult bisect_visibility(const Pipeline& pipe,
                                      const std::function<DistributionTable(double)>& family,
                                      double lo, double hi, double tol,
                                      const SolverSettings& settings = {}) {
  if (!(lo < hi)) throw std::invalid_argument("bisection needs lo < hi");
  BisectResult result;
  result.tol = tol;
  auto eval = [&](double v) {
    RunReport r = pipe.run(family(v), settings);
    if (r.verdict == Verdict::inconclusive)
      throw std::runtime_error("solver failure during bisection at v = " + std::to_string(v));
    result.rows.push_back(BisectRow{v, r.solve.t_star, r.verdict});
    return r.verdict;
  };
  if (eval(lo) != Verdict::not_refuted)
    throw std::invalid_argument("bisection precondition: verdict(lo) must be not-refuted");
  if (eval(hi) != Verdict::incompatible)
    throw std::invalid_argument("bisection precondition: verdict(hi) must be incompatible");
  while (hi - lo > tol) {
    double mid = 0.5 * (lo + hi);
    if (eval(mid) == Verdict::incompatible)
      hi = mid;
    else
      lo = mid;
  }
  result.lo = lo;
  result.hi = hi;
  result.threshold = 0.5 * (lo + hi);
  return result;
}

inline nlohmann::json bisect_to_json(const BisectResult& r) {
  nlohmann::json j;
  j["threshold"] = r.threshold;
  j["bracket"] = {r.lo, r.hi};
  j["tol"] = r.tol;
  j["rows"] = nlohmann::json::array();
  for (const auto& row : r.rows)
    j["rows"].push_back({{"v", row.v}, {"t_star", row.t_star}, {"verdict", to_string(row.verdict)}});
  return j;
}

struct ScanAxes {
  std::vector<double> eta_a{1.0};
  std::vector<double> eta_c{1.0};
  std::vector<double> theta_ab{M_PI / 4};
  std::vector<double> theta_bc{M_PI / 4};
  std::vector<double> alpha0{M_PI / 4};
  std::vector<double> alpha1{-M_PI / 4};
};

struct ScanRow {
  SwapConfig cfg;
  double t_star = 0.0;
  SolveStatus status = SolveStatus::numerical_failure;
  Verdict verdict = Verdict::inconclusive;
};

inline std::vector<SwapConfig> grid_points(const ScanAxes& axes) {
  std::vector<SwapConfig> pts;
  for (double ea : axes.eta_a)
    for (double ec : axes.eta_c)
      for (double tab : axes.theta_ab)
        for (double tbc : axes.theta_bc)
          for (double a0 : axes.alpha0)
            for (double a1 : axes.alpha1)
              pts.push_back(SwapConfig{tab, tbc, a0, a1, ea, ec});
  return pts;
}

inline int scan_threads() {
  if (const char* env = std::getenv("NETSDP_THREADS")) {
    int n = std::atoi(env);
    if (n > 0) return n;
  }
  unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : static_cast<int>(hc);
}

// One row per grid point in axis-major order; failures are recorded as
// status rows, never dropped. Points are evaluated concurrently, output
// order is deterministic.
inline std::vector<ScanRow> scan_grid(const Pipeline& pipe, const ScanAxes& axes,
                                      const SolverSettings& settings = {}) {
  std::vector<SwapConfig> pts = grid_points(axes);
  std::vector<ScanRow> rows(pts.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      std::size_t k = next.fetch_add(1);
      if (k >= pts.size()) return;
      ScanRow& row = rows[k];
      row.cfg = pts[k];
      try {
        RunReport r = pipe.run(swap_distribution(pts[k]), settings);
        row.t_star = r.solve.t_star;
        row.status = r.solve.status;
        row.verdict = r.verdict;
      } catch (const std::exception&) {
        row.status = SolveStatus::numerical_failure;
        row.verdict = Verdict::inconclusive;
      }
    }
  };
  int nthreads = std::min<int>(scan_threads(), static_cast<int>(pts.size()));
  std::vector<std::thread> threads;
  for (int i = 1; i < nthreads; ++i) threads.emplace_back(worker);
  worker();
  for (auto& t : threads) t.join();
  return rows;
}

inline std::string scan_to_csv(const std::vector<ScanRow>& rows) {
  std::ostringstream os;
  os << "eta_a,eta_c,theta_ab,theta_bc,alpha0,alpha1,t_star,verdict\n";
  os.precision(12);
  for (const ScanRow& r : rows)
    os << r.cfg.eta_a << ',' << r.cfg.eta_c << ',' << r.cfg.theta_ab << ',' << r.cfg.theta_bc
       << ',' << r.cfg.alpha0 << ',' << r.cfg.alpha1 << ',' << r.t_star << ','
       << to_string(r.verdict) << "\n";
  return os.str();
}

// Distribution spec addressable from config files.
inline DistributionTable distribution_from_spec(const nlohmann::json& j) {
  std::string family = j.at("family").get<std::string>();
  if (family == "P22") return p22_family(j.at("v").get<double>());
  if (family == "swap") {
    SwapConfig cfg;
    if (j.contains("theta_ab")) cfg.theta_ab = j["theta_ab"].get<double>();
    if (j.contains("theta_bc")) cfg.theta_bc = j["theta_bc"].get<double>();
    if (j.contains("alpha0")) cfg.alpha0 = j["alpha0"].get<double>();
    if (j.contains("alpha1")) cfg.alpha1 = j["alpha1"].get<double>();
    if (j.contains("eta_a")) cfg.eta_a = j["eta_a"].get<double>();
    if (j.contains("eta_c")) cfg.eta_c = j["eta_c"].get<double>();
    return swap_distribution(cfg);
  }
  if (family == "file") {
    throw std::invalid_argument("file-family specs are resolved by the CLI");
  }
  throw std::invalid_argument("unknown distribution family '" + family + "'");
}

}  // namespace netsdp
