#pragma once

// Embedded dense primal-dual interior-point solver for the max-min-eigenvalue
// feasibility program
//
//     maximize t   subject to   C0 + sum_k y_k B_k - t I  >=  0,
//
// plus certificate checking and SDPA sparse-format import/export.
//
// Internally the program is solved in standard conic form with constraint
// matrices {B_1..B_m, I} and right-hand side e_{m+1}: the primal reads
// min <C0, X> s.t. tr(B_k X) = 0, tr X = 1, X >= 0, and the dual multiplier
// of the trace constraint is t. The search direction is the HKM direction
// with a Mehrotra predictor-corrector; the Schur complement is assembled
// from the sparse supports of the B_k.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace netsdp {

struct SdpEntry {
  int i = 0, j = 0;  // i <= j
  double value = 0.0;
};

struct SdpProblem {
  int n = 0;
  Eigen::MatrixXd c0;                       // symmetric constant matrix
  std::vector<std::vector<SdpEntry>> basis; // one sparse symmetric B_k per variable
};

struct SolveOptions {
  double gap_tol = 1e-9;
  int max_iter = 200;
  double feas_tol = 1e-8;
};

enum class SolveStatus { optimal, max_iterations, numerical_failure };

inline const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::optimal: return "optimal";
    case SolveStatus::max_iterations: return "max-iterations";
    default: return "numerical-failure";
  }
}

struct SolveReport {
  SolveStatus status = SolveStatus::numerical_failure;
  double t_star = std::numeric_limits<double>::quiet_NaN();
  Eigen::VectorXd y;         // multipliers of the B_k
  double gap = std::numeric_limits<double>::quiet_NaN();
  int iterations = 0;
  double min_eig_check = std::numeric_limits<double>::quiet_NaN();
  Eigen::MatrixXd x;         // primal iterate, kept for certification
};

namespace detail {

// Full symmetric support of one constraint matrix.
using Support = std::vector<SdpEntry>;

inline Support expand_support(const std::vector<SdpEntry>& upper) {
  Support s;
  s.reserve(upper.size() * 2);
  for (const SdpEntry& e : upper) {
    s.push_back(e);
    if (e.i != e.j) s.push_back(SdpEntry{e.j, e.i, e.value});
  }
  return s;
}

inline double inner(const Support& s, const Eigen::MatrixXd& m) {
  double v = 0.0;
  for (const SdpEntry& e : s) v += e.value * m(e.i, e.j);
  return v;
}

inline void axpy(double alpha, const Support& s, Eigen::MatrixXd& m) {
  for (const SdpEntry& e : s) m(e.i, e.j) += alpha * e.value;
}

// Largest step alpha in [0, 1] keeping M + alpha dM positive definite, with
// fraction-to-boundary 0.98. M must be positive definite.
inline double max_step(const Eigen::MatrixXd& m, const Eigen::MatrixXd& dm) {
  Eigen::LLT<Eigen::MatrixXd> llt(m);
  if (llt.info() != Eigen::Success) return 0.0;
  Eigen::MatrixXd l = llt.matrixL();
  Eigen::MatrixXd w = l.triangularView<Eigen::Lower>().solve(dm);
  Eigen::MatrixXd wt = w.transpose();
  w = l.triangularView<Eigen::Lower>().solve(wt);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (w + w.transpose()),
                                                    Eigen::EigenvaluesOnly);
  double lmin = es.eigenvalues().minCoeff();
  if (lmin >= -1e-13) return 1.0;
  return std::min(1.0, -0.98 / lmin);
}

}  // namespace detail

// Smallest eigenvalue of C0 + sum_k y_k B_k.
inline double min_eigenvalue(const SdpProblem& prob, const Eigen::VectorXd& y) {
  Eigen::MatrixXd m = prob.c0;
  for (std::size_t k = 0; k < prob.basis.size(); ++k)
    for (const SdpEntry& e : prob.basis[k]) {
      m(e.i, e.j) += y(static_cast<Eigen::Index>(k)) * e.value;
      if (e.i != e.j) m(e.j, e.i) += y(static_cast<Eigen::Index>(k)) * e.value;
    }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

inline SolveReport solve(const SdpProblem& prob, SolveOptions opt = {}) {
  const int n = prob.n;
  const int m = static_cast<int>(prob.basis.size());
  const int M = m + 1;  // constraints: B_1..B_m, then I (trace = 1)

  std::vector<detail::Support> sup(static_cast<std::size_t>(M));
  for (int k = 0; k < m; ++k)
    sup[static_cast<std::size_t>(k)] = detail::expand_support(prob.basis[static_cast<std::size_t>(k)]);
  for (int i = 0; i < n; ++i)
    sup[static_cast<std::size_t>(m)].push_back(SdpEntry{i, i, 1.0});

  Eigen::VectorXd b = Eigen::VectorXd::Zero(M);
  b(m) = 1.0;

  const double tau = std::max(1.0, prob.c0.norm() / std::sqrt(static_cast<double>(n)));
  Eigen::MatrixXd X = tau * Eigen::MatrixXd::Identity(n, n);
  Eigen::MatrixXd Z = tau * Eigen::MatrixXd::Identity(n, n);
  Eigen::VectorXd w = Eigen::VectorXd::Zero(M);

  SolveReport report;
  report.status = SolveStatus::max_iterations;

  auto finish = [&](SolveStatus status, int iters) {
    report.status = status;
    report.iterations = iters;
    report.t_star = w(m);
    report.y = -w.head(m);
    report.gap = std::abs((prob.c0.cwiseProduct(X)).sum() - w(m));
    report.min_eig_check = min_eigenvalue(prob, report.y);
    report.x = X;
    return report;
  };

  int iter = 0;
  for (; iter < opt.max_iter; ++iter) {
    Eigen::LLT<Eigen::MatrixXd> llt_z(Z);
    if (llt_z.info() != Eigen::Success) return finish(SolveStatus::numerical_failure, iter);
    Eigen::MatrixXd Zinv = llt_z.solve(Eigen::MatrixXd::Identity(n, n));

    const double mu = (X.cwiseProduct(Z)).sum() / n;

    Eigen::VectorXd aX(M), aZinv(M);
    for (int k = 0; k < M; ++k) {
      aX(k) = detail::inner(sup[static_cast<std::size_t>(k)], X);
      aZinv(k) = detail::inner(sup[static_cast<std::size_t>(k)], Zinv);
    }
    Eigen::VectorXd rp = b - aX;

    Eigen::MatrixXd Rd = prob.c0 - Z;
    for (int k = 0; k < M; ++k) detail::axpy(-w(k), sup[static_cast<std::size_t>(k)], Rd);

    const double pobj = (prob.c0.cwiseProduct(X)).sum();
    const double dobj = w(m);
    const double gap = std::abs(pobj - dobj);
    const double scale_p = 1.0 + b.norm();
    const double scale_d = 1.0 + prob.c0.norm();
    if (rp.lpNorm<Eigen::Infinity>() <= opt.feas_tol * scale_p &&
        Rd.lpNorm<Eigen::Infinity>() <= opt.feas_tol * scale_d && gap <= opt.gap_tol)
      return finish(SolveStatus::optimal, iter);

    // Schur complement H_{ij} = tr(A_i Zinv A_j X); symmetric positive
    // definite, assembled from the sparse supports.
    Eigen::MatrixXd H(M, M);
    for (int i = 0; i < M; ++i) {
      const auto& si = sup[static_cast<std::size_t>(i)];
      for (int j = i; j < M; ++j) {
        const auto& sj = sup[static_cast<std::size_t>(j)];
        double h = 0.0;
        for (const SdpEntry& ei : si)
          for (const SdpEntry& ej : sj)
            h += ei.value * ej.value * Zinv(ei.j, ej.i) * X(ej.j, ei.i);
        H(i, j) = h;
        H(j, i) = h;
      }
    }
    Eigen::LDLT<Eigen::MatrixXd> hfac(H);
    if (hfac.info() != Eigen::Success) return finish(SolveStatus::numerical_failure, iter);

    Eigen::MatrixXd T = Zinv * Rd * X;
    Eigen::VectorXd trAT(M);
    for (int k = 0; k < M; ++k) trAT(k) = detail::inner(sup[static_cast<std::size_t>(k)], T);

    // Predictor (affine scaling).
    Eigen::VectorXd rhs = b + trAT;
    Eigen::VectorXd dwa = hfac.solve(rhs);
    Eigen::MatrixXd dZa = Rd;
    for (int k = 0; k < M; ++k) detail::axpy(-dwa(k), sup[static_cast<std::size_t>(k)], dZa);
    Eigen::MatrixXd dXa = -X - Zinv * dZa * X;
    dXa = 0.5 * (dXa + dXa.transpose()).eval();

    double ap = detail::max_step(X, dXa);
    double ad = detail::max_step(Z, dZa);
    double mu_aff = ((X + ap * dXa).cwiseProduct(Z + ad * dZa)).sum() / n;
    double sigma = std::pow(std::max(0.0, mu_aff / mu), 3.0);
    sigma = std::clamp(sigma, 0.0, 1.0);

    // Corrector.
    Eigen::MatrixXd T2 = Zinv * dZa * dXa;
    Eigen::VectorXd trAT2(M), rhs2(M);
    for (int k = 0; k < M; ++k) trAT2(k) = detail::inner(sup[static_cast<std::size_t>(k)], T2);
    rhs2 = b - sigma * mu * aZinv + trAT2 + trAT;
    Eigen::VectorXd dw = hfac.solve(rhs2);
    Eigen::MatrixXd dZ = Rd;
    for (int k = 0; k < M; ++k) detail::axpy(-dw(k), sup[static_cast<std::size_t>(k)], dZ);
    Eigen::MatrixXd dX = sigma * mu * Zinv - T2 - X - Zinv * dZ * X;
    dX = 0.5 * (dX + dX.transpose()).eval();

    ap = detail::max_step(X, dX);
    ad = detail::max_step(Z, dZ);
    if (ap < 1e-10 && ad < 1e-10) return finish(SolveStatus::numerical_failure, iter);

    X += ap * dX;
    Z += ad * dZ;
    w += ad * dw;
    if (mu < 1e-18) break;
  }
  return finish(SolveStatus::max_iterations, iter);
}

struct Certificate {
  double min_eig = 0.0;
  double gap = 0.0;
  double dual_feasibility = 0.0;  // residual of the stored primal certificate
};

// Independent recheck of a solver claim: smallest eigenvalue by a dense
// symmetric eigensolve, duality gap and constraint residuals from the
// stored primal iterate.
inline Certificate residuals(const SolveReport& report, const SdpProblem& prob) {
  Certificate cert;
  cert.min_eig = min_eigenvalue(prob, report.y);
  double feas = std::abs(report.x.trace() - 1.0);
  for (const auto& basis : prob.basis) {
    double v = 0.0;
    for (const SdpEntry& e : basis)
      v += e.value * (e.i == e.j ? report.x(e.i, e.j) : 2.0 * report.x(e.i, e.j));
    feas = std::max(feas, std::abs(v));
  }
  cert.dual_feasibility = feas;
  cert.gap = std::abs((prob.c0.cwiseProduct(report.x)).sum() - report.t_star);
  return cert;
}

namespace detail {

inline std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace detail

// SDPA sparse format (.dat-s). Variables are y_1..y_m followed by t with
// coefficient matrix -I; the constant block is -C0 per the SDPA convention
// sum_i y_i F_i - F_0 >= 0. Entries use 1-based upper-triangular indices.
inline std::string write_sdpa(const SdpProblem& prob) {
  const int m = static_cast<int>(prob.basis.size());
  std::ostringstream os;
  os << (m + 1) << "\n1\n" << prob.n << "\n";
  for (int k = 0; k < m; ++k) os << "0 ";
  os << "1\n";
  for (int i = 0; i < prob.n; ++i)
    for (int j = i; j < prob.n; ++j)
      if (prob.c0(i, j) != 0.0)
        os << "0 1 " << (i + 1) << ' ' << (j + 1) << ' ' << detail::fmt17(-prob.c0(i, j))
           << "\n";
  for (int k = 0; k < m; ++k)
    for (const SdpEntry& e : prob.basis[static_cast<std::size_t>(k)])
      os << (k + 1) << " 1 " << (e.i + 1) << ' ' << (e.j + 1) << ' '
         << detail::fmt17(e.value) << "\n";
  for (int i = 0; i < prob.n; ++i)
    os << (m + 1) << " 1 " << (i + 1) << ' ' << (i + 1) << " -1\n";
  return os.str();
}

// Inverse of write_sdpa, used for round-trip checks against external
// solvers. Only the single-block layout written above is accepted.
inline SdpProblem parse_sdpa(const std::string& text) {
  std::istringstream is(text);
  auto next_line = [&](std::string& line) {
    while (std::getline(is, line)) {
      if (!line.empty() && line[0] != '"' && line[0] != '*') return true;
    }
    return false;
  };
  std::string line;
  int mtotal = 0, nblocks = 0, n = 0;
  if (!next_line(line)) throw std::invalid_argument("sdpa: missing variable count");
  std::istringstream(line) >> mtotal;
  if (!next_line(line)) throw std::invalid_argument("sdpa: missing block count");
  std::istringstream(line) >> nblocks;
  if (nblocks != 1) throw std::invalid_argument("sdpa: expected a single block");
  if (!next_line(line)) throw std::invalid_argument("sdpa: missing block size");
  std::istringstream(line) >> n;
  if (!next_line(line)) throw std::invalid_argument("sdpa: missing objective");
  if (mtotal < 1 || n < 1) throw std::invalid_argument("sdpa: bad dimensions");

  SdpProblem prob;
  prob.n = n;
  prob.c0 = Eigen::MatrixXd::Zero(n, n);
  prob.basis.resize(static_cast<std::size_t>(mtotal - 1));
  while (next_line(line)) {
    int matno, blockno, i, j;
    double value;
    std::istringstream ls(line);
    if (!(ls >> matno >> blockno >> i >> j >> value))
      throw std::invalid_argument("sdpa: malformed entry line: " + line);
    if (blockno != 1 || i < 1 || j < 1 || i > n || j > n || matno < 0 || matno > mtotal)
      throw std::invalid_argument("sdpa: entry out of range: " + line);
    if (i > j) std::swap(i, j);
    if (matno == 0) {
      prob.c0(i - 1, j - 1) = -value;
      prob.c0(j - 1, i - 1) = -value;
    } else if (matno == mtotal) {
      if (i != j || value != -1.0)
        throw std::invalid_argument("sdpa: last variable must carry -I");
    } else {
      prob.basis[static_cast<std::size_t>(matno - 1)].push_back(SdpEntry{i - 1, j - 1, value});
    }
  }
  return prob;
}

// Extract a y-vector from an external solver's solution text: any stream of
// numbers separated by whitespace, commas, or brackets.
inline Eigen::VectorXd read_sdpa_solution(const std::string& text) {
  std::string cleaned = text;
  for (char& c : cleaned)
    if (c == '[' || c == ']' || c == '{' || c == '}' || c == ',') c = ' ';
  std::istringstream is(cleaned);
  std::vector<double> vals;
  std::string tok;
  while (is >> tok) {
    std::size_t pos = 0;
    double v = 0.0;
    try {
      v = std::stod(tok, &pos);
    } catch (const std::exception&) {
      throw std::invalid_argument("sdpa solution: bad token '" + tok + "'");
    }
    if (pos != tok.size())
      throw std::invalid_argument("sdpa solution: bad token '" + tok + "'");
    vals.push_back(v);
  }
  if (vals.empty()) throw std::invalid_argument("sdpa solution: no values found");
  return Eigen::Map<Eigen::VectorXd>(vals.data(), static_cast<Eigen::Index>(vals.size()));
}

}  // namespace netsdp
