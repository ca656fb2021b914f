#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>
#include <random>
#include <sstream>

#include "fixtures.hpp"
#include "netsdp/moment.hpp"
#include "netsdp/qsim.hpp"
#include "netsdp/sdp.hpp"

using namespace netsdp;

namespace {

SdpProblem diag_problem(std::initializer_list<double> diag) {
  SdpProblem p;
  p.n = static_cast<int>(diag.size());
  p.c0 = Eigen::MatrixXd::Zero(p.n, p.n);
  int i = 0;
  for (double d : diag) p.c0(i, i) = d, ++i;
  return p;
}

// Random bounded instance: off-diagonal basis matrices keep the objective
// bounded by the smallest diagonal entry of C0.
SdpProblem random_problem(std::mt19937_64& rng, int n, int m) {
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  std::uniform_int_distribution<int> idx(0, n - 1);
  SdpProblem p;
  p.n = n;
  Eigen::MatrixXd g = Eigen::MatrixXd::NullaryExpr(n, n, [&]() { return unif(rng); });
  p.c0 = 0.5 * (g + g.transpose());
  p.basis.resize(static_cast<std::size_t>(m));
  for (auto& basis : p.basis) {
    int nnz = 1 + static_cast<int>(rng() % 3);
    for (int e = 0; e < nnz; ++e) {
      int i = idx(rng), j = idx(rng);
      if (i == j) j = (j + 1) % n;
      if (i > j) std::swap(i, j);
      basis.push_back(SdpEntry{i, j, unif(rng)});
    }
  }
  return p;
}

// The smallest moment program with a scalar extension column, instantiated
// on the reference family at v = 1/2; doubles as the golden-file fixture.
SdpProblem fixture_problem() {
  auto sc = fixtures::binary_line(Mode::quantum);
  Word a01{fixtures::obs(0, 0), fixtures::obs(0, 1)};
  Word c01{fixtures::obs(2, 0), fixtures::obs(2, 1)};
  std::vector<ExtendedGenerator> gens{
      {Word{}, {}},
      {a01, {}},
      {c01, {}},
      {Word{}, {normalize_symbol(a01, false, Mode::quantum)}},
  };
  return to_sdp(instantiate(assemble(gens, sc), p22_family(0.5), sc));
}

}  // namespace

TEST_CASE("solve: pure eigenvalue problems") {
  auto r = solve(diag_problem({1.0, 2.0}));
  CHECK(r.status == SolveStatus::optimal);
  CHECK(r.t_star == doctest::Approx(1.0).epsilon(1e-8));

  auto r2 = solve(diag_problem({-0.5, 3.0}));
  CHECK(r2.status == SolveStatus::optimal);
  CHECK(r2.t_star == doctest::Approx(-0.5).epsilon(1e-8));
}

TEST_CASE("solve: one free off-diagonal variable") {
  SdpProblem p = diag_problem({1.0, 1.0});
  p.basis.push_back({SdpEntry{0, 1, 1.0}});
  auto r = solve(p);
  CHECK(r.status == SolveStatus::optimal);
  CHECK(r.t_star == doctest::Approx(1.0).epsilon(1e-7));
  CHECK(std::abs(r.y(0)) < 1e-6);
}

TEST_CASE("solve: optimum forced away from zero") {
  SdpProblem p;
  p.n = 2;
  p.c0 = Eigen::MatrixXd::Zero(2, 2);
  p.c0(0, 1) = p.c0(1, 0) = 1.0;
  p.basis.push_back({SdpEntry{0, 0, 1.0}, SdpEntry{1, 1, -1.0}});
  auto r = solve(p);
  CHECK(r.status == SolveStatus::optimal);
  CHECK(r.t_star == doctest::Approx(-1.0).epsilon(1e-7));
}

TEST_CASE("certification suite: residual checks on ten random instances") {
  std::mt19937_64 rng(314159);
  for (int trial = 0; trial < 10; ++trial) {
    int n = 6 + static_cast<int>(rng() % 7);
    int m = 3 + static_cast<int>(rng() % 6);
    SdpProblem p = random_problem(rng, n, m);
    auto r = solve(p);
    REQUIRE(r.status == SolveStatus::optimal);
    Certificate cert = residuals(r, p);
    CHECK(cert.gap <= 1e-9);
    CHECK(cert.dual_feasibility <= 1e-6);
    // the independently recomputed smallest eigenvalue confirms the objective
    CHECK(std::abs(cert.min_eig - r.t_star) <= 1e-7);
  }
}

TEST_CASE("optimality: no perturbed multiplier beats the reported objective") {
  std::mt19937_64 rng(271828);
  SdpProblem p = random_problem(rng, 8, 5);
  auto r = solve(p);
  REQUIRE(r.status == SolveStatus::optimal);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    Eigen::VectorXd y = r.y;
    for (int k = 0; k < y.size(); ++k) y(k) += 0.3 * unif(rng);
    CHECK(min_eigenvalue(p, y) <= r.t_star + 1e-7);
  }
}

TEST_CASE("invariance: scaling the data scales the objective") {
  std::mt19937_64 rng(99);
  SdpProblem p = random_problem(rng, 7, 4);
  auto base = solve(p);
  REQUIRE(base.status == SolveStatus::optimal);
  for (double s : {0.1, 10.0}) {
    SdpProblem q = p;
    q.c0 *= s;
    for (auto& basis : q.basis)
      for (auto& e : basis) e.value *= s;
    auto r = solve(q);
    REQUIRE(r.status == SolveStatus::optimal);
    CHECK(r.t_star == doctest::Approx(s * base.t_star).epsilon(1e-7));
  }
}

TEST_CASE("invariance: orthogonal conjugation preserves the objective") {
  std::mt19937_64 rng(7);
  SdpProblem p = random_problem(rng, 6, 4);
  auto base = solve(p);
  REQUIRE(base.status == SolveStatus::optimal);

  Eigen::MatrixXd g = Eigen::MatrixXd::NullaryExpr(
      6, 6, [&]() { return std::normal_distribution<double>()(rng); });
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  Eigen::MatrixXd q = qr.householderQ();

  SdpProblem rotated;
  rotated.n = p.n;
  rotated.c0 = q.transpose() * p.c0 * q;
  for (const auto& basis : p.basis) {
    Eigen::MatrixXd bm = Eigen::MatrixXd::Zero(p.n, p.n);
    for (const auto& e : basis) {
      bm(e.i, e.j) += e.value;
      if (e.i != e.j) bm(e.j, e.i) += e.value;
    }
    Eigen::MatrixXd rb = q.transpose() * bm * q;
    std::vector<SdpEntry> dense;
    for (int i = 0; i < p.n; ++i)
      for (int j = i; j < p.n; ++j) dense.push_back(SdpEntry{i, j, rb(i, j)});
    rotated.basis.push_back(std::move(dense));
  }
  auto r = solve(rotated);
  REQUIRE(r.status == SolveStatus::optimal);
  CHECK(r.t_star == doctest::Approx(base.t_star).epsilon(1e-7));
}

TEST_CASE("write_sdpa matches the committed golden file byte for byte") {
  std::ifstream in(NETSDP_GOLDEN_DIR "/minimal_extension.dat-s", std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream golden;
  golden << in.rdbuf();
  CHECK(write_sdpa(fixture_problem()) == golden.str());
}

TEST_CASE("parse_sdpa inverts write_sdpa") {
  std::mt19937_64 rng(555);
  for (int trial = 0; trial < 5; ++trial) {
    SdpProblem p = random_problem(rng, 5 + trial, 3 + trial % 3);
    std::string text = write_sdpa(p);
    SdpProblem back = parse_sdpa(text);
    CHECK(write_sdpa(back) == text);
    auto r1 = solve(p);
    auto r2 = solve(back);
    REQUIRE(r1.status == SolveStatus::optimal);
    REQUIRE(r2.status == SolveStatus::optimal);
    CHECK(r1.t_star == doctest::Approx(r2.t_star).epsilon(1e-9));
  }
  CHECK_THROWS_AS(parse_sdpa("2\n2\n3\n0 1\n"), std::invalid_argument);
  CHECK_THROWS_AS(parse_sdpa(""), std::invalid_argument);
}

TEST_CASE("read_sdpa_solution accepts bracketed and bare number streams") {
  auto v = read_sdpa_solution("1.0 2.5 -3");
  REQUIRE(v.size() == 3);
  CHECK(v(2) == -3.0);
  auto w = read_sdpa_solution("{[1, 2],\n [3e-2]}");
  REQUIRE(w.size() == 3);
  CHECK(w(2) == doctest::Approx(0.03));
  CHECK_THROWS_AS(read_sdpa_solution("1.0 abc"), std::invalid_argument);
  CHECK_THROWS_AS(read_sdpa_solution("  "), std::invalid_argument);
}

TEST_CASE("solve handles the moment fixture and certifies it") {
  SdpProblem p = fixture_problem();
  auto r = solve(p);
  REQUIRE(r.status == SolveStatus::optimal);
  Certificate cert = residuals(r, p);
  CHECK(cert.gap <= 1e-9);
  CHECK(std::abs(cert.min_eig - r.t_star) <= 1e-7);
}
