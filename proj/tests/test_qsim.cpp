#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>

#include <unsupported/Eigen/KroneckerProduct>

#include "netsdp/qsim.hpp"

using namespace netsdp;

namespace {

double p3(const DistributionTable& t, std::array<int, 3> iv, std::array<int, 3> ov) {
  return t.prob(iv, ov);
}

}  // namespace

TEST_CASE("p22 family spot values") {
  auto noiseless = p22_family(1.0);
  noiseless.validate();
  CHECK(p3(noiseless, {0, 0, 0}, {0, 0, 0}) == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(p3(noiseless, {0, 1, 1}, {0, 0, 0}) == doctest::Approx(0.0).epsilon(1e-12));

  auto half = p22_family(0.5);
  half.validate();
  CHECK(p3(half, {0, 0, 0}, {0, 0, 0}) == doctest::Approx(3.0 / 16).epsilon(1e-12));
  CHECK(p3(half, {0, 1, 1}, {0, 0, 0}) == doctest::Approx(1.0 / 16).epsilon(1e-12));

  // v = 0 is uniform
  auto uniform = p22_family(0.0);
  for (double x : uniform.p) CHECK(x == doctest::Approx(0.125).epsilon(1e-12));
}

TEST_CASE("entangled_pair endpoints") {
  auto bell = entangled_pair(M_PI / 4);
  CHECK(std::abs(bell(0) - 1.0 / std::sqrt(2.0)) < 1e-12);
  CHECK(std::abs(bell(3) - 1.0 / std::sqrt(2.0)) < 1e-12);
  CHECK(std::abs(bell(1)) == 0.0);

  auto prod = entangled_pair(0.0);
  CHECK(std::abs(prod(0) - 1.0) < 1e-12);
  CHECK(std::abs(prod(3)) < 1e-12);
}

TEST_CASE("lossy_povm resolves the identity and hits Z at alpha = 0") {
  for (double eta : {1.0, 0.7, 0.0}) {
    auto povm = lossy_povm(0.3, -1, eta);
    Eigen::Matrix2cd sum = povm[0] + povm[1] + povm[2];
    CHECK((sum - Eigen::Matrix2cd::Identity()).norm() < 1e-12);
    for (const auto& e : povm) {
      Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(e);
      CHECK(es.eigenvalues().minCoeff() > -1e-12);
    }
  }
  auto z = lossy_povm(0.0, +1, 1.0);
  Eigen::Matrix2cd p0;
  p0 << 1, 0, 0, 0;
  CHECK((z[0] - p0).norm() < 1e-12);
  CHECK(z[2].norm() < 1e-12);
}

TEST_CASE("bsm is a projective measurement onto the Bell basis") {
  auto bell = bsm();
  Eigen::Matrix4cd sum = Eigen::Matrix4cd::Zero();
  for (int i = 0; i < 4; ++i) {
    sum += bell[i];
    CHECK((bell[i] * bell[i] - bell[i]).norm() < 1e-12);
    for (int j = i + 1; j < 4; ++j) CHECK((bell[i] * bell[j]).norm() < 1e-12);
  }
  CHECK((sum - Eigen::Matrix4cd::Identity()).norm() < 1e-12);
  // phi+ projector in the computational basis
  CHECK(std::abs(bell[0](0, 3) - 0.5) < 1e-12);
  CHECK(std::abs(bell[2](1, 2) - 0.5) < 1e-12);
}

TEST_CASE("swap_distribution at the symmetric lossless point") {
  SwapConfig cfg;  // theta = pi/4 pairs, alpha = +-pi/4, no loss
  auto t = swap_distribution(cfg);
  t.validate(1e-9, 1e-9);
  REQUIRE(t.inputs == std::vector<int>{2, 1, 2});
  REQUIRE(t.outputs == std::vector<int>{3, 4, 3});

  // each Bell outcome at B fires with probability 1/4
  for (int b = 0; b < 4; ++b) {
    double pb = 0.0;
    for (int a = 0; a < 3; ++a)
      for (int c = 0; c < 3; ++c) pb += p3(t, {0, 0, 0}, {a, b, c});
    CHECK(pb == doctest::Approx(0.25).epsilon(1e-10));
  }

  // frozen regression value
  CHECK(p3(t, {0, 0, 0}, {0, 0, 0}) == doctest::Approx(1.0 / 16).epsilon(1e-10));

  // failure outcomes never fire at full efficiency
  for (int x = 0; x < 2; ++x)
    for (int z = 0; z < 2; ++z)
      for (int b = 0; b < 4; ++b)
        for (int o = 0; o < 3; ++o) {
          CHECK(p3(t, {x, 0, z}, {2, b, o}) == doctest::Approx(0.0).epsilon(1e-12));
          CHECK(p3(t, {x, 0, z}, {o, b, 2}) == doctest::Approx(0.0).epsilon(1e-12));
        }
}

TEST_CASE("swap_distribution with dead detectors always fails") {
  SwapConfig cfg;
  cfg.eta_a = 0.0;
  cfg.eta_c = 0.0;
  auto t = swap_distribution(cfg);
  t.validate();
  for (int x = 0; x < 2; ++x)
    for (int z = 0; z < 2; ++z) {
      double fail = 0.0;
      for (int b = 0; b < 4; ++b) fail += p3(t, {x, 0, z}, {2, b, 2});
      CHECK(fail == doctest::Approx(1.0).epsilon(1e-12));
    }
}

namespace {

// Independent Born-rule oracle via explicit Kronecker products on the
// four-qubit register (A, B1, B2, C).
double kron_born(const SwapConfig& cfg, int x, int z, int a, int b, int c) {
  Eigen::VectorXcd psi =
      Eigen::kroneckerProduct(entangled_pair(cfg.theta_ab), entangled_pair(cfg.theta_bc));
  double alpha = (x == 0) ? cfg.alpha0 : cfg.alpha1;
  double gamma = (z == 0) ? cfg.alpha0 : cfg.alpha1;
  Eigen::Matrix2cd ma = lossy_povm(alpha, -1, cfg.eta_a)[static_cast<std::size_t>(a)];
  Eigen::Matrix4cd mb = bsm()[static_cast<std::size_t>(b)];
  Eigen::Matrix2cd mc = lossy_povm(gamma, +1, cfg.eta_c)[static_cast<std::size_t>(c)];
  Eigen::MatrixXcd op =
      Eigen::kroneckerProduct(ma, Eigen::kroneckerProduct(mb, mc).eval()).eval();
  return (psi.adjoint() * op * psi)(0).real();
}

}  // namespace

TEST_CASE("swap_distribution agrees with the Kronecker oracle") {
  SwapConfig cfg;
  cfg.theta_bc = 0.6545;
  cfg.alpha0 = 0.3;
  cfg.alpha1 = -1.1;
  cfg.eta_a = 0.9;
  cfg.eta_c = 0.61;
  auto t = swap_distribution(cfg);
  t.validate();
  for (int x = 0; x < 2; ++x)
    for (int z = 0; z < 2; ++z)
      for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 4; ++b)
          for (int c = 0; c < 3; ++c)
            CHECK(p3(t, {x, 0, z}, {a, b, c}) ==
                  doctest::Approx(kron_born(cfg, x, z, a, b, c)).epsilon(1e-10));
}

TEST_CASE("A and C stay independent once B is traced out") {
  auto check_factorization = [](const DistributionTable& t) {
    for (int x = 0; x < t.inputs[0]; ++x)
      for (int z = 0; z < t.inputs[2]; ++z)
        for (int a = 0; a < t.outputs[0]; ++a)
          for (int c = 0; c < t.outputs[2]; ++c) {
            double pac = 0.0, pa = 0.0, pc = 0.0;
            for (int b = 0; b < t.outputs[1]; ++b) {
              pac += t.prob(std::array{x, 0, z}, std::array{a, b, c});
              for (int cc = 0; cc < t.outputs[2]; ++cc)
                pa += t.prob(std::array{x, 0, z}, std::array{a, b, cc});
              for (int aa = 0; aa < t.outputs[0]; ++aa)
                pc += t.prob(std::array{x, 0, z}, std::array{aa, b, c});
            }
            CHECK(std::abs(pac - pa * pc) < 1e-10);
          }
  };
  SwapConfig cfg;
  cfg.theta_ab = 0.5;
  cfg.eta_c = 0.7;
  check_factorization(swap_distribution(cfg));
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    check_factorization(random_bilocal(seed));
    check_factorization(random_biquantum(seed));
  }
}

TEST_CASE("random families produce valid, seed-stable distributions") {
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    auto b = random_bilocal(seed);
    b.validate(1e-9, 1e-9);
    auto q = random_biquantum(seed);
    q.validate(1e-9, 1e-9);
    CHECK(random_bilocal(seed).p == b.p);
    CHECK(random_biquantum(seed).p == q.p);
  }
  auto wide = random_bilocal(42, {2, 1, 2}, {3, 4, 3});
  wide.validate();
  CHECK(wide.outputs == std::vector<int>{3, 4, 3});
}
