#pragma once

// Desk-scale generator of target distributions: the P^22 / P_v reference
// family, Born-rule entanglement-swapping distributions with partial
// entanglement and lossy detectors, and random bilocal/biquantum samples
// used as soundness oracles.

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "netsdp/distribution.hpp"

namespace netsdp {

using complexd = std::complex<double>;

struct SwapConfig {
  double theta_ab = M_PI / 4;
  double theta_bc = M_PI / 4;
  double alpha0 = M_PI / 4;
  double alpha1 = -M_PI / 4;
  double eta_a = 1.0;
  double eta_c = 1.0;
};

// P^22(abc|xyz) = 1/8 [1 + (-1)^(a+b+c+xy+yz)], mixed with uniform noise.
inline DistributionTable p22_family(double v) {
  DistributionTable t = DistributionTable::zeros({2, 2, 2}, {2, 2, 2});
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y)
      for (int z = 0; z < 2; ++z)
        for (int a = 0; a < 2; ++a)
          for (int b = 0; b < 2; ++b)
            for (int c = 0; c < 2; ++c) {
              int sign = ((a + b + c + x * y + y * z) % 2 == 0) ? 1 : -1;
              std::array<int, 3> iv{x, y, z}, ov{a, b, c};
              t.prob(iv, ov) = (1.0 + sign) / 8.0;
            }
  return t.mixed_with_uniform(v);
}

// cos(theta)|00> + sin(theta)|11>, computational basis order (00,01,10,11).
inline Eigen::Vector4cd entangled_pair(double theta) {
  Eigen::Vector4cd v = Eigen::Vector4cd::Zero();
  v(0) = std::cos(theta);
  v(3) = std::sin(theta);
  return v;
}

namespace detail {

inline Eigen::Matrix2cd pauli_z() {
  Eigen::Matrix2cd m;
  m << 1, 0, 0, -1;
  return m;
}

inline Eigen::Matrix2cd pauli_x() {
  Eigen::Matrix2cd m;
  m << 0, 1, 1, 0;
  return m;
}

}  // namespace detail

// Three-element POVM {eta P+, eta P-, (1-eta) I} where P+- project onto the
// +-1 eigenspaces of cos(alpha) Z + x_sign sin(alpha) X. The last outcome is
// the detector-failure event.
inline std::array<Eigen::Matrix2cd, 3> lossy_povm(double alpha, int x_sign, double eta) {
  Eigen::Matrix2cd obs = std::cos(alpha) * detail::pauli_z() +
                         static_cast<double>(x_sign) * std::sin(alpha) * detail::pauli_x();
  Eigen::Matrix2cd id = Eigen::Matrix2cd::Identity();
  return {eta * 0.5 * (id + obs), eta * 0.5 * (id - obs), (1.0 - eta) * id};
}

// Projectors onto the Bell basis, outcome order (phi+, phi-, psi+, psi-).
inline std::array<Eigen::Matrix4cd, 4> bsm() {
  const double s = 1.0 / std::sqrt(2.0);
  std::array<Eigen::Vector4cd, 4> basis;
  basis[0] << s, 0, 0, s;
  basis[1] << s, 0, 0, -s;
  basis[2] << 0, s, s, 0;
  basis[3] << 0, s, -s, 0;
  std::array<Eigen::Matrix4cd, 4> out;
  for (int b = 0; b < 4; ++b) out[b] = basis[b] * basis[b].adjoint();
  return out;
}

namespace detail {

// Born rule on the tripartite line with system order (A, B1, B2, C) and
// big-endian basis indexing. A measures the first qubit, B the middle pair,
// C the last qubit.
inline DistributionTable born_line_distribution(
    const Eigen::Vector4cd& state_ab, const Eigen::Vector4cd& state_bc,
    const std::vector<std::vector<Eigen::Matrix2cd>>& a_povms,
    const std::vector<std::vector<Eigen::Matrix4cd>>& b_povms,
    const std::vector<std::vector<Eigen::Matrix2cd>>& c_povms) {
  Eigen::VectorXcd psi(16);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) psi(i * 4 + j) = state_ab(i) * state_bc(j);

  DistributionTable t = DistributionTable::zeros(
      {static_cast<int>(a_povms.size()), static_cast<int>(b_povms.size()),
       static_cast<int>(c_povms.size())},
      {static_cast<int>(a_povms[0].size()), static_cast<int>(b_povms[0].size()),
       static_cast<int>(c_povms[0].size())});

  // state_ab lives on (A, B1): psi index = a*8 + b1*4 + b2*2 + c.
  for (std::size_t x = 0; x < a_povms.size(); ++x)
    for (std::size_t y = 0; y < b_povms.size(); ++y)
      for (std::size_t z = 0; z < c_povms.size(); ++z)
        for (std::size_t a = 0; a < a_povms[x].size(); ++a)
          for (std::size_t b = 0; b < b_povms[y].size(); ++b)
            for (std::size_t c = 0; c < c_povms[z].size(); ++c) {
              complexd val = 0.0;
              const auto& MA = a_povms[x][a];
              const auto& MB = b_povms[y][b];
              const auto& MC = c_povms[z][c];
              for (int i = 0; i < 16; ++i) {
                int ia = i >> 3, ib1 = (i >> 2) & 1, ib2 = (i >> 1) & 1, ic = i & 1;
                for (int j = 0; j < 16; ++j) {
                  int ja = j >> 3, jb1 = (j >> 2) & 1, jb2 = (j >> 1) & 1, jc = j & 1;
                  complexd m = MA(ia, ja) * MB(ib1 * 2 + ib2, jb1 * 2 + jb2) * MC(ic, jc);
                  if (m != 0.0) val += std::conj(psi(i)) * m * psi(j);
                }
              }
              std::array<int, 3> iv{static_cast<int>(x), static_cast<int>(y),
                                    static_cast<int>(z)};
              std::array<int, 3> ov{static_cast<int>(a), static_cast<int>(b),
                                    static_cast<int>(c)};
              t.prob(iv, ov) = std::max(0.0, val.real());
            }
  return t;
}

}  // namespace detail

// Entanglement-swapping distribution: partially entangled pairs, a perfect
// Bell state measurement at B, and lossy tilted Z/X measurements at A and C.
// A_x = cos(alpha_x) Z - sin(alpha_x) X, C_z = cos(alpha_z) Z + sin(alpha_z) X;
// negative angles flip the X component, so the aperture lives in the sign of
// alpha1. Output arities (3, 4, 3), the failure outcome last; inputs (2, 1, 2).
inline DistributionTable swap_distribution(const SwapConfig& cfg) {
  std::vector<std::vector<Eigen::Matrix2cd>> a_povms, c_povms;
  for (double alpha : {cfg.alpha0, cfg.alpha1}) {
    auto pa = lossy_povm(alpha, -1, cfg.eta_a);
    a_povms.push_back({pa[0], pa[1], pa[2]});
    auto pc = lossy_povm(alpha, +1, cfg.eta_c);
    c_povms.push_back({pc[0], pc[1], pc[2]});
  }
  auto bell = bsm();
  std::vector<std::vector<Eigen::Matrix4cd>> b_povms{{bell[0], bell[1], bell[2], bell[3]}};
  return detail::born_line_distribution(entangled_pair(cfg.theta_ab),
                                        entangled_pair(cfg.theta_bc), a_povms, b_povms,
                                        c_povms);
}

// Explicit finite bilocal mixture: up to four hidden values per source with
// random weights and random stochastic response functions.
inline DistributionTable random_bilocal(std::uint64_t seed, std::vector<int> inputs = {2, 2, 2},
                                        std::vector<int> outputs = {2, 2, 2}) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  auto random_weights = [&](int k) {
    std::vector<double> w(static_cast<std::size_t>(k));
    double sum = 0.0;
    for (double& x : w) sum += (x = -std::log(1.0 - unif(rng)));
    for (double& x : w) x /= sum;
    return w;
  };
  int k1 = 1 + static_cast<int>(rng() % 4);
  int k2 = 1 + static_cast<int>(rng() % 4);
  auto w1 = random_weights(k1), w2 = random_weights(k2);

  // response[x][lambda] is a distribution over outcomes
  auto random_response = [&](int nin, int nlam, int nout) {
    std::vector<std::vector<std::vector<double>>> r(static_cast<std::size_t>(nin));
    for (auto& per_in : r) {
      per_in.resize(static_cast<std::size_t>(nlam));
      for (auto& d : per_in) d = random_weights(nout);
    }
    return r;
  };
  auto ra = random_response(inputs[0], k1, outputs[0]);
  auto rb = random_response(inputs[1], k1 * k2, outputs[1]);
  auto rc = random_response(inputs[2], k2, outputs[2]);

  DistributionTable t = DistributionTable::zeros(inputs, outputs);
  for (int x = 0; x < inputs[0]; ++x)
    for (int y = 0; y < inputs[1]; ++y)
      for (int z = 0; z < inputs[2]; ++z)
        for (int a = 0; a < outputs[0]; ++a)
          for (int b = 0; b < outputs[1]; ++b)
            for (int c = 0; c < outputs[2]; ++c) {
              double sum = 0.0;
              for (int l1 = 0; l1 < k1; ++l1)
                for (int l2 = 0; l2 < k2; ++l2)
                  sum += w1[l1] * w2[l2] * ra[x][l1][a] * rb[y][l1 * k2 + l2][b] *
                         rc[z][l2][c];
              std::array<int, 3> iv{x, y, z}, ov{a, b, c};
              t.prob(iv, ov) = sum;
            }
  return t;
}

namespace detail {

inline Eigen::Vector4cd random_two_qubit_state(std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::Vector4cd v;
  for (int i = 0; i < 4; ++i) v(i) = complexd(gauss(rng), gauss(rng));
  return v / v.norm();
}

inline Eigen::Matrix2cd random_qubit_projector(std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::Vector3d n(gauss(rng), gauss(rng), gauss(rng));
  n.normalize();
  Eigen::Matrix2cd m;
  m << 1.0 + n(2), complexd(n(0), -n(1)), complexd(n(0), n(1)), 1.0 - n(2);
  return 0.5 * m;
}

inline Eigen::Matrix4cd random_rank2_projector(std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::Matrix4cd g;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) g(i, j) = complexd(gauss(rng), gauss(rng));
  Eigen::HouseholderQR<Eigen::Matrix4cd> qr(g);
  Eigen::Matrix4cd q = qr.householderQ();
  return q.leftCols(2) * q.leftCols(2).adjoint();
}

}  // namespace detail

// Random biquantum model on the binary line: two random pure two-qubit
// states, random projective qubit measurements at A and C, random rank-2
// projective measurements at B.
inline DistributionTable random_biquantum(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  Eigen::Vector4cd ab = detail::random_two_qubit_state(rng);
  Eigen::Vector4cd bc = detail::random_two_qubit_state(rng);
  std::vector<std::vector<Eigen::Matrix2cd>> a_povms, c_povms;
  std::vector<std::vector<Eigen::Matrix4cd>> b_povms;
  for (int x = 0; x < 2; ++x) {
    Eigen::Matrix2cd pa = detail::random_qubit_projector(rng);
    a_povms.push_back({pa, Eigen::Matrix2cd::Identity() - pa});
  }
  for (int y = 0; y < 2; ++y) {
    Eigen::Matrix4cd pb = detail::random_rank2_projector(rng);
    b_povms.push_back({pb, Eigen::Matrix4cd::Identity() - pb});
  }
  for (int z = 0; z < 2; ++z) {
    Eigen::Matrix2cd pc = detail::random_qubit_projector(rng);
    c_povms.push_back({pc, Eigen::Matrix2cd::Identity() - pc});
  }
  return detail::born_line_distribution(ab, bc, a_povms, b_povms, c_povms);
}

}  // namespace netsdp
