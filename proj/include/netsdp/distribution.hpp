#pragma once

// Dense conditional probability table p(o|i) for a fixed set of parties,
// with normalization and no-signaling validation and the JSON schema used
// by the CLI.

#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace netsdp {

namespace detail {

// Mixed-radix counter; returns false after wrapping back to all zeros.
inline bool next_index(std::vector<int>& idx, const std::vector<int>& radix) {
  for (std::size_t k = idx.size(); k-- > 0;) {
    if (++idx[k] < radix[k]) return true;
    idx[k] = 0;
  }
  return false;
}

}  // namespace detail

struct DistributionTable {
  std::vector<int> inputs;   // input count per party
  std::vector<int> outputs;  // output count per party
  std::vector<double> p;     // inputs-major, then outputs-major

  int parties() const { return static_cast<int>(inputs.size()); }

  std::size_t contexts() const {
    return static_cast<std::size_t>(
        std::accumulate(inputs.begin(), inputs.end(), 1, std::multiplies<>()));
  }

  std::size_t outcomes_per_context() const {
    return static_cast<std::size_t>(
        std::accumulate(outputs.begin(), outputs.end(), 1, std::multiplies<>()));
  }

  std::size_t index(std::span<const int> iv, std::span<const int> ov) const {
    std::size_t idx = 0;
    for (std::size_t k = 0; k < inputs.size(); ++k)
      idx = idx * static_cast<std::size_t>(inputs[k]) + static_cast<std::size_t>(iv[k]);
    for (std::size_t k = 0; k < outputs.size(); ++k)
      idx = idx * static_cast<std::size_t>(outputs[k]) + static_cast<std::size_t>(ov[k]);
    return idx;
  }

  double prob(std::span<const int> iv, std::span<const int> ov) const {
    return p[index(iv, ov)];
  }
  double& prob(std::span<const int> iv, std::span<const int> ov) { return p[index(iv, ov)]; }

  static DistributionTable zeros(std::vector<int> inputs, std::vector<int> outputs) {
    DistributionTable t;
    t.inputs = std::move(inputs);
    t.outputs = std::move(outputs);
    t.p.assign(t.contexts() * t.outcomes_per_context(), 0.0);
    return t;
  }

  // Entry-wise mixture with uniform noise over outcomes: v*p + (1-v)/N.
  DistributionTable mixed_with_uniform(double v) const {
    DistributionTable out = *this;
    const double u = (1.0 - v) / static_cast<double>(outcomes_per_context());
    for (double& x : out.p) x = v * x + u;
    return out;
  }

  // Throws on negative entries, contexts not summing to one, or signaling.
  void validate(double norm_tol = 1e-9, double nosig_tol = 1e-9) const {
    for (double x : p)
      if (x < -norm_tol) throw std::invalid_argument("negative probability entry");
    std::vector<int> iv(inputs.size(), 0);
    do {
      double sum = 0.0;
      std::vector<int> ov(outputs.size(), 0);
      do sum += prob(iv, ov);
      while (detail::next_index(ov, outputs));
      if (std::abs(sum - 1.0) > norm_tol)
        throw std::invalid_argument("input context not normalized (sum = " +
                                    std::to_string(sum) + ")");
    } while (detail::next_index(iv, inputs));

    // No-signaling: the marginal over party k's outcome must not depend on
    // party k's input.
    for (std::size_t k = 0; k < inputs.size(); ++k) {
      std::vector<int> iv2(inputs.size(), 0);
      do {
        if (iv2[k] != 0) continue;
        std::vector<int> ov(outputs.size(), 0);
        do {
          if (ov[k] != 0) continue;
          for (int xk = 1; xk < inputs[k]; ++xk) {
            double m0 = 0.0, m1 = 0.0;
            std::vector<int> ivb = iv2;
            std::vector<int> ovb = ov;
            for (int ok = 0; ok < outputs[k]; ++ok) {
              ovb[k] = ok;
              ivb[k] = 0;
              m0 += prob(ivb, ovb);
              ivb[k] = xk;
              m1 += prob(ivb, ovb);
            }
            if (std::abs(m0 - m1) > nosig_tol)
              throw std::invalid_argument("signaling marginal detected");
          }
        } while (detail::next_index(ov, outputs));
      } while (detail::next_index(iv2, inputs));
    }
  }
};

inline DistributionTable distribution_from_json(const nlohmann::json& j) {
  DistributionTable t = DistributionTable::zeros(j.at("inputs").get<std::vector<int>>(),
                                                 j.at("outputs").get<std::vector<int>>());
  for (const auto& rec : j.at("p")) {
    auto iv = rec.at("i").get<std::vector<int>>();
    auto ov = rec.at("o").get<std::vector<int>>();
    if (iv.size() != t.inputs.size() || ov.size() != t.outputs.size())
      throw std::invalid_argument("distribution record arity mismatch");
    for (std::size_t k = 0; k < iv.size(); ++k)
      if (iv[k] < 0 || iv[k] >= t.inputs[k]) throw std::invalid_argument("input out of range");
    for (std::size_t k = 0; k < ov.size(); ++k)
      if (ov[k] < 0 || ov[k] >= t.outputs[k]) throw std::invalid_argument("output out of range");
    t.prob(iv, ov) = rec.at("v").get<double>();
  }
  return t;
}

inline nlohmann::json distribution_to_json(const DistributionTable& t) {
  nlohmann::json j;
  j["inputs"] = t.inputs;
  j["outputs"] = t.outputs;
  j["p"] = nlohmann::json::array();
  std::vector<int> iv(t.inputs.size(), 0);
  do {
    std::vector<int> ov(t.outputs.size(), 0);
    do {
      double v = t.prob(iv, ov);
      if (v != 0.0) j["p"].push_back({{"i", iv}, {"o", ov}, {"v", v}});
    } while (detail::next_index(ov, t.outputs));
  } while (detail::next_index(iv, t.inputs));
  return j;
}

}  // namespace netsdp
