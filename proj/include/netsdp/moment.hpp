#pragma once

// Assembly of the scalar-extended moment matrix over entry-key classes,
// substitution of entries computable from an observed distribution, and
// emission of the affine SDP data.

#include <cmath>
#include <iostream>
#include <limits>
#include <map>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "netsdp/algebra.hpp"
#include "netsdp/distribution.hpp"
#include "netsdp/scenario.hpp"
#include "netsdp/sdp.hpp"

namespace netsdp {

constexpr int kZeroEntry = -1;

struct SymbolicMomentMatrix {
  std::vector<ExtendedGenerator> generators;
  int n = 0;
  Eigen::MatrixXi entry;                  // class id per position, kZeroEntry for zeros
  std::vector<SymbolMultiset> classes;    // class id -> representative multiset
};

// Build the symbolic matrix: identical entry keys pool into shared classes,
// which is the linear-constraint mechanism (v1 = v3 and the factorization
// identifications become a single shared variable).
inline SymbolicMomentMatrix assemble(const std::vector<ExtendedGenerator>& generators,
                                     const Scenario& sc) {
  if (generators.empty() || !generators.front().word.empty() ||
      !generators.front().tags.empty())
    throw std::invalid_argument("generator list must start with the identity");
  SymbolicMomentMatrix mm;
  mm.generators = generators;
  mm.n = static_cast<int>(generators.size());
  mm.entry.setConstant(mm.n, mm.n, kZeroEntry);
  std::map<SymbolMultiset, int, MultisetLess> pool;
  for (int i = 0; i < mm.n; ++i)
    for (int j = i; j < mm.n; ++j) {
      EntryKey key = canonical_entry_key(generators[static_cast<std::size_t>(i)],
                                         generators[static_cast<std::size_t>(j)], sc.mode,
                                         sc.structure);
      if (key.zero) continue;
      auto [it, inserted] = pool.try_emplace(key.symbols, static_cast<int>(mm.classes.size()));
      if (inserted) mm.classes.push_back(key.symbols);
      mm.entry(i, j) = it->second;
      mm.entry(j, i) = it->second;
    }
  return mm;
}

namespace detail {

// Value of one expectation symbol <W> when W uses at most one input per
// party: product over parties of outcome indicators (projectors) or +-1
// signs (observables), summed against the distribution. Marginals over
// absent parties are averaged over those parties' free inputs with a
// cross-context consistency check.
inline std::optional<double> known_symbol_value(const Word& word, const DistributionTable& dist,
                                                const Scenario& sc) {
  const int np = static_cast<int>(sc.parties.size());
  std::vector<int> used_input(static_cast<std::size_t>(np), -1);
  std::vector<const Letter*> letter_of(static_cast<std::size_t>(np), nullptr);
  for (const Letter& l : word) {
    int& u = used_input[static_cast<std::size_t>(l.party)];
    if (u >= 0 && u != l.input) return std::nullopt;  // two inputs of one party
    u = l.input;
    letter_of[static_cast<std::size_t>(l.party)] = &l;
  }

  std::vector<int> free_radix;
  std::vector<int> free_parties;
  for (int p = 0; p < np; ++p)
    if (used_input[static_cast<std::size_t>(p)] < 0) {
      free_parties.push_back(p);
      free_radix.push_back(dist.inputs[static_cast<std::size_t>(p)]);
    }

  double vmin = std::numeric_limits<double>::infinity();
  double vmax = -std::numeric_limits<double>::infinity();
  double sum_over_contexts = 0.0;
  int ncontexts = 0;
  std::vector<int> free_idx(free_radix.size(), 0);
  std::vector<int> iv(static_cast<std::size_t>(np), 0);
  do {
    for (int p = 0; p < np; ++p)
      iv[static_cast<std::size_t>(p)] = used_input[static_cast<std::size_t>(p)] >= 0
                                            ? used_input[static_cast<std::size_t>(p)]
                                            : 0;
    for (std::size_t k = 0; k < free_parties.size(); ++k)
      iv[static_cast<std::size_t>(free_parties[k])] = free_idx[k];

    double val = 0.0;
    std::vector<int> ov(static_cast<std::size_t>(np), 0);
    do {
      double f = dist.prob(iv, ov);
      if (f == 0.0) continue;
      for (int p = 0; p < np && f != 0.0; ++p) {
        const Letter* l = letter_of[static_cast<std::size_t>(p)];
        if (!l) continue;
        int o = ov[static_cast<std::size_t>(p)];
        if (l->kind == LetterKind::projector)
          f *= (o == l->outcome) ? 1.0 : 0.0;
        else
          f *= (o == 0) ? 1.0 : -1.0;
      }
      val += f;
    } while (detail::next_index(ov, dist.outputs));

    vmin = std::min(vmin, val);
    vmax = std::max(vmax, val);
    sum_over_contexts += val;
    ++ncontexts;
  } while (detail::next_index(free_idx, free_radix));

  if (vmax - vmin > 1e-6)
    throw std::invalid_argument("signaling distribution: marginal depends on a free input");
  if (vmax - vmin > 1e-9)
    std::cerr << "netsdp: warning: marginal consistency violation "
              << (vmax - vmin) << " across free input contexts\n";
  return sum_over_contexts / ncontexts;
}

}  // namespace detail

// Value of a symbol class when every symbol is computable from the
// distribution, otherwise nullopt. Orientation flags are irrelevant since
// computable expectations are real.
inline std::optional<double> known_value(const SymbolMultiset& symbols,
                                         const DistributionTable& dist, const Scenario& sc) {
  double product = 1.0;
  for (const Symbol& s : symbols) {
    auto v = detail::known_symbol_value(s.word, dist, sc);
    if (!v) return std::nullopt;
    product *= *v;
  }
  return product;
}

struct InstantiatedProblem {
  int n = 0;
  Eigen::MatrixXd constant;
  struct Variable {
    SymbolMultiset key;                 // residual unknown class
    std::vector<SdpEntry> positions;    // upper-triangular, with fold-in coefficients
  };
  std::vector<Variable> variables;
};

// Substitute known entries and collect the rest as variables. Classes mixing
// known and unknown symbols fold the known factors into a per-position
// coefficient on the residual unknown class.
inline InstantiatedProblem instantiate(const SymbolicMomentMatrix& mm,
                                       const DistributionTable& dist, const Scenario& sc) {
  if (static_cast<int>(dist.inputs.size()) != static_cast<int>(sc.parties.size()))
    throw std::invalid_argument("distribution arity does not match scenario");
  InstantiatedProblem out;
  out.n = mm.n;
  out.constant = Eigen::MatrixXd::Zero(mm.n, mm.n);

  struct ClassSplit {
    double coeff = 1.0;
    int var = -1;  // -1: fully known
  };
  std::vector<ClassSplit> splits(mm.classes.size());
  std::map<SymbolMultiset, int, MultisetLess> var_pool;
  for (std::size_t c = 0; c < mm.classes.size(); ++c) {
    double coeff = 1.0;
    SymbolMultiset residual;
    for (const Symbol& s : mm.classes[c]) {
      auto v = detail::known_symbol_value(s.word, dist, sc);
      if (v)
        coeff *= *v;
      else
        residual.push_back(s);
    }
    splits[c].coeff = coeff;
    if (!residual.empty()) {
      SymbolMultiset key = class_canonical(std::move(residual), sc.mode);
      auto [it, inserted] = var_pool.try_emplace(key, static_cast<int>(out.variables.size()));
      if (inserted) out.variables.push_back(InstantiatedProblem::Variable{it->first, {}});
      splits[c].var = it->second;
    }
  }

  for (int i = 0; i < mm.n; ++i)
    for (int j = i; j < mm.n; ++j) {
      int c = mm.entry(i, j);
      if (c == kZeroEntry) continue;
      const ClassSplit& split = splits[static_cast<std::size_t>(c)];
      if (split.var < 0) {
        out.constant(i, j) = split.coeff;
        out.constant(j, i) = split.coeff;
      } else if (split.coeff != 0.0) {
        out.variables[static_cast<std::size_t>(split.var)].positions.push_back(
            SdpEntry{i, j, split.coeff});
      }
    }

  // Variables whose every position vanished (zero fold-in coefficients)
  // would leave empty basis matrices; drop them.
  std::erase_if(out.variables, [](const auto& v) { return v.positions.empty(); });
  return out;
}

inline SdpProblem to_sdp(const InstantiatedProblem& inst) {
  SdpProblem prob;
  prob.n = inst.n;
  prob.c0 = inst.constant;
  prob.basis.reserve(inst.variables.size());
  for (const auto& v : inst.variables) prob.basis.push_back(v.positions);
  return prob;
}

struct ProblemStats {
  int dimension = 0;
  int variable_count = 0;    // symbol classes other than the constant-1 class
  int structural_zeros = 0;  // upper-triangular count
};

inline ProblemStats problem_stats(const SymbolicMomentMatrix& mm) {
  ProblemStats st;
  st.dimension = mm.n;
  for (const auto& cls : mm.classes)
    if (!cls.empty()) ++st.variable_count;
  for (int i = 0; i < mm.n; ++i)
    for (int j = i; j < mm.n; ++j)
      if (mm.entry(i, j) == kZeroEntry) ++st.structural_zeros;
  return st;
}

}  // namespace netsdp
