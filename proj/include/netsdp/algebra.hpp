#pragma once

// Noncommutative operator algebra: measurement letters, words, canonical
// rewriting under the measurement axioms, adjoints, and factorization of
// expectations across causally disconnected party groups.

#include <algorithm>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace netsdp {

enum class Mode { quantum, classical };

enum class LetterKind : std::uint8_t { observable, projector };

// One atomic measurement operator: a projector on an outcome of one input,
// or the dichotomic +/-1 observable of a binary input.
struct Letter {
  int party = 0;
  int input = 0;
  LetterKind kind = LetterKind::observable;
  int outcome = -1;  // -1 for observables

  friend auto operator<=>(const Letter&, const Letter&) = default;
};

// A product of letters; the empty word is the identity operator.
using Word = std::vector<Letter>;

// Total order: shorter words first, then lexicographic.
inline bool word_less(const Word& a, const Word& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  return a < b;
}

struct WordLess {
  bool operator()(const Word& a, const Word& b) const { return word_less(a, b); }
};

// Result of rewriting: the zero operator (projector orthogonality) or a
// canonical word. Rewriting is factor-free, so no scalar is carried.
struct Reduced {
  bool zero = false;
  Word word;
};

inline Reduced zero_reduced() { return Reduced{true, {}}; }

namespace detail {

// Reduce adjacent same-(party, input) pairs to a fixed point. Assumes the
// word is already grouped by party (and fully sorted in classical mode, where
// that order is preserved by erasures).
inline bool reduce_adjacent(Word& w) {
  bool again = true;
  while (again) {
    again = false;
    for (std::size_t i = 0; i + 1 < w.size(); ++i) {
      const Letter& x = w[i];
      const Letter& y = w[i + 1];
      if (x.party != y.party || x.input != y.input) continue;
      if (x.kind != y.kind)
        throw std::invalid_argument(
            "malformed scenario: mixed letter kinds on one (party, input)");
      if (x.kind == LetterKind::observable) {
        // involution O^2 = 1
        w.erase(w.begin() + static_cast<std::ptrdiff_t>(i),
                w.begin() + static_cast<std::ptrdiff_t>(i) + 2);
      } else if (x.outcome == y.outcome) {
        // idempotency Pi^2 = Pi
        w.erase(w.begin() + static_cast<std::ptrdiff_t>(i));
      } else {
        return false;  // orthogonality: zero
      }
      again = true;
      break;
    }
  }
  return true;
}

}  // namespace detail

// Rewrite to canonical form: letters of different parties commute and are
// grouped in global party order; within a party, idempotency, orthogonality
// and involution are applied to a fixed point. In classical mode all letters
// commute and are additionally sorted by (input, outcome) within a party.
inline Reduced canonicalize(Word w, Mode mode) {
  std::stable_sort(w.begin(), w.end(), [](const Letter& a, const Letter& b) {
    return a.party < b.party;
  });
  if (mode == Mode::classical) std::sort(w.begin(), w.end());
  if (!detail::reduce_adjacent(w)) return zero_reduced();
  return Reduced{false, std::move(w)};
}

// All letters are self-adjoint, so the adjoint reverses the sequence; the
// result is re-canonicalized. A canonical word never reverses to zero.
inline Word adjoint(Word w, Mode mode = Mode::quantum) {
  std::reverse(w.begin(), w.end());
  Reduced r = canonicalize(std::move(w), mode);
  if (r.zero) throw std::logic_error("adjoint of a canonical word reduced to zero");
  return std::move(r.word);
}

inline Reduced concat(const Word& w1, const Word& w2, Mode mode) {
  Word w = w1;
  w.insert(w.end(), w2.begin(), w2.end());
  return canonicalize(std::move(w), mode);
}

// The latent structure of the network: each source lists the parties it
// feeds. Latent variables are never represented explicitly.
struct IndependenceStructure {
  std::vector<std::vector<int>> sources;
};

namespace detail {

class UnionFind {
 public:
  explicit UnionFind(int n) : parent_(static_cast<std::size_t>(n)) {
    for (int i = 0; i < n; ++i) parent_[static_cast<std::size_t>(i)] = i;
  }
  int find(int a) {
    while (parent_[static_cast<std::size_t>(a)] != a) {
      parent_[static_cast<std::size_t>(a)] =
          parent_[static_cast<std::size_t>(parent_[static_cast<std::size_t>(a)])];
      a = parent_[static_cast<std::size_t>(a)];
    }
    return a;
  }
  void unite(int a, int b) { parent_[static_cast<std::size_t>(find(a))] = find(b); }

 private:
  std::vector<int> parent_;
};

}  // namespace detail

// Split a canonical word into the sub-words living on causally connected
// party groups: two parties are connected iff some source feeds both. For
// any state compatible with the structure, the expectation of the word is
// the product of the expectations of the returned sub-words.
inline std::vector<Word> independence_components(const Word& word,
                                                 const IndependenceStructure& structure) {
  if (word.empty()) return {};
  int max_party = 0;
  for (const Letter& l : word) max_party = std::max(max_party, l.party);
  std::vector<char> present(static_cast<std::size_t>(max_party) + 1, 0);
  for (const Letter& l : word) {
    bool fed = false;
    for (const auto& src : structure.sources)
      if (std::find(src.begin(), src.end(), l.party) != src.end()) fed = true;
    if (!fed) throw std::invalid_argument("party in word absent from independence structure");
    present[static_cast<std::size_t>(l.party)] = 1;
  }
  detail::UnionFind uf(max_party + 1);
  for (const auto& src : structure.sources) {
    int first = -1;
    for (int p : src) {
      if (p < 0 || p > max_party || !present[static_cast<std::size_t>(p)]) continue;
      if (first < 0)
        first = p;
      else
        uf.unite(first, p);
    }
  }
  // Components emerge in global party order because the word is canonical.
  std::vector<int> root_order;
  std::vector<Word> out;
  for (const Letter& l : word) {
    int r = uf.find(l.party);
    auto it = std::find(root_order.begin(), root_order.end(), r);
    std::size_t idx;
    if (it == root_order.end()) {
      root_order.push_back(r);
      out.emplace_back();
      idx = out.size() - 1;
    } else {
      idx = static_cast<std::size_t>(it - root_order.begin());
    }
    out[idx].push_back(l);
  }
  return out;
}

// One unknown scalar expectation <W> (orientation as-is) or its conjugate
// <W>* = <W^dagger> (orientation flipped).
struct Symbol {
  Word word;          // canonical, non-identity
  bool conj = false;  // true: the symbol stands for <word>^*

  friend bool operator==(const Symbol&, const Symbol&) = default;
};

inline bool symbol_less(const Symbol& a, const Symbol& b) {
  if (a.word != b.word) return word_less(a.word, b.word);
  return a.conj < b.conj;
}

// Pick the representative of {<W>, <W^dagger>^*}: the lexicographically
// smaller word carries the symbol, the orientation flag absorbs the swap.
// Self-adjoint words are real and drop the flag.
inline Symbol normalize_symbol(Word word, bool conj, Mode mode) {
  Word adj = adjoint(word, mode);
  if (adj == word) return Symbol{std::move(word), false};
  if (word_less(adj, word)) return Symbol{std::move(adj), !conj};
  return Symbol{std::move(word), conj};
}

// Sorted multiset of symbols; the algebraic value is the product.
using SymbolMultiset = std::vector<Symbol>;

inline void sort_symbols(SymbolMultiset& s) {
  std::sort(s.begin(), s.end(), symbol_less);
}

inline bool multiset_less(const SymbolMultiset& a, const SymbolMultiset& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end(), symbol_less);
}

struct MultisetLess {
  bool operator()(const SymbolMultiset& a, const SymbolMultiset& b) const {
    return multiset_less(a, b);
  }
};

inline SymbolMultiset flipped(const SymbolMultiset& s, Mode mode) {
  SymbolMultiset out;
  out.reserve(s.size());
  for (const Symbol& sym : s) out.push_back(normalize_symbol(sym.word, !sym.conj, mode));
  sort_symbols(out);
  return out;
}

// Identify K with its elementwise conjugate K^dagger and keep the smaller of
// the pair. This conjugation closure is what makes the real symmetric
// formulation of the moment matrix sound.
inline SymbolMultiset class_canonical(SymbolMultiset s, Mode mode) {
  sort_symbols(s);
  SymbolMultiset f = flipped(s, mode);
  return multiset_less(f, s) ? f : s;
}

// A generating operator of the extended moment matrix: a word times a
// product of unknown scalar expectations.
struct ExtendedGenerator {
  Word word;            // canonical, non-zero
  SymbolMultiset tags;  // scalar factors <S_j> attached to the word
};

// Zero entry marker plus the canonical symbol multiset of a matrix entry.
struct EntryKey {
  bool zero = false;
  SymbolMultiset symbols;
};

// The full symbol multiset of the entry value Tr(rho row^dagger col) times
// the conjugated row scalars and the col scalars. Independence splitting is
// applied both to the operator product and inside every tagged symbol;
// identity symbols are dropped and the conjugation-class representative is
// returned.
inline EntryKey canonical_entry_key(const ExtendedGenerator& row,
                                    const ExtendedGenerator& col, Mode mode,
                                    const IndependenceStructure& structure) {
  Reduced prod = concat(adjoint(row.word, mode), col.word, mode);
  if (prod.zero) return EntryKey{true, {}};
  SymbolMultiset out;
  auto add_split = [&](const Word& w, bool conj) {
    for (Word& comp : independence_components(w, structure))
      if (!comp.empty()) out.push_back(normalize_symbol(std::move(comp), conj, mode));
  };
  add_split(prod.word, false);
  // The row contributes conjugates: <T>^* = <T^dagger>.
  for (const Symbol& t : row.tags) add_split(t.word, !t.conj);
  for (const Symbol& t : col.tags) add_split(t.word, t.conj);
  return EntryKey{false, class_canonical(std::move(out), mode)};
}

}  // namespace netsdp
