#pragma once

// Declarative description of the network hypothesis and construction of
// generating sets: NPA levels, custom words, and scalar-extension symbols.

#include <charconv>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "netsdp/algebra.hpp"

namespace netsdp {

struct PartyDecl {
  std::string name;
  int inputs = 1;
  std::vector<int> outputs;  // one count per input
};

struct Scenario {
  std::vector<PartyDecl> parties;
  IndependenceStructure structure;
  Mode mode = Mode::quantum;

  int party_index(std::string_view name) const {
    for (std::size_t i = 0; i < parties.size(); ++i)
      if (parties[i].name == name) return static_cast<int>(i);
    return -1;
  }
};

// Checks every scenario invariant and reports all violations; never aborts.
inline std::vector<std::string> validate(const Scenario& sc) {
  std::vector<std::string> errors;
  std::set<std::string> names;
  for (const PartyDecl& p : sc.parties) {
    if (!names.insert(p.name).second)
      errors.push_back("duplicate party name '" + p.name + "'");
    if (p.inputs < 1) errors.push_back("party '" + p.name + "': inputs < 1");
    if (static_cast<int>(p.outputs.size()) != p.inputs)
      errors.push_back("party '" + p.name + "': outputs list length != inputs");
    for (int o : p.outputs)
      if (o < 2) errors.push_back("party '" + p.name + "': outputs < 2");
  }
  const int np = static_cast<int>(sc.parties.size());
  std::vector<char> fed(static_cast<std::size_t>(np), 0);
  for (const auto& src : sc.structure.sources) {
    if (src.empty()) errors.push_back("empty source");
    for (int p : src) {
      if (p < 0 || p >= np)
        errors.push_back("source references undeclared party index " + std::to_string(p));
      else
        fed[static_cast<std::size_t>(p)] = 1;
    }
  }
  for (int p = 0; p < np; ++p)
    if (!fed[static_cast<std::size_t>(p)])
      errors.push_back("party '" + sc.parties[static_cast<std::size_t>(p)].name +
                       "' appears in no source");
  return errors;
}

inline void validate_or_throw(const Scenario& sc) {
  auto errs = validate(sc);
  if (errs.empty()) return;
  std::string msg = "invalid scenario:";
  for (const auto& e : errs) msg += " " + e + ";";
  throw std::invalid_argument(msg);
}

// Letter set with last-outcome elimination: binary inputs get one observable
// letter, multi-outcome inputs get (outcomes - 1) projector letters.
inline std::vector<Letter> letters(const Scenario& sc) {
  std::vector<Letter> out;
  for (std::size_t p = 0; p < sc.parties.size(); ++p) {
    const PartyDecl& decl = sc.parties[p];
    for (int x = 0; x < decl.inputs; ++x) {
      int outcomes = decl.outputs[static_cast<std::size_t>(x)];
      if (outcomes == 2) {
        out.push_back(Letter{static_cast<int>(p), x, LetterKind::observable, -1});
      } else {
        for (int o = 0; o < outcomes - 1; ++o)
          out.push_back(Letter{static_cast<int>(p), x, LetterKind::projector, o});
      }
    }
  }
  return out;
}

namespace detail {

// Closure of {identity} under right-multiplication by `alphabet`, `level`
// times, canonicalizing and deduplicating after each step.
inline std::set<Word, WordLess> word_closure(const std::vector<Letter>& alphabet, int level,
                                             Mode mode) {
  std::set<Word, WordLess> seen;
  seen.insert(Word{});
  for (int l = 0; l < level; ++l) {
    std::vector<Word> snapshot(seen.begin(), seen.end());
    for (const Word& w : snapshot) {
      for (const Letter& a : alphabet) {
        Word e = w;
        e.push_back(a);
        Reduced r = canonicalize(std::move(e), mode);
        if (!r.zero) seen.insert(std::move(r.word));
      }
    }
  }
  return seen;
}

}  // namespace detail

// All distinct canonical non-zero words of length <= level, identity
// included, ordered by length then lexicographically.
inline std::vector<Word> npa_words(const Scenario& sc, int level) {
  auto seen = detail::word_closure(letters(sc), level, sc.mode);
  return {seen.begin(), seen.end()};
}

// Word text syntax: whitespace-separated `PARTY:input` (observable) or
// `PARTY:input:outcome` (projector); `1` is the identity.
inline Word parse_word(std::string_view text, const Scenario& sc) {
  Word word;
  std::istringstream iss{std::string(text)};
  std::string tok;
  auto parse_int = [](std::string_view s, int& v) {
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    return ec == std::errc{} && ptr == s.data() + s.size();
  };
  while (iss >> tok) {
    if (tok == "1") continue;
    std::size_t c1 = tok.find(':');
    if (c1 == std::string::npos)
      throw std::invalid_argument("bad letter '" + tok + "': expected PARTY:input[:outcome]");
    int party = sc.party_index(tok.substr(0, c1));
    if (party < 0) throw std::invalid_argument("unknown party in '" + tok + "'");
    const PartyDecl& decl = sc.parties[static_cast<std::size_t>(party)];
    std::size_t c2 = tok.find(':', c1 + 1);
    int input = 0;
    if (!parse_int(std::string_view(tok).substr(c1 + 1, (c2 == std::string::npos ? tok.size() : c2) - c1 - 1), input) ||
        input < 0 || input >= decl.inputs)
      throw std::invalid_argument("input out of range in '" + tok + "'");
    int outcomes = decl.outputs[static_cast<std::size_t>(input)];
    if (c2 == std::string::npos) {
      if (outcomes != 2)
        throw std::invalid_argument("observable syntax on non-binary input in '" + tok + "'");
      word.push_back(Letter{party, input, LetterKind::observable, -1});
    } else {
      if (outcomes == 2)
        throw std::invalid_argument("binary inputs use observable letters: '" + tok + "'");
      int outcome = 0;
      if (!parse_int(std::string_view(tok).substr(c2 + 1), outcome) || outcome < 0 ||
          outcome >= outcomes - 1)
        throw std::invalid_argument("outcome out of range in '" + tok +
                                    "' (last outcome is eliminated)");
      word.push_back(Letter{party, input, LetterKind::projector, outcome});
    }
  }
  Reduced r = canonicalize(std::move(word), sc.mode);
  if (r.zero) throw std::invalid_argument("word '" + std::string(text) + "' reduces to zero");
  return std::move(r.word);
}

inline std::string format_word(const Word& word, const Scenario& sc) {
  if (word.empty()) return "1";
  std::string out;
  for (const Letter& l : word) {
    if (!out.empty()) out += ' ';
    out += sc.parties[static_cast<std::size_t>(l.party)].name;
    out += ':';
    out += std::to_string(l.input);
    if (l.kind == LetterKind::projector) {
      out += ':';
      out += std::to_string(l.outcome);
    }
  }
  return out;
}

struct AWordsPreset {
  std::string party;
  int min_len = 2;
  int max_len = 2;
};

struct OutcomePairsPreset {
  std::string party;
};

struct LevelSpec {
  int npa_level = 1;
  std::vector<std::string> extra_words;
  std::vector<std::string> scalar_symbols;
  std::vector<AWordsPreset> a_words;
  std::vector<OutcomePairsPreset> outcome_pairs;
};

// Symbols requested by a level spec, in spec order, duplicates removed.
inline std::vector<Symbol> collect_symbols(const Scenario& sc, const LevelSpec& spec) {
  std::vector<Symbol> out;
  auto push = [&](Symbol s) {
    if (s.word.empty())
      throw std::invalid_argument("scalar symbol canonicalizes to the identity");
    if (std::find(out.begin(), out.end(), s) == out.end()) out.push_back(std::move(s));
  };
  for (const std::string& text : spec.scalar_symbols)
    push(normalize_symbol(parse_word(text, sc), false, sc.mode));
  for (const AWordsPreset& preset : spec.a_words) {
    int party = sc.party_index(preset.party);
    if (party < 0) throw std::invalid_argument("a_words preset: unknown party " + preset.party);
    std::vector<Letter> alphabet;
    for (const Letter& l : letters(sc))
      if (l.party == party) alphabet.push_back(l);
    for (const Word& w : detail::word_closure(alphabet, preset.max_len, sc.mode))
      if (static_cast<int>(w.size()) >= preset.min_len &&
          static_cast<int>(w.size()) <= preset.max_len)
        push(normalize_symbol(w, false, sc.mode));
  }
  for (const OutcomePairsPreset& preset : spec.outcome_pairs) {
    int party = sc.party_index(preset.party);
    if (party < 0)
      throw std::invalid_argument("outcome_pairs preset: unknown party " + preset.party);
    const PartyDecl& decl = sc.parties[static_cast<std::size_t>(party)];
    if (decl.inputs < 2)
      throw std::invalid_argument("outcome_pairs preset needs two inputs");
    for (int c1 = 0; c1 < decl.outputs[0] - 1; ++c1)
      for (int c2 = 0; c2 < decl.outputs[1] - 1; ++c2) {
        Word w{Letter{party, 0, LetterKind::projector, c1},
               Letter{party, 1, LetterKind::projector, c2}};
        Reduced r = canonicalize(std::move(w), sc.mode);
        if (!r.zero) push(normalize_symbol(std::move(r.word), false, sc.mode));
      }
  }
  return out;
}

// Base generators (empty tags) followed by one identity generator tagged
// with each scalar symbol.
inline std::vector<ExtendedGenerator> extend_with_scalars(const std::vector<Word>& base,
                                                          const std::vector<Symbol>& symbols) {
  std::vector<ExtendedGenerator> out;
  out.reserve(base.size() + symbols.size());
  for (const Word& w : base) out.push_back(ExtendedGenerator{w, {}});
  for (const Symbol& s : symbols) out.push_back(ExtendedGenerator{Word{}, SymbolMultiset{s}});
  return out;
}

// Full generating set of a level spec: NPA words, extra words, then the
// scalar-extension columns. The identity word always comes first.
inline std::vector<ExtendedGenerator> build_generators(const Scenario& sc,
                                                       const LevelSpec& spec) {
  std::set<Word, WordLess> base;
  for (Word& w : npa_words(sc, spec.npa_level)) base.insert(std::move(w));
  for (const std::string& text : spec.extra_words) base.insert(parse_word(text, sc));
  return extend_with_scalars({base.begin(), base.end()}, collect_symbols(sc, spec));
}

// --- JSON schemas ---

inline Scenario scenario_from_json(const nlohmann::json& j) {
  Scenario sc;
  for (const auto& jp : j.at("parties")) {
    PartyDecl decl;
    decl.name = jp.at("name").get<std::string>();
    decl.inputs = jp.at("inputs").get<int>();
    const auto& jo = jp.at("outputs");
    if (jo.is_number())
      decl.outputs.assign(static_cast<std::size_t>(decl.inputs), jo.get<int>());
    else
      decl.outputs = jo.get<std::vector<int>>();
    sc.parties.push_back(std::move(decl));
  }
  for (const auto& js : j.at("sources")) {
    std::vector<int> src;
    for (const auto& name : js) {
      int p = sc.party_index(name.get<std::string>());
      if (p < 0)
        throw std::invalid_argument("source references undeclared party " +
                                    name.get<std::string>());
      src.push_back(p);
    }
    sc.structure.sources.push_back(std::move(src));
  }
  std::string mode = j.at("mode").get<std::string>();
  if (mode == "quantum")
    sc.mode = Mode::quantum;
  else if (mode == "classical")
    sc.mode = Mode::classical;
  else
    throw std::invalid_argument("mode must be 'quantum' or 'classical'");
  return sc;
}

inline nlohmann::json scenario_to_json(const Scenario& sc) {
  nlohmann::json j;
  j["parties"] = nlohmann::json::array();
  for (const PartyDecl& p : sc.parties)
    j["parties"].push_back({{"name", p.name}, {"inputs", p.inputs}, {"outputs", p.outputs}});
  j["sources"] = nlohmann::json::array();
  for (const auto& src : sc.structure.sources) {
    nlohmann::json js = nlohmann::json::array();
    for (int p : src) js.push_back(sc.parties[static_cast<std::size_t>(p)].name);
    j["sources"].push_back(std::move(js));
  }
  j["mode"] = sc.mode == Mode::quantum ? "quantum" : "classical";
  return j;
}

inline LevelSpec level_from_json(const nlohmann::json& j) {
  LevelSpec spec;
  spec.npa_level = j.at("npa_level").get<int>();
  if (spec.npa_level < 1) throw std::invalid_argument("npa_level must be >= 1");
  if (j.contains("extra_words")) spec.extra_words = j["extra_words"].get<std::vector<std::string>>();
  if (j.contains("scalar_symbols"))
    spec.scalar_symbols = j["scalar_symbols"].get<std::vector<std::string>>();
  if (j.contains("presets")) {
    for (const auto& jp : j["presets"]) {
      if (jp.contains("a_words")) {
        const auto& ja = jp["a_words"];
        spec.a_words.push_back(AWordsPreset{ja.at("party").get<std::string>(),
                                            ja.at("min").get<int>(), ja.at("max").get<int>()});
      } else if (jp.contains("outcome_pairs")) {
        spec.outcome_pairs.push_back(OutcomePairsPreset{jp["outcome_pairs"].get<std::string>()});
      } else {
        throw std::invalid_argument("unknown preset in level spec");
      }
    }
  }
  return spec;
}

}  // namespace netsdp
