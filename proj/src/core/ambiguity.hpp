#pragma once

#include "core/pa.hpp"

#include <optional>
#include <string>
#include <vector>

namespace palab {

// Unweighted automaton; transition structure mirrors Pa (delta[q][a] is a
// sorted list of distinct successor state ids).
struct Nfa {
  std::vector<std::string> alphabet;
  std::vector<std::string> states;
  std::vector<std::vector<std::vector<int>>> delta;
  std::vector<char> initial;
  std::vector<char> finals;

  bool operator==(const Nfa&) const = default;
};

Nfa underlying_nfa(const Pa& pa);

// Keep exactly the states that lie on some initial -> final path.
Nfa trim_nfa(const Nfa& nfa);

bool nfa_accepts(const Nfa& nfa, const Word& w);
bool nfa_language_empty(const Nfa& nfa);

enum class AmbTag { Unambiguous, Finite, Polynomial, Exponential };

struct AmbiguityClass {
  AmbTag tag = AmbTag::Unambiguous;
  // Finite: least k bounding the number of accepting runs per word.
  std::optional<long> finiteDegree;
  // Polynomial: least d with run count O(|w|^d), d >= 1.
  std::optional<long> polyDegree;

  bool operator==(const AmbiguityClass&) const = default;
};

std::string amb_render(const AmbiguityClass& c);

// Classify the ambiguity growth of the underlying NFA of `pa`.
AmbiguityClass classify(const Pa& pa);
AmbiguityClass classify_nfa(const Nfa& nfa);

// Maximum number of accepting runs over all words; requires the automaton to
// be finitely ambiguous (contract error otherwise).
long max_finite_ambiguity(const Nfa& nfa);

// Deterministic complete automaton accepting exactly the words with `i`
// accepting runs in `pa`; requires `pa` finitely ambiguous.
Nfa fixed_ambiguity_language(const Pa& pa, long i);

} // namespace palab
