#pragma once

#include "core/ambiguity.hpp"
#include "core/ipexp.hpp"
#include "core/pa.hpp"
#include "core/structure.hpp"

#include <optional>
#include <string>

namespace palab {

enum class Answer { Yes, No, Unknown };

std::string answer_render(Answer a);

// Outcome of a decision procedure. NO answers to containment questions carry
// a concrete word, re-checked exactly before being returned; YES answers rest
// on a completed tuple enumeration; UNKNOWN reports which budget gave out.
struct Verdict {
  Answer answer = Answer::Unknown;
  std::optional<Word> witness;
  std::string certificate;
};

struct DecideBudget {
  TranslateBudget translate;
  IpExpBudget ipexp;
  // Cap on the doubling steps used to scale a single cycle count.
  long doubling_cap = 64;
};

// Bound on the number of accepting runs, on any fixed word, that make at
// most m branching choices in an automaton with `states` states:
//   2^states * ((m+1) * states^2) ^ (states^3).
Int poly_run_bound(long states, long m);

// Decides [[A]](w) <= [[B]](w) for all words, for A finitely ambiguous and B
// unambiguous. NO comes with a witness word; YES requires the tuple
// enumeration to complete within budget, otherwise UNKNOWN.
Verdict containment_fin_vs_unamb(const Pa& A, const Pa& B,
                                 const DecideBudget& budget = {});

// Decides [[A]](w) <= 1/2 for all words, for A finitely ambiguous, by
// comparing against a constant-1/2 one-state automaton.
Verdict emptiness_finite(const Pa& A, const DecideBudget& budget = {});

// Semi-decides [[A]](w) <= [[B]](w) for A unambiguous and B finitely
// ambiguous. Tuples reduce to exponential-sum feasibility questions; every
// SAT answer yields a verified witness, every UNSAT answer carries a
// certificate, and any inconclusive tuple turns the verdict UNKNOWN.
Verdict containment_unamb_vs_fin(const Pa& A, const Pa& B,
                                 const DecideBudget& budget = {});

// Cutoff data for the choice-counting relaxation. Runs making more than N
// branching choices have total probability mass at most epsilon on every
// word, certified by a geometric tail bound:
//   alpha  - largest probability attached to any branching choice option
//   beta   - (1 + alpha) / 2, the tail ratio
//   m0     - from m0 on, the per-choice-count mass bound shrinks by beta
//   N      - least cutoff >= m0 whose tail sum is at most epsilon
struct GapParams {
  Rat epsilon;
  Rat alpha;
  Rat beta;
  long m0 = 0;
  long N = 0;
};

GapParams compute_N(const Pa& A, const Rat& epsilon);

// Choice-counting restriction of A: runs are re-enacted on N+1 layers, a
// branching choice climbs one layer, and layer N admits no further choices.
// [[A]](w) - epsilon <= [[result]](w) <= [[A]](w) when N = compute_N(A, eps).N.
Pa build_A_prime(const Pa& A, long N);

// Gap variant of emptiness for automata that are not exponentially
// ambiguous: YES certifies [[A]](w) <= 1/2 + epsilon for every word, NO
// returns a word with [[A]](w) > 1/2 exactly. override_N replaces the
// computed cutoff for diagnostics; the epsilon guarantee is then waived.
Verdict gap_emptiness(const Pa& A, const Rat& epsilon,
                      std::optional<long> override_N = std::nullopt,
                      const DecideBudget& budget = {});

} // namespace palab
