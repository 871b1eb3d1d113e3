#pragma once

#include "core/ambiguity.hpp"
#include "core/pa.hpp"

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

namespace palab {

// Strongly connected components of the letterless transition graph; groups
// are in reverse-topological order, members ascending.
std::vector<std::vector<int>> scc_partition(const Nfa& nfa);

// Basepointed simple cycles over the induced subgraph on P: first = last
// state, every state occurs at most twice in the state sequence. Complete and
// duplicate-free, in deterministic order: ascending base, then depth-first by
// (letter, dst). The two rotations of a 2-cycle are distinct elements.
std::vector<Run> periods(const Nfa& host, const std::vector<int>& P);

// Peeling a run down to a spine: repeatedly locate a simple cycle whose
// removal keeps the set of visited states, until length < |Q(run)|^2.
struct Decomposition {
  Run spine;
  // In peel order; `second` is the step index, in the run current at peel
  // time, where the cycle began. reinject() replays them in reverse, so the
  // round trip is exact (first removed = last reinserted).
  std::vector<std::pair<Run, std::size_t>> peeled;
};

Decomposition simple_cycle_decomposition(const Run& run);
Run reinject(const Decomposition& d);

// Synchronized product tracking: the words with exactly kprime accepting runs
// in A and lprime in B (fixed-ambiguity components), kprime copies of A and
// lprime copies of B carrying one run each, and partitions of the copies that
// refine by (block, successor) so that all-singleton partitions certify the
// copies' runs pairwise distinct. Accepting states require every component
// accepting; transitions carry the per-copy probabilities.
struct ProductState {
  int fa_a = 0, fa_b = 0;
  std::vector<int> copies_a, copies_b;
  std::vector<int> part_a, part_b; // block ids, numbered by first occurrence
};

struct ProductTrans {
  int dst = 0;
  std::vector<Rat> probs_a, probs_b;
};

struct ProductInit {
  int state = 0;
  std::vector<Rat> iota_a, iota_b;
};

struct Product {
  int kprime = 0, lprime = 0;
  std::vector<std::string> alphabet;
  std::vector<ProductState> states;
  std::vector<ProductInit> initial;
  std::vector<char> finals;
  // delta[q][letter], at most one entry per dst
  std::vector<std::vector<std::vector<ProductTrans>>> delta;

  // Same state indices; states named "x<i>".
  Nfa skeleton() const;
};

Product build_product(const Pa& A, const Pa& B, int kprime, int lprime,
                      long state_budget = 1000000);

// One exponential-sum comparison: with n = cycles.size(),
//   S_A(x) = sum_i p[i] * prod_j q[i][j]^{x_j}   (i over the A copies)
//   S_B(x) = sum_i r[i] * prod_j s[i][j]^{x_j}
// where p/r multiply initial weight and spine steps and q/s multiply the
// steps of each cycle. Injecting x_j copies of cycle j into the spine yields
// a word w with [[A]](w) = S_A(x) and [[B]](w) = S_B(x).
struct DeltaTuple {
  int kprime = 0, lprime = 0;
  std::vector<Rat> p;
  std::vector<std::vector<Rat>> q;
  std::vector<Rat> r;
  std::vector<std::vector<Rat>> s;
  Run spine;               // in the product of this tuple's (kprime, lprime)
  std::vector<Run> cycles; // periods over the spine's states, canonical order
};

struct TranslateBudget {
  long max_spines = 100000;
  long max_product_states = 1000000;
  long max_dfs_nodes = 4000000;
};

struct TranslateResult {
  std::vector<DeltaTuple> tuples;
  // All cells enumerated in full. Containment YES verdicts are only sound
  // when complete; witness-based NO verdicts never depend on it.
  bool complete = true;
  std::string note;
};

// Emits, for every kprime <= k_max and lprime <= l_max, the tuples of all
// accepting product runs of length < |Q(run)|^2. Guarantee: some word has
// [[A]](w) > [[B]](w) iff some tuple has S_A(x) > S_B(x) for some x in N^n.
// On budget exhaustion: resource error, or a partial result when
// allow_partial is set.
TranslateResult translate(const Pa& A, const Pa& B, int k_max, int l_max,
                          const TranslateBudget& budget = {},
                          bool allow_partial = false);

Rat eval_value_spec(const std::vector<Rat>& coef,
                    const std::vector<std::vector<Rat>>& bases,
                    const std::vector<long>& x);

// The word of the spine with x_j copies of cycle j spliced in at the first
// occurrence of the cycle's base state.
Word inject_word(const std::vector<std::string>& alphabet, const Run& spine,
                 const std::vector<Run>& cycles, const std::vector<long>& x);

} // namespace palab
