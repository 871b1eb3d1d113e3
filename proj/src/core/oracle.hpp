#pragma once

#include "core/ipexp.hpp"
#include "core/pa.hpp"

#include <map>
#include <optional>
#include <vector>

namespace palab {

// Brute-force reference instruments. These deliberately use explicit run
// enumeration and exhaustive sweeps rather than the product constructions of
// the main code paths, so they serve as independent ground truth in tests.

struct SweepReport {
  long bound = 0;
  std::vector<Word> word_witnesses;
  std::vector<std::vector<Int>> vector_witnesses;
  std::optional<Rat> extremal;
};

// Exact count by explicit DFS over individual runs (budgeted).
Int count_accepting_runs(const Pa& pa, const Word& w, long node_budget = 8000000);

// Same count by backward vector propagation; fast companion used for larger
// sweeps and cross-checked against the DFS count in tests.
Int count_accepting_runs_dp(const Pa& pa, const Word& w);

// All accepting runs in deterministic order (initial state ascending, then
// successor ascending at each step).
std::vector<Run> enumerate_accepting_runs(const Pa& pa, const Word& w,
                                          long node_budget = 8000000);

// Checks every word with |w| <= L exactly; witnesses are words where
// [[A]](w) > [[B]](w), in DFS (radix) order; extremal = max difference seen.
SweepReport brute_force_containment(const Pa& A, const Pa& B, long L);

// Max-norm box sweep in shell-then-lexicographic order; witnesses satisfy
// f(x) < 1 and Mx < c exactly; extremal = min f over constraint-feasible x.
SweepReport brute_force_ipexp(const IpExpInstance& inst, long radius,
                              long point_budget = 4000000);

// Accepting-run counts grouped by number of nondeterministic choices used.
std::map<long, Int> choice_profile(const Pa& pa, const Word& w,
                                   long node_budget = 8000000);

// Largest accepting-run count over words of each length 0..L, by exhaustive
// word sweep using the propagation counter.
std::vector<Int> max_run_count_by_length(const Pa& pa, long L);

} // namespace palab
