#pragma once

#include "core/rational.hpp"

#include <array>
#include <string>
#include <vector>

namespace palab {

using Word = std::vector<std::string>;

struct PaTrans {
    int dst;
    Rat prob;

    bool operator==(const PaTrans& o) const {
        return dst == o.dst && prob == o.prob;
    }
};

// Sparse probabilistic automaton over exact rationals. A transition exists
// exactly when its probability is nonzero; rows and the initial distribution
// are subprobability vectors.
struct Pa {
    std::vector<std::string> alphabet; // ordered, unique tokens
    std::vector<std::string> states;   // ordered, unique identifiers
    // delta[q][a]: row sorted by dst; entries carry prob in (0,1]
    std::vector<std::vector<std::vector<PaTrans>>> delta;
    std::vector<std::pair<int, Rat>> initial; // sorted by state, prob > 0
    std::vector<char> finals;                 // mask over states

    int letter_index(const std::string& tok) const;
    int state_index(const std::string& id) const;
    bool is_final(int q) const { return finals[static_cast<std::size_t>(q)] != 0; }
    Rat iota(int q) const;
    const std::vector<PaTrans>& row(int q, int a) const;
    Rat prob(int q, int a, int r) const; // 0 when absent
    Rat row_sum(int q, int a) const;
    Rat initial_sum() const;
    bool operator==(const Pa&) const = default;
};

// A run is a start state plus chained transitions; the empty run at a state is
// valid and reads the empty word.
struct Run {
    int start = 0;
    std::vector<std::array<int, 3>> steps; // (src, letter, dst)
    bool operator==(const Run&) const = default;
};

// Name-based construction helper; build() validates all Pa invariants.
struct PaBuilder {
    explicit PaBuilder(std::vector<std::string> alphabet);
    int add_state(const std::string& id);
    void set_initial(const std::string& id, const Rat& p);
    void set_final(const std::string& id);
    void add_trans(const std::string& src, const std::string& letter,
                   const std::string& dst, const Rat& p);
    Pa build() const;

    Pa pa_;
};

// Throws an input error on any invariant violation.
void validate(const Pa& pa);

// Exact acceptance probability by forward propagation; input error on a
// letter outside the alphabet.
Rat evaluate(const Pa& pa, const Word& w);

// Disjoint union with scaled initial distributions. States are renamed
// "u<i>_<orig>" by part position, so the result is reproducible.
Pa weighted_sum(const std::vector<std::pair<Rat, Pa>>& parts);

// Adds one sink, completes rows and the initial distribution to exactly 1,
// and swaps final and non-final states: [[result]] = 1 - [[pa]].
Pa complement(const Pa& pa);

// Keeps exactly the states that are reachable from the initial support and
// can reach a final state; [[result]] = [[pa]] on every word.
Pa trim(const Pa& pa);

// Nondeterministic-choice structure shared by the choice-counting layers and
// the oracles: a step from (src, letter) is a choice iff the row has at least
// two successors; starting the run is a choice iff iota has support >= 2.
bool initial_is_choice(const Pa& pa);
bool step_is_choice(const Pa& pa, int src, int letter);
long run_choice_count(const Pa& pa, const Run& r);

bool run_valid(const Pa& pa, const Run& r);
// Product of the step probabilities only (no initial weight).
Rat run_transition_product(const Pa& pa, const Run& r);
// iota(start) times the step product: the full weight of the run.
Rat run_probability(const Pa& pa, const Run& r);
Word run_word(const Pa& pa, const Run& r);

// First identifier in "base", "base_1", "base_2", ... not used by pa.
std::string fresh_state_name(const Pa& pa, const std::string& base);

} // namespace palab
