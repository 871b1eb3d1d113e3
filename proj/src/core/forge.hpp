#pragma once

#include "core/pa.hpp"

#include <string>
#include <vector>

namespace palab {

// Deterministic two-counter machine. Increment transitions carry one target;
// decrement transitions test the counter and branch: taken at zero the
// counter stays zero and control moves to `zero_target`, otherwise the
// counter decreases and control moves to `nonzero_target`.
enum class CmOp { Inc1, Inc2, Dec1, Dec2 };

struct CmTransition {
  CmOp op;
  int src;
  int target;         // Inc*: destination; Dec*: zero-branch destination
  int nonzero_target; // Dec* only; -1 for Inc*
};

struct TwoCounterMachine {
  std::vector<std::string> states;
  int q_init = -1;
  int q_halt = -1;
  // Declaration order; transition k is rendered as word letter "t<k+1>".
  std::vector<CmTransition> transitions;

  int state_index(const std::string& id) const;
};

// Checks determinism (at most one transition per source state), that the halt
// state has no outgoing transition, q_init != q_halt, and index validity.
void validate_cm(const TwoCounterMachine& m);

// Word alphabet of the reduction: "a", "b", then "t1".."tK".
std::vector<std::string> cm_alphabet(const TwoCounterMachine& m);

struct CmSimulation {
  bool halted = false;
  long steps = 0;
};

// Runs from (q_init, 0, 0); stops at q_halt, at a state with no transition,
// or when the step budget runs out.
CmSimulation simulate_cm(const TwoCounterMachine& m, long step_budget = 10000);

// Halting execution encoded as t_{i1} a^{c1} b^{c2} t_{i2} ... t_{ik}: after
// each transition letter the counter values are written as letter blocks,
// except after the final (halting) transition; the initial (0,0) block before
// the first letter is empty. Resource error when the machine does not halt
// within the budget.
Word encode_execution(const TwoCounterMachine& m, long step_budget = 10000);

// Deterministic 0/1-valued automaton with value 0 exactly on proper words:
// words shaped T_init((a*b*)T)* that end in a halting transition with a
// compatible block, chain transition states correctly, and keep a counter at
// zero across a zero test. Built as a product of four deterministic checkers.
Pa build_A0(const TwoCounterMachine& m);

// Gadget automata; x is the initial weight of the two entry states, y prices
// the tracked-counter letters before the checked transition, z after it.
Pa build_gadget_C(const TwoCounterMachine& m, const Rat& x, const Rat& y,
                  const Rat& z); // counter-1 increments
Pa build_gadget_C2(const TwoCounterMachine& m, const Rat& x, const Rat& y,
                   const Rat& z); // counter-2 increments
Pa build_gadget_D(const TwoCounterMachine& m, const Rat& x, const Rat& y,
                  const Rat& z); // counter-1 nonzero decrements
Pa build_gadget_D2(const TwoCounterMachine& m, const Rat& x, const Rat& y,
                   const Rat& z); // counter-2 nonzero decrements
Pa build_gadget_E1(const TwoCounterMachine& m, const Rat& x, const Rat& y,
                   const Rat& z); // counter 1 unchanged on counter-2 moves
Pa build_gadget_E2(const TwoCounterMachine& m, const Rat& x, const Rat& y,
                   const Rat& z); // counter 2 unchanged on counter-1 moves

struct ReductionOutput {
  // On the halting word [[A]] = [[B]]; on every other word
  // [[A]](w) >= [[B]](w) + (1/13)(1/2)^{2(|w|+1)}.
  Pa A, B;
  // Strict pair: Aprime halves B and adds a length tracker worth
  // (1/26)(1/2)^{2(|w|+1)}, Bprime halves A; the machine halts iff some word
  // has [[Aprime]](w) > [[Bprime]](w).
  Pa Aprime, Bprime;
};

ReductionOutput compile(const TwoCounterMachine& m);

} // namespace palab
