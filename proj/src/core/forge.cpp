#include "core/forge.hpp"

#include "core/error.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <queue>
#include <string>
#include <vector>

namespace palab {

namespace {

std::string t_tok(std::size_t k) { return "t" + std::to_string(k + 1); }

// Letter codes used by the checker automata: -1 is 'a', -2 is 'b',
// k >= 0 is the k-th machine transition.
constexpr int kLetterA = -1;
constexpr int kLetterB = -2;

// Condition: the word lies in T_init((a*b*)T)*, blocks of a's before blocks
// of b's, ending with a transition letter.
// States: 0 start, 1 just-read-T (accepting), 2 in the a-part, 3 in the
// b-part, 4 dead.
struct ShapeChecker {
  const TwoCounterMachine& m;
  int start() const { return 0; }
  int states() const { return 5; }
  bool accepting(int s) const { return s == 1; }
  int next(int s, int letter) const {
    if (s == 4) return 4;
    if (letter == kLetterA) return (s == 1 || s == 2) ? 2 : 4;
    if (letter == kLetterB) return (s == 1 || s == 2 || s == 3) ? 3 : 4;
    if (s == 0) return m.transitions[letter].src == m.q_init ? 1 : 4;
    return 1;
  }
};

// Condition: the word ends with a transition entering the halt state, with
// the branch of a decrement read off the block that precedes it (empty
// tracked block takes the zero branch).
// State bits: 1 a-seen since the last transition letter, 2 b-seen, 4 the
// last letter was an accepting transition.
struct EndChecker {
  const TwoCounterMachine& m;
  int start() const { return 0; }
  int states() const { return 8; }
  bool accepting(int s) const { return (s & 4) != 0; }
  int next(int s, int letter) const {
    int flags = s & 3;
    if (letter == kLetterA) return flags | 1;
    if (letter == kLetterB) return flags | 2;
    const CmTransition& t = m.transitions[letter];
    bool acc = false;
    switch (t.op) {
      case CmOp::Inc1:
      case CmOp::Inc2:
        acc = t.target == m.q_halt;
        break;
      case CmOp::Dec1:
        acc = (flags & 1) ? t.nonzero_target == m.q_halt
                          : t.target == m.q_halt;
        break;
      case CmOp::Dec2:
        acc = (flags & 2) ? t.nonzero_target == m.q_halt
                          : t.target == m.q_halt;
        break;
    }
    return acc ? 4 : 0;
  }
};

// Condition: consecutive transitions chain through states, where a decrement
// continues from its zero target when its counter's block before it is empty
// and from its nonzero target otherwise.
// States: 0 dead; otherwise 1 + (flags in 0..3) + 4 * expected, with
// expected 0 for "anything" and 1+q for "next transition starts at q".
struct ChainChecker {
  const TwoCounterMachine& m;
  int start() const { return 1; }
  int states() const {
    return 1 + 4 * (1 + static_cast<int>(m.states.size()));
  }
  bool accepting(int s) const { return s != 0; }
  int next(int s, int letter) const {
    if (s == 0) return 0;
    int code = s - 1;
    int flags = code & 3;
    int expected = code >> 2;
    if (letter == kLetterA) return 1 + (flags | 1) + 4 * expected;
    if (letter == kLetterB) return 1 + (flags | 2) + 4 * expected;
    const CmTransition& t = m.transitions[letter];
    if (expected != 0 && t.src != expected - 1) return 0;
    int hand = t.target;
    if (t.op == CmOp::Dec1 && (flags & 1)) hand = t.nonzero_target;
    if (t.op == CmOp::Dec2 && (flags & 2)) hand = t.nonzero_target;
    return 1 + 4 * (1 + hand);
  }
};

// Condition: a decrement taken on an empty tracked block keeps the counter
// at zero, so no tracked letter may occur before the next transition letter.
// States: 0 dead; otherwise 1 + flags + 4 * forbid with forbid 0 none,
// 1 no-a, 2 no-b.
struct ZeroChecker {
  const TwoCounterMachine& m;
  int start() const { return 1; }
  int states() const { return 13; }
  bool accepting(int s) const { return s != 0; }
  int next(int s, int letter) const {
    if (s == 0) return 0;
    int code = s - 1;
    int flags = code & 3;
    int forbid = code >> 2;
    if (letter == kLetterA)
      return forbid == 1 ? 0 : 1 + (flags | 1) + 4 * forbid;
    if (letter == kLetterB)
      return forbid == 2 ? 0 : 1 + (flags | 2) + 4 * forbid;
    const CmTransition& t = m.transitions[letter];
    int nf = 0;
    if (t.op == CmOp::Dec1 && !(flags & 1)) nf = 1;
    if (t.op == CmOp::Dec2 && !(flags & 2)) nf = 2;
    return 1 + 4 * nf;
  }
};

// Window behavior of the counter checkers over one (a-block, b-block) pair:
// the gadget prices the tracked counter's letters and must pass the other
// letter freely where block order demands it. The checked transition's exit
// edge carries y for an increment, z for a nonzero decrement (which also
// consumes one tracked letter on entry at y), and 1 for a no-change check.
enum class GadgetShape { Grow, Shrink, Hold };

std::vector<char> exit_mask_of(const TwoCounterMachine& m,
                               std::initializer_list<CmOp> ops) {
  std::vector<char> mask(m.transitions.size(), 0);
  for (std::size_t k = 0; k < m.transitions.size(); ++k)
    for (CmOp op : ops)
      if (m.transitions[k].op == op) mask[k] = 1;
  return mask;
}

Pa build_gadget(const TwoCounterMachine& m, bool track_b, GadgetShape shape,
                const std::vector<char>& exit_mask, const char* which,
                const Rat& x, const Rat& y, const Rat& z) {
  validate_cm(m);
  if (!(x > 0 && x <= 1) || !(y > 0 && y <= 1) || !(z > 0 && z <= 1))
    input_error(std::string(which) + ": parameters must lie in (0, 1]");
  if (2 * x > 1)
    input_error(std::string(which) +
                ": the two initial weights x + x exceed 1");
  const bool shrink = shape == GadgetShape::Shrink;
  const std::string tracked = track_b ? "b" : "a";
  const std::string other = track_b ? "a" : "b";
  PaBuilder b(cm_alphabet(m));
  b.add_state("g1");
  b.add_state("g2");
  b.add_state("g3");
  b.add_state("g4");
  if (shrink) b.add_state("g5");
  b.set_initial("g1", x);
  b.set_initial(shrink ? "g5" : "g2", x);
  b.set_final("g3");
  b.set_final("g4");

  // g1 idles before the checked transition window opens; each transition
  // letter branches between staying and opening the window.
  b.add_trans("g1", "a", "g1", Rat(1));
  b.add_trans("g1", "b", "g1", Rat(1));
  for (std::size_t k = 0; k < m.transitions.size(); ++k) {
    b.add_trans("g1", t_tok(k), "g1", Rat(1, 2));
    b.add_trans("g1", t_tok(k), shrink ? "g5" : "g2", Rat(1, 2));
  }
  // g5 (decrement checks only) consumes exactly one tracked letter.
  if (shrink) {
    if (track_b) b.add_trans("g5", other, "g5", Rat(1));
    b.add_trans("g5", tracked, "g2", y);
  }
  // g2 prices the tracked letters of the block before the transition.
  b.add_trans("g2", tracked, "g2", y);
  b.add_trans("g2", other, "g2", Rat(1));
  Rat exit_prob = shape == GadgetShape::Grow
                      ? y
                      : (shape == GadgetShape::Shrink ? z : Rat(1));
  for (std::size_t k = 0; k < m.transitions.size(); ++k)
    if (exit_mask[k]) b.add_trans("g2", t_tok(k), "g3", exit_prob);
  // g3 prices the tracked letters of the block after the transition; the
  // a-window closes at the first b (a's precede b's in a block), the
  // b-window passes a's and closes at the next transition letter.
  b.add_trans("g3", tracked, "g3", z);
  if (track_b)
    b.add_trans("g3", other, "g3", Rat(1));
  else
    b.add_trans("g3", other, "g4", Rat(1));
  for (std::size_t k = 0; k < m.transitions.size(); ++k)
    b.add_trans("g3", t_tok(k), "g4", Rat(1));
  for (const std::string& letter : cm_alphabet(m))
    b.add_trans("g4", letter, "g4", Rat(1));
  return b.build();
}

} // namespace

int TwoCounterMachine::state_index(const std::string& id) const {
  for (std::size_t i = 0; i < states.size(); ++i)
    if (states[i] == id) return static_cast<int>(i);
  return -1;
}

void validate_cm(const TwoCounterMachine& m) {
  const int n = static_cast<int>(m.states.size());
  if (n == 0) input_error("machine has no states");
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (m.states[i] == m.states[j])
        input_error("duplicate state identifier " + m.states[i]);
  if (m.q_init < 0 || m.q_init >= n) input_error("initial state out of range");
  if (m.q_halt < 0 || m.q_halt >= n) input_error("halt state out of range");
  if (m.q_init == m.q_halt)
    input_error("initial and halt states must differ");
  std::vector<char> seen(m.states.size(), 0);
  for (const CmTransition& t : m.transitions) {
    if (t.src < 0 || t.src >= n) input_error("transition source out of range");
    if (t.target < 0 || t.target >= n)
      input_error("transition target out of range");
    bool dec = t.op == CmOp::Dec1 || t.op == CmOp::Dec2;
    if (dec) {
      if (t.nonzero_target < 0 || t.nonzero_target >= n)
        input_error("decrement nonzero target out of range");
    } else if (t.nonzero_target != -1) {
      input_error("increments must not carry a nonzero target");
    }
    if (t.src == m.q_halt)
      input_error("the halt state must have no outgoing transition");
    if (seen[t.src])
      input_error("state " + m.states[t.src] +
                  " has more than one outgoing transition");
    seen[t.src] = 1;
  }
}

std::vector<std::string> cm_alphabet(const TwoCounterMachine& m) {
  std::vector<std::string> sigma = {"a", "b"};
  for (std::size_t k = 0; k < m.transitions.size(); ++k)
    sigma.push_back(t_tok(k));
  return sigma;
}

namespace {

struct CmWalk {
  int state;
  long c1 = 0, c2 = 0;
};

// Applies transition k; returns false if the source does not match.
void cm_apply(const TwoCounterMachine& m, int k, CmWalk& w) {
  const CmTransition& t = m.transitions[k];
  switch (t.op) {
    case CmOp::Inc1:
      ++w.c1;
      w.state = t.target;
      break;
    case CmOp::Inc2:
      ++w.c2;
      w.state = t.target;
      break;
    case CmOp::Dec1:
      if (w.c1 == 0)
        w.state = t.target;
      else {
        --w.c1;
        w.state = t.nonzero_target;
      }
      break;
    case CmOp::Dec2:
      if (w.c2 == 0)
        w.state = t.target;
      else {
        --w.c2;
        w.state = t.nonzero_target;
      }
      break;
  }
}

std::vector<int> transition_by_src(const TwoCounterMachine& m) {
  std::vector<int> by_src(m.states.size(), -1);
  for (std::size_t k = 0; k < m.transitions.size(); ++k)
    by_src[m.transitions[k].src] = static_cast<int>(k);
  return by_src;
}

} // namespace

CmSimulation simulate_cm(const TwoCounterMachine& m, long step_budget) {
  validate_cm(m);
  std::vector<int> by_src = transition_by_src(m);
  CmWalk w{m.q_init};
  CmSimulation sim;
  while (sim.steps < step_budget) {
    if (w.state == m.q_halt) {
      sim.halted = true;
      return sim;
    }
    int k = by_src[w.state];
    if (k < 0) return sim; // no transition applies: the machine is stuck
    cm_apply(m, k, w);
    ++sim.steps;
  }
  sim.halted = w.state == m.q_halt;
  return sim;
}

Word encode_execution(const TwoCounterMachine& m, long step_budget) {
  validate_cm(m);
  std::vector<int> by_src = transition_by_src(m);
  CmWalk w{m.q_init};
  Word out;
  for (long step = 0; step < step_budget; ++step) {
    if (w.state == m.q_halt) return out;
    int k = by_src[w.state];
    if (k < 0) break;
    cm_apply(m, k, w);
    out.push_back(t_tok(static_cast<std::size_t>(k)));
    if (w.state == m.q_halt) return out; // no block after the final letter
    for (long i = 0; i < w.c1; ++i) out.push_back("a");
    for (long i = 0; i < w.c2; ++i) out.push_back("b");
  }
  resource_error("the machine does not halt within the step budget");
}

Pa build_A0(const TwoCounterMachine& m) {
  validate_cm(m);
  ShapeChecker shape{m};
  EndChecker end{m};
  ChainChecker chain{m};
  ZeroChecker zero{m};

  std::vector<std::pair<std::string, int>> letters = {{"a", kLetterA},
                                                      {"b", kLetterB}};
  for (std::size_t k = 0; k < m.transitions.size(); ++k)
    letters.emplace_back(t_tok(k), static_cast<int>(k));

  using Tuple = std::array<int, 4>;
  auto name_of = [](const Tuple& t) {
    return "c" + std::to_string(t[0]) + "_" + std::to_string(t[1]) + "_" +
           std::to_string(t[2]) + "_" + std::to_string(t[3]);
  };

  PaBuilder b(cm_alphabet(m));
  Tuple start{shape.start(), end.start(), chain.start(), zero.start()};
  std::map<Tuple, char> known;
  std::queue<Tuple> queue;
  auto discover = [&](const Tuple& t) {
    if (known.emplace(t, 1).second) {
      b.add_state(name_of(t));
      // Value 1 exactly when some condition fails: improper tuples are the
      // accepting states of this automaton.
      bool proper = shape.accepting(t[0]) && end.accepting(t[1]) &&
                    chain.accepting(t[2]) && zero.accepting(t[3]);
      if (!proper) b.set_final(name_of(t));
      queue.push(t);
    }
  };
  discover(start);
  b.set_initial(name_of(start), Rat(1));
  while (!queue.empty()) {
    Tuple cur = queue.front();
    queue.pop();
    for (const auto& [tok, code] : letters) {
      Tuple nxt{shape.next(cur[0], code), end.next(cur[1], code),
                chain.next(cur[2], code), zero.next(cur[3], code)};
      discover(nxt);
      b.add_trans(name_of(cur), tok, name_of(nxt), Rat(1));
    }
  }
  return b.build();
}

Pa build_gadget_C(const TwoCounterMachine& m, const Rat& x, const Rat& y,
                  const Rat& z) {
  return build_gadget(m, false, GadgetShape::Grow,
                      exit_mask_of(m, {CmOp::Inc1}), "gadget C", x, y, z);
}

Pa build_gadget_C2(const TwoCounterMachine& m, const Rat& x, const Rat& y,
                   const Rat& z) {
  return build_gadget(m, true, GadgetShape::Grow,
                      exit_mask_of(m, {CmOp::Inc2}), "gadget C2", x, y, z);
}

Pa build_gadget_D(const TwoCounterMachine& m, const Rat& x, const Rat& y,
                  const Rat& z) {
  return build_gadget(m, false, GadgetShape::Shrink,
                      exit_mask_of(m, {CmOp::Dec1}), "gadget D", x, y, z);
}

Pa build_gadget_D2(const TwoCounterMachine& m, const Rat& x, const Rat& y,
                   const Rat& z) {
  return build_gadget(m, true, GadgetShape::Shrink,
                      exit_mask_of(m, {CmOp::Dec2}), "gadget D2", x, y, z);
}

Pa build_gadget_E1(const TwoCounterMachine& m, const Rat& x, const Rat& y,
                   const Rat& z) {
  return build_gadget(m, false, GadgetShape::Hold,
                      exit_mask_of(m, {CmOp::Inc2, CmOp::Dec2}), "gadget E1",
                      x, y, z);
}

Pa build_gadget_E2(const TwoCounterMachine& m, const Rat& x, const Rat& y,
                   const Rat& z) {
  return build_gadget(m, true, GadgetShape::Hold,
                      exit_mask_of(m, {CmOp::Inc1, CmOp::Dec1}), "gadget E2",
                      x, y, z);
}

ReductionOutput compile(const TwoCounterMachine& m) {
  validate_cm(m);
  const Rat x(1, 2), y(1), z(1, 4);
  using Builder = Pa (*)(const TwoCounterMachine&, const Rat&, const Rat&,
                         const Rat&);
  // Criterion assignment: 1 counter-1 increments, 2 counter-2 increments,
  // 3 counter 1 unchanged on counter-2 moves, 4 counter 2 unchanged on
  // counter-1 moves, 5 counter-1 nonzero decrements, 6 counter-2 nonzero
  // decrements.
  const Builder builders[6] = {build_gadget_C,  build_gadget_C2,
                               build_gadget_E1, build_gadget_E2,
                               build_gadget_D,  build_gadget_D2};

  std::vector<std::pair<Rat, Pa>> parts_a;
  parts_a.emplace_back(Rat(7, 13), build_A0(m));
  std::vector<std::pair<Rat, Pa>> parts_b;
  for (Builder g : builders) {
    Pa balanced = weighted_sum(
        {{Rat(1, 2), g(m, x, y, z)}, {Rat(1, 2), g(m, x, z, y)}});
    parts_a.emplace_back(Rat(1, 13), std::move(balanced));
    parts_b.emplace_back(Rat(1, 13), g(m, x, x, x));
  }

  ReductionOutput out;
  out.A = weighted_sum(parts_a);
  out.B = weighted_sum(parts_b);

  // Length tracker: value (1/52)(1/4)^{|w|} = (1/13)(1/2)^{2(|w|+1)}.
  PaBuilder lb(cm_alphabet(m));
  lb.add_state("len");
  lb.set_initial("len", Rat(1, 52));
  lb.set_final("len");
  for (const std::string& letter : cm_alphabet(m))
    lb.add_trans("len", letter, "len", Rat(1, 4));
  Pa tracker = lb.build();

  out.Aprime = weighted_sum({{Rat(1, 2), out.B}, {Rat(1, 2), tracker}});
  out.Bprime = weighted_sum({{Rat(1, 2), out.A}});
  return out;
}

} // namespace palab
