#pragma once

// Shared automata, machines, and helpers used across the test files. All
// fixtures are small, deterministic, and documented by the function they
// compute, so expected values in the tests can be checked by hand.

#include "core/error.hpp"
#include "core/forge.hpp"
#include "core/pa.hpp"
#include "core/rational.hpp"

#include <random>
#include <string>
#include <vector>

namespace palab::testfix {

// Expects `expr` to throw a PalabError of the given kind.
#define CHECK_ERR(kind_, expr)                                     \
    do {                                                           \
        bool caught_ = false;                                      \
        try {                                                      \
            (void)(expr);                                          \
        } catch (const palab::PalabError& e_) {                    \
            caught_ = true;                                        \
            CHECK(e_.kind == palab::ErrKind::kind_);               \
        }                                                          \
        CHECK_MESSAGE(caught_, "expected a " #kind_ " error from " \
                               #expr);                             \
    } while (0)

// Word over one-character letters: "aab" -> [a, a, b].
inline Word word_of(const std::string& chars) {
    Word w;
    for (char ch : chars) w.emplace_back(1, ch);
    return w;
}

// Two-state automaton over {a,b} computing a^n b u -> (1/2)^n and 0
// elsewhere; unambiguous (at most one accepting run on any word).
inline Pa half_chain() {
    PaBuilder b({"a", "b"});
    b.add_state("q1");
    b.add_state("q2");
    b.set_initial("q1", Rat(1));
    b.set_final("q2");
    b.add_trans("q1", "a", "q1", rat_of(1, 2));
    b.add_trans("q1", "b", "q2", Rat(1));
    b.add_trans("q2", "a", "q2", Rat(1));
    b.add_trans("q2", "b", "q2", Rat(1));
    return b.build();
}

// Hand-built 3-state automaton computing 1 - [[half_chain]]: a^n b u ->
// 1 - (1/2)^n, a^n -> 1. Linearly ambiguous (runs may drop to `dead` at any
// of the n points).
inline Pa half_chain_flip() {
    PaBuilder b({"a", "b"});
    b.add_state("q1");
    b.add_state("q2");
    b.add_state("dead");
    b.set_initial("q1", Rat(1));
    b.set_final("q1");
    b.set_final("dead");
    b.add_trans("q1", "a", "q1", rat_of(1, 2));
    b.add_trans("q1", "a", "dead", rat_of(1, 2));
    b.add_trans("q1", "b", "q2", Rat(1));
    b.add_trans("q2", "a", "q2", Rat(1));
    b.add_trans("q2", "b", "q2", Rat(1));
    b.add_trans("dead", "a", "dead", Rat(1));
    b.add_trans("dead", "b", "dead", Rat(1));
    return b.build();
}

// Single-state automaton with value c on every word (c = 0 allowed: no
// initial mass). Unambiguous.
inline Pa constant_pa(const std::vector<std::string>& alphabet, const Rat& c) {
    PaBuilder b(alphabet);
    b.add_state("u");
    if (c != 0) b.set_initial("u", c);
    b.set_final("u");
    for (const auto& t : alphabet) b.add_trans("u", t, "u", Rat(1));
    return b.build();
}

// Single-state automaton over {a} with a^n -> p^n. Unambiguous.
inline Pa geometric(const Rat& p) {
    PaBuilder b({"a"});
    b.add_state("g");
    b.set_initial("g", Rat(1));
    b.set_final("g");
    b.add_trans("g", "a", "g", p);
    return b.build();
}

// Two-state automaton over {a} whose accepting-run count on a^m follows the
// Fibonacci recurrence (count(0)=1, count(1)=1, count(m)=count(m-1)+
// count(m-2)): exponentially ambiguous.
inline Pa fib_counter() {
    PaBuilder b({"a"});
    b.add_state("p");
    b.add_state("r");
    b.set_initial("p", Rat(1));
    b.set_final("p");
    b.add_trans("p", "a", "p", rat_of(1, 2));
    b.add_trans("p", "a", "r", rat_of(1, 2));
    b.add_trans("r", "a", "p", Rat(1));
    return b.build();
}

// Three-state chain over {a} with two independent jump points: the count of
// accepting runs on a^m is m(m-1)/2, so the automaton is polynomially
// ambiguous of degree 2.
inline Pa double_jump() {
    PaBuilder b({"a"});
    b.add_state("q1");
    b.add_state("q2");
    b.add_state("q3");
    b.set_initial("q1", Rat(1));
    b.set_final("q3");
    b.add_trans("q1", "a", "q1", rat_of(1, 2));
    b.add_trans("q1", "a", "q2", rat_of(1, 2));
    b.add_trans("q2", "a", "q2", rat_of(1, 2));
    b.add_trans("q2", "a", "q3", rat_of(1, 2));
    b.add_trans("q3", "a", "q3", Rat(1));
    return b.build();
}

// Machine INC1; DEC1(nonzero -> halt): halts in 2 steps, halting word
// "t1 a t2".
inline TwoCounterMachine machine_inc_dec() {
    TwoCounterMachine m;
    m.states = {"s0", "s1", "h"};
    m.q_init = 0;
    m.q_halt = 2;
    m.transitions = {
        {CmOp::Inc1, 0, 1, -1},
        {CmOp::Dec1, 1, 0, 2},
    };
    return m;
}

// Mirror of machine_inc_dec on counter 2: halting word "t1 b t2".
inline TwoCounterMachine machine_inc_dec_2() {
    TwoCounterMachine m;
    m.states = {"s0", "s1", "h"};
    m.q_init = 0;
    m.q_halt = 2;
    m.transitions = {
        {CmOp::Inc2, 0, 1, -1},
        {CmOp::Dec2, 1, 0, 2},
    };
    return m;
}

// Machine DEC1 at (0,0): the zero branch goes straight to halt; halting
// word "t1".
inline TwoCounterMachine machine_zero_test() {
    TwoCounterMachine m;
    m.states = {"s0", "h"};
    m.q_init = 0;
    m.q_halt = 1;
    m.transitions = {
        {CmOp::Dec1, 0, 1, 0},
    };
    return m;
}

// Machine INC1 looping to itself: never halts.
inline TwoCounterMachine machine_loop() {
    TwoCounterMachine m;
    m.states = {"s0", "h"};
    m.q_init = 0;
    m.q_halt = 1;
    m.transitions = {
        {CmOp::Inc1, 0, 0, -1},
    };
    return m;
}

// Pseudo-random sparse automaton with probabilities that are multiples of
// 1/8; rows and the initial distribution stay subprobability by
// construction. May be ambiguous in any class.
inline Pa random_pa(std::mt19937& rng, int nstates,
                    const std::vector<std::string>& alphabet) {
    PaBuilder b(alphabet);
    std::vector<std::string> names;
    names.reserve(static_cast<std::size_t>(nstates));
    for (int i = 0; i < nstates; ++i) {
        names.push_back("s" + std::to_string(i));
        b.add_state(names.back());
    }
    std::uniform_int_distribution<int> pick(0, nstates - 1);
    std::uniform_int_distribution<int> mode4(0, 3);
    std::uniform_int_distribution<int> num_half(1, 4);
    std::uniform_int_distribution<int> num_full(1, 8);
    for (int q = 0; q < nstates; ++q) {
        for (const auto& t : alphabet) {
            int mode = mode4(rng);
            if (mode == 0) continue; // no row
            if (mode == 1 || nstates == 1) {
                b.add_trans(names[static_cast<std::size_t>(q)], t,
                            names[static_cast<std::size_t>(pick(rng))],
                            rat_of(num_full(rng), 8));
            } else {
                int r1 = pick(rng);
                int r2 = pick(rng);
                if (r2 == r1) r2 = (r1 + 1) % nstates;
                b.add_trans(names[static_cast<std::size_t>(q)], t,
                            names[static_cast<std::size_t>(r1)],
                            rat_of(num_half(rng), 8));
                b.add_trans(names[static_cast<std::size_t>(q)], t,
                            names[static_cast<std::size_t>(r2)],
                            rat_of(num_half(rng), 8));
            }
        }
    }
    int i1 = pick(rng);
    int d1 = num_half(rng); // <= 4/8 so a second entry always fits
    b.set_initial(names[static_cast<std::size_t>(i1)], rat_of(d1, 8));
    if (nstates >= 2 && mode4(rng) >= 2) {
        int i2 = pick(rng);
        if (i2 == i1) i2 = (i1 + 1) % nstates;
        b.set_initial(names[static_cast<std::size_t>(i2)],
                      rat_of(num_half(rng), 8));
    }
    for (int q = 0; q < nstates; ++q)
        if (mode4(rng) >= 2) b.set_final(names[static_cast<std::size_t>(q)]);
    return b.build();
}

// Pseudo-random automaton whose underlying structure is deterministic with a
// single initial state, hence unambiguous.
inline Pa random_deterministic_pa(std::mt19937& rng, int nstates,
                                  const std::vector<std::string>& alphabet) {
    PaBuilder b(alphabet);
    std::vector<std::string> names;
    names.reserve(static_cast<std::size_t>(nstates));
    for (int i = 0; i < nstates; ++i) {
        names.push_back("d" + std::to_string(i));
        b.add_state(names.back());
    }
    std::uniform_int_distribution<int> pick(0, nstates - 1);
    std::uniform_int_distribution<int> mode4(0, 3);
    std::uniform_int_distribution<int> num_full(1, 8);
    for (int q = 0; q < nstates; ++q)
        for (const auto& t : alphabet)
            if (mode4(rng) != 0)
                b.add_trans(names[static_cast<std::size_t>(q)], t,
                            names[static_cast<std::size_t>(pick(rng))],
                            rat_of(num_full(rng), 8));
    b.set_initial(names[static_cast<std::size_t>(pick(rng))],
                  rat_of(num_full(rng), 8));
    for (int q = 0; q < nstates; ++q)
        if (mode4(rng) >= 2) b.set_final(names[static_cast<std::size_t>(q)]);
    return b.build();
}

// All words over `alphabet` of length exactly `len`, in radix order.
inline std::vector<Word> words_of_length(const std::vector<std::string>& alphabet,
                                         long len) {
    std::vector<Word> out;
    out.push_back({});
    for (long i = 0; i < len; ++i) {
        std::vector<Word> next;
        for (const auto& w : out)
            for (const auto& t : alphabet) {
                Word e = w;
                e.push_back(t);
                next.push_back(std::move(e));
            }
        out.swap(next);
    }
    return out;
}

// All words of length <= L over `alphabet`, shortest first, radix order
// within a length.
inline std::vector<Word> words_up_to(const std::vector<std::string>& alphabet,
                                     long L) {
    std::vector<Word> out;
    std::vector<Word> layer;
    layer.push_back({});
    out.push_back({});
    for (long i = 1; i <= L; ++i) {
        std::vector<Word> next;
        for (const auto& w : layer)
            for (const auto& t : alphabet) {
                Word e = w;
                e.push_back(t);
                out.push_back(e);
                next.push_back(std::move(e));
            }
        layer.swap(next);
    }
    return out;
}

} // namespace palab::testfix
