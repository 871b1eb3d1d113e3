#include "doctest.h"

#include "core/error.hpp"
#include "core/pa.hpp"
#include "core/rational.hpp"

#include "fixtures.hpp"

using namespace palab;
using namespace palab::testfix;

TEST_CASE("evaluate on the half_chain fixture matches the closed form") {
    Pa A = half_chain();
    CHECK(evaluate(A, word_of("aab")) == rat_of(1, 4));
    CHECK(evaluate(A, word_of("aaa")) == rat_of(0));
    CHECK(evaluate(A, word_of("b")) == rat_of(1));
    CHECK(evaluate(A, {}) == rat_of(0));
    // a^n b u -> (1/2)^n for every suffix u
    for (long n = 0; n <= 12; ++n) {
        for (const auto& u : words_up_to(A.alphabet, 3)) {
            Word w(static_cast<std::size_t>(n), "a");
            w.push_back("b");
            w.insert(w.end(), u.begin(), u.end());
            CHECK(evaluate(A, w) == rat_pow(rat_of(1, 2), n));
        }
        Word plain(static_cast<std::size_t>(n), "a");
        CHECK(evaluate(A, plain) == rat_of(0));
    }
}

TEST_CASE("evaluate on the complement fixture") {
    Pa F = half_chain_flip();
    CHECK(evaluate(F, {}) == rat_of(1));
    CHECK(evaluate(F, word_of("aab")) == rat_of(3, 4));
    CHECK(evaluate(F, word_of("b")) == rat_of(0));
    CHECK(evaluate(F, word_of("aaaa")) == rat_of(1));
}

TEST_CASE("evaluate with empty finals is identically zero") {
    PaBuilder b({"a"});
    b.add_state("q");
    b.set_initial("q", Rat(1));
    b.add_trans("q", "a", "q", Rat(1));
    Pa pa = b.build();
    for (long n = 0; n <= 5; ++n)
        CHECK(evaluate(pa, Word(static_cast<std::size_t>(n), "a")) == rat_of(0));
}

TEST_CASE("evaluate rejects letters outside the alphabet") {
    Pa A = half_chain();
    CHECK_ERR(Input, evaluate(A, {"c"}));
    CHECK_ERR(Input, evaluate(A, {"a", "ab"}));
}

TEST_CASE("evaluate stays within [0,1] on a random corpus") {
    std::mt19937 rng(7401);
    for (int trial = 0; trial < 30; ++trial) {
        Pa pa = random_pa(rng, 4, {"a", "b"});
        for (const auto& w : words_up_to(pa.alphabet, 5)) {
            Rat v = evaluate(pa, w);
            CHECK(v >= 0);
            CHECK(v <= 1);
        }
    }
}

TEST_CASE("weighted_sum identity weighting preserves values") {
    Pa A = half_chain();
    Pa one = weighted_sum({{Rat(1), A}});
    for (const auto& w : words_up_to(A.alphabet, 6))
        CHECK(evaluate(one, w) == evaluate(A, w));
}

TEST_CASE("weighted_sum of two copies halves and re-adds") {
    Pa A = half_chain();
    Pa two = weighted_sum({{rat_of(1, 2), A}, {rat_of(1, 2), A}});
    CHECK(evaluate(two, word_of("b")) == rat_of(1));
    for (const auto& w : words_up_to(A.alphabet, 6))
        CHECK(evaluate(two, w) == evaluate(A, w));
}

TEST_CASE("weighted_sum is linear on random parts") {
    std::mt19937 rng(7402);
    for (int trial = 0; trial < 10; ++trial) {
        Pa A = random_pa(rng, 3, {"a", "b"});
        Pa B = random_pa(rng, 4, {"a", "b"});
        Rat da = rat_of(1, 3), db = rat_of(1, 2);
        Pa s = weighted_sum({{da, A}, {db, B}});
        for (const auto& w : words_up_to(A.alphabet, 4))
            CHECK(evaluate(s, w) == da * evaluate(A, w) + db * evaluate(B, w));
    }
}

TEST_CASE("weighted_sum rejects bad part lists") {
    Pa A = half_chain();
    Pa other = geometric(rat_of(1, 2)); // alphabet {a} only
    CHECK_ERR(Input, weighted_sum({}));
    CHECK_ERR(Input, weighted_sum({{rat_of(1, 2), A}, {rat_of(1, 2), other}}));
    CHECK_ERR(Input, weighted_sum({{rat_of(2, 3), A}, {rat_of(2, 3), A}}));
    CHECK_ERR(Input, weighted_sum({{rat_of(-1, 4), A}}));
}

TEST_CASE("weighted_sum renames states deterministically") {
    Pa A = half_chain();
    Pa two = weighted_sum({{rat_of(1, 2), A}, {rat_of(1, 2), A}});
    CHECK(two.states == std::vector<std::string>{"u1_q1", "u1_q2", "u2_q1",
                                                 "u2_q2"});
}

TEST_CASE("complement agrees with the hand-built flip automaton") {
    Pa C = complement(half_chain());
    Pa F = half_chain_flip();
    for (const auto& w : words_up_to(F.alphabet, 8))
        CHECK(evaluate(C, w) == evaluate(F, w));
}

TEST_CASE("complement adds exactly one state and completes all rows") {
    Pa A = half_chain();
    Pa C = complement(A);
    CHECK(C.states.size() == A.states.size() + 1);
    CHECK(C.initial_sum() == Rat(1));
    for (std::size_t q = 0; q < C.states.size(); ++q)
        for (std::size_t a = 0; a < C.alphabet.size(); ++a)
            CHECK(C.row_sum(static_cast<int>(q), static_cast<int>(a)) == Rat(1));
}

TEST_CASE("complement identity on random automata") {
    std::mt19937 rng(7403);
    for (int trial = 0; trial < 15; ++trial) {
        Pa pa = random_pa(rng, 4, {"a", "b"});
        Pa C = complement(pa);
        for (const auto& w : words_up_to(pa.alphabet, 4))
            CHECK(evaluate(C, w) + evaluate(pa, w) == Rat(1));
    }
}

TEST_CASE("double complement restores all values") {
    Pa A = half_chain();
    Pa CC = complement(complement(A));
    for (const auto& w : words_up_to(A.alphabet, 6))
        CHECK(evaluate(CC, w) == evaluate(A, w));
}

TEST_CASE("complement of a constant-1/2 automaton still computes 1/2") {
    Pa H = constant_pa({"a", "b"}, rat_of(1, 2));
    Pa C = complement(H);
    for (const auto& w : words_up_to(H.alphabet, 5))
        CHECK(evaluate(C, w) == rat_of(1, 2));
}

TEST_CASE("trim is a fixpoint on already-trimmed automata") {
    Pa A = half_chain();
    CHECK(trim(A) == A);
    // half_chain_flip carries a dead state (q2 loops without reaching a
    // final state), so one trim pass removes it and a second changes nothing.
    Pa F = trim(half_chain_flip());
    CHECK(F.states.size() == 2);
    CHECK(trim(F) == F);
}

TEST_CASE("trim drops unreachable and non-co-reachable states") {
    PaBuilder b({"a"});
    b.add_state("q1");
    b.add_state("orphan"); // final but unreachable
    b.add_state("pit");    // reachable but cannot reach a final state
    b.set_initial("q1", Rat(1));
    b.set_final("q1");
    b.set_final("orphan");
    b.add_trans("q1", "a", "q1", rat_of(1, 2));
    b.add_trans("q1", "a", "pit", rat_of(1, 2));
    b.add_trans("orphan", "a", "q1", Rat(1));
    Pa pa = b.build();
    Pa t = trim(pa);
    CHECK(t.states == std::vector<std::string>{"q1"});
    for (const auto& w : words_up_to(pa.alphabet, 5))
        CHECK(evaluate(t, w) == evaluate(pa, w));
}

TEST_CASE("trim of the complemented growth gadget keeps three states") {
    // The complement of the four-state counter-increment gadget (exit priced
    // y, post-exit letters priced z = 1) has two dead states: with z = 1 the
    // last two original states have complete rows, are non-final after the
    // swap, and cannot reach a final state. Trimming leaves the two entry
    // states plus the completion sink, all initial (x, x, 1-2x) and all
    // final.
    TwoCounterMachine m = machine_inc_dec();
    Pa C = build_gadget_C(m, rat_of(1, 3), rat_of(1, 2), Rat(1));
    Pa comp = complement(C);
    Pa t = trim(comp);
    CHECK(t.states.size() == 3);
    CHECK(comp.states.size() == 5);
    Rat x = rat_of(1, 3);
    CHECK(t.initial_sum() == Rat(1));
    for (std::size_t q = 0; q < t.states.size(); ++q) {
        CHECK(t.is_final(static_cast<int>(q)));
        CHECK(t.iota(static_cast<int>(q)) > 0);
    }
    CHECK(evaluate(t, {}) == Rat(1));
    for (const auto& w : words_up_to(C.alphabet, 4)) {
        CHECK(evaluate(t, w) == Rat(1) - evaluate(C, w));
        CHECK(evaluate(t, w) == evaluate(comp, w));
    }
    // x appears unchanged as the entry weights of the trimmed automaton.
    int kept_with_x = 0;
    for (std::size_t q = 0; q < t.states.size(); ++q)
        if (t.iota(static_cast<int>(q)) == x) ++kept_with_x;
    CHECK(kept_with_x >= 2);
}

TEST_CASE("trim preserves evaluate on random automata") {
    std::mt19937 rng(7404);
    for (int trial = 0; trial < 15; ++trial) {
        Pa pa = random_pa(rng, 5, {"a", "b"});
        Pa t = trim(pa);
        CHECK(t.states.size() <= pa.states.size());
        for (const auto& w : words_up_to(pa.alphabet, 4))
            CHECK(evaluate(t, w) == evaluate(pa, w));
        CHECK(trim(t) == t);
    }
}

TEST_CASE("validate rejects invariant violations") {
    SUBCASE("transition probability above 1") {
        PaBuilder b({"a"});
        b.add_state("q");
        b.add_trans("q", "a", "q", rat_of(3, 2));
        CHECK_ERR(Input, b.build());
    }
    SUBCASE("row sum above 1") {
        PaBuilder b({"a"});
        b.add_state("q");
        b.add_state("r");
        b.add_trans("q", "a", "q", rat_of(2, 3));
        b.add_trans("q", "a", "r", rat_of(2, 3));
        CHECK_ERR(Input, b.build());
    }
    SUBCASE("initial distribution above 1") {
        PaBuilder b({"a"});
        b.add_state("q");
        b.add_state("r");
        b.set_initial("q", rat_of(2, 3));
        b.set_initial("r", rat_of(2, 3));
        CHECK_ERR(Input, b.build());
    }
    SUBCASE("duplicate state") {
        PaBuilder b({"a"});
        b.add_state("q");
        CHECK_ERR(Input, b.add_state("q"));
    }
    SUBCASE("unknown endpoints") {
        PaBuilder b({"a"});
        b.add_state("q");
        CHECK_ERR(Input, b.add_trans("q", "a", "zz", Rat(1)));
        CHECK_ERR(Input, b.add_trans("zz", "a", "q", Rat(1)));
        CHECK_ERR(Input, b.add_trans("q", "c", "q", Rat(1)));
        CHECK_ERR(Input, b.set_initial("zz", Rat(1)));
        CHECK_ERR(Input, b.set_final("zz"));
    }
    SUBCASE("negative probability") {
        PaBuilder b({"a"});
        b.add_state("q");
        b.add_trans("q", "a", "q", rat_of(-1, 2));
        CHECK_ERR(Input, b.build());
    }
}

TEST_CASE("zero-probability entries are dropped, not stored") {
    PaBuilder b({"a"});
    b.add_state("q");
    b.set_initial("q", Rat(0));
    b.add_trans("q", "a", "q", Rat(0));
    Pa pa = b.build();
    CHECK(pa.initial.empty());
    CHECK(pa.row(0, 0).empty());
}

TEST_CASE("run helpers measure validity, probability, and choices") {
    Pa A = half_chain();
    Run r;
    r.start = 0; // q1
    r.steps = {{0, 0, 0}, {0, 1, 1}}; // a then b
    CHECK(run_valid(A, r));
    CHECK(run_transition_product(A, r) == rat_of(1, 2));
    CHECK(run_probability(A, r) == rat_of(1, 2));
    CHECK(run_word(A, r) == word_of("ab"));
    CHECK(run_choice_count(A, r) == 0);

    Run broken;
    broken.start = 0;
    broken.steps = {{0, 1, 1}, {0, 0, 0}}; // chain violated
    CHECK(!run_valid(A, broken));

    Run missing;
    missing.start = 1;
    missing.steps = {{1, 0, 0}}; // q2 -a-> q1 does not exist
    CHECK(!run_valid(A, missing));

    Run empty_run;
    empty_run.start = 1;
    CHECK(run_valid(A, empty_run));
    CHECK(run_probability(A, empty_run) == Rat(0)); // iota(q2) = 0
}

TEST_CASE("choice counting flags branching rows and split initials") {
    Pa F = half_chain_flip();
    CHECK(!initial_is_choice(F));
    CHECK(step_is_choice(F, 0, 0));  // q1 on a branches
    CHECK(!step_is_choice(F, 0, 1)); // q1 on b does not
    Run r;
    r.start = 0;
    r.steps = {{0, 0, 0}, {0, 0, 2}}; // a staying, then a dropping out
    CHECK(run_valid(F, r));
    CHECK(run_choice_count(F, r) == 2);

    Pa split = weighted_sum({{rat_of(1, 2), half_chain()},
                             {rat_of(1, 2), half_chain()}});
    CHECK(initial_is_choice(split));
    Run stay;
    stay.start = 0;
    CHECK(run_choice_count(split, stay) == 1);
}

TEST_CASE("fresh_state_name avoids collisions") {
    Pa A = half_chain();
    CHECK(fresh_state_name(A, "sink") == "sink");
    PaBuilder b({"a"});
    b.add_state("bot");
    b.add_state("bot_1");
    Pa pa = b.build();
    CHECK(fresh_state_name(pa, "bot") == "bot_2");
}
