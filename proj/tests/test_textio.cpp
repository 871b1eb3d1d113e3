#include "doctest.h"

#include "core/error.hpp"
#include "core/textio.hpp"

#include "fixtures.hpp"

#include <cstdio>
#include <functional>
#include <string>

using namespace palab;
using namespace palab::testfix;

namespace {

std::string err_text(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const PalabError& e) {
        return e.what();
    }
    return {};
}

} // namespace

TEST_CASE("parse_pa reads the documented grammar") {
    const std::string text =
        "# two states over {a,b}\n"
        "alphabet a b\n"
        "state q1\n"
        "state q2\n"
        "initial q1 1\n"
        "final q2\n"
        "trans q1 a q1 1/2\n"
        "trans q1 b q2 1\n"
        "trans q2 a q2 1\n"
        "trans q2 b q2 1\n";
    Pa pa = parse_pa(text);
    CHECK(pa == half_chain());
}

TEST_CASE("parse_pa accepts directives in any order and inline comments") {
    const std::string text =
        "trans q a q 1/2 # loop first\n"
        "final q\n"
        "state q\n"
        "initial q 1\n"
        "alphabet a\n";
    Pa pa = parse_pa(text);
    CHECK(pa.states == std::vector<std::string>{"q"});
    CHECK(evaluate(pa, word_of("aa")) == rat_of(1, 4));
}

TEST_CASE("render then parse is the identity on automata") {
    std::mt19937 rng(9001);
    std::vector<Pa> corpus = {half_chain(), half_chain_flip(),
                              constant_pa({"a", "b"}, rat_of(1, 2)),
                              geometric(rat_of(2, 3))};
    for (int i = 0; i < 10; ++i) corpus.push_back(random_pa(rng, 4, {"a", "b"}));
    corpus.push_back(compile(machine_inc_dec()).Aprime);
    for (const auto& pa : corpus) CHECK(parse_pa(render_pa(pa)) == pa);
}

TEST_CASE("parse_pa diagnostics carry line numbers") {
    CHECK(err_text([] { parse_pa(""); }) == "line 1: empty input");
    CHECK(err_text([] { parse_pa("state q\n"); }) ==
          "line 1: missing alphabet line");
    std::string two_alpha = "alphabet a\nalphabet b\n";
    CHECK(err_text([&] { parse_pa(two_alpha); }) ==
          "line 2: duplicate alphabet line");
    std::string bad_rat = "alphabet a\nstate q\ninitial q wat\n";
    CHECK(err_text([&] { parse_pa(bad_rat); }) == "line 3: not a rational: wat");
    std::string bad_directive = "alphabet a\nstate q\nfinally q\n";
    CHECK(err_text([&] { parse_pa(bad_directive); }) ==
          "line 3: unknown directive `finally`");
    std::string bad_arity = "alphabet a\nstate q\ntrans q a q\n";
    CHECK(err_text([&] { parse_pa(bad_arity); }) ==
          "line 3: `trans` expects 4 argument(s)");
}

TEST_CASE("parse_pa enforces automaton invariants with located errors") {
    std::string over_one =
        "alphabet a\nstate q\ninitial q 1\nfinal q\ntrans q a q 3/2\n";
    std::string msg = err_text([&] { parse_pa(over_one); });
    CHECK(msg.rfind("line 5: ", 0) == 0);
    CHECK(msg.find("3/2") != std::string::npos);

    std::string row_sum =
        "alphabet a\nstate q\nstate r\ntrans q a q 2/3\ntrans q a r 2/3\n";
    CHECK_ERR(Input, parse_pa(row_sum));

    std::string unknown_state = "alphabet a\nstate q\ninitial zz 1\n";
    CHECK(err_text([&] { parse_pa(unknown_state); }).rfind("line 3: ", 0) == 0);
}

TEST_CASE("parse_cm reads machines and render_cm round-trips") {
    const std::string text =
        "state s0\n"
        "state s1\n"
        "state h\n"
        "init s0\n"
        "halt h\n"
        "inc1 s0 s1\n"
        "dec1 s1 s0 h\n";
    TwoCounterMachine m = parse_cm(text);
    CHECK(m.states.size() == 3);
    CHECK(m.q_init == 0);
    CHECK(m.q_halt == 2);
    REQUIRE(m.transitions.size() == 2);
    CHECK(m.transitions[0].op == CmOp::Inc1);
    CHECK(m.transitions[1].op == CmOp::Dec1);
    CHECK(m.transitions[1].target == 0);
    CHECK(m.transitions[1].nonzero_target == 2);

    TwoCounterMachine back = parse_cm(render_cm(m));
    CHECK(back.states == m.states);
    CHECK(back.q_init == m.q_init);
    CHECK(back.q_halt == m.q_halt);
    REQUIRE(back.transitions.size() == m.transitions.size());
    for (std::size_t i = 0; i < m.transitions.size(); ++i) {
        CHECK(back.transitions[i].op == m.transitions[i].op);
        CHECK(back.transitions[i].src == m.transitions[i].src);
        CHECK(back.transitions[i].target == m.transitions[i].target);
        CHECK(back.transitions[i].nonzero_target ==
              m.transitions[i].nonzero_target);
    }
}

TEST_CASE("parse_cm diagnostics") {
    CHECK_ERR(Input, parse_cm(""));
    CHECK(err_text([] {
              parse_cm("state s\nstate h\ninit s\nhalt h\ninc1 zz h\n");
          }) == "line 5: unknown state `zz`");
    CHECK(err_text([] { parse_cm("state s\nstate h\nhalt h\n"); }) ==
          "line 3: missing init line");
    CHECK(err_text([] { parse_cm("state s\nstate h\ninit s\n"); }) ==
          "line 3: missing halt line");
    CHECK(err_text([] { parse_cm("state s\nstate s\n"); }) ==
          "line 2: duplicate state `s`");
    // init == halt violates the machine contract discovered by validate_cm.
    CHECK_ERR(Input, parse_cm("state s\ninit s\nhalt s\n"));
    // halt with an outgoing transition
    CHECK_ERR(Input, parse_cm("state s\nstate h\ninit s\nhalt h\ninc1 h s\n"));
    // two transitions from one source state
    CHECK_ERR(Input, parse_cm("state s\nstate h\ninit s\nhalt h\n"
                              "inc1 s s\ninc2 s s\n"));
}

TEST_CASE("parse_ipexp reads the header, terms, and rows") {
    const std::string text =
        "ipexp 2 2 2\n"
        "term 1/3 1/2 3/1\n"
        "term 2/3 2/1 1/3\n"
        "row -1 0 1\n"
        "row 0 -1 1\n";
    IpExpInstance inst = parse_ipexp(text);
    CHECK(inst.n() == 2);
    CHECK(inst.ell() == 2);
    CHECK(inst.m() == 2);
    CHECK(inst.f.r[0] == rat_of(1, 3));
    CHECK(inst.f.s[0] == std::vector<Rat>{rat_of(1, 2), rat_of(3)});
    CHECK(inst.M[0] == std::vector<Int>{Int(-1), Int(0)});
    CHECK(inst.c == std::vector<Int>{Int(1), Int(1)});
    CHECK(parse_ipexp(render_ipexp(inst)) == inst);
}

TEST_CASE("parse_ipexp round-trips degenerate shapes") {
    // No constraint rows; one term; zero dimension.
    IpExpInstance inst = parse_ipexp("ipexp 0 1 0\nterm 1/2\n");
    CHECK(inst.n() == 0);
    CHECK(inst.m() == 0);
    CHECK(parse_ipexp(render_ipexp(inst)) == inst);
}

TEST_CASE("parse_ipexp diagnostics") {
    CHECK_ERR(Input, parse_ipexp(""));
    CHECK(err_text([] { parse_ipexp("nope 1 1 0\nterm 1/2 2/1\n"); }) ==
          "line 1: expected header `ipexp n ell m`");
    CHECK(err_text([] { parse_ipexp("ipexp 1 2 0\nterm 1/2 2/1\n"); }) ==
          "line 1: expected 2 term and 0 row lines");
    CHECK(err_text([] { parse_ipexp("ipexp 1 1 0\nrow 1 1\n"); }) ==
          "line 2: expected `term` line");
    CHECK(err_text([] { parse_ipexp("ipexp 1 1 1\nterm 1/2 2/1\nterm 1 1\n"); }) ==
          "line 3: expected `row` line");
    CHECK(err_text([] {
              parse_ipexp("ipexp 1 1 1\nterm 1/2 2/1\nrow 1/2 1\n");
          }) == "line 3: not an integer: 1/2");
    // Nonpositive term data violates the instance contract.
    CHECK_ERR(Input, parse_ipexp("ipexp 1 1 0\nterm 0 2/1\n"));
    CHECK_ERR(Input, parse_ipexp("ipexp 1 1 0\nterm 1/2 -2/1\n"));
}

TEST_CASE("parse_word_arg splits on whitespace, commas, or characters") {
    std::vector<std::string> ab = {"a", "b"};
    CHECK(parse_word_arg(ab, "a b a") == word_of("aba"));
    CHECK(parse_word_arg(ab, "a,b,a") == word_of("aba"));
    CHECK(parse_word_arg(ab, "aab") == word_of("aab"));
    CHECK(parse_word_arg(ab, "") == Word{});
    CHECK(parse_word_arg(ab, "a") == word_of("a"));
    CHECK_ERR(Input, parse_word_arg(ab, "axb"));
    CHECK_ERR(Input, parse_word_arg(ab, "a c"));

    // Multi-character letters must be separated; no per-character splitting.
    std::vector<std::string> machine_letters = {"a", "b", "t1", "t2"};
    Word w = parse_word_arg(machine_letters, "t1 a t2");
    CHECK(w == Word{"t1", "a", "t2"});
    CHECK(parse_word_arg(machine_letters, "t1,a,t2") == w);
    CHECK_ERR(Input, parse_word_arg(machine_letters, "t1at2"));

    // A compact argument that happens to spell whole letters stays verbatim.
    CHECK(parse_word_arg(ab, "ab") == word_of("ab"));
}

TEST_CASE("render_word joins with single spaces") {
    CHECK(render_word(word_of("aab")) == "a a b");
    CHECK(render_word({}) == "");
    CHECK(render_word({"t1", "a"}) == "t1 a");
}

TEST_CASE("read_text_file and write_text_file round-trip") {
    std::string path = "textio_roundtrip.tmp";
    std::string content = "alpha\nbeta # note\n";
    write_text_file(path, content);
    CHECK(read_text_file(path) == content);
    std::remove(path.c_str());
    CHECK_ERR(Input, read_text_file("does_not_exist.tmp"));
}
