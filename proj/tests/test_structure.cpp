#include "doctest.h"

#include "core/error.hpp"
#include "core/oracle.hpp"
#include "core/structure.hpp"

#include "fixtures.hpp"

#include <algorithm>
#include <map>
#include <set>

using namespace palab;
using namespace palab::testfix;

namespace {

// Flat encoding for order-insensitive run-set comparison.
std::vector<int> run_key(const Run& r) {
    std::vector<int> key{r.start};
    for (const auto& s : r.steps) key.insert(key.end(), s.begin(), s.end());
    return key;
}

std::set<std::vector<int>> run_set(const std::vector<Run>& runs) {
    std::set<std::vector<int>> out;
    for (const auto& r : runs) {
        auto [it, inserted] = out.insert(run_key(r));
        CHECK(inserted); // duplicate-free
    }
    return out;
}

// Independent enumeration of basepointed simple cycles: every closed walk of
// at most 2|P| steps inside P, base only at the ends, no state more than
// twice in the state sequence.
void brute_cycles_from(const Nfa& host, const std::vector<char>& in_p,
                       int base, Run& cur, std::vector<Run>& out, long cap) {
    int u = cur.steps.empty() ? cur.start : cur.steps.back()[2];
    if (static_cast<long>(cur.steps.size()) >= cap) return;
    for (std::size_t a = 0; a < host.alphabet.size(); ++a) {
        for (int dst : host.delta[static_cast<std::size_t>(u)][a]) {
            if (!in_p[static_cast<std::size_t>(dst)]) continue;
            cur.steps.push_back({u, static_cast<int>(a), dst});
            if (dst == base) {
                std::map<int, int> occ;
                occ[cur.start]++;
                bool ok = true;
                for (const auto& s : cur.steps)
                    if (++occ[s[2]] > 2) ok = false;
                if (ok) out.push_back(cur);
            } else {
                brute_cycles_from(host, in_p, base, cur, out, cap);
            }
            cur.steps.pop_back();
        }
    }
}

std::vector<Run> brute_periods(const Nfa& host, const std::vector<int>& P) {
    std::vector<char> in_p(host.states.size(), 0);
    for (int q : P) in_p[static_cast<std::size_t>(q)] = 1;
    std::vector<int> bases = P;
    std::sort(bases.begin(), bases.end());
    bases.erase(std::unique(bases.begin(), bases.end()), bases.end());
    std::vector<Run> out;
    for (int base : bases) {
        Run cur;
        cur.start = base;
        brute_cycles_from(host, in_p, base, cur, out,
                          2 * static_cast<long>(P.size()));
    }
    return out;
}

int comp_of(const std::vector<std::vector<int>>& groups, int q) {
    for (std::size_t g = 0; g < groups.size(); ++g)
        for (int m : groups[g])
            if (m == q) return static_cast<int>(g);
    return -1;
}

std::set<int> run_states(const Run& r) {
    std::set<int> s{r.start};
    for (const auto& step : r.steps) s.insert(step[2]);
    return s;
}

// Uniformly random valid run of up to `len` steps starting in the initial
// support.
Run random_run(std::mt19937& rng, const Pa& pa, long len) {
    Run r;
    std::uniform_int_distribution<std::size_t> pick_init(
        0, pa.initial.size() - 1);
    r.start = pa.initial[pick_init(rng)].first;
    int cur = r.start;
    for (long i = 0; i < len; ++i) {
        std::vector<std::array<int, 3>> options;
        for (std::size_t a = 0; a < pa.alphabet.size(); ++a)
            for (const auto& t : pa.row(cur, static_cast<int>(a)))
                options.push_back({cur, static_cast<int>(a), t.dst});
        if (options.empty()) break;
        std::uniform_int_distribution<std::size_t> pick(0, options.size() - 1);
        r.steps.push_back(options[pick(rng)]);
        cur = r.steps.back()[2];
    }
    return r;
}

} // namespace

TEST_CASE("scc_partition orders components sinks-first") {
    auto groups = scc_partition(underlying_nfa(half_chain()));
    REQUIRE(groups.size() == 2);
    CHECK(groups[0] == std::vector<int>{1}); // the absorbing final state
    CHECK(groups[1] == std::vector<int>{0});

    CHECK(scc_partition(underlying_nfa(geometric(rat_of(1, 2)))) ==
          std::vector<std::vector<int>>{{0}});

    // Three states in one loop form a single component.
    PaBuilder b({"a"});
    b.add_state("c0");
    b.add_state("c1");
    b.add_state("c2");
    b.set_initial("c0", Rat(1));
    b.set_final("c0");
    b.add_trans("c0", "a", "c1", Rat(1));
    b.add_trans("c1", "a", "c2", Rat(1));
    b.add_trans("c2", "a", "c0", Rat(1));
    CHECK(scc_partition(underlying_nfa(b.build())) ==
          std::vector<std::vector<int>>{{0, 1, 2}});

    // A chain without cycles: one singleton per state, last state first.
    PaBuilder chain({"a"});
    chain.add_state("s0");
    chain.add_state("s1");
    chain.add_state("s2");
    chain.set_initial("s0", Rat(1));
    chain.set_final("s2");
    chain.add_trans("s0", "a", "s1", Rat(1));
    chain.add_trans("s1", "a", "s2", Rat(1));
    CHECK(scc_partition(underlying_nfa(chain.build())) ==
          std::vector<std::vector<int>>{{2}, {1}, {0}});
}

TEST_CASE("scc_partition is a partition with edges pointing backwards") {
    std::mt19937 rng(8301);
    for (int trial = 0; trial < 10; ++trial) {
        Nfa nfa = underlying_nfa(random_pa(rng, 5, {"a", "b"}));
        auto groups = scc_partition(nfa);
        std::vector<int> seen(nfa.states.size(), 0);
        for (const auto& g : groups)
            for (int q : g) ++seen[static_cast<std::size_t>(q)];
        CHECK(seen == std::vector<int>(nfa.states.size(), 1));
        for (std::size_t q = 0; q < nfa.states.size(); ++q)
            for (const auto& row : nfa.delta[q])
                for (int dst : row) {
                    int cu = comp_of(groups, static_cast<int>(q));
                    int cv = comp_of(groups, dst);
                    if (cu != cv) CHECK(cu > cv);
                }
        for (const auto& g : groups) {
            CHECK(std::is_sorted(g.begin(), g.end()));
            // Within a group, every member reaches every other inside it.
            for (int from : g)
                for (int to : g) {
                    std::set<int> frontier{from}, visited{from};
                    bool hit = false;
                    while (!frontier.empty() && !hit) {
                        std::set<int> next;
                        for (int u : frontier)
                            for (const auto& row :
                                 nfa.delta[static_cast<std::size_t>(u)])
                                for (int dst : row) {
                                    if (comp_of(groups, dst) !=
                                        comp_of(groups, from))
                                        continue;
                                    if (dst == to) hit = true;
                                    if (visited.insert(dst).second)
                                        next.insert(dst);
                                }
                        frontier = next;
                    }
                    CHECK((hit || from == to));
                }
        }
    }
}

TEST_CASE("periods on one- and two-state loops") {
    Nfa both = underlying_nfa(constant_pa({"a", "b"}, Rat(1)));
    auto loops = periods(both, {0});
    REQUIRE(loops.size() == 2);
    CHECK(loops[0] == Run{0, {{0, 0, 0}}});
    CHECK(loops[1] == Run{0, {{0, 1, 0}}});

    CHECK(periods(both, {}).empty());

    // q1 has only its own loop inside {q1}.
    auto self = periods(underlying_nfa(half_chain()), {0});
    REQUIRE(self.size() == 1);
    CHECK(self[0] == Run{0, {{0, 0, 0}}});

    // Two states swapped by a and b: both rotations are listed, ascending
    // base first.
    PaBuilder b({"a", "b"});
    b.add_state("p");
    b.add_state("q");
    b.set_initial("p", Rat(1));
    b.set_final("q");
    b.add_trans("p", "a", "q", Rat(1));
    b.add_trans("q", "b", "p", Rat(1));
    auto swap = periods(underlying_nfa(b.build()), {0, 1});
    REQUIRE(swap.size() == 2);
    CHECK(swap[0] == Run{0, {{0, 0, 1}, {1, 1, 0}}});
    CHECK(swap[1] == Run{1, {{1, 1, 0}, {0, 0, 1}}});
}

TEST_CASE("periods matches an independent enumeration") {
    // Theta graph: two parallel letters both ways.
    PaBuilder theta({"a", "b"});
    theta.add_state("p");
    theta.add_state("q");
    theta.set_initial("p", Rat(1));
    theta.set_final("q");
    theta.add_trans("p", "a", "q", rat_of(1, 2));
    theta.add_trans("p", "b", "q", rat_of(1, 2));
    theta.add_trans("q", "a", "p", rat_of(1, 2));
    theta.add_trans("q", "b", "p", rat_of(1, 2));
    Nfa theta_nfa = underlying_nfa(theta.build());
    auto got = periods(theta_nfa, {0, 1});
    CHECK(got.size() == 8);
    CHECK(run_set(got) == run_set(brute_periods(theta_nfa, {0, 1})));

    // A graph where an inner state must be passed twice.
    PaBuilder twice({"a", "b"});
    twice.add_state("s0");
    twice.add_state("s1");
    twice.add_state("s2");
    twice.set_initial("s0", Rat(1));
    twice.set_final("s0");
    twice.add_trans("s0", "a", "s1", Rat(1));
    twice.add_trans("s1", "a", "s2", rat_of(1, 2));
    twice.add_trans("s1", "b", "s0", rat_of(1, 2));
    twice.add_trans("s2", "a", "s1", Rat(1));
    Nfa twice_nfa = underlying_nfa(twice.build());
    for (const std::vector<int>& P :
         {std::vector<int>{0, 1, 2}, std::vector<int>{0, 1},
          std::vector<int>{1, 2}, std::vector<int>{2}}) {
        auto runs = periods(twice_nfa, P);
        CHECK(run_set(runs) == run_set(brute_periods(twice_nfa, P)));
        for (const auto& r : runs) {
            CHECK(!r.steps.empty());
            CHECK(r.steps.back()[2] == r.start);
            CHECK(r.steps.size() <= 2 * P.size() - 1);
        }
    }

    // The long cycle through s1 twice is present.
    auto from_zero = periods(twice_nfa, {0, 1, 2});
    bool has_long = false;
    for (const auto& r : from_zero)
        if (r == Run{0, {{0, 0, 1}, {1, 0, 2}, {2, 0, 1}, {1, 1, 0}}})
            has_long = true;
    CHECK(has_long);

    std::mt19937 rng(8302);
    for (int trial = 0; trial < 8; ++trial) {
        Nfa nfa = underlying_nfa(random_pa(rng, 4, {"a", "b"}));
        std::vector<int> P;
        for (int q = 0; q < 4; ++q)
            if (rng() % 2) P.push_back(q);
        CHECK(run_set(periods(nfa, P)) == run_set(brute_periods(nfa, P)));
    }
}

TEST_CASE("periods rejects out-of-range states") {
    CHECK_ERR(Contract, periods(underlying_nfa(half_chain()), {7}));
}

TEST_CASE("decomposition leaves short runs untouched") {
    Run r{0, {{0, 1, 1}}}; // q1 -b-> q2 visits two states, limit 4
    auto d = simple_cycle_decomposition(r);
    CHECK(d.spine == r);
    CHECK(d.peeled.empty());

    Run empty_run{1, {}};
    auto de = simple_cycle_decomposition(empty_run);
    CHECK(de.spine == empty_run);
    CHECK(de.peeled.empty());
}

TEST_CASE("decomposition peels a pure loop down to nothing") {
    Run r{0, {}};
    for (int i = 0; i < 5; ++i) r.steps.push_back({0, 0, 0});
    auto d = simple_cycle_decomposition(r);
    CHECK(d.spine.steps.empty());
    CHECK(d.spine.start == 0);
    REQUIRE(d.peeled.size() == 5);
    for (const auto& [cyc, pos] : d.peeled) {
        CHECK(cyc == Run{0, {{0, 0, 0}}});
        CHECK(pos == 0);
    }
    CHECK(reinject(d) == r);
}

TEST_CASE("decomposition rejects unchained runs") {
    CHECK_ERR(Contract, simple_cycle_decomposition(Run{0, {{0, 0, 0}, {1, 0, 1}}}));
}

TEST_CASE("decomposition round-trips and preserves weight on random runs") {
    std::mt19937 rng(8303);
    for (int trial = 0; trial < 40; ++trial) {
        Pa pa = random_pa(rng, 4, {"a", "b"});
        std::uniform_int_distribution<long> pick_len(0, 20);
        Run run = random_run(rng, pa, pick_len(rng));
        REQUIRE(run_valid(pa, run));

        auto d = simple_cycle_decomposition(run);
        CHECK(reinject(d) == run);
        CHECK(d.spine.start == run.start);
        CHECK(run_states(d.spine) == run_states(run));
        std::size_t qn = run_states(run).size();
        CHECK(d.spine.steps.size() < qn * qn);

        Rat cycle_product = 1;
        for (const auto& [cyc, pos] : d.peeled) {
            CHECK(!cyc.steps.empty());
            CHECK(cyc.steps.back()[2] == cyc.start);
            cycle_product *= run_transition_product(pa, cyc);
        }
        CHECK(run_transition_product(pa, d.spine) * cycle_product ==
              run_transition_product(pa, run));
        CHECK(run_probability(pa, d.spine) * cycle_product ==
              run_probability(pa, run));
    }
}

TEST_CASE("eval_value_spec computes exponential sums exactly") {
    CHECK(eval_value_spec({rat_of(1, 2)}, {{rat_of(3, 4)}}, {2}) ==
          rat_of(9, 32));
    CHECK(eval_value_spec({Rat(1), Rat(2)},
                          {{rat_of(1, 2), Rat(3)}, {Rat(2), rat_of(1, 3)}},
                          {0, 0}) == Rat(3));
    CHECK(eval_value_spec({}, {}, {5, 6}) == Rat(0));
    CHECK_ERR(Contract, eval_value_spec({Rat(1)}, {}, {}));
    CHECK_ERR(Contract, eval_value_spec({Rat(1)}, {{Rat(2)}}, {1, 2}));
    CHECK_ERR(Contract, eval_value_spec({Rat(1)}, {{Rat(2)}}, {-1}));
}

TEST_CASE("inject_word splices cycles at the first visit of their base") {
    std::vector<std::string> ab{"a", "b"};
    Run spine{0, {{0, 1, 1}}};
    std::vector<Run> cycles{Run{0, {{0, 0, 0}}}, Run{1, {{1, 0, 1}}}};
    CHECK(inject_word(ab, spine, cycles, {2, 3}) == word_of("aabaaa"));
    CHECK(inject_word(ab, spine, cycles, {0, 0}) == word_of("b"));
    CHECK(inject_word(ab, Run{0, {}}, {Run{0, {{0, 0, 0}}}}, {3}) ==
          word_of("aaa"));

    CHECK_ERR(Contract, inject_word(ab, spine, cycles, {1}));
    CHECK_ERR(Contract, inject_word(ab, spine, cycles, {1, -1}));
    CHECK_ERR(Contract,
              inject_word(ab, spine, {Run{5, {{5, 0, 5}}}}, {1}));
    CHECK_ERR(Resource,
              inject_word(ab, spine, cycles, {2000000, 0}));
}

TEST_CASE("product of two single-run trackers accepts the right words") {
    Pa A = half_chain();
    Product prod = build_product(A, A, 1, 1);
    CHECK(prod.kprime == 1);
    CHECK(prod.lprime == 1);
    REQUIRE(prod.initial.size() == 1);
    CHECK(prod.initial[0].iota_a == std::vector<Rat>{Rat(1)});
    for (const auto& st : prod.states) {
        CHECK(st.copies_a.size() == 1);
        CHECK(st.copies_b.size() == 1);
        CHECK(st.part_a == std::vector<int>{0});
    }
    Nfa skel = prod.skeleton();
    CHECK(skel.states[0] == "x0");
    for (const auto& w : words_up_to(A.alphabet, 6)) {
        bool both_one = count_accepting_runs(A, w) == 1;
        CHECK(nfa_accepts(skel, w) == both_one);
    }
}

TEST_CASE("product with zero copies tracks only the ambiguity components") {
    Pa A = half_chain();
    Nfa skel = build_product(A, A, 0, 0).skeleton();
    for (const auto& w : words_up_to(A.alphabet, 6))
        CHECK(nfa_accepts(skel, w) == (count_accepting_runs(A, w) == 0));
}

TEST_CASE("product demanding more runs than exist is empty") {
    Pa A = half_chain();
    Pa none = constant_pa({"a", "b"}, Rat(0));
    CHECK(nfa_language_empty(build_product(A, none, 2, 0).skeleton()));
}

TEST_CASE("product distinctness certificates separate equal-start copies") {
    Pa two = weighted_sum({{rat_of(1, 2), half_chain()},
                           {rat_of(1, 2), half_chain()}});
    Pa none = constant_pa({"a", "b"}, Rat(0));
    Product prod = build_product(two, none, 2, 0);
    // Both orders of the two initial entries, and both same-start pairs.
    CHECK(prod.initial.size() == 4);
    Nfa skel = prod.skeleton();
    for (const auto& w : words_up_to(two.alphabet, 6))
        CHECK(nfa_accepts(skel, w) == (count_accepting_runs(two, w) == 2));
}

TEST_CASE("product contract and budget errors") {
    CHECK_ERR(Contract,
              build_product(half_chain(), geometric(rat_of(1, 2)), 1, 1));
    CHECK_ERR(Contract, build_product(half_chain(), half_chain(), -1, 0));
    // The tracked product needs two states; a budget of one starves it.
    CHECK_ERR(Resource, build_product(half_chain(), half_chain(), 1, 1, 1));
    CHECK(build_product(half_chain(), half_chain(), 1, 1, 2).states.size() ==
          2);
}

TEST_CASE("translate on identical unambiguous automata balances both sides") {
    Pa A = half_chain();
    TranslateResult res = translate(A, A, 1, 1);
    CHECK(res.complete);
    CHECK(!res.tuples.empty());
    for (const auto& t : res.tuples) {
        CHECK(t.kprime == t.lprime);
        CHECK(t.p == t.r);
        CHECK(t.q == t.s);
    }
}

TEST_CASE("translate against a zero automaton only yields zero left sides") {
    Pa zero = constant_pa({"a", "b"}, Rat(0));
    TranslateResult res = translate(zero, half_chain(), 1, 1);
    CHECK(res.complete);
    CHECK(!res.tuples.empty());
    for (const auto& t : res.tuples) {
        CHECK(t.kprime == 0);
        std::vector<long> x(t.cycles.size(), 0);
        CHECK(eval_value_spec(t.p, t.q, x) == Rat(0));
        if (!x.empty()) {
            x[0] = 2;
            CHECK(eval_value_spec(t.p, t.q, x) == Rat(0));
        }
    }
}

TEST_CASE("translate finds a strict gap only after pumping") {
    // Left side 1/2 * (3/4)^n, right side (1/2)^n: the left pulls ahead from
    // n = 2 on, so the single tuple needs a nonzero cycle count.
    Pa A = weighted_sum({{rat_of(1, 2), geometric(rat_of(3, 4))}});
    Pa B = geometric(rat_of(1, 2));
    TranslateResult res = translate(A, B, 1, 1);
    CHECK(res.complete);
    REQUIRE(res.tuples.size() == 1);
    const DeltaTuple& t = res.tuples[0];
    CHECK(t.kprime == 1);
    CHECK(t.lprime == 1);
    CHECK(t.spine.steps.empty());
    REQUIRE(t.cycles.size() == 1);
    CHECK(t.cycles[0].steps.size() == 1);
    CHECK(t.p == std::vector<Rat>{rat_of(1, 2)});
    CHECK(t.q == std::vector<std::vector<Rat>>{{rat_of(3, 4)}});
    CHECK(t.r == std::vector<Rat>{Rat(1)});
    CHECK(t.s == std::vector<std::vector<Rat>>{{rat_of(1, 2)}});

    CHECK(eval_value_spec(t.p, t.q, {0}) < eval_value_spec(t.r, t.s, {0}));
    CHECK(eval_value_spec(t.p, t.q, {1}) < eval_value_spec(t.r, t.s, {1}));
    CHECK(eval_value_spec(t.p, t.q, {2}) > eval_value_spec(t.r, t.s, {2}));

    Word w = inject_word(A.alphabet, t.spine, t.cycles, {2});
    CHECK(w == word_of("aa"));
    CHECK(evaluate(A, w) == rat_of(9, 32));
    CHECK(evaluate(B, w) == rat_of(1, 4));
}

TEST_CASE("tuple values match the automata on injected words") {
    std::mt19937 rng(8304);
    TranslateBudget budget;
    budget.max_spines = 20000;
    budget.max_dfs_nodes = 200000;
    for (int trial = 0; trial < 6; ++trial) {
        Pa A = weighted_sum({{rat_of(1, 2), random_deterministic_pa(rng, 2, {"a", "b"})},
                             {rat_of(1, 2), random_deterministic_pa(rng, 2, {"a", "b"})}});
        Pa B = random_deterministic_pa(rng, 3, {"a", "b"});
        TranslateResult res = translate(A, B, 2, 1, budget, true);
        std::size_t used = std::min<std::size_t>(res.tuples.size(), 200);
        for (std::size_t i = 0; i < used; ++i) {
            const DeltaTuple& t = res.tuples[i];
            std::size_t n = t.cycles.size();
            std::vector<std::vector<long>> samples;
            samples.emplace_back(n, 0);
            if (n >= 1) {
                std::vector<long> x(n, 0);
                x[0] = 1;
                samples.push_back(x);
                x[0] = 2;
                samples.push_back(x);
            }
            if (n >= 2) {
                std::vector<long> x(n, 0);
                x[0] = 1;
                x[1] = 1;
                samples.push_back(x);
                std::vector<long> y(n, 0);
                y[n - 1] = 2;
                samples.push_back(y);
            }
            for (const auto& x : samples) {
                Word w = inject_word(A.alphabet, t.spine, t.cycles, x);
                CHECK(eval_value_spec(t.p, t.q, x) == evaluate(A, w));
                CHECK(eval_value_spec(t.r, t.s, x) == evaluate(B, w));
            }
        }
    }
}

TEST_CASE("translate budget exhaustion is reported or thrown") {
    Pa A = half_chain();
    Pa B = constant_pa({"a", "b"}, rat_of(1, 2));

    TranslateBudget no_spines;
    no_spines.max_spines = 0;
    CHECK_ERR(Resource, translate(A, B, 1, 1, no_spines));
    TranslateResult partial = translate(A, B, 1, 1, no_spines, true);
    CHECK(!partial.complete);
    CHECK(partial.note.find("spine budget") != std::string::npos);

    TranslateBudget no_states;
    no_states.max_product_states = 1;
    TranslateResult cells = translate(A, B, 1, 1, no_states, true);
    CHECK(!cells.complete);
    CHECK(cells.tuples.empty());
    // The scan stops after the first starved row, so only that row is noted.
    CHECK(cells.note.find("cell (0,0)") != std::string::npos);
    CHECK(cells.note.find("cell (0,1)") != std::string::npos);
    CHECK_ERR(Resource, translate(A, B, 1, 1, no_states, false));

    CHECK_ERR(Contract, translate(A, B, -1, 0));
}
