#include "core/pa.hpp"

#include "core/error.hpp"

#include <algorithm>
#include <set>

namespace palab {

int Pa::letter_index(const std::string& tok) const {
    for (std::size_t i = 0; i < alphabet.size(); ++i)
        if (alphabet[i] == tok) return static_cast<int>(i);
    return -1;
}

int Pa::state_index(const std::string& id) const {
    for (std::size_t i = 0; i < states.size(); ++i)
        if (states[i] == id) return static_cast<int>(i);
    return -1;
}

Rat Pa::iota(int q) const {
    for (const auto& [s, p] : initial)
        if (s == q) return p;
    return Rat(0);
}

const std::vector<PaTrans>& Pa::row(int q, int a) const {
    return delta[static_cast<std::size_t>(q)][static_cast<std::size_t>(a)];
}

Rat Pa::prob(int q, int a, int r) const {
    for (const auto& t : row(q, a))
        if (t.dst == r) return t.prob;
    return Rat(0);
}

Rat Pa::row_sum(int q, int a) const {
    Rat s(0);
    for (const auto& t : row(q, a)) s += t.prob;
    return s;
}

Rat Pa::initial_sum() const {
    Rat s(0);
    for (const auto& [q, p] : initial) s += p;
    return s;
}

PaBuilder::PaBuilder(std::vector<std::string> alphabet) {
    pa_.alphabet = std::move(alphabet);
}

int PaBuilder::add_state(const std::string& id) {
    if (pa_.state_index(id) >= 0) input_error("duplicate state: " + id);
    pa_.states.push_back(id);
    pa_.delta.emplace_back(pa_.alphabet.size());
    pa_.finals.push_back(0);
    return static_cast<int>(pa_.states.size()) - 1;
}

void PaBuilder::set_initial(const std::string& id, const Rat& p) {
    int q = pa_.state_index(id);
    if (q < 0) input_error("initial on unknown state: " + id);
    for (const auto& [s, _] : pa_.initial)
        if (s == q) input_error("duplicate initial entry for state: " + id);
    if (p != 0) pa_.initial.emplace_back(q, p);
}

void PaBuilder::set_final(const std::string& id) {
    int q = pa_.state_index(id);
    if (q < 0) input_error("final on unknown state: " + id);
    pa_.finals[static_cast<std::size_t>(q)] = 1;
}

void PaBuilder::add_trans(const std::string& src, const std::string& letter,
                          const std::string& dst, const Rat& p) {
    int q = pa_.state_index(src);
    int a = pa_.letter_index(letter);
    int r = pa_.state_index(dst);
    if (q < 0) input_error("transition from unknown state: " + src);
    if (a < 0) input_error("transition on unknown letter: " + letter);
    if (r < 0) input_error("transition to unknown state: " + dst);
    if (p == 0) return;
    auto& row = pa_.delta[static_cast<std::size_t>(q)][static_cast<std::size_t>(a)];
    for (const auto& t : row)
        if (t.dst == r)
            input_error("duplicate transition " + src + " " + letter + " " + dst);
    row.push_back(PaTrans{r, p});
}

Pa PaBuilder::build() const {
    Pa out = pa_;
    std::sort(out.initial.begin(), out.initial.end(),
              [](const auto& x, const auto& y) { return x.first < y.first; });
    for (auto& per_state : out.delta)
        for (auto& row : per_state)
            std::sort(row.begin(), row.end(),
                      [](const PaTrans& x, const PaTrans& y) { return x.dst < y.dst; });
    validate(out);
    return out;
}

void validate(const Pa& pa) {
    std::set<std::string> seen;
    for (const auto& t : pa.alphabet)
        if (!seen.insert(t).second) input_error("duplicate letter: " + t);
    seen.clear();
    for (const auto& s : pa.states)
        if (!seen.insert(s).second) input_error("duplicate state: " + s);
    auto n = pa.states.size();
    if (pa.delta.size() != n || pa.finals.size() != n)
        input_error("automaton tables do not match the state count");
    for (std::size_t q = 0; q < n; ++q) {
        if (pa.delta[q].size() != pa.alphabet.size())
            input_error("transition table does not match the alphabet");
        for (std::size_t a = 0; a < pa.alphabet.size(); ++a) {
            Rat sum(0);
            int prev = -1;
            for (const auto& t : pa.delta[q][a]) {
                if (t.dst < 0 || t.dst >= static_cast<int>(n))
                    input_error("transition endpoint out of range");
                if (t.dst <= prev) input_error("transition row not sorted/unique");
                prev = t.dst;
                if (t.prob <= 0 || t.prob > 1)
                    input_error("transition probability outside (0,1]: " +
                                rat_render(t.prob));
                sum += t.prob;
            }
            if (sum > 1)
                input_error("row sum over 1 at state " + pa.states[q] +
                            " letter " + pa.alphabet[a] + ": " + rat_render(sum));
        }
    }
    Rat isum(0);
    int prev = -1;
    for (const auto& [q, p] : pa.initial) {
        if (q < 0 || q >= static_cast<int>(n)) input_error("initial state out of range");
        if (q <= prev) input_error("initial distribution not sorted/unique");
        prev = q;
        if (p <= 0 || p > 1)
            input_error("initial probability outside (0,1]: " + rat_render(p));
        isum += p;
    }
    if (isum > 1) input_error("initial distribution sums over 1: " + rat_render(isum));
}

Rat evaluate(const Pa& pa, const Word& w) {
    std::vector<Rat> cur(pa.states.size(), Rat(0));
    for (const auto& [q, p] : pa.initial) cur[static_cast<std::size_t>(q)] = p;
    for (const auto& tok : w) {
        int a = pa.letter_index(tok);
        if (a < 0) input_error("letter outside the alphabet: " + tok);
        std::vector<Rat> next(pa.states.size(), Rat(0));
        for (std::size_t q = 0; q < pa.states.size(); ++q) {
            if (cur[q] == 0) continue;
            for (const auto& t : pa.delta[q][static_cast<std::size_t>(a)])
                next[static_cast<std::size_t>(t.dst)] += cur[q] * t.prob;
        }
        cur.swap(next);
    }
    Rat out(0);
    for (std::size_t q = 0; q < pa.states.size(); ++q)
        if (pa.finals[q]) out += cur[q];
    return out;
}

Pa weighted_sum(const std::vector<std::pair<Rat, Pa>>& parts) {
    if (parts.empty()) input_error("weighted_sum needs at least one part");
    const auto& alphabet = parts[0].second.alphabet;
    Rat total(0);
    for (const auto& [d, part] : parts) {
        if (d < 0) input_error("weighted_sum weight is negative: " + rat_render(d));
        if (part.alphabet != alphabet) input_error("weighted_sum alphabet mismatch");
        total += d;
    }
    if (total > 1) input_error("weighted_sum weights sum over 1: " + rat_render(total));

    PaBuilder b(alphabet);
    for (std::size_t i = 0; i < parts.size(); ++i) {
        const auto& pa = parts[i].second;
        std::string prefix = "u" + std::to_string(i + 1) + "_";
        for (const auto& s : pa.states) b.add_state(prefix + s);
        for (const auto& [q, p] : pa.initial) {
            Rat scaled = parts[i].first * p;
            if (scaled != 0)
                b.set_initial(prefix + pa.states[static_cast<std::size_t>(q)], scaled);
        }
        for (std::size_t q = 0; q < pa.states.size(); ++q) {
            if (pa.finals[q]) b.set_final(prefix + pa.states[q]);
            for (std::size_t a = 0; a < alphabet.size(); ++a)
                for (const auto& t : pa.delta[q][a])
                    b.add_trans(prefix + pa.states[q], alphabet[a],
                                prefix + pa.states[static_cast<std::size_t>(t.dst)],
                                t.prob);
        }
    }
    return b.build();
}

std::string fresh_state_name(const Pa& pa, const std::string& base) {
    if (pa.state_index(base) < 0) return base;
    for (int i = 1;; ++i) {
        std::string cand = base + "_" + std::to_string(i);
        if (pa.state_index(cand) < 0) return cand;
    }
}

Pa complement(const Pa& pa) {
    std::string bot = fresh_state_name(pa, "bot");
    PaBuilder b(pa.alphabet);
    for (const auto& s : pa.states) b.add_state(s);
    b.add_state(bot);
    for (const auto& [q, p] : pa.initial)
        b.set_initial(pa.states[static_cast<std::size_t>(q)], p);
    Rat ideficit = Rat(1) - pa.initial_sum();
    if (ideficit != 0) b.set_initial(bot, ideficit);
    for (std::size_t q = 0; q < pa.states.size(); ++q) {
        if (!pa.finals[q]) b.set_final(pa.states[q]);
        for (std::size_t a = 0; a < pa.alphabet.size(); ++a) {
            for (const auto& t : pa.delta[q][a])
                b.add_trans(pa.states[q], pa.alphabet[a],
                            pa.states[static_cast<std::size_t>(t.dst)], t.prob);
            Rat deficit = Rat(1) - pa.row_sum(static_cast<int>(q), static_cast<int>(a));
            if (deficit != 0) b.add_trans(pa.states[q], pa.alphabet[a], bot, deficit);
        }
    }
    b.set_final(bot);
    for (const auto& letter : pa.alphabet) b.add_trans(bot, letter, bot, Rat(1));
    return b.build();
}

Pa trim(const Pa& pa) {
    auto n = pa.states.size();
    std::vector<char> fwd(n, 0), bwd(n, 0);
    std::vector<int> stack;
    for (const auto& [q, _] : pa.initial) {
        fwd[static_cast<std::size_t>(q)] = 1;
        stack.push_back(q);
    }
    while (!stack.empty()) {
        int q = stack.back();
        stack.pop_back();
        for (std::size_t a = 0; a < pa.alphabet.size(); ++a)
            for (const auto& t : pa.delta[static_cast<std::size_t>(q)][a])
                if (!fwd[static_cast<std::size_t>(t.dst)]) {
                    fwd[static_cast<std::size_t>(t.dst)] = 1;
                    stack.push_back(t.dst);
                }
    }
    // reverse adjacency for co-reachability
    std::vector<std::vector<int>> rev(n);
    for (std::size_t q = 0; q < n; ++q)
        for (std::size_t a = 0; a < pa.alphabet.size(); ++a)
            for (const auto& t : pa.delta[q][a])
                rev[static_cast<std::size_t>(t.dst)].push_back(static_cast<int>(q));
    for (std::size_t q = 0; q < n; ++q)
        if (pa.finals[q]) {
            bwd[q] = 1;
            stack.push_back(static_cast<int>(q));
        }
    while (!stack.empty()) {
        int q = stack.back();
        stack.pop_back();
        for (int p : rev[static_cast<std::size_t>(q)])
            if (!bwd[static_cast<std::size_t>(p)]) {
                bwd[static_cast<std::size_t>(p)] = 1;
                stack.push_back(p);
            }
    }
    std::vector<char> keep(n);
    for (std::size_t q = 0; q < n; ++q) keep[q] = fwd[q] && bwd[q];

    PaBuilder b(pa.alphabet);
    for (std::size_t q = 0; q < n; ++q)
        if (keep[q]) b.add_state(pa.states[q]);
    for (const auto& [q, p] : pa.initial)
        if (keep[static_cast<std::size_t>(q)])
            b.set_initial(pa.states[static_cast<std::size_t>(q)], p);
    for (std::size_t q = 0; q < n; ++q) {
        if (!keep[q]) continue;
        if (pa.finals[q]) b.set_final(pa.states[q]);
        for (std::size_t a = 0; a < pa.alphabet.size(); ++a)
            for (const auto& t : pa.delta[q][a])
                if (keep[static_cast<std::size_t>(t.dst)])
                    b.add_trans(pa.states[q], pa.alphabet[a],
                                pa.states[static_cast<std::size_t>(t.dst)], t.prob);
    }
    return b.build();
}

bool initial_is_choice(const Pa& pa) { return pa.initial.size() >= 2; }

bool step_is_choice(const Pa& pa, int src, int letter) {
  return pa.row(src, letter).size() >= 2;
}

long run_choice_count(const Pa& pa, const Run& r) {
  long m = initial_is_choice(pa) ? 1 : 0;
  for (const auto& [src, letter, dst] : r.steps)
    if (step_is_choice(pa, src, letter)) ++m;
  return m;
}

bool run_valid(const Pa& pa, const Run& r) {
    if (r.start < 0 || r.start >= static_cast<int>(pa.states.size())) return false;
    int at = r.start;
    for (const auto& [src, a, dst] : r.steps) {
        if (src != at) return false;
        if (a < 0 || a >= static_cast<int>(pa.alphabet.size())) return false;
        if (pa.prob(src, a, dst) == 0) return false;
        at = dst;
    }
    return true;
}

Rat run_transition_product(const Pa& pa, const Run& r) {
    Rat out(1);
    for (const auto& [src, a, dst] : r.steps) out *= pa.prob(src, a, dst);
    return out;
}

Rat run_probability(const Pa& pa, const Run& r) {
    return pa.iota(r.start) * run_transition_product(pa, r);
}

Word run_word(const Pa& pa, const Run& r) {
    Word w;
    for (const auto& [src, a, dst] : r.steps)
        w.push_back(pa.alphabet[static_cast<std::size_t>(a)]);
    return w;
}

} // namespace palab
