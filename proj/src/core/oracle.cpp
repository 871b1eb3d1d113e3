#include "core/oracle.hpp"

#include "core/error.hpp"

#include <algorithm>

namespace palab {

namespace {

std::vector<int> letter_ids(const Pa& pa, const Word& w) {
  std::vector<int> ids;
  ids.reserve(w.size());
  for (const std::string& tok : w) {
    int a = pa.letter_index(tok);
    if (a < 0) input_error("word uses letter '" + tok + "' outside the alphabet");
    ids.push_back(a);
  }
  return ids;
}

// Explicit DFS over the run tree; calls `emit` for each accepting run.
template <typename Emit>
void run_dfs(const Pa& pa, const std::vector<int>& w, long node_budget, Emit&& emit) {
  long nodes = 0;
  Run run;
  auto rec = [&](auto&& self, int state, size_t pos) -> void {
    if (++nodes > node_budget) resource_error("run enumeration exceeded node budget");
    if (pos == w.size()) {
      if (pa.is_final(state)) emit(run);
      return;
    }
    for (const PaTrans& t : pa.row(state, w[pos])) {
      run.steps.push_back({state, w[pos], t.dst});
      self(self, t.dst, pos + 1);
      run.steps.pop_back();
    }
  };
  for (const auto& [q, p] : pa.initial) {
    run.start = q;
    run.steps.clear();
    rec(rec, q, 0);
  }
}

} // namespace

Int count_accepting_runs(const Pa& pa, const Word& w, long node_budget) {
  std::vector<int> ids = letter_ids(pa, w);
  Int count = 0;
  run_dfs(pa, ids, node_budget, [&](const Run&) { count += 1; });
  return count;
}

Int count_accepting_runs_dp(const Pa& pa, const Word& w) {
  std::vector<int> ids = letter_ids(pa, w);
  // counts[q] = number of runs from an initial state to q reading the prefix
  std::vector<Int> counts(pa.states.size(), 0);
  for (const auto& [q, p] : pa.initial) counts[static_cast<size_t>(q)] = 1;
  for (int a : ids) {
    std::vector<Int> next(pa.states.size(), 0);
    for (size_t q = 0; q < pa.states.size(); ++q) {
      if (counts[q] == 0) continue;
      for (const PaTrans& t : pa.row(static_cast<int>(q), a))
        next[static_cast<size_t>(t.dst)] += counts[q];
    }
    counts.swap(next);
  }
  Int total = 0;
  for (size_t q = 0; q < pa.states.size(); ++q)
    if (pa.is_final(static_cast<int>(q))) total += counts[q];
  return total;
}

std::vector<Run> enumerate_accepting_runs(const Pa& pa, const Word& w,
                                          long node_budget) {
  std::vector<int> ids = letter_ids(pa, w);
  std::vector<Run> out;
  run_dfs(pa, ids, node_budget, [&](const Run& r) { out.push_back(r); });
  return out;
}

SweepReport brute_force_containment(const Pa& A, const Pa& B, long L) {
  if (A.alphabet != B.alphabet)
    input_error("containment sweep requires a shared alphabet");
  SweepReport report;
  report.bound = L;

  std::vector<Rat> va(A.states.size(), 0), vb(B.states.size(), 0);
  for (const auto& [q, p] : A.initial) va[static_cast<size_t>(q)] = p;
  for (const auto& [q, p] : B.initial) vb[static_cast<size_t>(q)] = p;
  Word word;

  auto value = [](const Pa& pa, const std::vector<Rat>& v) {
    Rat acc = 0;
    for (size_t q = 0; q < v.size(); ++q)
      if (pa.is_final(static_cast<int>(q))) acc += v[q];
    return acc;
  };
  auto advance = [](const Pa& pa, const std::vector<Rat>& v, int a) {
    std::vector<Rat> next(v.size(), 0);
    for (size_t q = 0; q < v.size(); ++q) {
      if (v[q] == 0) continue;
      for (const PaTrans& t : pa.row(static_cast<int>(q), a))
        next[static_cast<size_t>(t.dst)] += v[q] * t.prob;
    }
    return next;
  };

  auto rec = [&](auto&& self, const std::vector<Rat>& ca,
                 const std::vector<Rat>& cb, long depth) -> void {
    Rat diff = value(A, ca) - value(B, cb);
    if (!report.extremal || diff > *report.extremal) report.extremal = diff;
    if (diff > 0) report.word_witnesses.push_back(word);
    if (depth == L) return;
    for (size_t a = 0; a < A.alphabet.size(); ++a) {
      word.push_back(A.alphabet[a]);
      self(self, advance(A, ca, static_cast<int>(a)),
           advance(B, cb, static_cast<int>(a)), depth + 1);
      word.pop_back();
    }
  };
  rec(rec, va, vb, 0);
  return report;
}

SweepReport brute_force_ipexp(const IpExpInstance& inst, long radius,
                              long point_budget) {
  validate_ipexp(inst);
  SweepReport report;
  report.bound = radius;
  int n = inst.n();
  long points = 0;

  std::vector<Int> x(static_cast<size_t>(n), 0);
  auto visit = [&](long shell) {
    bool on_shell = shell == 0;
    for (const Int& xi : x)
      if (abs(xi) == shell) on_shell = true;
    if (!on_shell) return;
    if (++points > point_budget) resource_error("box sweep exceeded point budget");
    if (!satisfies_constraints(inst, x)) return;
    Rat fx = eval_expsum(inst.f, x);
    if (!report.extremal || fx < *report.extremal) report.extremal = fx;
    if (fx < 1) report.vector_witnesses.push_back(x);
  };
  auto sweep = [&](auto&& self, long shell, int coord) -> void {
    if (coord == n) {
      visit(shell);
      return;
    }
    for (long v = -shell; v <= shell; ++v) {
      x[static_cast<size_t>(coord)] = v;
      self(self, shell, coord + 1);
    }
  };
  if (n == 0) {
    visit(0);
    return report;
  }
  for (long shell = 0; shell <= radius; ++shell) sweep(sweep, shell, 0);
  return report;
}

std::map<long, Int> choice_profile(const Pa& pa, const Word& w, long node_budget) {
  std::vector<int> ids = letter_ids(pa, w);
  std::map<long, Int> profile;
  run_dfs(pa, ids, node_budget,
          [&](const Run& r) { profile[run_choice_count(pa, r)] += 1; });
  return profile;
}

std::vector<Int> max_run_count_by_length(const Pa& pa, long L) {
  std::vector<Int> best(static_cast<size_t>(L) + 1, 0);
  std::vector<Int> counts(pa.states.size(), 0);
  for (const auto& [q, p] : pa.initial) counts[static_cast<size_t>(q)] = 1;

  auto accept_total = [&](const std::vector<Int>& v) {
    Int total = 0;
    for (size_t q = 0; q < pa.states.size(); ++q)
      if (pa.is_final(static_cast<int>(q))) total += v[q];
    return total;
  };
  auto rec = [&](auto&& self, const std::vector<Int>& cur, long depth) -> void {
    Int total = accept_total(cur);
    auto& cell = best[static_cast<size_t>(depth)];
    if (total > cell) cell = total;
    if (depth == L) return;
    for (size_t a = 0; a < pa.alphabet.size(); ++a) {
      std::vector<Int> next(pa.states.size(), 0);
      for (size_t q = 0; q < pa.states.size(); ++q) {
        if (cur[q] == 0) continue;
        for (const PaTrans& t : pa.row(static_cast<int>(q), static_cast<int>(a)))
          next[static_cast<size_t>(t.dst)] += cur[q];
      }
      self(self, next, depth + 1);
    }
  };
  rec(rec, counts, 0);
  return best;
}

} // namespace palab
