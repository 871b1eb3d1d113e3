#include "core/structure.hpp"

#include "core/error.hpp"
#include "core/graph.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <utility>

namespace palab {

namespace {

std::vector<std::vector<int>> letterless_adjacency(const Nfa& nfa) {
  std::vector<std::vector<int>> adj(nfa.states.size());
  for (std::size_t q = 0; q < nfa.states.size(); ++q) {
    std::set<int> dsts;
    for (const auto& row : nfa.delta[q]) dsts.insert(row.begin(), row.end());
    adj[q].assign(dsts.begin(), dsts.end());
  }
  return adj;
}

std::vector<int> run_state_seq(const Run& r) {
  std::vector<int> seq{r.start};
  for (const auto& step : r.steps) seq.push_back(step[2]);
  return seq;
}

} // namespace

std::vector<std::vector<int>> scc_partition(const Nfa& nfa) {
  int count = 0;
  auto comp = scc_components(letterless_adjacency(nfa), &count);
  std::vector<std::vector<int>> groups(static_cast<std::size_t>(count));
  for (std::size_t q = 0; q < comp.size(); ++q)
    groups[static_cast<std::size_t>(comp[q])].push_back(static_cast<int>(q));
  return groups;
}

std::vector<Run> periods(const Nfa& host, const std::vector<int>& P) {
  std::vector<char> in_p(host.states.size(), 0);
  for (int q : P) {
    if (q < 0 || q >= static_cast<int>(host.states.size()))
      contract_error("periods: state out of range");
    in_p[static_cast<std::size_t>(q)] = 1;
  }
  std::vector<int> bases = P;
  std::sort(bases.begin(), bases.end());
  bases.erase(std::unique(bases.begin(), bases.end()), bases.end());

  std::vector<Run> out;
  std::vector<int> occ(host.states.size(), 0);
  Run cur;
  auto dfs = [&](auto&& self, int base, int u) -> void {
    for (std::size_t a = 0; a < host.alphabet.size(); ++a) {
      for (int dst : host.delta[static_cast<std::size_t>(u)][a]) {
        if (!in_p[static_cast<std::size_t>(dst)]) continue;
        if (dst == base) {
          cur.steps.push_back({u, static_cast<int>(a), dst});
          out.push_back(cur);
          cur.steps.pop_back();
          continue;
        }
        int& count = occ[static_cast<std::size_t>(dst)];
        if (count >= 2) continue;
        ++count;
        cur.steps.push_back({u, static_cast<int>(a), dst});
        self(self, base, dst);
        cur.steps.pop_back();
        --count;
      }
    }
  };
  for (int base : bases) {
    cur.start = base;
    cur.steps.clear();
    std::fill(occ.begin(), occ.end(), 0);
    dfs(dfs, base, base);
  }
  return out;
}

Decomposition simple_cycle_decomposition(const Run& run) {
  for (std::size_t i = 0; i < run.steps.size(); ++i) {
    int prev = i == 0 ? run.start : run.steps[i - 1][2];
    if (run.steps[i][0] != prev)
      contract_error("decomposition: run steps are not chained");
  }

  Decomposition d;
  d.spine = run;
  auto seq0 = run_state_seq(run);
  std::set<int> qset(seq0.begin(), seq0.end());
  const std::size_t limit = qset.size() * qset.size();

  while (d.spine.steps.size() >= limit) {
    auto seq = run_state_seq(d.spine);
    const std::size_t len = seq.size();
    bool found = false;
    for (std::size_t i = 0; !found && i + 1 < len; ++i) {
      for (std::size_t j = i + 1; !found && j < len; ++j) {
        if (seq[i] != seq[j]) continue;
        std::map<int, int> occ;
        bool simple = true;
        for (std::size_t k = i; k <= j && simple; ++k)
          if (++occ[seq[k]] > 2) simple = false;
        if (!simple) continue;
        bool removable = true;
        for (std::size_t k = i + 1; k <= j && removable; ++k) {
          bool elsewhere = false;
          for (std::size_t t = 0; t <= i && !elsewhere; ++t)
            if (seq[t] == seq[k]) elsewhere = true;
          for (std::size_t t = j + 1; t < len && !elsewhere; ++t)
            if (seq[t] == seq[k]) elsewhere = true;
          removable = elsewhere;
        }
        if (!removable) continue;

        Run cyc;
        cyc.start = seq[i];
        cyc.steps.assign(d.spine.steps.begin() + static_cast<long>(i),
                         d.spine.steps.begin() + static_cast<long>(j));
        d.spine.steps.erase(d.spine.steps.begin() + static_cast<long>(i),
                            d.spine.steps.begin() + static_cast<long>(j));
        d.peeled.push_back({std::move(cyc), i});
        found = true;
      }
    }
    if (!found)
      contract_error("decomposition: no removable simple cycle in a run of "
                     "length >= |Q|^2");
  }
  return d;
}

Run reinject(const Decomposition& d) {
  Run run = d.spine;
  for (auto it = d.peeled.rbegin(); it != d.peeled.rend(); ++it) {
    const auto& [cyc, pos] = *it;
    if (pos > run.steps.size())
      contract_error("reinject: cycle position out of range");
    run.steps.insert(run.steps.begin() + static_cast<long>(pos),
                     cyc.steps.begin(), cyc.steps.end());
  }
  return run;
}

namespace {

std::vector<int> flat_key(const ProductState& s) {
  std::vector<int> key{s.fa_a, s.fa_b};
  key.insert(key.end(), s.copies_a.begin(), s.copies_a.end());
  key.insert(key.end(), s.copies_b.begin(), s.copies_b.end());
  key.insert(key.end(), s.part_a.begin(), s.part_a.end());
  key.insert(key.end(), s.part_b.begin(), s.part_b.end());
  return key;
}

std::vector<int> initial_partition(const std::vector<int>& starts) {
  std::map<int, int> renum;
  std::vector<int> part(starts.size());
  int next = 0;
  for (std::size_t i = 0; i < starts.size(); ++i) {
    auto [it, inserted] = renum.try_emplace(starts[i], next);
    if (inserted) ++next;
    part[i] = it->second;
  }
  return part;
}

std::vector<int> refine_partition(const std::vector<int>& part,
                                  const std::vector<int>& dst) {
  std::map<std::pair<int, int>, int> renum;
  std::vector<int> np(part.size());
  int next = 0;
  for (std::size_t i = 0; i < part.size(); ++i) {
    auto [it, inserted] = renum.try_emplace(std::pair{part[i], dst[i]}, next);
    if (inserted) ++next;
    np[i] = it->second;
  }
  return np;
}

int single_initial(const Nfa& nfa) {
  int found = -1;
  for (std::size_t q = 0; q < nfa.initial.size(); ++q) {
    if (!nfa.initial[q]) continue;
    if (found >= 0) contract_error("expected a deterministic automaton");
    found = static_cast<int>(q);
  }
  if (found < 0) contract_error("expected an initial state");
  return found;
}

bool all_singletons(const std::vector<int>& part) {
  for (std::size_t i = 0; i < part.size(); ++i)
    if (part[i] != static_cast<int>(i)) return false;
  return true;
}

// Lexicographic enumeration of tuples with positions[i] < sizes[i].
bool next_tuple(std::vector<std::size_t>& positions,
                const std::vector<std::size_t>& sizes) {
  for (std::size_t i = positions.size(); i-- > 0;) {
    if (++positions[i] < sizes[i]) return true;
    positions[i] = 0;
  }
  return false;
}

} // namespace

Product build_product(const Pa& A, const Pa& B, int kprime, int lprime,
                      long state_budget) {
  if (A.alphabet != B.alphabet)
    contract_error("product requires a shared alphabet");
  if (kprime < 0 || lprime < 0)
    contract_error("copy counts must be nonnegative");

  Product prod;
  prod.kprime = kprime;
  prod.lprime = lprime;
  prod.alphabet = A.alphabet;
  const std::size_t letters = A.alphabet.size();

  Nfa fa_a = fixed_ambiguity_language(A, kprime);
  Nfa fa_b = fixed_ambiguity_language(B, lprime);
  const int fa_a_init = single_initial(fa_a);
  const int fa_b_init = single_initial(fa_b);

  std::map<std::vector<int>, int> ids;
  auto intern = [&](ProductState st) {
    auto key = flat_key(st);
    auto it = ids.find(key);
    if (it != ids.end()) return it->second;
    if (static_cast<long>(prod.states.size()) >= state_budget)
      resource_error("product state budget exceeded");
    int id = static_cast<int>(prod.states.size());
    ids.emplace(std::move(key), id);
    prod.states.push_back(std::move(st));
    prod.delta.emplace_back(letters);
    return id;
  };

  const std::size_t ka = static_cast<std::size_t>(kprime);
  const std::size_t kb = static_cast<std::size_t>(lprime);
  std::vector<std::size_t> combo(ka + kb, 0);
  std::vector<std::size_t> supports(ka + kb);
  std::fill(supports.begin(), supports.begin() + static_cast<long>(ka),
            A.initial.size());
  std::fill(supports.begin() + static_cast<long>(ka), supports.end(),
            B.initial.size());
  bool have_initials = true;
  for (std::size_t sz : supports)
    if (sz == 0) have_initials = false;

  if (have_initials) {
    do {
      ProductState st;
      st.fa_a = fa_a_init;
      st.fa_b = fa_b_init;
      ProductInit init;
      for (std::size_t i = 0; i < ka; ++i) {
        const auto& [q, w] = A.initial[combo[i]];
        st.copies_a.push_back(q);
        init.iota_a.push_back(w);
      }
      for (std::size_t i = 0; i < kb; ++i) {
        const auto& [q, w] = B.initial[combo[ka + i]];
        st.copies_b.push_back(q);
        init.iota_b.push_back(w);
      }
      st.part_a = initial_partition(st.copies_a);
      st.part_b = initial_partition(st.copies_b);
      init.state = intern(std::move(st));
      prod.initial.push_back(std::move(init));
    } while (next_tuple(combo, supports));
  }

  // Breadth-first closure; state ids are discovery order, so the loop index
  // chases the growing state vector.
  for (std::size_t id = 0; id < prod.states.size(); ++id) {
    for (std::size_t a = 0; a < letters; ++a) {
      const ProductState src = prod.states[id]; // copy: vector may grow
      const auto& fa_a_row = fa_a.delta[static_cast<std::size_t>(src.fa_a)][a];
      const auto& fa_b_row = fa_b.delta[static_cast<std::size_t>(src.fa_b)][a];
      if (fa_a_row.size() != 1 || fa_b_row.size() != 1)
        contract_error("fixed-ambiguity automata must be deterministic and "
                       "complete");

      std::vector<const std::vector<PaTrans>*> rows;
      bool dead = false;
      for (std::size_t i = 0; i < ka && !dead; ++i) {
        rows.push_back(&A.row(src.copies_a[i], static_cast<int>(a)));
        if (rows.back()->empty()) dead = true;
      }
      for (std::size_t i = 0; i < kb && !dead; ++i) {
        rows.push_back(&B.row(src.copies_b[i], static_cast<int>(a)));
        if (rows.back()->empty()) dead = true;
      }
      if (dead) continue;

      std::vector<std::size_t> pick(ka + kb, 0);
      std::vector<std::size_t> sizes(ka + kb);
      for (std::size_t i = 0; i < rows.size(); ++i) sizes[i] = rows[i]->size();
      do {
        ProductState nst;
        nst.fa_a = fa_a_row[0];
        nst.fa_b = fa_b_row[0];
        ProductTrans tr;
        for (std::size_t i = 0; i < ka; ++i) {
          const PaTrans& t = (*rows[i])[pick[i]];
          nst.copies_a.push_back(t.dst);
          tr.probs_a.push_back(t.prob);
        }
        for (std::size_t i = 0; i < kb; ++i) {
          const PaTrans& t = (*rows[ka + i])[pick[ka + i]];
          nst.copies_b.push_back(t.dst);
          tr.probs_b.push_back(t.prob);
        }
        nst.part_a = refine_partition(src.part_a, nst.copies_a);
        nst.part_b = refine_partition(src.part_b, nst.copies_b);
        tr.dst = intern(std::move(nst));
        prod.delta[id][a].push_back(std::move(tr));
      } while (next_tuple(pick, sizes));
    }
  }

  prod.finals.assign(prod.states.size(), 0);
  for (std::size_t q = 0; q < prod.states.size(); ++q) {
    const ProductState& st = prod.states[q];
    bool ok = fa_a.finals[static_cast<std::size_t>(st.fa_a)] &&
              fa_b.finals[static_cast<std::size_t>(st.fa_b)];
    for (int copy : st.copies_a)
      if (!A.is_final(copy)) ok = false;
    for (int copy : st.copies_b)
      if (!B.is_final(copy)) ok = false;
    if (!all_singletons(st.part_a) || !all_singletons(st.part_b)) ok = false;
    prod.finals[q] = ok ? 1 : 0;
  }
  return prod;
}

Nfa Product::skeleton() const {
  Nfa nfa;
  nfa.alphabet = alphabet;
  nfa.states.reserve(states.size());
  for (std::size_t i = 0; i < states.size(); ++i)
    nfa.states.push_back("x" + std::to_string(i));
  nfa.delta.assign(states.size(),
                   std::vector<std::vector<int>>(alphabet.size()));
  for (std::size_t q = 0; q < states.size(); ++q) {
    for (std::size_t a = 0; a < alphabet.size(); ++a) {
      auto& row = nfa.delta[q][a];
      for (const auto& tr : delta[q][a]) row.push_back(tr.dst);
      std::sort(row.begin(), row.end());
    }
  }
  nfa.initial.assign(states.size(), 0);
  for (const auto& init : initial)
    nfa.initial[static_cast<std::size_t>(init.state)] = 1;
  nfa.finals = finals;
  return nfa;
}

namespace {

// Exact transition lookup in the product (one entry per dst).
const ProductTrans& product_trans(const Product& prod, int src, int letter,
                                  int dst) {
  for (const auto& tr :
       prod.delta[static_cast<std::size_t>(src)][static_cast<std::size_t>(
           letter)])
    if (tr.dst == dst) return tr;
  contract_error("product transition not found");
}

struct SpineFrame {
  int state = 0;
  std::size_t letter = 0;
  std::size_t ti = 0;
};

// Per-cell enumeration state for the bounded accepting-run search.
struct SpineSearch {
  const Product& prod;
  const TranslateBudget& budget;
  std::vector<char> useful;
  long useful_count = 0;
  std::vector<long> dist_acc; // -1: no accepting state reachable
  bool small = false;
  std::size_t words = 0;
  std::vector<std::vector<std::uint64_t>> reach; // over useful subgraph
  std::vector<std::uint64_t> qbits;
  std::vector<int> qcount;
  long qdistinct = 0;
  Run run;
  std::vector<SpineFrame> frames;
  long nodes = 0;
  long* spines_total = nullptr;
  std::string stop_reason;

  explicit SpineSearch(const Product& p, const TranslateBudget& b)
      : prod(p), budget(b) {}
};

void search_prepare(SpineSearch& s) {
  const auto skel = s.prod.skeleton();
  auto adj = letterless_adjacency(skel);
  std::vector<int> inits, fins;
  for (std::size_t q = 0; q < skel.states.size(); ++q) {
    if (skel.initial[q]) inits.push_back(static_cast<int>(q));
    if (skel.finals[q]) fins.push_back(static_cast<int>(q));
  }
  auto fwd = reachable_from(adj, inits);
  auto radj = reverse_adj(adj);
  auto bwd = reachable_from(radj, fins);
  const std::size_t n = skel.states.size();
  s.useful.assign(n, 0);
  for (std::size_t q = 0; q < n; ++q) {
    s.useful[q] = fwd[q] && bwd[q];
    if (s.useful[q]) ++s.useful_count;
  }

  s.dist_acc.assign(n, -1);
  std::vector<int> queue;
  for (int f : fins)
    if (s.useful[static_cast<std::size_t>(f)]) {
      s.dist_acc[static_cast<std::size_t>(f)] = 0;
      queue.push_back(f);
    }
  for (std::size_t head = 0; head < queue.size(); ++head) {
    int u = queue[static_cast<std::size_t>(head)];
    for (int v : radj[static_cast<std::size_t>(u)]) {
      if (!s.useful[static_cast<std::size_t>(v)]) continue;
      if (s.dist_acc[static_cast<std::size_t>(v)] >= 0) continue;
      s.dist_acc[static_cast<std::size_t>(v)] =
          s.dist_acc[static_cast<std::size_t>(u)] + 1;
      queue.push_back(v);
    }
  }

  s.small = n <= 512;
  s.words = (n + 63) / 64;
  s.qbits.assign(s.words, 0);
  s.qcount.assign(n, 0);
  if (s.small) {
    s.reach.assign(n, std::vector<std::uint64_t>(s.words, 0));
    std::vector<int> bfs;
    std::vector<char> seen(n);
    for (std::size_t u = 0; u < n; ++u) {
      if (!s.useful[u]) continue;
      bfs.assign(1, static_cast<int>(u));
      std::fill(seen.begin(), seen.end(), 0);
      seen[u] = 1;
      for (std::size_t head = 0; head < bfs.size(); ++head) {
        std::size_t x = static_cast<std::size_t>(bfs[head]);
        s.reach[u][x / 64] |= std::uint64_t{1} << (x % 64);
        for (int v : adj[x]) {
          if (!s.useful[static_cast<std::size_t>(v)]) continue;
          if (seen[static_cast<std::size_t>(v)]) continue;
          seen[static_cast<std::size_t>(v)] = 1;
          bfs.push_back(v);
        }
      }
    }
  }
}

// Sound viability bound: an extension that adds t new states needs at least
// max(dist_acc, t) more steps and reaches size |Q|+t, and (|Q|+t)^2 - (L+t)
// grows with t, so checking the largest t suffices.
bool search_viable(const SpineSearch& s, int v, long len_after) {
  const std::size_t vi = static_cast<std::size_t>(v);
  long da = s.dist_acc[vi];
  if (da < 0) return false;
  long q_after = s.qdistinct + (s.qcount[vi] == 0 ? 1 : 0);
  long m = 0;
  if (s.small) {
    long cnt = 0;
    for (std::size_t w = 0; w < s.words; ++w) {
      std::uint64_t bits = s.reach[vi][w] & ~s.qbits[w];
      cnt += __builtin_popcountll(bits);
    }
    bool v_in_q = (s.qbits[vi / 64] >> (vi % 64)) & 1;
    if (!v_in_q) --cnt; // v itself is about to join Q
    m = cnt;
  } else {
    m = s.useful_count - q_after;
  }
  if (m < 0) m = 0;
  long horizon = len_after + std::max(da, m);
  long size_after = q_after + m;
  return horizon < size_after * size_after;
}

void search_push(SpineSearch& s, int v) {
  const std::size_t vi = static_cast<std::size_t>(v);
  if (s.qcount[vi]++ == 0) {
    ++s.qdistinct;
    s.qbits[vi / 64] |= std::uint64_t{1} << (vi % 64);
  }
  s.frames.push_back({v, 0, 0});
  ++s.nodes;
}

void search_pop(SpineSearch& s) {
  const std::size_t vi = static_cast<std::size_t>(s.frames.back().state);
  s.frames.pop_back();
  if (--s.qcount[vi] == 0) {
    --s.qdistinct;
    s.qbits[vi / 64] &= ~(std::uint64_t{1} << (vi % 64));
  }
}

} // namespace

Rat eval_value_spec(const std::vector<Rat>& coef,
                    const std::vector<std::vector<Rat>>& bases,
                    const std::vector<long>& x) {
  if (coef.size() != bases.size())
    contract_error("value spec: coefficient/base row mismatch");
  Rat total = 0;
  for (std::size_t i = 0; i < coef.size(); ++i) {
    if (bases[i].size() != x.size())
      contract_error("value spec: dimension mismatch");
    Rat term = coef[i];
    for (std::size_t j = 0; j < x.size(); ++j) {
      if (x[j] < 0) contract_error("value spec: negative exponent");
      term *= rat_pow(bases[i][j], x[j]);
    }
    total += term;
  }
  return total;
}

Word inject_word(const std::vector<std::string>& alphabet, const Run& spine,
                 const std::vector<Run>& cycles, const std::vector<long>& x) {
  if (cycles.size() != x.size())
    contract_error("inject: cycle/count mismatch");
  auto seq = run_state_seq(spine);

  long total_steps = static_cast<long>(spine.steps.size());
  for (std::size_t j = 0; j < cycles.size(); ++j) {
    if (x[j] < 0) contract_error("inject: negative count");
    total_steps += x[j] * static_cast<long>(cycles[j].steps.size());
    if (total_steps > 1000000) resource_error("injected word too long");
  }

  // first spine position of each cycle's base
  std::vector<std::size_t> pos(cycles.size());
  for (std::size_t j = 0; j < cycles.size(); ++j) {
    bool ok = false;
    for (std::size_t t = 0; t < seq.size() && !ok; ++t) {
      if (seq[t] == cycles[j].start) {
        pos[j] = t;
        ok = true;
      }
    }
    if (!ok) contract_error("inject: cycle base not on the spine");
  }

  Word w;
  w.reserve(static_cast<std::size_t>(total_steps));
  auto letter_of = [&](const std::array<int, 3>& step) {
    return alphabet[static_cast<std::size_t>(step[1])];
  };
  for (std::size_t t = 0; t < seq.size(); ++t) {
    for (std::size_t j = 0; j < cycles.size(); ++j) {
      if (pos[j] != t) continue;
      for (long rep = 0; rep < x[j]; ++rep)
        for (const auto& step : cycles[j].steps) w.push_back(letter_of(step));
    }
    if (t < spine.steps.size()) w.push_back(letter_of(spine.steps[t]));
  }
  return w;
}

TranslateResult translate(const Pa& A, const Pa& B, int k_max, int l_max,
                          const TranslateBudget& budget, bool allow_partial) {
  if (k_max < 0 || l_max < 0)
    contract_error("translate: negative ambiguity bound");
  TranslateResult res;
  auto mark_incomplete = [&](const std::string& why) {
    res.complete = false;
    if (!res.note.empty()) res.note += "; ";
    res.note += why;
  };

  long spines_total = 0;
  for (int kprime = 0; kprime <= k_max; ++kprime) {
    for (int lprime = 0; lprime <= l_max; ++lprime) {
      Product prod;
      try {
        prod = build_product(A, B, kprime, lprime, budget.max_product_states);
      } catch (const PalabError& e) {
        if (e.kind == ErrKind::Resource) {
          mark_incomplete("cell (" + std::to_string(kprime) + "," +
                          std::to_string(lprime) + "): " + e.what());
          continue;
        }
        throw;
      }
      Nfa skel = prod.skeleton();

      SpineSearch search(prod, budget);
      search_prepare(search);

      std::map<int, std::size_t> init_index;
      for (std::size_t i = 0; i < prod.initial.size(); ++i)
        init_index.emplace(prod.initial[i].state, i);

      auto emit = [&](const Run& spine, const ProductInit& init) {
        auto seq = run_state_seq(spine);
        std::vector<int> P(seq.begin(), seq.end());
        std::sort(P.begin(), P.end());
        P.erase(std::unique(P.begin(), P.end()), P.end());
        if (spine.steps.size() >= P.size() * P.size())
          contract_error("emitted spine violates the length bound");

        DeltaTuple t;
        t.kprime = kprime;
        t.lprime = lprime;
        t.spine = spine;
        t.cycles = periods(skel, P);

        const std::size_t ka = static_cast<std::size_t>(kprime);
        const std::size_t kb = static_cast<std::size_t>(lprime);
        t.p = init.iota_a;
        t.r = init.iota_b;
        for (const auto& step : spine.steps) {
          const ProductTrans& tr =
              product_trans(prod, step[0], step[1], step[2]);
          for (std::size_t i = 0; i < ka; ++i) t.p[i] *= tr.probs_a[i];
          for (std::size_t i = 0; i < kb; ++i) t.r[i] *= tr.probs_b[i];
        }
        t.q.assign(ka, std::vector<Rat>(t.cycles.size(), Rat(1)));
        t.s.assign(kb, std::vector<Rat>(t.cycles.size(), Rat(1)));
        for (std::size_t j = 0; j < t.cycles.size(); ++j) {
          for (const auto& step : t.cycles[j].steps) {
            const ProductTrans& tr =
                product_trans(prod, step[0], step[1], step[2]);
            for (std::size_t i = 0; i < ka; ++i) t.q[i][j] *= tr.probs_a[i];
            for (std::size_t i = 0; i < kb; ++i) t.s[i][j] *= tr.probs_b[i];
          }
        }
        res.tuples.push_back(std::move(t));
      };

      bool stopped = false;
      for (const auto& init : prod.initial) {
        if (stopped) break;
        if (!search.useful[static_cast<std::size_t>(init.state)]) continue;
        search.run.start = init.state;
        search.run.steps.clear();
        search_push(search, init.state);
        while (!search.frames.empty() && !stopped) {
          SpineFrame& f = search.frames.back();
          // Emission check on first entry to the frame.
          if (f.letter == 0 && f.ti == 0 &&
              search.prod.finals[static_cast<std::size_t>(f.state)]) {
            long len = static_cast<long>(search.run.steps.size());
            if (len < search.qdistinct * search.qdistinct) {
              if (++spines_total > budget.max_spines) {
                mark_incomplete("spine budget exceeded");
                stopped = true;
                break;
              }
              emit(search.run, init);
            }
          }
          if (search.nodes > budget.max_dfs_nodes) {
            mark_incomplete("search node budget exceeded");
            stopped = true;
            break;
          }
          // Advance to the next child, or backtrack.
          bool descended = false;
          const std::size_t letters = prod.alphabet.size();
          while (f.letter < letters) {
            const auto& row =
                prod.delta[static_cast<std::size_t>(f.state)][f.letter];
            if (f.ti >= row.size()) {
              ++f.letter;
              f.ti = 0;
              continue;
            }
            const ProductTrans& tr = row[f.ti];
            ++f.ti;
            if (!search.useful[static_cast<std::size_t>(tr.dst)]) continue;
            long len_after = static_cast<long>(search.run.steps.size()) + 1;
            if (!search_viable(search, tr.dst, len_after)) continue;
            search.run.steps.push_back(
                {f.state, static_cast<int>(f.letter), tr.dst});
            search_push(search, tr.dst);
            descended = true;
            break;
          }
          if (descended) continue;
          search_pop(search);
          if (!search.run.steps.empty() && !search.frames.empty())
            search.run.steps.pop_back();
        }
        while (!search.frames.empty()) search_pop(search);
        search.run.steps.clear();
      }
      if (stopped) break;
    }
    if (!res.complete) break;
  }

  if (!res.complete && !allow_partial) resource_error(res.note);
  return res;
}

} // namespace palab
