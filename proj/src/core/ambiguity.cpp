#include "core/ambiguity.hpp"

#include "core/error.hpp"
#include "core/graph.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <sstream>

namespace palab {

Nfa underlying_nfa(const Pa& pa) {
  Nfa nfa;
  nfa.alphabet = pa.alphabet;
  nfa.states = pa.states;
  nfa.delta.assign(pa.states.size(),
                   std::vector<std::vector<int>>(pa.alphabet.size()));
  nfa.initial.assign(pa.states.size(), 0);
  nfa.finals = pa.finals;
  for (size_t q = 0; q < pa.states.size(); ++q)
    for (size_t a = 0; a < pa.alphabet.size(); ++a)
      for (const PaTrans& t : pa.delta[q][a]) nfa.delta[q][a].push_back(t.dst);
  for (const auto& [q, p] : pa.initial) nfa.initial[static_cast<size_t>(q)] = 1;
  return nfa;
}

namespace {

std::vector<std::vector<int>> letterless_adj(const Nfa& nfa) {
  std::vector<std::vector<int>> adj(nfa.states.size());
  for (size_t q = 0; q < nfa.states.size(); ++q) {
    for (const auto& row : nfa.delta[q])
      for (int dst : row) adj[q].push_back(dst);
    std::sort(adj[q].begin(), adj[q].end());
    adj[q].erase(std::unique(adj[q].begin(), adj[q].end()), adj[q].end());
  }
  return adj;
}

std::vector<char> useful_states(const Nfa& nfa) {
  auto adj = letterless_adj(nfa);
  std::vector<int> inits, fins;
  for (size_t q = 0; q < nfa.states.size(); ++q) {
    if (nfa.initial[q]) inits.push_back(static_cast<int>(q));
    if (nfa.finals[q]) fins.push_back(static_cast<int>(q));
  }
  auto fwd = reachable_from(adj, inits);
  auto bwd = reachable_from(reverse_adj(adj), fins);
  std::vector<char> keep(nfa.states.size(), 0);
  for (size_t q = 0; q < nfa.states.size(); ++q) keep[q] = fwd[q] && bwd[q];
  return keep;
}

} // namespace

Nfa trim_nfa(const Nfa& nfa) {
  auto keep = useful_states(nfa);
  std::vector<int> remap(nfa.states.size(), -1);
  Nfa out;
  out.alphabet = nfa.alphabet;
  for (size_t q = 0; q < nfa.states.size(); ++q) {
    if (!keep[q]) continue;
    remap[q] = static_cast<int>(out.states.size());
    out.states.push_back(nfa.states[q]);
  }
  out.delta.assign(out.states.size(),
                   std::vector<std::vector<int>>(nfa.alphabet.size()));
  out.initial.assign(out.states.size(), 0);
  out.finals.assign(out.states.size(), 0);
  for (size_t q = 0; q < nfa.states.size(); ++q) {
    if (remap[q] < 0) continue;
    out.initial[static_cast<size_t>(remap[q])] = nfa.initial[q];
    out.finals[static_cast<size_t>(remap[q])] = nfa.finals[q];
    for (size_t a = 0; a < nfa.alphabet.size(); ++a)
      for (int dst : nfa.delta[q][a])
        if (remap[static_cast<size_t>(dst)] >= 0)
          out.delta[static_cast<size_t>(remap[q])][a].push_back(
              remap[static_cast<size_t>(dst)]);
  }
  return out;
}

bool nfa_accepts(const Nfa& nfa, const Word& w) {
  std::vector<char> cur(nfa.initial.begin(), nfa.initial.end());
  for (const std::string& letter : w) {
    int a = -1;
    for (size_t i = 0; i < nfa.alphabet.size(); ++i)
      if (nfa.alphabet[i] == letter) a = static_cast<int>(i);
    if (a < 0) input_error("unknown letter '" + letter + "'");
    std::vector<char> next(nfa.states.size(), 0);
    for (size_t q = 0; q < nfa.states.size(); ++q)
      if (cur[q])
        for (int dst : nfa.delta[q][static_cast<size_t>(a)])
          next[static_cast<size_t>(dst)] = 1;
    cur.swap(next);
  }
  for (size_t q = 0; q < nfa.states.size(); ++q)
    if (cur[q] && nfa.finals[q]) return true;
  return false;
}

bool nfa_language_empty(const Nfa& nfa) {
  auto keep = useful_states(nfa);
  for (size_t q = 0; q < nfa.states.size(); ++q)
    if (keep[q] && nfa.initial[q] && nfa.finals[q]) return false;
  // A useful state exists iff some initial->final path exists; the initial
  // state of that path witnesses nonemptiness.
  for (char k : keep)
    if (k) return false;
  return true;
}

std::string amb_render(const AmbiguityClass& c) {
  std::ostringstream os;
  switch (c.tag) {
    case AmbTag::Unambiguous: os << "unambiguous"; break;
    case AmbTag::Finite: os << "finite degree=" << *c.finiteDegree; break;
    case AmbTag::Polynomial: os << "polynomial degree=" << *c.polyDegree; break;
    case AmbTag::Exponential: os << "exponential"; break;
  }
  return os.str();
}

namespace {

// Synchronized self-product: node (u,v) encoded as u*n+v.
std::vector<std::vector<int>> pair_adj(const Nfa& nfa) {
  int n = static_cast<int>(nfa.states.size());
  std::vector<std::vector<int>> adj(static_cast<size_t>(n) * n);
  for (int u = 0; u < n; ++u)
    for (int v = 0; v < n; ++v) {
      auto& out = adj[static_cast<size_t>(u) * n + v];
      for (size_t a = 0; a < nfa.alphabet.size(); ++a)
        for (int du : nfa.delta[static_cast<size_t>(u)][a])
          for (int dv : nfa.delta[static_cast<size_t>(v)][a])
            out.push_back(du * n + dv);
      std::sort(out.begin(), out.end());
      out.erase(std::unique(out.begin(), out.end()), out.end());
    }
  return adj;
}

// Two distinct accepting runs on some word <=> an off-diagonal pair node is
// reachable from an initial pair and co-reachable to a final pair.
bool has_two_accepting_runs(const Nfa& nfa,
                            const std::vector<std::vector<int>>& padj) {
  int n = static_cast<int>(nfa.states.size());
  std::vector<int> seeds, targets;
  for (int u = 0; u < n; ++u)
    for (int v = 0; v < n; ++v) {
      if (nfa.initial[static_cast<size_t>(u)] && nfa.initial[static_cast<size_t>(v)])
        seeds.push_back(u * n + v);
      if (nfa.finals[static_cast<size_t>(u)] && nfa.finals[static_cast<size_t>(v)])
        targets.push_back(u * n + v);
    }
  auto fwd = reachable_from(padj, seeds);
  auto bwd = reachable_from(reverse_adj(padj), targets);
  for (int u = 0; u < n; ++u)
    for (int v = 0; v < n; ++v)
      if (u != v && fwd[static_cast<size_t>(u) * n + v] &&
          bwd[static_cast<size_t>(u) * n + v])
        return true;
  return false;
}

// Some state s admits two distinct s->s runs on a common word: an SCC of the
// self-product containing both a diagonal and an off-diagonal node.
bool has_eda(const Nfa& nfa, const std::vector<std::vector<int>>& padj) {
  int n = static_cast<int>(nfa.states.size());
  int comp_count = 0;
  auto comp = scc_components(padj, &comp_count);
  std::vector<char> has_diag(static_cast<size_t>(comp_count), 0);
  std::vector<char> has_off(static_cast<size_t>(comp_count), 0);
  // Singleton SCCs without a self-loop are not cycles; detect via self-edge.
  std::vector<int> comp_size(static_cast<size_t>(comp_count), 0);
  std::vector<char> self_loop(padj.size(), 0);
  for (size_t x = 0; x < padj.size(); ++x)
    for (int y : padj[x])
      if (y == static_cast<int>(x)) self_loop[x] = 1;
  for (size_t x = 0; x < padj.size(); ++x) comp_size[static_cast<size_t>(comp[x])]++;
  for (int u = 0; u < n; ++u)
    for (int v = 0; v < n; ++v) {
      size_t x = static_cast<size_t>(u) * n + v;
      int c = comp[x];
      if (comp_size[static_cast<size_t>(c)] == 1 && !self_loop[x]) continue;
      if (u == v)
        has_diag[static_cast<size_t>(c)] = 1;
      else
        has_off[static_cast<size_t>(c)] = 1;
    }
  for (int c = 0; c < comp_count; ++c)
    if (has_diag[static_cast<size_t>(c)] && has_off[static_cast<size_t>(c)]) return true;
  return false;
}

// Reachability of (p,q) -> (p',q') pairs via per-source BFS on the pair graph.
std::vector<char> pair_reach_from(const std::vector<std::vector<int>>& padj, int src) {
  return reachable_from(padj, {src});
}

// Triple-product search: does (p,p,q) reach (p,q,q)?
bool triple_reach(const Nfa& nfa, int p, int q) {
  int n = static_cast<int>(nfa.states.size());
  auto id = [n](int a, int b, int c) {
    return (static_cast<long long>(a) * n + b) * n + c;
  };
  std::map<long long, char> seen;
  std::vector<std::array<int, 3>> work;
  work.push_back({p, p, q});
  seen[id(p, p, q)] = 1;
  long long target = id(p, q, q);
  while (!work.empty()) {
    auto [u, v, w] = work.back();
    work.pop_back();
    for (size_t a = 0; a < nfa.alphabet.size(); ++a)
      for (int du : nfa.delta[static_cast<size_t>(u)][a])
        for (int dv : nfa.delta[static_cast<size_t>(v)][a])
          for (int dw : nfa.delta[static_cast<size_t>(w)][a]) {
            long long key = id(du, dv, dw);
            if (key == target) return true;
            auto it = seen.find(key);
            if (it == seen.end()) {
              seen[key] = 1;
              work.push_back({du, dv, dw});
            }
          }
  }
  return false;
}

} // namespace

namespace {

// Tag plus polynomial degree, without the finite-degree computation (which
// needs the count-vector construction and must not re-enter classification).
struct StructureClass {
  AmbTag tag;
  long polyDeg = 0;
};

StructureClass classify_structure(const Nfa& nfa) {
  int n = static_cast<int>(nfa.states.size());
  if (n == 0) return {AmbTag::Unambiguous};

  auto padj = pair_adj(nfa);
  if (!has_two_accepting_runs(nfa, padj)) return {AmbTag::Unambiguous};
  if (has_eda(nfa, padj)) return {AmbTag::Exponential};

  // IDA pattern p != q with runs p->p, p->q, q->q on a common word. All
  // states are useful after trimming, so any pattern contributes growth.
  std::vector<std::vector<char>> fwd_from_diag(static_cast<size_t>(n));
  auto rpadj = reverse_adj(padj);
  std::vector<std::vector<char>> bwd_to_diag(static_cast<size_t>(n));
  for (int s = 0; s < n; ++s) {
    fwd_from_diag[static_cast<size_t>(s)] = pair_reach_from(padj, s * n + s);
    bwd_to_diag[static_cast<size_t>(s)] = pair_reach_from(rpadj, s * n + s);
  }
  std::vector<std::pair<int, int>> ida_pairs;
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q) {
      if (p == q) continue;
      size_t pq = static_cast<size_t>(p) * n + q;
      if (!fwd_from_diag[static_cast<size_t>(p)][pq]) continue;
      if (!bwd_to_diag[static_cast<size_t>(q)][pq]) continue;
      if (triple_reach(nfa, p, q)) ida_pairs.push_back({p, q});
    }

  if (ida_pairs.empty()) return {AmbTag::Finite};

  // Chain DAG over IDA pairs: (p,q) can feed (p',q') iff q reaches p'. The
  // longest chain gives the polynomial degree; absent EDA this graph is
  // acyclic (a cycle of patterns would pump into an EDA witness), but guard
  // against cycles defensively.
  auto sadj = letterless_adj(nfa);
  std::vector<std::vector<char>> state_reach(static_cast<size_t>(n));
  for (int s = 0; s < n; ++s)
    state_reach[static_cast<size_t>(s)] = reachable_from(sadj, {s});
  int m = static_cast<int>(ida_pairs.size());
  std::vector<std::vector<int>> cadj(static_cast<size_t>(m));
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      if (i == j) continue;
      if (state_reach[static_cast<size_t>(ida_pairs[static_cast<size_t>(i)].second)]
                     [static_cast<size_t>(ida_pairs[static_cast<size_t>(j)].first)])
        cadj[static_cast<size_t>(i)].push_back(j);
    }
  std::vector<long> depth(static_cast<size_t>(m), 0);
  std::vector<char> visiting(static_cast<size_t>(m), 0);
  bool cyclic = false;
  auto longest = [&](auto&& self, int u) -> long {
    if (visiting[static_cast<size_t>(u)] == 2) return depth[static_cast<size_t>(u)];
    if (visiting[static_cast<size_t>(u)] == 1) {
      cyclic = true;
      return 0;
    }
    visiting[static_cast<size_t>(u)] = 1;
    long best = 1;
    for (int v : cadj[static_cast<size_t>(u)])
      best = std::max(best, 1 + self(self, v));
    visiting[static_cast<size_t>(u)] = 2;
    depth[static_cast<size_t>(u)] = best;
    return best;
  };
  long deg = 0;
  for (int i = 0; i < m; ++i) deg = std::max(deg, longest(longest, i));
  if (cyclic) return {AmbTag::Exponential};
  return {AmbTag::Polynomial, deg};
}

long max_count_core(const Nfa& trimmed);

} // namespace

AmbiguityClass classify_nfa(const Nfa& input) {
  Nfa nfa = trim_nfa(input);
  StructureClass s = classify_structure(nfa);
  switch (s.tag) {
    case AmbTag::Unambiguous:
      return {AmbTag::Unambiguous, std::nullopt, std::nullopt};
    case AmbTag::Finite:
      return {AmbTag::Finite, max_count_core(nfa), std::nullopt};
    case AmbTag::Polynomial:
      return {AmbTag::Polynomial, std::nullopt, s.polyDeg};
    case AmbTag::Exponential:
    default:
      return {AmbTag::Exponential, std::nullopt, std::nullopt};
  }
}

AmbiguityClass classify(const Pa& pa) { return classify_nfa(underlying_nfa(pa)); }

namespace {

struct CountVecSpace {
  // Deterministic automaton over per-state run-count vectors saturated at cap.
  const Nfa& nfa;
  long cap;
  std::map<std::vector<long>, int> ids;
  std::vector<std::vector<long>> vecs;
  std::vector<std::vector<int>> next; // [vec][letter]
  bool saturated = false;

  explicit CountVecSpace(const Nfa& nfa_, long cap_) : nfa(nfa_), cap(cap_) {}

  int intern(const std::vector<long>& v) {
    auto it = ids.find(v);
    if (it != ids.end()) return it->second;
    int id = static_cast<int>(vecs.size());
    ids.emplace(v, id);
    vecs.push_back(v);
    next.emplace_back(nfa.alphabet.size(), -1);
    return id;
  }

  void explore(long state_budget) {
    std::vector<long> init(nfa.states.size(), 0);
    for (size_t q = 0; q < nfa.states.size(); ++q)
      if (nfa.initial[q]) init[q] = 1;
    intern(init);
    for (size_t cur = 0; cur < vecs.size(); ++cur) {
      if (static_cast<long>(vecs.size()) > state_budget)
        resource_error("run-count powerset exceeded state budget");
      for (size_t a = 0; a < nfa.alphabet.size(); ++a) {
        std::vector<long> nx(nfa.states.size(), 0);
        const auto& v = vecs[cur];
        for (size_t q = 0; q < nfa.states.size(); ++q) {
          if (v[q] == 0) continue;
          for (int dst : nfa.delta[q][a]) {
            auto& cell = nx[static_cast<size_t>(dst)];
            cell += v[q];
            if (cell > cap) {
              cell = cap;
              saturated = true;
            }
          }
        }
        next[cur][a] = intern(nx);
      }
    }
  }

  long final_sum(const std::vector<long>& v) const {
    long s = 0;
    for (size_t q = 0; q < v.size(); ++q)
      if (nfa.finals[q]) s = std::min(s + v[q], cap);
    return s;
  }
};

} // namespace

namespace {

// On a trimmed finitely-k-ambiguous automaton every reachable per-state
// count is <= k (a state with m parallel runs extends to m accepting runs
// via any completion path), so a cap that is never hit certifies exactness.
long max_count_core(const Nfa& trimmed) {
  if (trimmed.states.empty()) return 1;
  for (long cap = 4;; cap *= 2) {
    CountVecSpace space(trimmed, cap);
    space.explore(1L << 22);
    if (space.saturated) continue;
    long best = 0;
    for (const auto& v : space.vecs) best = std::max(best, space.final_sum(v));
    return std::max(best, 1L);
  }
}

} // namespace

long max_finite_ambiguity(const Nfa& input) {
  Nfa nfa = trim_nfa(input);
  if (nfa.states.empty()) return 1; // vacuous: every word has 0 <= 1 runs
  StructureClass s = classify_structure(nfa);
  if (s.tag == AmbTag::Polynomial || s.tag == AmbTag::Exponential)
    contract_error("max_finite_ambiguity requires a finitely ambiguous automaton");
  return max_count_core(nfa);
}

Nfa fixed_ambiguity_language(const Pa& pa, long i) {
  if (i < 0) contract_error("fixed_ambiguity_language requires i >= 0");
  Nfa nfa = trim_nfa(underlying_nfa(pa));
  if (nfa.states.empty()) {
    // No accepting runs on any word: the language is all words iff i == 0.
    Nfa out;
    out.alphabet = pa.alphabet;
    out.states = {"v0"};
    out.delta.assign(1, std::vector<std::vector<int>>(pa.alphabet.size(),
                                                      std::vector<int>{0}));
    out.initial = {1};
    out.finals = {static_cast<char>(i == 0 ? 1 : 0)};
    return out;
  }
  long maxk = max_finite_ambiguity(nfa);
  long cap = maxk + 1;
  CountVecSpace space(nfa, cap);
  space.explore(1L << 22);
  if (space.saturated)
    contract_error("count saturation above the finite ambiguity bound");
  Nfa out;
  out.alphabet = pa.alphabet;
  for (size_t s = 0; s < space.vecs.size(); ++s) {
    std::ostringstream name;
    name << "v";
    for (size_t q = 0; q < space.vecs[s].size(); ++q)
      name << (q ? "_" : "") << space.vecs[s][q];
    out.states.push_back(name.str());
  }
  out.delta.assign(out.states.size(),
                   std::vector<std::vector<int>>(pa.alphabet.size()));
  out.initial.assign(out.states.size(), 0);
  out.finals.assign(out.states.size(), 0);
  out.initial[0] = 1;
  for (size_t s = 0; s < space.vecs.size(); ++s) {
    for (size_t a = 0; a < pa.alphabet.size(); ++a)
      out.delta[s][a].push_back(space.next[s][a]);
    out.finals[s] = (space.final_sum(space.vecs[s]) == i) ? 1 : 0;
  }
  return out;
}

} // namespace palab
