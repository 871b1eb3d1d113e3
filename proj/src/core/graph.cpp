#include "core/graph.hpp"

#include <algorithm>

namespace palab {

// Iterative Tarjan (explicit stack so deep graphs cannot overflow the C stack).
std::vector<int> scc_components(const std::vector<std::vector<int>>& adj,
                                int* out_count) {
  int n = static_cast<int>(adj.size());
  std::vector<int> index(n, -1), low(n, 0), comp(n, -1);
  std::vector<char> on_stack(n, 0);
  std::vector<int> stk;
  int next_index = 0, next_comp = 0;

  struct Frame {
    int node;
    size_t child;
  };
  std::vector<Frame> call;

  for (int root = 0; root < n; ++root) {
    if (index[root] != -1) continue;
    call.push_back({root, 0});
    index[root] = low[root] = next_index++;
    stk.push_back(root);
    on_stack[root] = 1;
    while (!call.empty()) {
      Frame& f = call.back();
      int u = f.node;
      if (f.child < adj[u].size()) {
        int v = adj[u][f.child++];
        if (index[v] == -1) {
          index[v] = low[v] = next_index++;
          stk.push_back(v);
          on_stack[v] = 1;
          call.push_back({v, 0});
        } else if (on_stack[v]) {
          low[u] = std::min(low[u], index[v]);
        }
      } else {
        if (low[u] == index[u]) {
          while (true) {
            int w = stk.back();
            stk.pop_back();
            on_stack[w] = 0;
            comp[w] = next_comp;
            if (w == u) break;
          }
          ++next_comp;
        }
        call.pop_back();
        if (!call.empty()) {
          int parent = call.back().node;
          low[parent] = std::min(low[parent], low[u]);
        }
      }
    }
  }
  if (out_count) *out_count = next_comp;
  return comp;
}

std::vector<char> reachable_from(const std::vector<std::vector<int>>& adj,
                                 const std::vector<int>& seeds) {
  std::vector<char> seen(adj.size(), 0);
  std::vector<int> work;
  for (int s : seeds) {
    if (s >= 0 && s < static_cast<int>(adj.size()) && !seen[s]) {
      seen[s] = 1;
      work.push_back(s);
    }
  }
  while (!work.empty()) {
    int u = work.back();
    work.pop_back();
    for (int v : adj[u]) {
      if (!seen[v]) {
        seen[v] = 1;
        work.push_back(v);
      }
    }
  }
  return seen;
}

std::vector<std::vector<int>> reverse_adj(const std::vector<std::vector<int>>& adj) {
  std::vector<std::vector<int>> rev(adj.size());
  for (size_t u = 0; u < adj.size(); ++u)
    for (int v : adj[u]) rev[static_cast<size_t>(v)].push_back(static_cast<int>(u));
  return rev;
}

} // namespace palab
