#pragma once

#include <vector>

namespace palab {

// Plain digraph utilities over adjacency lists (0..n-1 nodes).

// Tarjan SCC; returns component id per node. Ids are assigned in reverse
// topological order of the condensation (an edge u->v crossing components
// satisfies comp[u] > comp[v]).
std::vector<int> scc_components(const std::vector<std::vector<int>>& adj,
                                int* out_count = nullptr);

std::vector<char> reachable_from(const std::vector<std::vector<int>>& adj,
                                 const std::vector<int>& seeds);

std::vector<std::vector<int>> reverse_adj(const std::vector<std::vector<int>>& adj);

} // namespace palab
