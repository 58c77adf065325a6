#pragma once

// Graph utilities shared by the analysis and decision modules.

#include <cstddef>
#include <vector>

namespace pomega::detail {

using Adjacency = std::vector<std::vector<std::size_t>>;

struct SccResult {
    std::vector<std::size_t> component; ///< component id per node; npos if not visited
    /// Components in reverse topological order: every edge leaving a
    /// component points into a component listed earlier.
    std::vector<std::vector<std::size_t>> components;
};

inline constexpr std::size_t unvisited = static_cast<std::size_t>(-1);

/// Iterative Tarjan restricted to nodes reachable from `roots` and to nodes
/// with `allowed[node]` (empty mask = all allowed).
SccResult strongly_connected_components(const Adjacency& graph, const std::vector<std::size_t>& roots,
                                        const std::vector<char>& allowed = {});

/// Nodes reachable from `roots` (inclusive).
std::vector<char> reachable_from(const Adjacency& graph, const std::vector<std::size_t>& roots);

/// True iff the component has no edge leaving it.
bool is_bottom(const Adjacency& graph, const SccResult& scc, std::size_t component);

/// True iff the component contains a cycle (size > 1 or a self loop).
bool is_nontrivial(const Adjacency& graph, const std::vector<std::size_t>& members);

} // namespace pomega::detail
