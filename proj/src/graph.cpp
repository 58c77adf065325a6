#include "graph.hpp"

#include <algorithm>

namespace pomega::detail {

SccResult strongly_connected_components(const Adjacency& graph, const std::vector<std::size_t>& roots,
                                        const std::vector<char>& allowed)
{
    const auto n = graph.size();
    auto ok = [&](std::size_t v) { return allowed.empty() || allowed[v]; };

    SccResult result;
    result.component.assign(n, unvisited);
    std::vector<std::size_t> index(n, unvisited), low(n, 0);
    std::vector<char> on_stack(n, 0);
    std::vector<std::size_t> stack;
    std::size_t counter = 0;

    struct Frame {
        std::size_t node;
        std::size_t next_edge;
    };
    std::vector<Frame> call;

    for (std::size_t root : roots) {
        if (!ok(root) || index[root] != unvisited)
            continue;
        call.push_back({root, 0});
        index[root] = low[root] = counter++;
        stack.push_back(root);
        on_stack[root] = 1;

        while (!call.empty()) {
            auto& frame = call.back();
            const auto v = frame.node;
            if (frame.next_edge < graph[v].size()) {
                const auto w = graph[v][frame.next_edge++];
                if (!ok(w))
                    continue;
                if (index[w] == unvisited) {
                    index[w] = low[w] = counter++;
                    stack.push_back(w);
                    on_stack[w] = 1;
                    call.push_back({w, 0});
                } else if (on_stack[w]) {
                    low[v] = std::min(low[v], index[w]);
                }
                continue;
            }
            if (low[v] == index[v]) {
                std::vector<std::size_t> members;
                std::size_t w;
                do {
                    w = stack.back();
                    stack.pop_back();
                    on_stack[w] = 0;
                    result.component[w] = result.components.size();
                    members.push_back(w);
                } while (w != v);
                std::sort(members.begin(), members.end());
                result.components.push_back(std::move(members));
            }
            call.pop_back();
            if (!call.empty()) {
                const auto parent = call.back().node;
                low[parent] = std::min(low[parent], low[v]);
            }
        }
    }
    return result;
}

std::vector<char> reachable_from(const Adjacency& graph, const std::vector<std::size_t>& roots)
{
    std::vector<char> seen(graph.size(), 0);
    std::vector<std::size_t> work;
    for (auto r : roots)
        if (!seen[r]) {
            seen[r] = 1;
            work.push_back(r);
        }
    while (!work.empty()) {
        const auto v = work.back();
        work.pop_back();
        for (auto w : graph[v])
            if (!seen[w]) {
                seen[w] = 1;
                work.push_back(w);
            }
    }
    return seen;
}

bool is_bottom(const Adjacency& graph, const SccResult& scc, std::size_t component)
{
    for (auto v : scc.components[component])
        for (auto w : graph[v])
            if (scc.component[w] != component)
                return false;
    return true;
}

bool is_nontrivial(const Adjacency& graph, const std::vector<std::size_t>& members)
{
    if (members.size() > 1)
        return true;
    const auto v = members.front();
    return std::find(graph[v].begin(), graph[v].end(), v) != graph[v].end();
}

} // namespace pomega::detail
