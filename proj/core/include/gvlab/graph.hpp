#pragma once

#include <limits>
#include <queue>
#include <utility>
#include <vector>

namespace gvlab {

/// Undirected weighted graph with adjacency lists.
struct WeightedGraph {
    explicit WeightedGraph(std::size_t n = 0) : adj(n) {}

    std::vector<std::vector<std::pair<std::size_t, double>>> adj;

    std::size_t size() const { return adj.size(); }

    void add_edge(std::size_t i, std::size_t j, double w) {
        adj[i].emplace_back(j, w);
        adj[j].emplace_back(i, w);
    }
};

inline std::vector<double> dijkstra(const WeightedGraph& g, std::size_t source) {
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> dist(g.size(), inf);
    using Item = std::pair<double, std::size_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<Item>> heap;
    dist[source] = 0.0;
    heap.emplace(0.0, source);
    while (!heap.empty()) {
        const auto [d, u] = heap.top();
        heap.pop();
        if (d > dist[u]) continue;
        for (const auto& [v, w] : g.adj[u]) {
            const double nd = d + w;
            if (nd < dist[v]) {
                dist[v] = nd;
                heap.emplace(nd, v);
            }
        }
    }
    return dist;
}

/// Component label per vertex (labels are 0-based, in first-seen order).
inline std::vector<int> connected_components(const WeightedGraph& g) {
    std::vector<int> label(g.size(), -1);
    int next = 0;
    std::vector<std::size_t> stack;
    for (std::size_t s = 0; s < g.size(); ++s) {
        if (label[s] != -1) continue;
        label[s] = next;
        stack.push_back(s);
        while (!stack.empty()) {
            const std::size_t u = stack.back();
            stack.pop_back();
            for (const auto& [v, w] : g.adj[u]) {
                (void)w;
                if (label[v] == -1) {
                    label[v] = next;
                    stack.push_back(v);
                }
            }
        }
        ++next;
    }
    return label;
}

}  // namespace gvlab
