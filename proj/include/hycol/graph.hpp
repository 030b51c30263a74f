#ifndef HYCOL_GRAPH_HPP
#define HYCOL_GRAPH_HPP

#include <algorithm>
#include <queue>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hycol/errors.hpp"

namespace hycol {

/// Plain undirected graph with sorted adjacency lists. Used both directly
/// (block-tree machinery runs on arbitrary graphs) and as the line graph of
/// a hypergraph.
class Graph {
public:
    Graph() = default;

    explicit Graph(int n) : adj_(static_cast<std::size_t>(n)) {}

    static Graph from_edges(int n, const std::vector<std::pair<int, int>>& edges) {
        Graph g(n);
        for (auto [u, v] : edges) g.add_edge(u, v);
        g.finalize();
        return g;
    }

    void add_edge(int u, int v) {
        if (u < 0 || v < 0 || u >= vertex_count() || v >= vertex_count())
            throw VertexOutOfRangeError("graph: edge endpoint out of range");
        if (u == v) throw InvalidInputError("graph: self-loops not supported");
        adj_[static_cast<std::size_t>(u)].push_back(v);
        adj_[static_cast<std::size_t>(v)].push_back(u);
    }

    /// Sort and deduplicate adjacency lists; call once after building.
    void finalize() {
        for (auto& nb : adj_) {
            std::sort(nb.begin(), nb.end());
            nb.erase(std::unique(nb.begin(), nb.end()), nb.end());
        }
    }

    int vertex_count() const { return static_cast<int>(adj_.size()); }

    std::size_t edge_count() const {
        std::size_t twice = 0;
        for (const auto& nb : adj_) twice += nb.size();
        return twice / 2;
    }

    std::span<const int> neighbours(int v) const { return adj_[static_cast<std::size_t>(v)]; }

    int degree(int v) const { return static_cast<int>(adj_[static_cast<std::size_t>(v)].size()); }

    int max_degree() const {
        int d = 0;
        for (const auto& nb : adj_) d = std::max(d, static_cast<int>(nb.size()));
        return d;
    }

    bool adjacent(int u, int v) const {
        const auto& nb = adj_[static_cast<std::size_t>(u)];
        return std::binary_search(nb.begin(), nb.end(), v);
    }

    /// BFS distances from a set of sources; unreachable vertices get -1.
    /// When `allowed` is non-empty, the walk is restricted to that vertex set.
    std::vector<int> distances_from(std::span<const int> sources,
                                    std::span<const std::uint8_t> allowed = {}) const {
        std::vector<int> dist(adj_.size(), -1);
        std::queue<int> bfs;
        for (int s : sources) {
            if (!allowed.empty() && !allowed[static_cast<std::size_t>(s)]) continue;
            if (dist[static_cast<std::size_t>(s)] == 0) continue;
            dist[static_cast<std::size_t>(s)] = 0;
            bfs.push(s);
        }
        while (!bfs.empty()) {
            const int u = bfs.front();
            bfs.pop();
            for (int w : neighbours(u)) {
                if (!allowed.empty() && !allowed[static_cast<std::size_t>(w)]) continue;
                if (dist[static_cast<std::size_t>(w)] >= 0) continue;
                dist[static_cast<std::size_t>(w)] = dist[static_cast<std::size_t>(u)] + 1;
                bfs.push(w);
            }
        }
        return dist;
    }

    /// Whether the induced subgraph on `vertices` is connected (empty set counts
    /// as connected, singletons always do).
    bool induced_connected(std::span<const int> vertices) const {
        if (vertices.size() <= 1) return true;
        std::vector<std::uint8_t> allowed(adj_.size(), 0);
        for (int v : vertices) allowed[static_cast<std::size_t>(v)] = 1;
        const int src[1] = {vertices[0]};
        auto dist = distances_from(src, allowed);
        for (int v : vertices)
            if (dist[static_cast<std::size_t>(v)] < 0) return false;
        return true;
    }

private:
    std::vector<std::vector<int>> adj_;
};

} // namespace hycol

#endif // HYCOL_GRAPH_HPP
