#ifndef HYCOL_HYPERGRAPH_HPP
#define HYCOL_HYPERGRAPH_HPP

#include <algorithm>
#include <istream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "hycol/assignment.hpp"
#include "hycol/errors.hpp"
#include "hycol/graph.hpp"

namespace hycol {

/// k-uniform hypergraph on vertices 0..n-1. Edges are stored as sorted vertex
/// arrays in input order; the incidence index lists, per vertex, the ids of
/// the edges containing it. Immutable after validate().
struct Hypergraph {
    int n = 0;
    int k = 0;
    std::vector<std::vector<int>> edges;
    std::vector<std::vector<int>> incidence;
    int max_degree = 0;
    bool simple = true;

    int edge_count() const { return static_cast<int>(edges.size()); }
};

/// Checks arity and vertex ranges, sorts each edge, and computes the
/// incidence index, maximum degree and simplicity flag. Non-simple inputs are
/// accepted (the sampler runs on them); callers needing simplicity check the
/// flag.
inline Hypergraph validate(std::vector<std::vector<int>> raw_edges, int n, int k) {
    if (n < 0) throw InvalidInputError("hypergraph: vertex count must be >= 0");
    if (k < 1) throw InvalidInputError("hypergraph: uniformity must be >= 1");
    Hypergraph h;
    h.n = n;
    h.k = k;
    h.edges = std::move(raw_edges);
    for (auto& e : h.edges) {
        for (int v : e) {
            if (v < 0 || v >= n)
                throw VertexOutOfRangeError("hypergraph: vertex " + std::to_string(v) +
                                            " outside [0, " + std::to_string(n) + ")");
        }
        std::sort(e.begin(), e.end());
        const bool distinct = std::adjacent_find(e.begin(), e.end()) == e.end();
        if (!distinct || static_cast<int>(e.size()) != k)
            throw EdgeArityError("hypergraph: edge must have exactly " + std::to_string(k) +
                                 " distinct vertices");
    }
    h.incidence.assign(static_cast<std::size_t>(n), {});
    for (int e = 0; e < h.edge_count(); ++e)
        for (int v : h.edges[static_cast<std::size_t>(e)])
            h.incidence[static_cast<std::size_t>(v)].push_back(e);
    for (const auto& inc : h.incidence)
        h.max_degree = std::max(h.max_degree, static_cast<int>(inc.size()));
    // Pairwise intersection sizes via the incidence index.
    h.simple = true;
    std::vector<int> shared(h.edges.size(), 0);
    for (int e = 0; e < h.edge_count() && h.simple; ++e) {
        for (int v : h.edges[static_cast<std::size_t>(e)]) {
            for (int f : h.incidence[static_cast<std::size_t>(v)]) {
                if (f <= e) continue;
                if (++shared[static_cast<std::size_t>(f)] > 1) h.simple = false;
            }
        }
        for (int v : h.edges[static_cast<std::size_t>(e)])
            for (int f : h.incidence[static_cast<std::size_t>(v)])
                shared[static_cast<std::size_t>(f)] = 0;
    }
    return h;
}

/// Line graph: one vertex per hyperedge, adjacent iff the edges intersect.
inline Graph line_graph(const Hypergraph& h) {
    Graph g(h.edge_count());
    for (int v = 0; v < h.n; ++v) {
        const auto& inc = h.incidence[static_cast<std::size_t>(v)];
        for (std::size_t i = 0; i < inc.size(); ++i)
            for (std::size_t j = i + 1; j < inc.size(); ++j) g.add_edge(inc[i], inc[j]);
    }
    g.finalize();
    return g;
}

/// An edge is satisfied by a partial bucket assignment when two of its
/// vertices inside the domain carry different buckets; such an edge can never
/// be monochromatic under any colouring consistent with the assignment.
inline bool satisfied_by(const std::vector<int>& edge, const ProjectedConfig& buckets) {
    int seen = 0;
    for (int v : edge) {
        if (!buckets.has(v)) continue;
        const int b = buckets.at(v);
        if (seen == 0) {
            seen = b;
        } else if (b != seen) {
            return true;
        }
    }
    return false;
}

/// A connected piece of the hypergraph that remains after pruning satisfied
/// edges. cap_exceeded marks components whose discovery was truncated.
struct Component {
    std::vector<int> vertices;
    std::vector<int> edges;
    bool cap_exceeded = false;
};

inline constexpr long long kUncapped = std::numeric_limits<long long>::max();

/// Reusable buffers for component discovery; epoch stamping avoids clearing
/// the mark arrays between calls on the hot path.
class PruneScratch {
public:
    void reset(const Hypergraph& h) {
        vertex_mark_.assign(static_cast<std::size_t>(h.n), 0);
        edge_mark_.assign(h.edges.size(), 0);
        epoch_ = 0;
    }

    void begin_pass(const Hypergraph& h) {
        if (vertex_mark_.size() != static_cast<std::size_t>(h.n) || edge_mark_.size() != h.edges.size())
            reset(h);
        ++epoch_;
    }

    bool vertex_seen(int v) const { return vertex_mark_[static_cast<std::size_t>(v)] == epoch_; }
    bool edge_seen(int e) const { return edge_mark_[static_cast<std::size_t>(e)] == epoch_; }
    void mark_vertex(int v) { vertex_mark_[static_cast<std::size_t>(v)] = epoch_; }
    void mark_edge(int e) { edge_mark_[static_cast<std::size_t>(e)] = epoch_; }

private:
    friend Component pruned_component_marked(const Hypergraph&, const ProjectedConfig&, int, long long,
                                             PruneScratch&);
    std::vector<std::uint32_t> vertex_mark_;
    std::vector<std::uint32_t> edge_mark_;
    std::uint32_t epoch_ = 0;

    struct Frame {
        int vertex;
        std::size_t edge_idx = 0;
        int current_edge = -1;
        std::size_t vert_idx = 0;
    };
    std::vector<Frame> frames_;
};

/// Depth-first discovery of the unsatisfied component containing `start`,
/// without resetting marks; marks persist for the current epoch so a caller
/// can walk several starts and skip vertices already assigned to a component.
/// Visit order: ascending edge id, then ascending vertex id. Discovery stops
/// the moment the edge count exceeds `cap`.
inline Component pruned_component_marked(const Hypergraph& h, const ProjectedConfig& buckets, int start,
                                         long long cap, PruneScratch& s) {
    Component comp;
    if (start < 0 || start >= h.n) throw VertexOutOfRangeError("pruned_component: start out of range");
    if (cap < 0) throw InvalidInputError("pruned_component: cap must be >= 0");
    s.mark_vertex(start);
    comp.vertices.push_back(start);
    long long found = 0;
    auto& frames = s.frames_;
    frames.clear();
    frames.push_back({start});
    while (!frames.empty()) {
        auto& f = frames.back();
        const auto& inc = h.incidence[static_cast<std::size_t>(f.vertex)];
        if (f.current_edge < 0) {
            if (f.edge_idx == inc.size()) {
                frames.pop_back();
                continue;
            }
            const int e = inc[f.edge_idx++];
            if (s.edge_seen(e) || satisfied_by(h.edges[static_cast<std::size_t>(e)], buckets)) continue;
            s.mark_edge(e);
            comp.edges.push_back(e);
            if (++found > cap) {
                comp.cap_exceeded = true;
                break;
            }
            f.current_edge = e;
            f.vert_idx = 0;
        } else {
            const auto& verts = h.edges[static_cast<std::size_t>(f.current_edge)];
            if (f.vert_idx == verts.size()) {
                f.current_edge = -1;
                continue;
            }
            const int u = verts[f.vert_idx++];
            if (!s.vertex_seen(u)) {
                s.mark_vertex(u);
                comp.vertices.push_back(u);
                frames.push_back({u});
            }
        }
    }
    frames.clear();
    std::sort(comp.vertices.begin(), comp.vertices.end());
    std::sort(comp.edges.begin(), comp.edges.end());
    return comp;
}

inline Component pruned_component(const Hypergraph& h, const ProjectedConfig& buckets, int start,
                                  long long cap) {
    PruneScratch scratch;
    scratch.begin_pass(h);
    return pruned_component_marked(h, buckets, start, cap, scratch);
}

/// Text instance format: first non-comment line `n m k`, then m lines of k
/// vertex ids. Lines starting with '#' are comments.
inline Hypergraph read_instance(std::istream& in) {
    std::string line;
    auto next_data_line = [&](std::string& out) {
        while (std::getline(in, line)) {
            std::size_t pos = line.find_first_not_of(" \t\r");
            if (pos == std::string::npos || line[pos] == '#') continue;
            out = line;
            return true;
        }
        return false;
    };
    std::string header;
    if (!next_data_line(header)) throw ParseError("instance: missing header line");
    std::istringstream hs(header);
    int n = 0, m = 0, k = 0;
    if (!(hs >> n >> m >> k)) throw ParseError("instance: header must be `n m k`");
    if (m < 0) throw ParseError("instance: negative edge count");
    std::vector<std::vector<int>> edges;
    edges.reserve(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) {
        std::string row;
        if (!next_data_line(row)) throw ParseError("instance: expected " + std::to_string(m) + " edges");
        std::istringstream rs(row);
        std::vector<int> e(static_cast<std::size_t>(k));
        for (int j = 0; j < k; ++j) {
            if (!(rs >> e[static_cast<std::size_t>(j)]))
                throw ParseError("instance: edge line needs " + std::to_string(k) + " vertex ids");
        }
        int extra;
        if (rs >> extra) throw ParseError("instance: trailing token on edge line");
        edges.push_back(std::move(e));
    }
    return validate(std::move(edges), n, k);
}

inline Hypergraph parse_instance(const std::string& text) {
    std::istringstream in(text);
    return read_instance(in);
}

inline std::string write_instance(const Hypergraph& h) {
    std::ostringstream out;
    out << h.n << ' ' << h.edge_count() << ' ' << h.k << '\n';
    for (const auto& e : h.edges) {
        for (std::size_t i = 0; i < e.size(); ++i) out << (i ? " " : "") << e[i];
        out << '\n';
    }
    return out.str();
}

} // namespace hycol

#endif // HYCOL_HYPERGRAPH_HPP
