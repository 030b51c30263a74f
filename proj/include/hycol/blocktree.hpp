#ifndef HYCOL_BLOCKTREE_HPP
#define HYCOL_BLOCKTREE_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hycol/errors.hpp"
#include "hycol/graph.hpp"

namespace hycol {

inline constexpr std::uint64_t kDefaultSubgraphBudget = 10'000'000;

namespace detail {

/// Connected vertex sets of a given size containing `anchor`, restricted to
/// `allowed` when non-empty. Each set is produced exactly once via
/// branch-and-exclude; output sets are sorted, and the collection is in
/// lexicographic order.
inline void connected_sets_rec(const Graph& g, std::vector<int>& current, std::vector<std::uint8_t>& in_set,
                               std::vector<std::uint8_t>& excluded, std::span<const std::uint8_t> allowed,
                               std::size_t target, std::uint64_t budget,
                               std::vector<std::vector<int>>& out) {
    if (current.size() == target) {
        if (out.size() >= budget) throw BudgetExceededError("blocktree: connected-subgraph budget exceeded");
        std::vector<int> set = current;
        std::sort(set.begin(), set.end());
        out.push_back(std::move(set));
        return;
    }
    std::vector<int> frontier;
    for (int u : current) {
        for (int w : g.neighbours(u)) {
            if (in_set[static_cast<std::size_t>(w)] || excluded[static_cast<std::size_t>(w)]) continue;
            if (!allowed.empty() && !allowed[static_cast<std::size_t>(w)]) continue;
            frontier.push_back(w);
        }
    }
    std::sort(frontier.begin(), frontier.end());
    frontier.erase(std::unique(frontier.begin(), frontier.end()), frontier.end());
    std::vector<int> locally_excluded;
    for (int w : frontier) {
        current.push_back(w);
        in_set[static_cast<std::size_t>(w)] = 1;
        connected_sets_rec(g, current, in_set, excluded, allowed, target, budget, out);
        in_set[static_cast<std::size_t>(w)] = 0;
        current.pop_back();
        excluded[static_cast<std::size_t>(w)] = 1;
        locally_excluded.push_back(w);
    }
    for (int w : locally_excluded) excluded[static_cast<std::size_t>(w)] = 0;
}

} // namespace detail

/// All connected induced vertex sets of the given size containing `anchor`,
/// sorted lexicographically (as sorted vertex vectors).
inline std::vector<std::vector<int>> connected_subgraphs_containing(
    const Graph& g, int anchor, int size, std::span<const std::uint8_t> allowed = {},
    std::uint64_t budget = kDefaultSubgraphBudget) {
    if (anchor < 0 || anchor >= g.vertex_count())
        throw VertexOutOfRangeError("blocktree: anchor out of range");
    if (size < 1) throw InvalidInputError("blocktree: subgraph size must be >= 1");
    std::vector<std::vector<int>> out;
    if (!allowed.empty() && !allowed[static_cast<std::size_t>(anchor)]) return out;
    std::vector<int> current{anchor};
    std::vector<std::uint8_t> in_set(static_cast<std::size_t>(g.vertex_count()), 0);
    std::vector<std::uint8_t> excluded(static_cast<std::size_t>(g.vertex_count()), 0);
    in_set[static_cast<std::size_t>(anchor)] = 1;
    detail::connected_sets_rec(g, current, in_set, excluded, allowed, static_cast<std::size_t>(size), budget,
                               out);
    std::sort(out.begin(), out.end());
    return out;
}

/// Exact count of connected induced size-`size` subgraphs containing v.
inline std::uint64_t count_connected_subgraphs(const Graph& g, int v, int size,
                                               std::uint64_t budget = kDefaultSubgraphBudget) {
    return connected_subgraphs_containing(g, v, size, {}, budget).size();
}

/// Distance between a vertex set and every vertex of the graph, optionally
/// restricted to `allowed`.
inline std::vector<int> set_distances(const Graph& g, std::span<const int> set,
                                      std::span<const std::uint8_t> allowed = {}) {
    return g.distances_from(set, allowed);
}

inline int set_distance(const Graph& g, std::span<const int> a, std::span<const int> b) {
    auto dist = g.distances_from(a);
    int best = -1;
    for (int v : b) {
        const int d = dist[static_cast<std::size_t>(v)];
        if (d >= 0 && (best < 0 || d < best)) best = d;
    }
    return best; // -1 when unreachable
}

struct BlockTreeRun {
    std::vector<std::vector<int>> blocks; // each sorted, in generation order
    std::vector<int> anchors;             // seed vertex of each block
    bool work_set_empty = false;          // true on normal termination
};

/// Deterministic block decomposition of a connected vertex set `component`
/// (|component| > block_size, u inside it): repeatedly carve out the
/// lexicographically smallest connected block of block_size vertices anchored
/// at the smallest eligible vertex, delete the block and its neighbourhood
/// from the working set, then discard sub-threshold fragments.
inline BlockTreeRun generate_block_tree(const Graph& g, int u, const std::vector<int>& component,
                                        int block_size) {
    const int n = g.vertex_count();
    if (block_size < 1) throw InvalidInputError("blocktree: block size must be >= 1");
    std::vector<std::uint8_t> in_c(static_cast<std::size_t>(n), 0);
    for (int v : component) {
        if (v < 0 || v >= n) throw VertexOutOfRangeError("blocktree: component vertex out of range");
        if (in_c[static_cast<std::size_t>(v)]) throw InvalidInputError("blocktree: duplicate component vertex");
        in_c[static_cast<std::size_t>(v)] = 1;
    }
    if (u < 0 || u >= n || !in_c[static_cast<std::size_t>(u)])
        throw InvalidInputError("blocktree: seed vertex must lie in the component");
    if (static_cast<int>(component.size()) <= block_size)
        throw InvalidInputError("blocktree: component must have more than block_size vertices");
    if (!g.induced_connected(component))
        throw InvalidInputError("blocktree: component must induce a connected subgraph");

    BlockTreeRun run;
    std::vector<std::uint8_t> work = in_c;
    int work_count = static_cast<int>(component.size());

    while (work_count >= block_size) {
        int anchor = -1;
        if (run.blocks.empty()) {
            anchor = u;
        } else {
            // smallest working vertex adjacent (within the component) to an
            // already-removed component vertex
            for (int v : component) {
                if (!work[static_cast<std::size_t>(v)]) continue;
                bool touches_removed = false;
                for (int w : g.neighbours(v)) {
                    if (in_c[static_cast<std::size_t>(w)] && !work[static_cast<std::size_t>(w)]) {
                        touches_removed = true;
                        break;
                    }
                }
                if (touches_removed && (anchor < 0 || v < anchor)) anchor = v;
            }
        }
        if (anchor < 0) throw Error("blocktree: internal error, no eligible anchor");
        auto candidates = connected_subgraphs_containing(g, anchor, block_size, work);
        if (candidates.empty()) throw Error("blocktree: internal error, no block available");
        std::vector<int> block = candidates.front();

        run.anchors.push_back(anchor);
        for (int b : block) {
            if (work[static_cast<std::size_t>(b)]) {
                work[static_cast<std::size_t>(b)] = 0;
                --work_count;
            }
            for (int w : g.neighbours(b)) {
                if (in_c[static_cast<std::size_t>(w)] && work[static_cast<std::size_t>(w)]) {
                    work[static_cast<std::size_t>(w)] = 0;
                    --work_count;
                }
            }
        }
        run.blocks.push_back(std::move(block));

        // discard residual components smaller than the block size
        std::vector<std::uint8_t> seen(static_cast<std::size_t>(n), 0);
        for (int v : component) {
            if (!work[static_cast<std::size_t>(v)] || seen[static_cast<std::size_t>(v)]) continue;
            std::vector<int> piece{v};
            seen[static_cast<std::size_t>(v)] = 1;
            for (std::size_t i = 0; i < piece.size(); ++i) {
                for (int w : g.neighbours(piece[i])) {
                    if (!work[static_cast<std::size_t>(w)] || seen[static_cast<std::size_t>(w)]) continue;
                    seen[static_cast<std::size_t>(w)] = 1;
                    piece.push_back(w);
                }
            }
            if (static_cast<int>(piece.size()) < block_size) {
                for (int w : piece) {
                    work[static_cast<std::size_t>(w)] = 0;
                    --work_count;
                }
            }
        }
    }
    run.work_set_empty = work_count == 0;
    return run;
}

/// Validity predicate: every block has exactly block_size vertices and is
/// induced-connected, blocks are pairwise at distance >= 2, and the blocks
/// form a connected family when linked whenever two blocks hold vertices
/// within distance 2 of each other.
inline bool is_block_tree(const Graph& g, const std::vector<std::vector<int>>& blocks, int block_size) {
    if (blocks.empty()) return false;
    const int n = g.vertex_count();
    for (const auto& b : blocks) {
        if (static_cast<int>(b.size()) != block_size) return false;
        for (int v : b)
            if (v < 0 || v >= n) return false;
        std::vector<int> sorted = b;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) return false;
        if (!g.induced_connected(b)) return false;
    }
    const std::size_t count = blocks.size();
    std::vector<std::vector<int>> link(count);
    for (std::size_t i = 0; i < count; ++i) {
        auto dist = g.distances_from(blocks[i]);
        for (std::size_t j = 0; j < count; ++j) {
            if (j == i) continue;
            int d = -1;
            for (int v : blocks[j]) {
                const int dv = dist[static_cast<std::size_t>(v)];
                if (dv >= 0 && (d < 0 || dv < d)) d = dv;
            }
            if (d >= 0 && d < 2) return false; // overlapping or adjacent blocks
            if (d == 2) link[i].push_back(static_cast<int>(j));
        }
    }
    // connectivity of the block family under the distance-2 links
    std::vector<std::uint8_t> seen(count, 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    std::size_t reached = 1;
    while (!stack.empty()) {
        const int i = stack.back();
        stack.pop_back();
        for (int j : link[static_cast<std::size_t>(i)]) {
            if (seen[static_cast<std::size_t>(j)]) continue;
            seen[static_cast<std::size_t>(j)] = 1;
            ++reached;
            stack.push_back(j);
        }
    }
    return reached == count;
}

/// Removes one block while keeping a valid tree containing v: pick a leaf of
/// a spanning tree of the distance-2 block graph whose block does not hold v.
inline std::vector<std::vector<int>> drop_block(const Graph& g, std::vector<std::vector<int>> blocks, int v) {
    if (blocks.size() < 2) throw InvalidInputError("drop_block: need at least two blocks");
    const int block_size = static_cast<int>(blocks.front().size());
    if (!is_block_tree(g, blocks, block_size)) throw InvalidInputError("drop_block: input is not a block tree");
    int home = -1;
    for (std::size_t i = 0; i < blocks.size(); ++i)
        for (int w : blocks[i])
            if (w == v) home = static_cast<int>(i);
    if (home < 0) throw InvalidInputError("drop_block: vertex lies in no block");

    const std::size_t count = blocks.size();
    std::vector<std::vector<int>> link(count);
    for (std::size_t i = 0; i < count; ++i) {
        auto dist = g.distances_from(blocks[i]);
        for (std::size_t j = 0; j < count; ++j) {
            if (j == i) continue;
            for (int w : blocks[j]) {
                if (dist[static_cast<std::size_t>(w)] == 2) {
                    link[i].push_back(static_cast<int>(j));
                    break;
                }
            }
        }
    }
    // BFS spanning tree rooted at the block containing v
    std::vector<int> tree_degree(count, 0);
    std::vector<std::uint8_t> seen(count, 0);
    std::vector<int> queue{home};
    seen[static_cast<std::size_t>(home)] = 1;
    for (std::size_t head = 0; head < queue.size(); ++head) {
        const int i = queue[head];
        for (int j : link[static_cast<std::size_t>(i)]) {
            if (seen[static_cast<std::size_t>(j)]) continue;
            seen[static_cast<std::size_t>(j)] = 1;
            ++tree_degree[static_cast<std::size_t>(i)];
            ++tree_degree[static_cast<std::size_t>(j)];
            queue.push_back(j);
        }
    }
    int victim = -1;
    for (std::size_t i = 0; i < count; ++i) {
        if (static_cast<int>(i) == home) continue;
        if (tree_degree[i] <= 1) {
            victim = static_cast<int>(i);
            break;
        }
    }
    if (victim < 0) throw Error("drop_block: internal error, no removable leaf");
    blocks.erase(blocks.begin() + victim);
    return blocks;
}

/// Depth-first encoding of a block tree relative to a start vertex: the tree
/// shape is recorded as (parent visit index, child rank) pairs, and each block
/// as its 1-based rank among the connected subgraphs anchored at the vertex
/// through which the walk entered it.
struct BlockTreeEncoding {
    std::vector<int> parent;
    std::vector<int> child_rank;
    std::vector<std::uint64_t> subgraph_rank;

    bool operator==(const BlockTreeEncoding&) const = default;
    bool operator<(const BlockTreeEncoding& o) const {
        if (parent != o.parent) return parent < o.parent;
        if (child_rank != o.child_rank) return child_rank < o.child_rank;
        return subgraph_rank < o.subgraph_rank;
    }
};

/// Caches the per-anchor subgraph enumerations used for block ranks.
class BlockTreeEncoder {
public:
    BlockTreeEncoder(const Graph& g, int block_size) : g_(g), block_size_(block_size) {}

    BlockTreeEncoding encode(int v, const std::vector<std::vector<int>>& blocks) {
        const std::size_t count = blocks.size();
        std::vector<int> block_of(static_cast<std::size_t>(g_.vertex_count()), -1);
        int home = -1;
        for (std::size_t i = 0; i < count; ++i) {
            if (static_cast<int>(blocks[i].size()) != block_size_)
                throw InvalidInputError("encode: block size mismatch");
            for (int w : blocks[i]) {
                if (block_of[static_cast<std::size_t>(w)] >= 0)
                    throw InvalidInputError("encode: blocks overlap");
                block_of[static_cast<std::size_t>(w)] = static_cast<int>(i);
                if (w == v) home = static_cast<int>(i);
            }
        }
        if (home < 0) throw InvalidInputError("encode: start vertex lies in no block");
        BlockTreeEncoding enc;
        std::vector<std::uint8_t> visited(count, 0);
        dfs(home, v, -1, 0, blocks, block_of, visited, enc);
        for (std::size_t i = 0; i < count; ++i)
            if (!visited[i]) throw InvalidInputError("encode: blocks are not connected at distance two");
        return enc;
    }

    /// 1-based lexicographic rank of `block` among connected block-sized sets
    /// containing `anchor`.
    std::uint64_t anchored_rank(int anchor, const std::vector<int>& block) {
        const auto& sets = anchored_sets(anchor);
        auto it = std::lower_bound(sets.begin(), sets.end(), block);
        if (it == sets.end() || *it != block)
            throw InvalidInputError("encode: block is not an anchored connected set");
        return static_cast<std::uint64_t>(it - sets.begin()) + 1;
    }

    std::uint64_t anchored_count(int anchor) { return anchored_sets(anchor).size(); }

private:
    const std::vector<std::vector<int>>& anchored_sets(int anchor) {
        auto it = cache_.find(anchor);
        if (it == cache_.end())
            it = cache_.emplace(anchor, connected_subgraphs_containing(g_, anchor, block_size_)).first;
        return it->second;
    }

    void dfs(int block_idx, int entry_vertex, int parent_visit, int child_rank,
             const std::vector<std::vector<int>>& blocks, const std::vector<int>& block_of,
             std::vector<std::uint8_t>& visited, BlockTreeEncoding& enc) {
        visited[static_cast<std::size_t>(block_idx)] = 1;
        const int my_visit = static_cast<int>(enc.parent.size());
        enc.parent.push_back(parent_visit);
        enc.child_rank.push_back(child_rank);
        enc.subgraph_rank.push_back(anchored_rank(entry_vertex, blocks[static_cast<std::size_t>(block_idx)]));
        auto dist = g_.distances_from(blocks[static_cast<std::size_t>(block_idx)]);
        std::vector<int> ring;
        for (int w = 0; w < g_.vertex_count(); ++w)
            if (dist[static_cast<std::size_t>(w)] == 2) ring.push_back(w);
        for (std::size_t r = 0; r < ring.size(); ++r) {
            const int w = ring[r];
            const int next = block_of[static_cast<std::size_t>(w)];
            if (next < 0 || visited[static_cast<std::size_t>(next)]) continue;
            dfs(next, w, my_visit, static_cast<int>(r) + 1, blocks, block_of, visited, enc);
        }
    }

    const Graph& g_;
    int block_size_;
    std::map<int, std::vector<std::vector<int>>> cache_;
};

inline BlockTreeEncoding encode_block_tree(const Graph& g, int v, const std::vector<std::vector<int>>& blocks) {
    if (blocks.empty()) throw InvalidInputError("encode: no blocks");
    BlockTreeEncoder enc(g, static_cast<int>(blocks.front().size()));
    return enc.encode(v, blocks);
}

/// Exhaustive enumeration of block trees with the given block size and tree
/// size whose union contains v. Each tree is a lexicographically sorted list
/// of blocks; the result is duplicate-free.
inline std::vector<std::vector<std::vector<int>>> enumerate_block_trees(
    const Graph& g, int v, int block_size, int tree_size, std::uint64_t budget = kDefaultSubgraphBudget) {
    if (tree_size < 1) throw InvalidInputError("enumerate_block_trees: tree size must be >= 1");
    // every connected block-sized set, once (anchored at its minimum vertex)
    std::vector<std::vector<int>> all_blocks;
    for (int a = 0; a < g.vertex_count(); ++a) {
        for (auto& s : connected_subgraphs_containing(g, a, block_size, {}, budget))
            if (s.front() == a) all_blocks.push_back(std::move(s));
    }
    std::sort(all_blocks.begin(), all_blocks.end());
    const std::size_t count = all_blocks.size();
    // pairwise distance classes: 0 = conflict (< 2), 1 = linked (== 2), 2 = far
    std::vector<std::vector<std::uint8_t>> klass(count, std::vector<std::uint8_t>(count, 2));
    for (std::size_t i = 0; i < count; ++i) {
        auto dist = g.distances_from(all_blocks[i]);
        for (std::size_t j = 0; j < count; ++j) {
            if (j == i) continue;
            int d = -1;
            for (int w : all_blocks[j]) {
                const int dw = dist[static_cast<std::size_t>(w)];
                if (dw >= 0 && (d < 0 || dw < d)) d = dw;
            }
            if (d >= 0 && d < 2)
                klass[i][j] = 0;
            else if (d == 2)
                klass[i][j] = 1;
        }
    }
    std::vector<std::uint8_t> holds_v(count, 0);
    for (std::size_t i = 0; i < count; ++i)
        holds_v[i] = std::binary_search(all_blocks[i].begin(), all_blocks[i].end(), v) ? 1 : 0;

    std::vector<std::vector<std::vector<int>>> out;
    std::vector<std::size_t> chosen;
    std::uint64_t examined = 0;
    auto connected_choice = [&]() {
        std::vector<std::uint8_t> seen(chosen.size(), 0);
        std::vector<std::size_t> stack{0};
        seen[0] = 1;
        std::size_t reached = 1;
        while (!stack.empty()) {
            const std::size_t i = stack.back();
            stack.pop_back();
            for (std::size_t j = 0; j < chosen.size(); ++j) {
                if (seen[j] || klass[chosen[i]][chosen[j]] != 1) continue;
                seen[j] = 1;
                ++reached;
                stack.push_back(j);
            }
        }
        return reached == chosen.size();
    };
    auto rec = [&](auto&& self, std::size_t start) -> void {
        if (++examined > budget) throw BudgetExceededError("enumerate_block_trees: budget exceeded");
        if (chosen.size() == static_cast<std::size_t>(tree_size)) {
            bool has_v = false;
            for (std::size_t i : chosen) has_v = has_v || holds_v[i];
            if (!has_v || !connected_choice()) return;
            std::vector<std::vector<int>> tree;
            for (std::size_t i : chosen) tree.push_back(all_blocks[i]);
            out.push_back(std::move(tree));
            return;
        }
        for (std::size_t i = start; i < count; ++i) {
            bool ok = true;
            for (std::size_t j : chosen) ok = ok && klass[j][i] != 0;
            if (!ok) continue;
            chosen.push_back(i);
            self(self, i + 1);
            chosen.pop_back();
        }
    };
    rec(rec, 0);
    return out;
}

/// Exhaustive injectivity and counting check for the DFS encoding: all block
/// trees containing v are enumerated, encoded, and compared; the tree count
/// is checked against (block_size * e^block_size * d^(block_size+1))^tree_size.
struct InjectivityReport {
    std::uint64_t tree_count = 0;
    bool injective = true;
    double count_bound = 0;
    bool within_bound = true;
    bool bound_applicable = true;
};

inline InjectivityReport check_injective(const Graph& g, int v, int block_size, int tree_size,
                                         std::uint64_t budget = kDefaultSubgraphBudget) {
    InjectivityReport rep;
    const auto trees = enumerate_block_trees(g, v, block_size, tree_size, budget);
    rep.tree_count = trees.size();
    BlockTreeEncoder enc(g, block_size);
    std::vector<BlockTreeEncoding> encodings;
    encodings.reserve(trees.size());
    for (const auto& tree : trees) encodings.push_back(enc.encode(v, tree));
    std::sort(encodings.begin(), encodings.end());
    rep.injective = std::adjacent_find(encodings.begin(), encodings.end()) == encodings.end();
    const int d = g.max_degree();
    if (d < 1) {
        rep.bound_applicable = false;
        return rep;
    }
    rep.count_bound = std::pow(block_size * std::exp(static_cast<double>(block_size)) *
                                   std::pow(static_cast<double>(d), block_size + 1),
                               tree_size);
    rep.within_bound = static_cast<double>(rep.tree_count) <= rep.count_bound;
    return rep;
}

} // namespace hycol

#endif // HYCOL_BLOCKTREE_HPP
