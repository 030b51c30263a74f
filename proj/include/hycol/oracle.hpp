#ifndef HYCOL_ORACLE_HPP
#define HYCOL_ORACLE_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "hycol/assignment.hpp"
#include "hycol/errors.hpp"
#include "hycol/hypergraph.hpp"
#include "hycol/projection.hpp"

namespace hycol {

/// Exact distribution over an indexed finite universe, stored as integer
/// counts over a common denominator. Probabilities are derived views.
struct ExactDistribution {
    std::vector<std::uint64_t> counts;
    std::uint64_t total = 0;

    double prob(std::size_t i) const {
        return total == 0 ? 0.0 : static_cast<double>(counts[i]) / static_cast<double>(total);
    }

    std::vector<double> probs() const {
        std::vector<double> p(counts.size());
        for (std::size_t i = 0; i < counts.size(); ++i) p[i] = prob(i);
        return p;
    }
};

/// Exact equality of the underlying rationals: a_i / A == b_i / B for all i.
inline bool exactly_equal(const ExactDistribution& a, const ExactDistribution& b) {
    if (a.counts.size() != b.counts.size()) return false;
    for (std::size_t i = 0; i < a.counts.size(); ++i) {
        const auto lhs = static_cast<unsigned __int128>(a.counts[i]) * b.total;
        const auto rhs = static_cast<unsigned __int128>(b.counts[i]) * a.total;
        if (lhs != rhs) return false;
    }
    return true;
}

inline double tv_distance(std::span<const double> p, std::span<const double> r) {
    if (p.size() != r.size()) throw InvalidInputError("tv_distance: supports differ in size");
    double acc = 0;
    for (std::size_t i = 0; i < p.size(); ++i) acc += std::abs(p[i] - r[i]);
    return acc / 2;
}

inline double tv_distance(const ExactDistribution& a, const ExactDistribution& b) {
    if (a.counts.size() != b.counts.size()) throw InvalidInputError("tv_distance: supports differ in size");
    long double acc = 0;
    for (std::size_t i = 0; i < a.counts.size(); ++i) {
        const auto lhs = static_cast<unsigned __int128>(a.counts[i]) * b.total;
        const auto rhs = static_cast<unsigned __int128>(b.counts[i]) * a.total;
        const auto diff = lhs > rhs ? lhs - rhs : rhs - lhs;
        acc += static_cast<long double>(diff);
    }
    const long double denom = static_cast<long double>(a.total) * static_cast<long double>(b.total);
    return denom == 0 ? 0.0 : static_cast<double>(acc / (2 * denom));
}

using ColourLists = std::vector<std::vector<int>>;

inline ColourLists full_lists(int n, int q) {
    std::vector<int> all(static_cast<std::size_t>(q));
    for (int c = 1; c <= q; ++c) all[static_cast<std::size_t>(c - 1)] = c;
    return ColourLists(static_cast<std::size_t>(n), all);
}

/// Per-vertex candidate lists induced by a partial bucket assignment:
/// the bucket's colour interval where assigned, the full palette elsewhere.
inline ColourLists lists_from_buckets(int n, const ProjectionScheme& scheme, const ProjectedConfig& buckets) {
    ColourLists lists(static_cast<std::size_t>(n));
    for (int v = 0; v < n; ++v) {
        auto& lv = lists[static_cast<std::size_t>(v)];
        if (buckets.has(v)) {
            const int b = buckets.at(v);
            const int lo = scheme.bucket_begin(b);
            const int width = scheme.bucket_size(b);
            lv.resize(static_cast<std::size_t>(width));
            for (int i = 0; i < width; ++i) lv[static_cast<std::size_t>(i)] = lo + i;
        } else {
            for (int c = 1; c <= scheme.colour_count(); ++c) lv.push_back(c);
        }
    }
    return lists;
}

inline constexpr std::uint64_t kDefaultEnumBudget = 100'000'000;

namespace detail {

/// Enumerates list assignments on a vertex subset in lexicographic order
/// (vertex-major, list order within a vertex) and calls `fn` for each proper
/// one. `subset` must be sorted; only edges fully inside the subset are
/// checked, so the subset must not cut through unsatisfied edges unless the
/// caller wants them ignored.
template <typename Fn>
void for_each_proper_on(const Hypergraph& h, const ColourLists& lists, std::span<const int> subset,
                        std::uint64_t budget, Fn&& fn) {
    const std::size_t m = subset.size();
    long double product = 1;
    for (int v : subset) {
        const auto& lv = lists[static_cast<std::size_t>(v)];
        if (lv.empty()) return; // empty list: no assignment at all
        product *= static_cast<long double>(lv.size());
        if (product > static_cast<long double>(budget))
            throw BudgetExceededError("oracle: assignment space exceeds enumeration budget");
    }
    std::vector<int> pos_of(static_cast<std::size_t>(h.n), -1);
    for (std::size_t i = 0; i < m; ++i) pos_of[static_cast<std::size_t>(subset[i])] = static_cast<int>(i);
    std::vector<std::vector<int>> edge_pos;
    for (const auto& e : h.edges) {
        bool inside = true;
        for (int v : e) inside = inside && pos_of[static_cast<std::size_t>(v)] >= 0;
        if (!inside) continue;
        std::vector<int> pe;
        pe.reserve(e.size());
        for (int v : e) pe.push_back(pos_of[static_cast<std::size_t>(v)]);
        edge_pos.push_back(std::move(pe));
    }
    std::vector<std::size_t> idx(m, 0);
    std::vector<int> colour(m);
    for (std::size_t i = 0; i < m; ++i)
        colour[i] = lists[static_cast<std::size_t>(subset[i])][0];
    if (m == 0) {
        fn(std::span<const int>(colour));
        return;
    }
    while (true) {
        bool proper = true;
        for (const auto& pe : edge_pos) {
            const int c0 = colour[static_cast<std::size_t>(pe[0])];
            bool mono = true;
            for (std::size_t j = 1; j < pe.size() && mono; ++j)
                mono = colour[static_cast<std::size_t>(pe[j])] == c0;
            if (mono) {
                proper = false;
                break;
            }
        }
        if (proper) fn(std::span<const int>(colour));
        // odometer step, last vertex fastest
        std::size_t i = m;
        while (i > 0) {
            --i;
            const auto& li = lists[static_cast<std::size_t>(subset[i])];
            if (++idx[i] < li.size()) {
                colour[i] = li[idx[i]];
                break;
            }
            idx[i] = 0;
            colour[i] = li[0];
            if (i == 0) return;
        }
    }
}

inline std::vector<int> all_vertices(const Hypergraph& h) {
    std::vector<int> vs(static_cast<std::size_t>(h.n));
    for (int v = 0; v < h.n; ++v) vs[static_cast<std::size_t>(v)] = v;
    return vs;
}

} // namespace detail

/// All proper list colourings, in lexicographic vertex-major order.
inline std::vector<Colouring> enumerate_proper(const Hypergraph& h, const ColourLists& lists,
                                               std::uint64_t budget = kDefaultEnumBudget) {
    std::vector<Colouring> out;
    const auto verts = detail::all_vertices(h);
    detail::for_each_proper_on(h, lists, verts, budget, [&](std::span<const int> colour) {
        Colouring x(h.n);
        for (int v = 0; v < h.n; ++v) x.set(v, colour[static_cast<std::size_t>(v)]);
        out.push_back(std::move(x));
    });
    return out;
}

inline std::uint64_t count_proper(const Hypergraph& h, const ColourLists& lists,
                                  std::uint64_t budget = kDefaultEnumBudget) {
    std::uint64_t c = 0;
    const auto verts = detail::all_vertices(h);
    detail::for_each_proper_on(h, lists, verts, budget, [&](std::span<const int>) { ++c; });
    return c;
}

/// Mixed-radix packing of colours on a sorted vertex set S: vertex-major,
/// first vertex most significant, colour values 1-based.
inline std::size_t pack_colours(std::span<const int> colours_1based, int radix) {
    std::size_t idx = 0;
    for (int c : colours_1based) idx = idx * static_cast<std::size_t>(radix) + static_cast<std::size_t>(c - 1);
    return idx;
}

/// Exact joint marginal of a proper-list-colouring draw on the vertex set S,
/// as a distribution over the q^|S| packed colour tuples.
inline ExactDistribution marginal_on_set(const Hypergraph& h, const ColourLists& lists, std::vector<int> S,
                                         int q, std::uint64_t budget = kDefaultEnumBudget) {
    std::sort(S.begin(), S.end());
    long double cells = std::pow(static_cast<long double>(q), static_cast<long double>(S.size()));
    if (cells > 20'000'000.0L) throw BudgetExceededError("oracle: marginal support too large");
    ExactDistribution dist;
    dist.counts.assign(static_cast<std::size_t>(cells), 0);
    std::vector<int> proj(S.size());
    const auto verts = detail::all_vertices(h);
    detail::for_each_proper_on(h, lists, verts, budget, [&](std::span<const int> colour) {
        for (std::size_t i = 0; i < S.size(); ++i)
            proj[i] = colour[static_cast<std::size_t>(S[i])];
        ++dist.counts[pack_colours(proj, q)];
        ++dist.total;
    });
    if (dist.total == 0) throw EmptySupportError("oracle: no proper colouring consistent with the lists");
    return dist;
}

/// Exact conditional colour marginal of vertex v given buckets on the other
/// vertices. Restricted to the unsatisfied component containing v; components
/// elsewhere factor out of the marginal.
inline ExactDistribution conditional_marginal(const Hypergraph& h, const ProjectionScheme& scheme, int v,
                                              const ProjectedConfig& buckets,
                                              std::uint64_t budget = kDefaultEnumBudget) {
    if (buckets.size() != h.n)
        throw InvalidInputError("conditional_marginal: bucket assignment sized for a different instance");
    if (buckets.has(v)) throw InvalidInputError("conditional_marginal: bucket assignment must omit v");
    const int q = scheme.colour_count();
    const Component comp = pruned_component(h, buckets, v, kUncapped);
    const ColourLists lists = lists_from_buckets(h.n, scheme, buckets);
    ExactDistribution dist;
    dist.counts.assign(static_cast<std::size_t>(q), 0);
    const std::size_t vpos = static_cast<std::size_t>(
        std::lower_bound(comp.vertices.begin(), comp.vertices.end(), v) - comp.vertices.begin());
    detail::for_each_proper_on(h, lists, comp.vertices, budget, [&](std::span<const int> colour) {
        ++dist.counts[static_cast<std::size_t>(colour[vpos] - 1)];
        ++dist.total;
    });
    if (dist.total == 0)
        throw EmptySupportError("oracle: no proper colouring consistent with the bucket assignment");
    return dist;
}

/// Same conditional, pushed through the projection: distribution of the
/// bucket of X_v over [s].
inline ExactDistribution conditional_projected_marginal(const Hypergraph& h, const ProjectionScheme& scheme,
                                                        int v, const ProjectedConfig& buckets,
                                                        std::uint64_t budget = kDefaultEnumBudget) {
    const ExactDistribution colour_dist = conditional_marginal(h, scheme, v, buckets, budget);
    ExactDistribution dist;
    dist.counts.assign(static_cast<std::size_t>(scheme.image_size()), 0);
    dist.total = colour_dist.total;
    for (int c = 1; c <= scheme.colour_count(); ++c)
        dist.counts[static_cast<std::size_t>(scheme.evaluate(c) - 1)] +=
            colour_dist.counts[static_cast<std::size_t>(c - 1)];
    return dist;
}

/// Distribution of the bucket image of a uniform proper colouring, over all
/// s^n packed bucket configurations, computed by counting list colourings per
/// configuration.
inline ExactDistribution projected_distribution(const Hypergraph& h, const ProjectionScheme& scheme,
                                                std::uint64_t budget = kDefaultEnumBudget) {
    const int s = scheme.image_size();
    long double cells = std::pow(static_cast<long double>(s), static_cast<long double>(h.n));
    if (cells > 20'000'000.0L) throw BudgetExceededError("oracle: projected support too large");
    ExactDistribution dist;
    dist.counts.assign(static_cast<std::size_t>(cells), 0);
    std::vector<int> tau(static_cast<std::size_t>(h.n), 1);
    while (true) {
        ProjectedConfig cfg = ProjectedConfig::full(h.n);
        for (int v = 0; v < h.n; ++v) cfg.set(v, tau[static_cast<std::size_t>(v)]);
        const std::uint64_t c = count_proper(h, lists_from_buckets(h.n, scheme, cfg), budget);
        dist.counts[pack_colours(tau, s)] += c;
        dist.total += c;
        int i = h.n;
        bool done = h.n == 0;
        while (i > 0) {
            --i;
            if (++tau[static_cast<std::size_t>(i)] <= s) break;
            tau[static_cast<std::size_t>(i)] = 1;
            if (i == 0) done = true;
        }
        if (done) break;
    }
    return dist;
}

/// Push-forward of the uniform proper-colouring distribution through the
/// projection, by direct enumeration. Equals projected_distribution exactly.
inline ExactDistribution push_forward_distribution(const Hypergraph& h, const ProjectionScheme& scheme,
                                                   std::uint64_t budget = kDefaultEnumBudget) {
    const int s = scheme.image_size();
    long double cells = std::pow(static_cast<long double>(s), static_cast<long double>(h.n));
    if (cells > 20'000'000.0L) throw BudgetExceededError("oracle: projected support too large");
    ExactDistribution dist;
    dist.counts.assign(static_cast<std::size_t>(cells), 0);
    std::vector<int> tau(static_cast<std::size_t>(h.n));
    const auto verts = detail::all_vertices(h);
    detail::for_each_proper_on(h, full_lists(h.n, scheme.colour_count()), verts, budget,
                               [&](std::span<const int> colour) {
                                   for (int v = 0; v < h.n; ++v)
                                       tau[static_cast<std::size_t>(v)] =
                                           scheme.evaluate(colour[static_cast<std::size_t>(v)]);
                                   ++dist.counts[pack_colours(tau, s)];
                                   ++dist.total;
                               });
    return dist;
}

/// Envelope test for exact single-vertex marginals of the uniform proper
/// list colouring: with q0 = min list size, q1 = max list size, r >= k >= 2
/// and q0^k >= e * q1 * r * max_degree, every marginal must lie within
/// [exp(-2/r)/|Q_v|, exp(2/r)/|Q_v|].
struct LocalUniformityResult {
    bool precondition_met = false;
    double lower_factor = 0;
    double upper_factor = 0;
    long long checked = 0;
    struct Violation {
        int vertex;
        int colour;
        double marginal;
        double lo;
        double hi;
    };
    std::vector<Violation> violations;
};

inline LocalUniformityResult local_uniformity_check(const Hypergraph& h, const ColourLists& lists, int r,
                                                    std::uint64_t budget = kDefaultEnumBudget) {
    LocalUniformityResult res;
    std::size_t q0 = lists.empty() ? 0 : lists[0].size();
    std::size_t q1 = q0;
    int max_colour = 0;
    for (const auto& lv : lists) {
        q0 = std::min(q0, lv.size());
        q1 = std::max(q1, lv.size());
        for (int c : lv) max_colour = std::max(max_colour, c);
    }
    if (h.n == 0 || q0 == 0) return res;
    const bool shape_ok = r >= h.k && h.k >= 2;
    // q0^k >= e * q1 * r * max_degree, compared in log space. Degree zero
    // instances satisfy the condition vacuously.
    const double lhs = static_cast<double>(h.k) * std::log(static_cast<double>(q0));
    const double rhs = h.max_degree == 0
                           ? -std::numeric_limits<double>::infinity()
                           : 1.0 + std::log(static_cast<double>(q1) * r * h.max_degree);
    if (!shape_ok || lhs < rhs) return res; // precondition unmet: reported, not thrown
    res.precondition_met = true;
    res.lower_factor = std::exp(-2.0 / r);
    res.upper_factor = std::exp(2.0 / r);

    std::vector<std::vector<std::uint64_t>> per_vertex(
        static_cast<std::size_t>(h.n), std::vector<std::uint64_t>(static_cast<std::size_t>(max_colour), 0));
    std::uint64_t total = 0;
    const auto verts = detail::all_vertices(h);
    detail::for_each_proper_on(h, lists, verts, budget, [&](std::span<const int> colour) {
        ++total;
        for (int v = 0; v < h.n; ++v)
            ++per_vertex[static_cast<std::size_t>(v)][static_cast<std::size_t>(colour[static_cast<std::size_t>(v)] - 1)];
    });
    if (total == 0) throw EmptySupportError("local uniformity: no proper list colouring exists");
    for (int v = 0; v < h.n; ++v) {
        const auto& lv = lists[static_cast<std::size_t>(v)];
        const double inv = 1.0 / static_cast<double>(lv.size());
        const double lo = inv * res.lower_factor;
        const double hi = inv * res.upper_factor;
        for (int c : lv) {
            const double marg = static_cast<double>(per_vertex[static_cast<std::size_t>(v)][static_cast<std::size_t>(c - 1)]) /
                                static_cast<double>(total);
            ++res.checked;
            const double slack = 1e-12;
            if (marg < lo - slack || marg > hi + slack)
                res.violations.push_back({v, c, marg, lo, hi});
        }
    }
    return res;
}

} // namespace hycol

#endif // HYCOL_ORACLE_HPP
