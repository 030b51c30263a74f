#ifndef HYCOL_COUPLING_HPP
#define HYCOL_COUPLING_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "hycol/assignment.hpp"
#include "hycol/errors.hpp"
#include "hycol/hypergraph.hpp"
#include "hycol/oracle.hpp"
#include "hycol/projection.hpp"
#include "hycol/rng.hpp"
#include "hycol/sampler.hpp"

namespace hycol {

namespace detail {

inline std::size_t scan_cumulative(std::span<const double> weights, double target) {
    double acc = 0;
    std::size_t last_positive = 0;
    bool any = false;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        if (weights[i] <= 0) continue;
        any = true;
        last_positive = i;
        acc += weights[i];
        if (target < acc) return i;
    }
    if (!any) throw InvalidInputError("coupling: distribution has no mass");
    return last_positive; // floating-point shortfall lands on the last atom
}

} // namespace detail

/// One draw (x, y) from a maximal coupling of two distributions on the same
/// finite support: marginals are exact and Pr[x != y] equals the total
/// variation distance. With probability sum_i min(p_i, r_i) both coordinates
/// share a value drawn proportional to the overlap; otherwise the coordinates
/// are drawn independently from the normalized positive parts of p - r and
/// r - p.
inline std::pair<int, int> maximal_coupling(std::span<const double> p, std::span<const double> r, Rng& rng) {
    if (p.size() != r.size()) throw InvalidInputError("coupling: supports differ in size");
    if (p.empty()) throw InvalidInputError("coupling: empty support");
    double overlap = 0;
    for (std::size_t i = 0; i < p.size(); ++i) overlap += std::min(p[i], r[i]);
    const double u = rng.uniform01();
    if (u < overlap || 1.0 - overlap <= 1e-12) {
        std::vector<double> shared(p.size());
        for (std::size_t i = 0; i < p.size(); ++i) shared[i] = std::min(p[i], r[i]);
        const double target = u < overlap ? u : rng.uniform01() * overlap;
        const int z = static_cast<int>(detail::scan_cumulative(shared, target));
        return {z, z};
    }
    std::vector<double> residual(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) residual[i] = std::max(0.0, p[i] - r[i]);
    const int x = static_cast<int>(detail::scan_cumulative(residual, u - overlap));
    for (std::size_t i = 0; i < p.size(); ++i) residual[i] = std::max(0.0, r[i] - p[i]);
    const double total = 1.0 - overlap;
    const int y = static_cast<int>(detail::scan_cumulative(residual, rng.uniform01() * total));
    return {x, y};
}

/// Trace of a coupled pair of projected systematic scans; entry t holds the
/// sorted list of vertices where the two configurations differ after step t
/// (entry 0 is the initial state).
struct CoupledTrace {
    std::vector<std::vector<int>> discrepancy;
};

/// Runs two systematic scans from the given initial bucket configurations,
/// updating each step through the maximal coupling of the two exact
/// conditional projected marginals at the scheduled vertex. Each chain in
/// isolation follows the idealized scan law. Per-step marginals come from
/// component-restricted enumeration, so this is a desk-scale tool.
inline CoupledTrace run_coupled_scan(const Hypergraph& h, int q, const ProjectedConfig& x0,
                                     const ProjectedConfig& y0, long long steps, std::uint64_t seed,
                                     std::uint64_t enum_budget = kDefaultEnumBudget) {
    if (x0.size() != h.n || y0.size() != h.n)
        throw InvalidInputError("coupled scan: initial configurations must cover all vertices");
    const ProjectionScheme scheme = ProjectionScheme::build(q);
    ProjectedConfig x = x0;
    ProjectedConfig y = y0;
    Rng rng(seed);
    CoupledTrace trace;
    trace.discrepancy.reserve(static_cast<std::size_t>(steps) + 1);
    auto snapshot = [&]() {
        std::vector<int> diff;
        for (int v = 0; v < h.n; ++v)
            if (x.at(v) != y.at(v)) diff.push_back(v);
        trace.discrepancy.push_back(std::move(diff));
    };
    snapshot();
    for (long long t = 1; t <= steps; ++t) {
        const int v = static_cast<int>(t % h.n);
        x.unset(v);
        y.unset(v);
        const auto px = conditional_projected_marginal(h, scheme, v, x, enum_budget).probs();
        const auto py = conditional_projected_marginal(h, scheme, v, y, enum_budget).probs();
        const auto [bx, by] = maximal_coupling(px, py, rng);
        x.set(v, bx + 1);
        y.set(v, by + 1);
        snapshot();
    }
    return trace;
}

struct MixingPoint {
    long long step = 0;
    int vertex = 0;
    double rate = 0;
    double stderr_rate = 0;
};

/// Empirical per-vertex discrepancy probabilities of the coupled scan at
/// checkpoints 0, stride, 2*stride, ..., t_max, maximised over a set of
/// initial pairs: the two constant configurations (bucket 1 vs bucket s) plus
/// ten random pairs. Estimates, not bounds.
inline std::vector<MixingPoint> mixing_curve(const Hypergraph& h, int q, long long t_max, int runs,
                                             std::uint64_t seed, long long stride = 0,
                                             std::uint64_t enum_budget = kDefaultEnumBudget) {
    if (runs < 1) throw InvalidInputError("mixing_curve: need at least one run");
    const ProjectionScheme scheme = ProjectionScheme::build(q);
    const int s = scheme.image_size();
    if (stride <= 0) stride = std::max(1, h.n);
    std::vector<long long> checkpoints;
    for (long long t = 0; t < t_max; t += stride) checkpoints.push_back(t);
    checkpoints.push_back(t_max);

    std::vector<std::pair<ProjectedConfig, ProjectedConfig>> pairs;
    pairs.emplace_back(ProjectedConfig::full(h.n, 1), ProjectedConfig::full(h.n, s));
    Rng pair_rng(seed);
    for (int i = 0; i < 10; ++i) {
        ProjectedConfig a = ProjectedConfig::full(h.n);
        ProjectedConfig b = ProjectedConfig::full(h.n);
        for (int v = 0; v < h.n; ++v) {
            a.set(v, 1 + static_cast<int>(pair_rng.bounded(static_cast<std::uint64_t>(s))));
            b.set(v, 1 + static_cast<int>(pair_rng.bounded(static_cast<std::uint64_t>(s))));
        }
        pairs.emplace_back(std::move(a), std::move(b));
    }

    const std::size_t pc = pairs.size();
    const std::size_t cc = checkpoints.size();
    // counts[pair][checkpoint][vertex]
    std::vector<std::vector<std::vector<long long>>> counts(
        pc, std::vector<std::vector<long long>>(cc, std::vector<long long>(static_cast<std::size_t>(h.n), 0)));
    std::uint64_t run_seed = seed + 1;
    for (std::size_t pi = 0; pi < pc; ++pi) {
        for (int r = 0; r < runs; ++r, ++run_seed) {
            const CoupledTrace trace =
                run_coupled_scan(h, q, pairs[pi].first, pairs[pi].second, t_max, run_seed, enum_budget);
            for (std::size_t ci = 0; ci < cc; ++ci) {
                const auto& diff = trace.discrepancy[static_cast<std::size_t>(checkpoints[ci])];
                for (int v : diff) ++counts[pi][ci][static_cast<std::size_t>(v)];
            }
        }
    }
    std::vector<MixingPoint> out;
    for (std::size_t ci = 0; ci < cc; ++ci) {
        for (int v = 0; v < h.n; ++v) {
            double best = -1;
            for (std::size_t pi = 0; pi < pc; ++pi) {
                const double rate = static_cast<double>(counts[pi][ci][static_cast<std::size_t>(v)]) / runs;
                best = std::max(best, rate);
            }
            MixingPoint pt;
            pt.step = checkpoints[ci];
            pt.vertex = v;
            pt.rate = best;
            pt.stderr_rate = std::sqrt(std::max(0.0, best * (1.0 - best) / runs));
            out.push_back(pt);
        }
    }
    return out;
}

} // namespace hycol

#endif // HYCOL_COUPLING_HPP
