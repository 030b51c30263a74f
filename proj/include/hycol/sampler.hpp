#ifndef HYCOL_SAMPLER_HPP
#define HYCOL_SAMPLER_HPP

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <thread>
#include <vector>

#include "hycol/assignment.hpp"
#include "hycol/errors.hpp"
#include "hycol/hypergraph.hpp"
#include "hycol/projection.hpp"
#include "hycol/rng.hpp"

namespace hycol {

struct SamplerOverrides {
    std::optional<long long> scan_steps;       // T
    std::optional<long long> rejection_budget; // R
    std::optional<long long> component_cap;
    std::optional<int> image_size;             // s
    bool disable_guards = false;               // cap and budget unbounded
};

/// Run parameters derived from (n, max_degree, k, q, epsilon). Logarithms are
/// natural, ceilings applied as written:
///   scan_steps       T    = ceil(50 n ln(2 n D / eps))
///   call_error       zeta = eps / (4 T)
///   colour_slack     eta  = (1/D) (q/100)^((k-3)/2), +inf when D = 0
///   rejection_budget R    = ceil(10 (n D / zeta)^(1/(1000 eta)) ln(n / zeta))
///   component_cap         = ceil(4 D k^3 ln(n D / zeta))
/// where D is the maximum degree. A component_cap of 0 forces the oversized-
/// component guard on every call (experiment mode).
struct SamplerParams {
    int n = 0;
    int k = 0;
    int q = 0;
    int max_degree = 0;
    double epsilon = 0;
    long long scan_steps = 0;
    double call_error = 0;
    double colour_slack = 0;
    long long rejection_budget = 0;
    long long component_cap = 0;
    int image_size = 0;
    bool guards_disabled = false;
};

inline SamplerParams derive_params(const Hypergraph& h, int q, double epsilon,
                                   const SamplerOverrides& overrides = {}) {
    if (q < 1) throw InvalidQError("sampler: q must be >= 1");
    if (!(epsilon > 0 && epsilon < 1)) throw InvalidInputError("sampler: epsilon must lie in (0,1)");
    SamplerParams p;
    p.n = h.n;
    p.k = h.k;
    p.q = q;
    p.max_degree = h.max_degree;
    p.epsilon = epsilon;

    const double n_eff = std::max(h.n, 1);
    const double deg_eff = std::max(h.max_degree, 1); // keeps log arguments positive on degenerate instances

    if (overrides.scan_steps) {
        p.scan_steps = *overrides.scan_steps;
    } else {
        p.scan_steps = static_cast<long long>(std::ceil(50.0 * n_eff * std::log(2.0 * n_eff * deg_eff / epsilon)));
        p.scan_steps = std::max(p.scan_steps, 1LL);
    }
    p.call_error = epsilon / (4.0 * static_cast<double>(std::max(p.scan_steps, 1LL)));

    if (h.max_degree == 0) {
        p.colour_slack = std::numeric_limits<double>::infinity();
    } else {
        p.colour_slack = std::pow(q / 100.0, (h.k - 3) / 2.0) / h.max_degree;
    }

    if (overrides.rejection_budget) {
        p.rejection_budget = *overrides.rejection_budget;
    } else {
        const double exponent = std::isinf(p.colour_slack) ? 0.0 : 1.0 / (1000.0 * p.colour_slack);
        const double base = n_eff * deg_eff / p.call_error;
        p.rejection_budget =
            static_cast<long long>(std::ceil(10.0 * std::pow(base, exponent) * std::log(n_eff / p.call_error)));
        p.rejection_budget = std::max(p.rejection_budget, 1LL);
    }

    if (overrides.component_cap) {
        p.component_cap = *overrides.component_cap;
    } else {
        const double k3 = static_cast<double>(h.k) * h.k * h.k;
        p.component_cap = static_cast<long long>(
            std::ceil(4.0 * h.max_degree * k3 * std::log(n_eff * deg_eff / p.call_error)));
        p.component_cap = std::max(p.component_cap, 1LL);
    }

    p.image_size = overrides.image_size ? *overrides.image_size : 0;
    if (p.image_size == 0) {
        int s = 1;
        while (static_cast<long long>(s) * s < q) ++s;
        p.image_size = s;
    }

    if (overrides.disable_guards) {
        p.component_cap = kUncapped;
        p.rejection_budget = kUncapped;
        p.guards_disabled = true;
    }
    return p;
}

enum class GuardFlag : std::uint8_t {
    none = 0,
    oversized_component = 1,
    rejection_exhausted = 2,
};

/// Rejection sampling on one component: every vertex draws uniformly from its
/// list (bucket interval where assigned, full palette elsewhere) until the
/// draw is proper on the component's edges. Exact conditional sampler on
/// success; returns nothing once the budget is spent.
inline std::optional<Colouring> rejection_sample(const Hypergraph& h, const Component& comp,
                                                 const ProjectionScheme& scheme, const ProjectedConfig& buckets,
                                                 long long budget, Rng& rng) {
    const int q = scheme.colour_count();
    const std::size_t nc = comp.vertices.size();
    std::vector<int> lo(nc), width(nc), colour(nc);
    for (std::size_t i = 0; i < nc; ++i) {
        const int v = comp.vertices[i];
        if (buckets.has(v)) {
            const int b = buckets.at(v);
            lo[i] = scheme.bucket_begin(b);
            width[i] = scheme.bucket_size(b);
        } else {
            lo[i] = 1;
            width[i] = q;
        }
    }
    std::vector<int> pos_of(static_cast<std::size_t>(h.n), -1);
    for (std::size_t i = 0; i < nc; ++i) pos_of[static_cast<std::size_t>(comp.vertices[i])] = static_cast<int>(i);
    for (long long trial = 0; trial < budget; ++trial) {
        for (std::size_t i = 0; i < nc; ++i)
            colour[i] = lo[i] + static_cast<int>(rng.bounded(static_cast<std::uint64_t>(width[i])));
        bool proper = true;
        for (int e : comp.edges) {
            const auto& verts = h.edges[static_cast<std::size_t>(e)];
            const int c0 = colour[static_cast<std::size_t>(pos_of[static_cast<std::size_t>(verts[0])])];
            bool mono = true;
            for (std::size_t j = 1; j < verts.size() && mono; ++j)
                mono = colour[static_cast<std::size_t>(pos_of[static_cast<std::size_t>(verts[j])])] == c0;
            if (mono) {
                proper = false;
                break;
            }
        }
        if (proper) {
            Colouring x(h.n);
            for (std::size_t i = 0; i < nc; ++i) x.set(comp.vertices[i], colour[i]);
            return x;
        }
    }
    return std::nullopt;
}

/// Scratch buffers shared across sample_subroutine calls.
struct SamplerScratch {
    PruneScratch prune;
    std::vector<Component> components;
    std::vector<int> list_lo;
    std::vector<int> list_width;
    std::vector<int> draw;
    std::vector<int> edge_pos; // flattened vertex positions, k per component edge
};

/// One invocation of the per-step sampling subroutine: prune edges satisfied
/// by the bucket assignment, find the components meeting the target set, and
/// draw each component's colours by rejection sampling. Either guard exit
/// replaces the whole draw with an independent uniform colouring of the
/// targets.
inline GuardFlag sample_subroutine(const Hypergraph& h, const ProjectionScheme& scheme,
                                   std::span<const int> targets, const ProjectedConfig& buckets,
                                   const SamplerParams& params, Rng& rng, Colouring& out,
                                   SamplerScratch& scratch) {
    const int q = scheme.colour_count();
    auto uniform_fill = [&]() {
        for (int v : targets) out.set(v, 1 + static_cast<int>(rng.bounded(static_cast<std::uint64_t>(q))));
    };
    if (params.component_cap == 0) { // forced guard, experiment mode
        uniform_fill();
        return GuardFlag::oversized_component;
    }
    scratch.components.clear();
    scratch.prune.begin_pass(h);
    for (int v : targets) {
        if (scratch.prune.vertex_seen(v)) continue;
        Component comp = pruned_component_marked(h, buckets, v, params.component_cap, scratch.prune);
        if (comp.cap_exceeded) {
            uniform_fill();
            return GuardFlag::oversized_component;
        }
        scratch.components.push_back(std::move(comp));
    }
    for (const Component& comp : scratch.components) {
        const std::size_t nc = comp.vertices.size();
        auto& lo = scratch.list_lo;
        auto& width = scratch.list_width;
        auto& colour = scratch.draw;
        lo.resize(nc);
        width.resize(nc);
        colour.resize(nc);
        for (std::size_t i = 0; i < nc; ++i) {
            const int v = comp.vertices[i];
            if (buckets.has(v)) {
                const int b = buckets.at(v);
                lo[i] = scheme.bucket_begin(b);
                width[i] = scheme.bucket_size(b);
            } else {
                lo[i] = 1;
                width[i] = q;
            }
        }
        auto& epos = scratch.edge_pos;
        epos.clear();
        const auto pos = [&](int v) {
            return static_cast<int>(std::lower_bound(comp.vertices.begin(), comp.vertices.end(), v) -
                                    comp.vertices.begin());
        };
        for (int e : comp.edges)
            for (int v : h.edges[static_cast<std::size_t>(e)]) epos.push_back(pos(v));
        const std::size_t arity = static_cast<std::size_t>(h.k);
        bool success = false;
        for (long long trial = 0; trial < params.rejection_budget && !success; ++trial) {
            for (std::size_t i = 0; i < nc; ++i)
                colour[i] = lo[i] + static_cast<int>(rng.bounded(static_cast<std::uint64_t>(width[i])));
            bool proper = true;
            for (std::size_t base = 0; base < epos.size(); base += arity) {
                const int c0 = colour[static_cast<std::size_t>(epos[base])];
                bool mono = true;
                for (std::size_t j = 1; j < arity && mono; ++j)
                    mono = colour[static_cast<std::size_t>(epos[base + j])] == c0;
                if (mono) {
                    proper = false;
                    break;
                }
            }
            success = proper;
        }
        if (!success) {
            uniform_fill();
            return GuardFlag::rejection_exhausted;
        }
        for (std::size_t i = 0; i < nc; ++i) out.set(comp.vertices[i], colour[i]);
    }
    return GuardFlag::none;
}

/// Outcome of a full projected systematic scan.
struct RunReport {
    Colouring colouring;
    long long component_guard_count = 0; // oversized-component exits
    long long rejection_guard_count = 0; // exhausted-budget exits
    std::uint64_t seed = 0;
    SamplerParams params;
    std::vector<GuardFlag> step_flags; // populated when tracing is requested
};

/// The projected systematic scan: start from a uniform bucket configuration,
/// update the vertex with label (t mod n) for t = 1..T by sampling its colour
/// conditional on all other buckets and projecting, then draw the final
/// colouring conditional on the full bucket configuration.
inline RunReport run_scan(const Hypergraph& h, int q, double epsilon, std::uint64_t seed,
                          const SamplerOverrides& overrides = {}, bool record_step_flags = false) {
    RunReport report;
    report.seed = seed;
    report.params = derive_params(h, q, epsilon, overrides);
    const ProjectionScheme scheme = ProjectionScheme::with_image_size(q, report.params.image_size);
    Rng rng(seed);
    report.colouring = Colouring::none(h.n);
    if (h.n == 0) return report;

    ProjectedConfig y = ProjectedConfig::full(h.n);
    const int s = scheme.image_size();
    for (int v = 0; v < h.n; ++v) y.set(v, 1 + static_cast<int>(rng.bounded(static_cast<std::uint64_t>(s))));

    SamplerScratch scratch;
    Colouring step_colour(h.n);
    if (record_step_flags) report.step_flags.reserve(static_cast<std::size_t>(report.params.scan_steps) + 1);
    auto tally = [&](GuardFlag f) {
        if (f == GuardFlag::oversized_component) ++report.component_guard_count;
        if (f == GuardFlag::rejection_exhausted) ++report.rejection_guard_count;
        if (record_step_flags) report.step_flags.push_back(f);
    };

    for (long long t = 1; t <= report.params.scan_steps; ++t) {
        const int v = static_cast<int>(t % h.n);
        y.unset(v);
        const int target[1] = {v};
        const GuardFlag f = sample_subroutine(h, scheme, target, y, report.params, rng, step_colour, scratch);
        tally(f);
        y.set(v, scheme.evaluate(step_colour.at(v)));
    }

    std::vector<int> all(static_cast<std::size_t>(h.n));
    for (int v = 0; v < h.n; ++v) all[static_cast<std::size_t>(v)] = v;
    Colouring final_colour(h.n);
    const GuardFlag f = sample_subroutine(h, scheme, all, y, report.params, rng, final_colour, scratch);
    tally(f);
    report.colouring = std::move(final_colour);
    return report;
}

/// Independent runs with per-run seeds (base_seed + index). Runs execute in
/// parallel when `threads` > 1; reports come back in run order either way.
inline std::vector<RunReport> run_scan_batch(const Hypergraph& h, int q, double epsilon,
                                             std::uint64_t base_seed, int runs,
                                             const SamplerOverrides& overrides = {}, int threads = 1) {
    std::vector<RunReport> reports(static_cast<std::size_t>(runs));
    if (threads <= 1) {
        for (int i = 0; i < runs; ++i)
            reports[static_cast<std::size_t>(i)] = run_scan(h, q, epsilon, base_seed + static_cast<std::uint64_t>(i), overrides);
        return reports;
    }
    std::vector<std::thread> pool;
    std::atomic<int> next{0};
    for (int t = 0; t < threads; ++t) {
        pool.emplace_back([&]() {
            while (true) {
                const int i = next.fetch_add(1);
                if (i >= runs) break;
                reports[static_cast<std::size_t>(i)] =
                    run_scan(h, q, epsilon, base_seed + static_cast<std::uint64_t>(i), overrides);
            }
        });
    }
    for (auto& th : pool) th.join();
    return reports;
}

} // namespace hycol

#endif // HYCOL_SAMPLER_HPP
