#ifndef HYCOL_WORKBENCH_HPP
#define HYCOL_WORKBENCH_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "hycol/coupling.hpp"
#include "hycol/errors.hpp"
#include "hycol/hypergraph.hpp"
#include "hycol/rng.hpp"
#include "hycol/sampler.hpp"

namespace hycol {

struct GenSpec {
    int n = 0;
    int k = 2;
    int m = 0;
    int max_degree = 1;
    std::uint64_t seed = 1;
    bool require_simple = false;
};

/// Random k-uniform hypergraph with maximum degree at most the target,
/// edge by edge with rejection; resamples edges violating simplicity when
/// required. Deterministic for a fixed seed.
inline Hypergraph generate_instance(const GenSpec& spec) {
    if (spec.n < 0 || spec.m < 0 || spec.k < 1 || spec.max_degree < 0)
        throw InvalidInputError("gen: negative sizes");
    if (spec.k > spec.n && spec.m > 0) throw InfeasibleError("gen: edge arity exceeds vertex count");
    if (static_cast<long long>(spec.m) * spec.k > static_cast<long long>(spec.n) * spec.max_degree)
        throw InfeasibleError("gen: degree budget cannot accommodate the requested edges");
    Rng rng(spec.seed);
    std::vector<int> degree(static_cast<std::size_t>(spec.n), 0);
    std::set<std::vector<int>> used;
    std::vector<std::vector<int>> edges;
    std::vector<int> ids(static_cast<std::size_t>(spec.n));
    long long retries_left = 10'000;
    while (static_cast<int>(edges.size()) < spec.m) {
        for (int i = 0; i < spec.n; ++i) ids[static_cast<std::size_t>(i)] = i;
        std::vector<int> edge(static_cast<std::size_t>(spec.k));
        for (int i = 0; i < spec.k; ++i) {
            const int j = i + static_cast<int>(rng.bounded(static_cast<std::uint64_t>(spec.n - i)));
            std::swap(ids[static_cast<std::size_t>(i)], ids[static_cast<std::size_t>(j)]);
            edge[static_cast<std::size_t>(i)] = ids[static_cast<std::size_t>(i)];
        }
        std::sort(edge.begin(), edge.end());
        bool ok = !used.count(edge);
        for (int v : edge) ok = ok && degree[static_cast<std::size_t>(v)] < spec.max_degree;
        if (ok && spec.require_simple) {
            for (const auto& prev : edges) {
                int shared = 0;
                std::size_t a = 0, b = 0;
                while (a < edge.size() && b < prev.size()) {
                    if (edge[a] == prev[b]) {
                        ++shared;
                        ++a;
                        ++b;
                    } else if (edge[a] < prev[b]) {
                        ++a;
                    } else {
                        ++b;
                    }
                }
                if (shared > 1) {
                    ok = false;
                    break;
                }
            }
        }
        if (!ok) {
            if (--retries_left <= 0) throw InfeasibleError("gen: could not satisfy constraints in 10^4 retries");
            continue;
        }
        for (int v : edge) ++degree[static_cast<std::size_t>(v)];
        used.insert(edge);
        edges.push_back(std::move(edge));
    }
    return validate(std::move(edges), spec.n, spec.k);
}

enum class CheckStatus : std::uint8_t { pass, marginal, fail };

inline const char* to_string(CheckStatus s) {
    switch (s) {
        case CheckStatus::pass: return "pass";
        case CheckStatus::marginal: return "marginal";
        default: return "fail";
    }
}

namespace detail {

/// value >= threshold with a documented 1e-9 relative slack: shortfalls
/// inside the slack band come back as marginal rather than flipping to fail
/// on rounding noise in the threshold.
inline CheckStatus compare_threshold(double value, double threshold) {
    if (!std::isfinite(threshold)) return std::isinf(threshold) && threshold < 0 ? CheckStatus::pass : CheckStatus::fail;
    if (value >= threshold) return CheckStatus::pass;
    const double slack = 1e-9 * std::max(1.0, std::abs(threshold));
    if (value >= threshold - slack) return CheckStatus::marginal;
    return CheckStatus::fail;
}

} // namespace detail

/// Sufficient-condition report for the analysed parameter regime. All
/// thresholds are recomputed from the inputs on every call.
struct RegimeReport {
    int n = 0, k = 0, q = 0, max_degree = 0;
    double delta = 0, alpha = 0, epsilon = 0;
    bool simple = false;
    long long block_size = 0; // ceil(4 / delta)
    double k_threshold = 0;
    double q_threshold = 0;           // 100 (D/alpha)^((2+delta)/(k-4/delta-4))
    double q_threshold_mixing = 0;    // 40 D^(2/(k-4))
    double q_threshold_rejection = 0; // 100 D^(2/(k-3))
    CheckStatus k_condition = CheckStatus::fail;
    CheckStatus q_condition = CheckStatus::fail;
    CheckStatus q_condition_mixing = CheckStatus::fail;
    CheckStatus q_condition_rejection = CheckStatus::fail;
    SamplerParams derived;
};

inline RegimeReport regime_check(const Hypergraph& h, int q, double delta, double alpha,
                                 double epsilon = 0.1) {
    if (!(delta > 0)) throw InvalidInputError("regime: delta must be positive");
    if (!(alpha > 0 && alpha <= 1)) throw InvalidInputError("regime: alpha must lie in (0, 1]");
    RegimeReport r;
    r.n = h.n;
    r.k = h.k;
    r.q = q;
    r.max_degree = h.max_degree;
    r.delta = delta;
    r.alpha = alpha;
    r.epsilon = epsilon;
    r.simple = h.simple;
    r.block_size = static_cast<long long>(std::ceil(4.0 / delta - 1e-12));
    r.k_threshold = 20.0 * (1.0 + delta) / delta;
    r.k_condition = detail::compare_threshold(h.k, r.k_threshold);

    const double inf = std::numeric_limits<double>::infinity();
    const double deg = h.max_degree;
    const double denom = h.k - 4.0 / delta - 4.0;
    r.q_threshold = denom > 0 ? 100.0 * std::pow(deg / alpha, (2.0 + delta) / denom) : inf;
    r.q_condition = detail::compare_threshold(q, r.q_threshold);

    r.q_threshold_mixing = h.k > 4 ? 40.0 * std::pow(deg, 2.0 / (h.k - 4)) : inf;
    r.q_condition_mixing = detail::compare_threshold(q, r.q_threshold_mixing);

    r.q_threshold_rejection = h.k > 3 ? 100.0 * std::pow(deg, 2.0 / (h.k - 3)) : inf;
    r.q_condition_rejection = detail::compare_threshold(q, r.q_threshold_rejection);

    r.derived = derive_params(h, q, epsilon);
    return r;
}

// --- stable machine formats -------------------------------------------------
//
// All emitters below are deterministic for a fixed input; timing information
// never enters them (the CLI logs wall times on stderr instead), so two runs
// with the same seed produce byte-identical artifacts.

inline nlohmann::json params_json(const SamplerParams& p) {
    nlohmann::json j;
    j["n"] = p.n;
    j["k"] = p.k;
    j["q"] = p.q;
    j["max_degree"] = p.max_degree;
    j["epsilon"] = p.epsilon;
    j["scan_steps"] = p.scan_steps;
    j["call_error"] = p.call_error;
    j["colour_slack"] = std::isinf(p.colour_slack) ? nlohmann::json("inf") : nlohmann::json(p.colour_slack);
    j["rejection_budget"] = p.rejection_budget == kUncapped ? nlohmann::json("unbounded")
                                                            : nlohmann::json(p.rejection_budget);
    j["component_cap"] = p.component_cap == kUncapped ? nlohmann::json("unbounded")
                                                      : nlohmann::json(p.component_cap);
    j["image_size"] = p.image_size;
    j["guards_disabled"] = p.guards_disabled;
    return j;
}

inline std::string run_report_json(const RunReport& r) {
    nlohmann::json j;
    j["seed"] = r.seed;
    j["component_guard_count"] = r.component_guard_count;
    j["rejection_guard_count"] = r.rejection_guard_count;
    j["params"] = params_json(r.params);
    std::vector<int> colours;
    colours.reserve(static_cast<std::size_t>(r.colouring.size()));
    for (int v = 0; v < r.colouring.size(); ++v)
        colours.push_back(r.colouring.has(v) ? r.colouring.at(v) : 0);
    j["colouring"] = colours;
    return j.dump(2) + "\n";
}

inline std::string regime_report_json(const RegimeReport& r) {
    nlohmann::json j;
    j["n"] = r.n;
    j["k"] = r.k;
    j["q"] = r.q;
    j["max_degree"] = r.max_degree;
    j["delta"] = r.delta;
    j["alpha"] = r.alpha;
    j["epsilon"] = r.epsilon;
    j["simple"] = r.simple;
    j["block_size"] = r.block_size;
    j["k_threshold"] = r.k_threshold;
    j["k_condition"] = to_string(r.k_condition);
    j["q_threshold"] = std::isfinite(r.q_threshold) ? nlohmann::json(r.q_threshold) : nlohmann::json("inf");
    j["q_condition"] = to_string(r.q_condition);
    j["q_threshold_mixing"] =
        std::isfinite(r.q_threshold_mixing) ? nlohmann::json(r.q_threshold_mixing) : nlohmann::json("inf");
    j["q_condition_mixing"] = to_string(r.q_condition_mixing);
    j["q_threshold_rejection"] = std::isfinite(r.q_threshold_rejection)
                                     ? nlohmann::json(r.q_threshold_rejection)
                                     : nlohmann::json("inf");
    j["q_condition_rejection"] = to_string(r.q_condition_rejection);
    j["derived"] = params_json(r.derived);
    return j.dump(2) + "\n";
}

inline std::string mixing_curve_csv(std::span<const MixingPoint> points) {
    std::string out = "T,vertex,discrepancy_rate,stderr\n";
    char row[128];
    for (const auto& p : points) {
        std::snprintf(row, sizeof(row), "%lld,%d,%.9g,%.9g\n", p.step, p.vertex, p.rate, p.stderr_rate);
        out += row;
    }
    return out;
}

} // namespace hycol

#endif // HYCOL_WORKBENCH_HPP
