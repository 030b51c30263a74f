// Command-line workbench: instance generation, sampling, oracle verification,
// block-tree checks, coupled-scan curves, and regime reports.
//
// Everything written to stdout (or --out) is deterministic for a fixed seed;
// wall-clock timings go to stderr. Exit codes: 0 ok, 2 check failure, 1 error.

#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include <hycol/hycol.hpp>

namespace {

using nlohmann::json;

struct Timer {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    double ms() const {
        return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    }
};

hycol::Hypergraph load_instance(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw hycol::ParseError("cannot open instance file: " + path);
    return hycol::read_instance(in);
}

hycol::Graph load_graph(const std::string& path) {
    const hycol::Hypergraph h = load_instance(path);
    if (h.k != 2) throw hycol::ParseError("graph file must be a 2-uniform instance");
    hycol::Graph g(h.n);
    for (const auto& e : h.edges) g.add_edge(e[0], e[1]);
    g.finalize();
    return g;
}

void emit(const std::string& content, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << content;
        return;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw hycol::Error("cannot open output file: " + out_path);
    out << content;
}

hycol::SamplerOverrides gather_overrides(const std::optional<long long>& t, const std::optional<long long>& r,
                                         const std::optional<long long>& cap, const std::optional<int>& s,
                                         bool disable_guards) {
    hycol::SamplerOverrides o;
    o.scan_steps = t;
    o.rejection_budget = r;
    o.component_cap = cap;
    o.image_size = s;
    o.disable_guards = disable_guards;
    return o;
}

int run_gen(const hycol::GenSpec& spec, bool as_json, const std::string& out_path) {
    const hycol::Hypergraph h = hycol::generate_instance(spec);
    const std::string text = hycol::write_instance(h);
    if (as_json) {
        json j;
        j["n"] = h.n;
        j["m"] = h.edge_count();
        j["k"] = h.k;
        j["max_degree"] = h.max_degree;
        j["simple"] = h.simple;
        j["seed"] = spec.seed;
        j["instance"] = text;
        emit(j.dump(2) + "\n", out_path);
    } else {
        emit(text, out_path);
    }
    return 0;
}

int run_sample(const std::string& instance, int q, double epsilon, std::uint64_t seed,
               const hycol::SamplerOverrides& overrides, const std::string& out_path) {
    const hycol::Hypergraph h = load_instance(instance);
    Timer timer;
    const hycol::RunReport report = hycol::run_scan(h, q, epsilon, seed, overrides);
    std::fprintf(stderr, "wall_time_ms=%.3f\n", timer.ms());
    emit(hycol::run_report_json(report), out_path);
    return 0;
}

int run_verify(const std::string& instance, int q, int runs, double epsilon, std::uint64_t seed, int r_param,
               double tv_tol, const std::string& out_path) {
    const hycol::Hypergraph h = load_instance(instance);
    Timer timer;
    const auto lists = hycol::full_lists(h.n, q);
    const std::uint64_t proper = hycol::count_proper(h, lists);

    json j;
    j["seed"] = seed;
    j["runs"] = runs;
    j["counts"]["proper"] = proper;
    long double space = 1;
    for (int v = 0; v < h.n; ++v) space *= q;
    j["counts"]["assignments"] = static_cast<double>(space);

    // per-vertex colour marginals of full guard-free runs against the oracle
    std::vector<hycol::ExactDistribution> oracle(static_cast<std::size_t>(h.n));
    for (int v = 0; v < h.n; ++v) oracle[static_cast<std::size_t>(v)] = hycol::marginal_on_set(h, lists, {v}, q);
    std::vector<std::vector<std::uint64_t>> hist(static_cast<std::size_t>(h.n),
                                                 std::vector<std::uint64_t>(static_cast<std::size_t>(q), 0));
    hycol::SamplerOverrides overrides;
    overrides.disable_guards = true;
    for (int i = 0; i < runs; ++i) {
        const auto rep = hycol::run_scan(h, q, epsilon, seed + static_cast<std::uint64_t>(i), overrides);
        for (int v = 0; v < h.n; ++v)
            ++hist[static_cast<std::size_t>(v)][static_cast<std::size_t>(rep.colouring.at(v) - 1)];
    }
    double tv_max = 0;
    std::vector<double> tvs;
    for (int v = 0; v < h.n; ++v) {
        hycol::ExactDistribution emp;
        emp.counts = hist[static_cast<std::size_t>(v)];
        emp.total = static_cast<std::uint64_t>(runs);
        const double tv = hycol::tv_distance(emp, oracle[static_cast<std::size_t>(v)]);
        tvs.push_back(tv);
        tv_max = std::max(tv_max, tv);
    }
    j["tv_marginals"] = tvs;
    j["tv_max"] = tv_max;
    j["tv_tol"] = tv_tol;

    const auto lu = hycol::local_uniformity_check(h, lists, r_param);
    j["local_uniformity"] = !lu.precondition_met ? "skipped" : (lu.violations.empty() ? "pass" : "fail");
    j["local_uniformity_checked"] = lu.checked;

    std::fprintf(stderr, "wall_time_ms=%.3f\n", timer.ms());
    emit(j.dump(2) + "\n", out_path);
    const bool ok = tv_max <= tv_tol && lu.violations.empty();
    return ok ? 0 : 2;
}

int run_blocktree(const std::string& graph_path, int theta, const std::string& check, int vertex, int ell_max,
                  const std::string& out_path) {
    const hycol::Graph g = load_graph(graph_path);
    if (vertex < 0 || vertex >= g.vertex_count()) throw hycol::InvalidInputError("blocktree: --vertex out of range");
    Timer timer;
    json j;
    j["check"] = check;
    j["theta"] = theta;
    bool pass = true;
    json counterexamples = json::array();

    if (check == "generate") {
        if (g.vertex_count() > 16) throw hycol::BudgetExceededError("blocktree: generate check needs <= 16 vertices");
        const int n = g.vertex_count();
        long long tested = 0;
        for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
            std::vector<int> comp;
            for (int v = 0; v < n; ++v)
                if (mask & (1u << v)) comp.push_back(v);
            if (static_cast<int>(comp.size()) <= theta) continue;
            if (!g.induced_connected(comp)) continue;
            for (int u : comp) {
                ++tested;
                const auto run = hycol::generate_block_tree(g, u, comp, theta);
                bool ok = run.work_set_empty && hycol::is_block_tree(g, run.blocks, theta);
                // residual fragments after removing the block neighbourhoods stay <= theta
                std::vector<std::uint8_t> in_comp_mask(static_cast<std::size_t>(n), 0);
                for (int v : comp) in_comp_mask[static_cast<std::size_t>(v)] = 1;
                std::vector<std::uint8_t> keep = in_comp_mask;
                for (const auto& blk : run.blocks) {
                    auto dist = g.distances_from(blk, in_comp_mask);
                    for (int v : comp)
                        if (dist[static_cast<std::size_t>(v)] == 1) keep[static_cast<std::size_t>(v)] = 0;
                }
                std::vector<std::uint8_t> seen(static_cast<std::size_t>(n), 0);
                for (int v : comp) {
                    if (!keep[static_cast<std::size_t>(v)] || seen[static_cast<std::size_t>(v)]) continue;
                    std::vector<int> piece{v};
                    seen[static_cast<std::size_t>(v)] = 1;
                    for (std::size_t i = 0; i < piece.size(); ++i)
                        for (int w : g.neighbours(piece[i]))
                            if (keep[static_cast<std::size_t>(w)] && !seen[static_cast<std::size_t>(w)]) {
                                seen[static_cast<std::size_t>(w)] = 1;
                                piece.push_back(w);
                            }
                    if (static_cast<int>(piece.size()) > theta) ok = false;
                }
                // every later anchor sits at distance exactly 2 from an earlier block
                for (std::size_t b = 1; b < run.blocks.size() && ok; ++b) {
                    bool found = false;
                    for (std::size_t a = 0; a < b && !found; ++a) {
                        auto dist = g.distances_from(run.blocks[a], in_comp_mask);
                        found = dist[static_cast<std::size_t>(run.anchors[b])] == 2;
                    }
                    ok = found;
                }
                if (!ok) {
                    pass = false;
                    json ce;
                    ce["component"] = comp;
                    ce["seed_vertex"] = u;
                    counterexamples.push_back(ce);
                }
            }
        }
        j["cases"] = tested;
    } else if (check == "inject") {
        json reports = json::array();
        for (int ell = 1; ell <= ell_max; ++ell) {
            const auto rep = hycol::check_injective(g, vertex, theta, ell);
            json one;
            one["tree_size"] = ell;
            one["count"] = rep.tree_count;
            one["injective"] = rep.injective;
            one["bound"] = rep.count_bound;
            one["within_bound"] = rep.bound_applicable ? json(rep.within_bound) : json("skipped");
            reports.push_back(one);
            if (!rep.injective || (rep.bound_applicable && !rep.within_bound)) {
                pass = false;
                counterexamples.push_back(one);
            }
        }
        j["reports"] = reports;
    } else if (check == "counts") {
        json reports = json::array();
        const int d = g.max_degree();
        for (int ell = 1; ell <= std::min(g.vertex_count(), ell_max); ++ell) {
            const std::uint64_t count = hycol::count_connected_subgraphs(g, vertex, ell);
            json one;
            one["size"] = ell;
            one["count"] = count;
            if (d >= 2 && ell >= 2) {
                const double bound = std::pow(std::exp(1.0) * d, ell - 1) / 2.0;
                one["bound"] = bound;
                one["within_bound"] = static_cast<double>(count) <= bound;
                if (static_cast<double>(count) > bound) {
                    pass = false;
                    counterexamples.push_back(one);
                }
            } else {
                one["within_bound"] = "skipped";
            }
            reports.push_back(one);
        }
        j["reports"] = reports;
    } else {
        throw hycol::InvalidInputError("blocktree: --check must be generate, inject, or counts");
    }
    j["pass"] = pass;
    j["counterexamples"] = counterexamples;
    std::fprintf(stderr, "wall_time_ms=%.3f\n", timer.ms());
    emit(j.dump(2) + "\n", out_path);
    return pass ? 0 : 2;
}

int run_coupling(const std::string& instance, int q, long long t_max, int runs, std::uint64_t seed,
                 long long stride, const std::string& out_path) {
    const hycol::Hypergraph h = load_instance(instance);
    Timer timer;
    const auto points = hycol::mixing_curve(h, q, t_max, runs, seed, stride);
    std::fprintf(stderr, "wall_time_ms=%.3f\n", timer.ms());
    emit(hycol::mixing_curve_csv(points), out_path);
    return 0;
}

int run_regime(const std::string& instance, int q, double delta, double alpha, double epsilon,
               const std::string& out_path) {
    const hycol::Hypergraph h = load_instance(instance);
    const hycol::RegimeReport r = hycol::regime_check(h, q, delta, alpha, epsilon);
    emit(hycol::regime_report_json(r), out_path);
    const bool failed = r.k_condition == hycol::CheckStatus::fail ||
                        r.q_condition == hycol::CheckStatus::fail || !r.simple;
    return failed ? 2 : 0;
}

int run_bench(const std::string& instance, int q, double epsilon, int runs, std::uint64_t seed, int threads,
              const std::string& out_path) {
    const hycol::Hypergraph h = load_instance(instance);
    Timer timer;
    const auto reports = hycol::run_scan_batch(h, q, epsilon, seed, runs, {}, threads);
    const double total_ms = timer.ms();
    long long com = 0, rej = 0;
    std::uint64_t checksum = 1469598103934665603ull; // FNV offset basis
    for (const auto& r : reports) {
        com += r.component_guard_count;
        rej += r.rejection_guard_count;
        for (int v = 0; v < r.colouring.size(); ++v) {
            checksum ^= static_cast<std::uint64_t>(r.colouring.at(v));
            checksum *= 1099511628211ull;
        }
    }
    std::fprintf(stderr, "wall_time_ms=%.3f per_run_ms=%.3f\n", total_ms, total_ms / std::max(runs, 1));
    json j;
    j["runs"] = runs;
    j["seed"] = seed;
    j["component_guard_count"] = com;
    j["rejection_guard_count"] = rej;
    j["colour_checksum"] = checksum;
    j["params"] = hycol::params_json(reports.empty() ? hycol::derive_params(h, q, epsilon) : reports[0].params);
    emit(j.dump(2) + "\n", out_path);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"sampling toolkit for proper colourings of k-uniform hypergraphs"};
    app.require_subcommand(1);
    app.fallthrough(); // global flags (--seed/--json/--out) may follow the subcommand

    std::uint64_t seed = 1;
    bool as_json = false;
    std::string out_path;
    app.add_option("--seed", seed, "seed for all randomized subcommands")->capture_default_str();
    app.add_flag("--json", as_json, "machine-readable output where the default is text");
    app.add_option("--out", out_path, "write the artifact to a file instead of stdout");

    // gen
    auto* gen = app.add_subcommand("gen", "generate a random bounded-degree instance");
    hycol::GenSpec spec;
    gen->add_option("--n", spec.n, "vertex count")->required();
    gen->add_option("--k", spec.k, "edge arity")->required();
    gen->add_option("--m", spec.m, "edge count")->required();
    gen->add_option("--max-degree", spec.max_degree, "maximum vertex degree")->required();
    bool require_simple = false;
    gen->add_flag("--simple", require_simple, "resample edges until the instance is simple");

    // sample
    auto* sample = app.add_subcommand("sample", "run the projected systematic scan");
    std::string instance;
    int q = 0;
    double epsilon = 0.1;
    std::optional<long long> override_t, override_r, override_cap;
    std::optional<int> override_s;
    bool disable_guards = false;
    sample->add_option("--instance", instance, "instance file")->required();
    sample->add_option("--q", q, "number of colours")->required();
    sample->add_option("--epsilon", epsilon, "target sampling error")->capture_default_str();
    sample->add_option("--override-T", override_t, "replace the derived scan length");
    sample->add_option("--override-R", override_r, "replace the derived rejection budget");
    sample->add_option("--override-cap", override_cap, "replace the derived component cap");
    sample->add_option("--override-s", override_s, "replace the derived projection image size");
    sample->add_flag("--disable-guards", disable_guards, "unbounded cap and rejection budget");

    // verify
    auto* verify = app.add_subcommand("verify", "compare guard-free runs against the exact oracle");
    std::string v_instance;
    int v_q = 0, v_runs = 20000, v_r = 0;
    double v_epsilon = 0.5, v_tol = 0.05;
    verify->add_option("--instance", v_instance, "instance file")->required();
    verify->add_option("--q", v_q, "number of colours")->required();
    verify->add_option("--runs", v_runs, "sampler runs for the empirical marginals")->capture_default_str();
    verify->add_option("--epsilon", v_epsilon, "epsilon used for the scan length")->capture_default_str();
    verify->add_option("--r", v_r, "slack parameter of the local-uniformity envelope (default k)");
    verify->add_option("--tv-tol", v_tol, "per-vertex TV tolerance")->capture_default_str();

    // blocktree
    auto* blocktree = app.add_subcommand("blocktree", "block-tree generator / encoding / counting checks");
    std::string graph_path, check = "generate";
    int theta = 1, bt_vertex = 0, ell_max = 3;
    blocktree->add_option("--graph", graph_path, "2-uniform instance file")->required();
    blocktree->add_option("--theta", theta, "block size")->required();
    blocktree->add_option("--check", check, "one of generate|inject|counts")->capture_default_str();
    blocktree->add_option("--vertex", bt_vertex, "marked vertex for inject/counts")->capture_default_str();
    blocktree->add_option("--ell-max", ell_max, "largest tree/subgraph size checked")->capture_default_str();

    // coupling
    auto* coupling = app.add_subcommand("coupling", "coupled-scan discrepancy curves (CSV)");
    std::string c_instance;
    int c_q = 0, c_runs = 200;
    long long c_tmax = 0, c_stride = 0;
    coupling->add_option("--instance", c_instance, "instance file")->required();
    coupling->add_option("--q", c_q, "number of colours")->required();
    coupling->add_option("--T-max", c_tmax, "total coupled steps")->required();
    coupling->add_option("--runs", c_runs, "coupled runs per initial pair")->capture_default_str();
    coupling->add_option("--stride", c_stride, "checkpoint stride (default n)");

    // regime
    auto* regime = app.add_subcommand("regime", "sufficient-condition report for the analysed regime");
    std::string r_instance;
    int r_q = 0;
    double r_delta = 1.0, r_alpha = 1.0, r_epsilon = 0.1;
    regime->add_option("--instance", r_instance, "instance file")->required();
    regime->add_option("--q", r_q, "number of colours")->required();
    regime->add_option("--delta", r_delta, "regime slack parameter")->capture_default_str();
    regime->add_option("--alpha", r_alpha, "runtime/colour trade-off parameter")->capture_default_str();
    regime->add_option("--epsilon", r_epsilon, "epsilon for the derived parameters")->capture_default_str();

    // bench
    auto* bench = app.add_subcommand("bench", "batch sampler runs with timing on stderr");
    std::string b_instance;
    int b_q = 0, b_runs = 10, b_threads = 1;
    double b_epsilon = 0.1;
    bench->add_option("--instance", b_instance, "instance file")->required();
    bench->add_option("--q", b_q, "number of colours")->required();
    bench->add_option("--epsilon", b_epsilon, "target sampling error")->capture_default_str();
    bench->add_option("--runs", b_runs, "number of independent runs")->capture_default_str();
    bench->add_option("--threads", b_threads, "worker threads")->capture_default_str();

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed()) {
            spec.seed = seed;
            spec.require_simple = require_simple;
            return run_gen(spec, as_json, out_path);
        }
        if (sample->parsed())
            return run_sample(instance, q, epsilon, seed,
                              gather_overrides(override_t, override_r, override_cap, override_s, disable_guards),
                              out_path);
        if (verify->parsed()) {
            if (v_r == 0) v_r = load_instance(v_instance).k;
            return run_verify(v_instance, v_q, v_runs, v_epsilon, seed, v_r, v_tol, out_path);
        }
        if (blocktree->parsed()) return run_blocktree(graph_path, theta, check, bt_vertex, ell_max, out_path);
        if (coupling->parsed()) return run_coupling(c_instance, c_q, c_tmax, c_runs, seed, c_stride, out_path);
        if (regime->parsed()) return run_regime(r_instance, r_q, r_delta, r_alpha, r_epsilon, out_path);
        if (bench->parsed()) return run_bench(b_instance, b_q, b_epsilon, b_runs, seed, b_threads, out_path);
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 1;
    }
    return 1;
}
