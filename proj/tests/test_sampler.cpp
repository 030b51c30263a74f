#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <map>

#include <hycol/oracle.hpp>
#include <hycol/sampler.hpp>
#include <hycol/workbench.hpp>

#include "support/stats.hpp"

using namespace hycol;

TEST_CASE("derive_params follows the stated formulas") {
    SECTION("scan length example") {
        const auto h = validate({{0, 1, 2}, {0, 3, 4}}, 10, 3); // max_degree 2
        REQUIRE(h.max_degree == 2);
        const auto p = derive_params(h, 100, 0.5);
        REQUIRE(p.scan_steps == 2192); // ceil(500 ln 80)
        REQUIRE(p.call_error == Catch::Approx(0.5 / (4 * 2192)).epsilon(1e-15));
    }
    SECTION("colour slack exponents") {
        const auto h5 = validate({{0, 1, 2, 3, 4}, {0, 5, 6, 7, 8}}, 9, 5);
        REQUIRE(derive_params(h5, 100, 0.5).colour_slack == Catch::Approx(0.5).epsilon(1e-12));
        const auto h3 = validate({{0, 1, 2}}, 3, 3);
        REQUIRE(derive_params(h3, 100, 0.5).colour_slack == Catch::Approx(1.0).epsilon(1e-12));
    }
    SECTION("degenerate edge-free instance collapses the rejection budget") {
        const auto h = validate({}, 4, 3);
        const auto p = derive_params(h, 4, 0.5);
        REQUIRE(std::isinf(p.colour_slack));
        REQUIRE(p.scan_steps == 555);
        const double zeta = 0.5 / (4.0 * 555);
        REQUIRE(p.rejection_budget == static_cast<long long>(std::ceil(10.0 * std::log(4.0 / zeta))));
        REQUIRE(p.component_cap >= 1);
    }
    SECTION("overrides applied last") {
        const auto h = validate({{0, 1, 2}}, 3, 3);
        SamplerOverrides o;
        o.scan_steps = 7;
        o.component_cap = 0;
        o.image_size = 3;
        const auto p = derive_params(h, 9, 0.5, o);
        REQUIRE(p.scan_steps == 7);
        REQUIRE(p.call_error == Catch::Approx(0.5 / 28).epsilon(1e-15));
        REQUIRE(p.component_cap == 0);
        REQUIRE(p.image_size == 3);
        SamplerOverrides g;
        g.disable_guards = true;
        const auto pg = derive_params(h, 9, 0.5, g);
        REQUIRE(pg.component_cap == kUncapped);
        REQUIRE(pg.rejection_budget == kUncapped);
    }
    SECTION("argument validation") {
        const auto h = validate({{0, 1, 2}}, 3, 3);
        REQUIRE_THROWS_AS(derive_params(h, 0, 0.5), InvalidQError);
        REQUIRE_THROWS_AS(derive_params(h, 4, 0.0), InvalidInputError);
        REQUIRE_THROWS_AS(derive_params(h, 4, 1.0), InvalidInputError);
    }
}

TEST_CASE("rejection sampling is the exact conditional sampler") {
    SECTION("zero edges: product of the two lists, never fails") {
        const auto h = validate({}, 2, 3);
        const auto scheme = ProjectionScheme::with_image_size(13, 4); // bucket sizes 4,3,3,3
        ProjectedConfig y = ProjectedConfig::full(2);
        y.set(0, 2); // list size 3
        y.set(1, 1); // list size 4
        Component comp;
        comp.vertices = {0, 1};
        Rng rng(12);
        std::map<std::pair<int, int>, std::uint64_t> hist;
        const int draws = 120000;
        for (int i = 0; i < draws; ++i) {
            const auto x = rejection_sample(h, comp, scheme, y, 1, rng);
            REQUIRE(x.has_value());
            ++hist[{x->at(0), x->at(1)}];
        }
        REQUIRE(hist.size() == 12);
        std::vector<std::uint64_t> counts;
        for (const auto& [key, c] : hist) counts.push_back(c);
        const std::vector<double> expected(12, 1.0 / 12);
        REQUIRE(teststats::chi_square_pvalue(counts, expected) > 0.001);
    }
    SECTION("single edge, q=2: uniform over the six proper assignments") {
        const auto h = validate({{0, 1, 2}}, 3, 3);
        const auto scheme = ProjectionScheme::build(2);
        Component comp;
        comp.vertices = {0, 1, 2};
        comp.edges = {0};
        Rng rng(5);
        std::map<std::vector<int>, std::uint64_t> hist;
        const int draws = 200000;
        for (int i = 0; i < draws; ++i) {
            const auto x = rejection_sample(h, comp, scheme, ProjectedConfig::none(3), 1000, rng);
            REQUIRE(x.has_value());
            ++hist[{x->at(0), x->at(1), x->at(2)}];
        }
        REQUIRE(hist.size() == 6);
        double tv = 0;
        for (const auto& [key, c] : hist) tv += std::abs(static_cast<double>(c) / draws - 1.0 / 6);
        REQUIRE(tv / 2 <= 0.01);
    }
    SECTION("impossible lists always fail") {
        const auto h = validate({{0, 1, 2}}, 3, 3);
        const auto scheme = ProjectionScheme::with_image_size(4, 4); // singleton buckets
        ProjectedConfig y = ProjectedConfig::full(3, 2);
        Component comp;
        comp.vertices = {0, 1, 2};
        comp.edges = {0};
        Rng rng(1);
        REQUIRE_FALSE(rejection_sample(h, comp, scheme, y, 500, rng).has_value());
    }
}

TEST_CASE("sample subroutine guard behaviour") {
    const auto h = validate({{0, 1, 2}}, 4, 3);
    const auto scheme = ProjectionScheme::build(4);
    SECTION("forced component guard with cap zero") {
        SamplerOverrides o;
        o.component_cap = 0;
        const auto params = derive_params(h, 4, 0.5, o);
        SamplerScratch scratch;
        Rng rng(3);
        Colouring out(4);
        const std::vector<int> all{0, 1, 2, 3};
        const auto flag = sample_subroutine(h, scheme, all, ProjectedConfig::full(4, 1), params, rng, out, scratch);
        REQUIRE(flag == GuardFlag::oversized_component);
        for (int v = 0; v < 4; ++v) REQUIRE((out.at(v) >= 1 && out.at(v) <= 4));
    }
    SECTION("satisfied edges leave the target unconstrained and uniform") {
        SamplerOverrides o;
        o.disable_guards = true;
        const auto params = derive_params(h, 4, 0.5, o);
        ProjectedConfig y = ProjectedConfig::none(4);
        y.set(1, 1);
        y.set(2, 2); // the only edge is satisfied
        SamplerScratch scratch;
        Rng rng(9);
        Colouring out(4);
        const std::vector<int> target{0};
        std::vector<std::uint64_t> hist(4, 0);
        const int draws = 80000;
        for (int i = 0; i < draws; ++i) {
            const auto flag = sample_subroutine(h, scheme, target, y, params, rng, out, scratch);
            REQUIRE(flag == GuardFlag::none);
            ++hist[static_cast<std::size_t>(out.at(0) - 1)];
        }
        const std::vector<double> expected(4, 0.25);
        REQUIRE(teststats::chi_square_pvalue(hist, expected) > 0.001);
    }
    SECTION("single-vertex conditional matches the oracle marginal") {
        SamplerOverrides o;
        o.disable_guards = true;
        const auto params = derive_params(h, 4, 0.5, o);
        ProjectedConfig y = ProjectedConfig::none(4);
        y.set(1, 1);
        y.set(2, 1);
        y.set(3, 2);
        const auto oracle = conditional_marginal(h, scheme, 0, y);
        SamplerScratch scratch;
        Rng rng(42);
        Colouring out(4);
        const std::vector<int> target{0};
        std::vector<std::uint64_t> hist(4, 0);
        const int draws = 200000;
        for (int i = 0; i < draws; ++i) {
            sample_subroutine(h, scheme, target, y, params, rng, out, scratch);
            ++hist[static_cast<std::size_t>(out.at(0) - 1)];
        }
        ExactDistribution emp;
        emp.counts = hist;
        emp.total = draws;
        REQUIRE(tv_distance(emp, oracle) <= 0.01);
    }
}

TEST_CASE("run_scan") {
    const auto h = validate({{0, 1, 2}}, 3, 3);
    SECTION("zero steps: final colours live inside the initial buckets") {
        SamplerOverrides o;
        o.scan_steps = 0;
        o.disable_guards = true;
        for (std::uint64_t seed : {1ull, 2ull, 3ull, 17ull}) {
            const auto rep = run_scan(h, 4, 0.5, seed, o);
            // replay the initial bucket draw
            Rng replay(seed);
            const auto scheme = ProjectionScheme::build(4);
            for (int v = 0; v < h.n; ++v) {
                const int b0 = 1 + static_cast<int>(replay.bounded(2));
                REQUIRE(scheme.evaluate(rep.colouring.at(v)) == b0);
            }
        }
    }
    SECTION("fixed seed gives identical reports") {
        const auto a = run_scan(h, 4, 0.3, 77, {}, true);
        const auto b = run_scan(h, 4, 0.3, 77, {}, true);
        REQUIRE(a.colouring == b.colouring);
        REQUIRE(a.component_guard_count == b.component_guard_count);
        REQUIRE(a.rejection_guard_count == b.rejection_guard_count);
        REQUIRE(a.step_flags == b.step_flags);
        REQUIRE(a.step_flags.size() == static_cast<std::size_t>(a.params.scan_steps) + 1);
    }
    SECTION("guard dominance: disabled guards never flag and the final draw is exact given the buckets") {
        SamplerOverrides o;
        o.disable_guards = true;
        o.scan_steps = 8;
        const auto scheme = ProjectionScheme::build(4);
        std::map<std::vector<int>, std::vector<std::uint64_t>> by_bucket; // packed joint per bucket config
        const int runs = 150000;
        for (int i = 0; i < runs; ++i) {
            const auto rep = run_scan(h, 4, 0.5, 1000 + static_cast<std::uint64_t>(i), o);
            REQUIRE(rep.component_guard_count == 0);
            REQUIRE(rep.rejection_guard_count == 0);
            std::vector<int> bucket(3), colour(3);
            for (int v = 0; v < 3; ++v) {
                colour[static_cast<std::size_t>(v)] = rep.colouring.at(v);
                bucket[static_cast<std::size_t>(v)] = scheme.evaluate(rep.colouring.at(v));
            }
            auto& hist = by_bucket[bucket];
            if (hist.empty()) hist.assign(64, 0);
            ++hist[pack_colours(colour, 4)];
        }
        int groups_checked = 0;
        for (const auto& [bucket, hist] : by_bucket) {
            std::uint64_t total = 0;
            for (auto c : hist) total += c;
            if (total < 10000) continue;
            ++groups_checked;
            ProjectedConfig y = ProjectedConfig::full(3);
            for (int v = 0; v < 3; ++v) y.set(v, bucket[static_cast<std::size_t>(v)]);
            const auto oracle =
                marginal_on_set(h, lists_from_buckets(3, scheme, y), {0, 1, 2}, 4);
            ExactDistribution emp;
            emp.counts = hist;
            emp.total = total;
            REQUIRE(tv_distance(emp, oracle) <= 0.03);
        }
        REQUIRE(groups_checked >= 2);
    }
    SECTION("batch runner reproduces individual runs, threaded or not") {
        const auto batch = run_scan_batch(h, 4, 0.4, 50, 4);
        const auto threaded = run_scan_batch(h, 4, 0.4, 50, 4, {}, 2);
        for (int i = 0; i < 4; ++i) {
            const auto solo = run_scan(h, 4, 0.4, 50 + static_cast<std::uint64_t>(i));
            REQUIRE(batch[static_cast<std::size_t>(i)].colouring == solo.colouring);
            REQUIRE(threaded[static_cast<std::size_t>(i)].colouring == solo.colouring);
        }
    }
}
