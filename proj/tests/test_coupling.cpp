#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include <hycol/coupling.hpp>
#include <hycol/oracle.hpp>

#include "support/stats.hpp"

using namespace hycol;

namespace {

std::vector<double> random_distribution(Rng& rng, int size) {
    std::vector<double> p(static_cast<std::size_t>(size));
    double sum = 0;
    for (auto& x : p) {
        x = rng.uniform01() + 1e-6;
        sum += x;
    }
    for (auto& x : p) x /= sum;
    return p;
}

} // namespace

TEST_CASE("maximal coupling") {
    Rng rng(21);
    SECTION("identical distributions always agree") {
        const std::vector<double> p{0.2, 0.5, 0.3};
        for (int i = 0; i < 20000; ++i) {
            const auto [x, y] = maximal_coupling(p, p, rng);
            REQUIRE(x == y);
        }
    }
    SECTION("disjoint supports never agree") {
        const std::vector<double> p{1, 0}, r{0, 1};
        for (int i = 0; i < 20000; ++i) {
            const auto [x, y] = maximal_coupling(p, r, rng);
            REQUIRE(x == 0);
            REQUIRE(y == 1);
        }
    }
    SECTION("half overlap agrees half the time") {
        const std::vector<double> p{0.5, 0.5}, r{1, 0};
        int agree = 0;
        const int draws = 100000;
        for (int i = 0; i < draws; ++i) {
            const auto [x, y] = maximal_coupling(p, r, rng);
            agree += x == y;
        }
        const double rate = static_cast<double>(agree) / draws;
        REQUIRE(std::abs(rate - 0.5) <= 4 * teststats::binomial_stderr(0.5, draws));
    }
    SECTION("marginals stay exact under the coupling") {
        const auto p = random_distribution(rng, 5);
        const auto r = random_distribution(rng, 5);
        std::vector<std::uint64_t> px(5, 0), ry(5, 0);
        const int draws = 200000;
        for (int i = 0; i < draws; ++i) {
            const auto [x, y] = maximal_coupling(p, r, rng);
            ++px[static_cast<std::size_t>(x)];
            ++ry[static_cast<std::size_t>(y)];
        }
        REQUIRE(teststats::chi_square_pvalue(px, p) > 0.001);
        REQUIRE(teststats::chi_square_pvalue(ry, r) > 0.001);
    }
    SECTION("disagreement frequency tracks the total variation distance") {
        for (int pair = 0; pair < 10; ++pair) {
            const auto p = random_distribution(rng, 4);
            const auto r = random_distribution(rng, 4);
            const double tv = tv_distance(std::span<const double>(p), std::span<const double>(r));
            int differ = 0;
            const int draws = 100000;
            for (int i = 0; i < draws; ++i) {
                const auto [x, y] = maximal_coupling(p, r, rng);
                differ += x != y;
            }
            const double rate = static_cast<double>(differ) / draws;
            const double sigma = teststats::binomial_stderr(tv, draws);
            REQUIRE(std::abs(rate - tv) <= 3 * sigma + 1e-9);
        }
    }
}

TEST_CASE("coupled scans") {
    const auto h = validate({{0, 1, 2}}, 4, 3);
    SECTION("equal initial states never diverge") {
        ProjectedConfig x0 = ProjectedConfig::full(4, 1);
        for (int v = 0; v < 4; ++v) x0.set(v, 1 + v % 2);
        const auto trace = run_coupled_scan(h, 4, x0, x0, 60, 5);
        for (const auto& diff : trace.discrepancy) REQUIRE(diff.empty());
    }
    SECTION("coalescence absorbs: once empty, always empty") {
        for (std::uint64_t seed = 1; seed <= 12; ++seed) {
            const auto trace = run_coupled_scan(h, 4, ProjectedConfig::full(4, 1), ProjectedConfig::full(4, 2),
                                                 80, seed);
            bool coalesced = false;
            for (const auto& diff : trace.discrepancy) {
                if (coalesced) REQUIRE(diff.empty());
                coalesced = coalesced || diff.empty();
            }
        }
    }
    SECTION("edge-free instance coalesces at each vertex's first update") {
        const auto free_h = validate({}, 4, 3);
        const auto trace = run_coupled_scan(free_h, 4, ProjectedConfig::full(4, 1), ProjectedConfig::full(4, 2),
                                             20, 9);
        // vertex v is updated at steps t with t % 4 == v; after one full sweep
        // every vertex has been updated once and the chains agree
        for (std::size_t t = 4; t < trace.discrepancy.size(); ++t) REQUIRE(trace.discrepancy[t].empty());
        for (std::size_t t = 1; t <= 4 && t < trace.discrepancy.size(); ++t) {
            for (int v : trace.discrepancy[t]) {
                bool updated = false;
                for (std::size_t i = 1; i <= t; ++i) updated = updated || static_cast<int>(i % 4) == v;
                REQUIRE_FALSE(updated);
            }
        }
    }
    SECTION("per-step update law matches the oracle conditional (marginal fidelity)") {
        const auto h3 = validate({{0, 1, 2}}, 3, 3);
        const auto scheme = ProjectionScheme::build(4);
        ProjectedConfig x = ProjectedConfig::full(3);
        x.set(0, 1);
        x.set(1, 1);
        x.set(2, 2);
        ProjectedConfig y = ProjectedConfig::full(3);
        y.set(0, 2);
        y.set(1, 1);
        y.set(2, 1);
        const int v = 0;
        ProjectedConfig x_rest = x;
        x_rest.unset(v);
        ProjectedConfig y_rest = y;
        y_rest.unset(v);
        const auto px = conditional_projected_marginal(h3, scheme, v, x_rest).probs();
        const auto py = conditional_projected_marginal(h3, scheme, v, y_rest).probs();
        Rng rng(31);
        std::vector<std::uint64_t> hx(px.size(), 0), hy(py.size(), 0);
        const int draws = 150000;
        for (int i = 0; i < draws; ++i) {
            const auto [a, b] = maximal_coupling(px, py, rng);
            ++hx[static_cast<std::size_t>(a)];
            ++hy[static_cast<std::size_t>(b)];
        }
        REQUIRE(teststats::chi_square_pvalue(hx, px) > 0.001);
        REQUIRE(teststats::chi_square_pvalue(hy, py) > 0.001);
    }
}

TEST_CASE("mixing curve") {
    const auto h = validate({{0, 1, 2}}, 4, 3);
    const auto points = mixing_curve(h, 4, 12, 60, 3, 4);
    SECTION("initial checkpoint reports full discrepancy for opposite constants") {
        for (const auto& pt : points)
            if (pt.step == 0) REQUIRE(pt.rate == 1.0);
    }
    SECTION("rows cover every checkpoint and vertex") {
        std::size_t rows = 0;
        for (const auto& pt : points) {
            REQUIRE(pt.step >= 0);
            REQUIRE(pt.step <= 12);
            REQUIRE(pt.vertex >= 0);
            REQUIRE(pt.vertex < 4);
            REQUIRE(pt.rate >= 0.0);
            REQUIRE(pt.rate <= 1.0);
            ++rows;
        }
        REQUIRE(rows == 4ull * 4ull); // checkpoints {0,4,8,12} x 4 vertices
    }
}
