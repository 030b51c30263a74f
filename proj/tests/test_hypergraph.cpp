#include <catch2/catch_amalgamated.hpp>

#include <map>
#include <set>
#include <sstream>

#include <hycol/hypergraph.hpp>
#include <hycol/rng.hpp>
#include <hycol/workbench.hpp>

#include "support/corpus.hpp"

using namespace hycol;

namespace {

ProjectedConfig buckets_on(int n, std::initializer_list<std::pair<int, int>> entries) {
    ProjectedConfig y = ProjectedConfig::none(n);
    for (auto [v, b] : entries) y.set(v, b);
    return y;
}

} // namespace

TEST_CASE("validate computes degree and simplicity") {
    SECTION("single edge") {
        const auto h = validate({{0, 1, 2}}, 3, 3);
        REQUIRE(h.max_degree == 1);
        REQUIRE(h.simple);
    }
    SECTION("two edges sharing one vertex") {
        const auto h = validate({{0, 1, 2}, {2, 3, 4}}, 5, 3);
        REQUIRE(h.max_degree == 2);
        REQUIRE(h.incidence[2].size() == 2);
        REQUIRE(h.simple);
    }
    SECTION("overlap of two vertices breaks simplicity") {
        const auto h = validate({{0, 1, 2}, {0, 1, 3}}, 4, 3);
        REQUIRE_FALSE(h.simple);
    }
    SECTION("bad arity and range rejected") {
        REQUIRE_THROWS_AS(validate({{0, 1}}, 3, 3), EdgeArityError);
        REQUIRE_THROWS_AS(validate({{0, 1, 1}}, 3, 3), EdgeArityError);
        REQUIRE_THROWS_AS(validate({{0, 1, 7}}, 3, 3), VertexOutOfRangeError);
    }
    SECTION("empty edge list allowed") {
        const auto h = validate({}, 4, 3);
        REQUIRE(h.max_degree == 0);
        REQUIRE(h.simple);
    }
    SECTION("incidence index is consistent with the edge list") {
        const auto h = validate({{0, 1, 2}, {2, 3, 4}, {4, 5, 6}}, 7, 3);
        for (int v = 0; v < h.n; ++v)
            for (int e : h.incidence[static_cast<std::size_t>(v)])
                REQUIRE(std::binary_search(h.edges[static_cast<std::size_t>(e)].begin(),
                                           h.edges[static_cast<std::size_t>(e)].end(), v));
        int pairs = 0;
        for (const auto& inc : h.incidence) pairs += static_cast<int>(inc.size());
        REQUIRE(pairs == h.edge_count() * h.k);
    }
}

TEST_CASE("pairwise intersections of simple instances stay at most one") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        GenSpec spec;
        spec.n = 12;
        spec.k = 3;
        spec.m = 6;
        spec.max_degree = 3;
        spec.seed = seed;
        spec.require_simple = true;
        const auto h = generate_instance(spec);
        REQUIRE(h.simple);
        for (int a = 0; a < h.edge_count(); ++a)
            for (int b = a + 1; b < h.edge_count(); ++b) {
                std::vector<int> common;
                std::set_intersection(h.edges[static_cast<std::size_t>(a)].begin(), h.edges[static_cast<std::size_t>(a)].end(),
                                      h.edges[static_cast<std::size_t>(b)].begin(), h.edges[static_cast<std::size_t>(b)].end(),
                                      std::back_inserter(common));
                REQUIRE(common.size() <= 1);
            }
    }
}

TEST_CASE("line graph adjacency is the nonempty-intersection relation") {
    SECTION("two edges, one shared vertex") {
        const auto h = validate({{0, 1, 2}, {2, 3, 4}}, 5, 3);
        const auto lg = line_graph(h);
        REQUIRE(lg.vertex_count() == 2);
        REQUIRE(lg.edge_count() == 1);
        REQUIRE(lg.adjacent(0, 1));
    }
    SECTION("single edge: no line-graph edges") {
        const auto h = validate({{0, 1, 2}}, 3, 3);
        REQUIRE(line_graph(h).edge_count() == 0);
    }
    SECTION("three edges pairwise sharing one vertex form a triangle") {
        const auto h = validate({{0, 1, 2}, {2, 3, 4}, {4, 5, 0}}, 6, 3);
        const auto lg = line_graph(h);
        REQUIRE(lg.edge_count() == 3);
        REQUIRE(lg.adjacent(0, 1));
        REQUIRE(lg.adjacent(1, 2));
        REQUIRE(lg.adjacent(0, 2));
    }
    SECTION("degree bounded by k * max_degree") {
        for (std::uint64_t seed = 1; seed <= 8; ++seed) {
            GenSpec spec;
            spec.n = 10;
            spec.k = 3;
            spec.m = 6;
            spec.max_degree = 3;
            spec.seed = seed;
            const auto h = generate_instance(spec);
            const auto lg = line_graph(h);
            REQUIRE(lg.max_degree() <= h.k * h.max_degree);
        }
    }
}

TEST_CASE("satisfied_by needs two domain vertices with different buckets") {
    const std::vector<int> e{0, 1, 2};
    REQUIRE(satisfied_by(e, buckets_on(6, {{0, 1}, {1, 2}})));
    REQUIRE_FALSE(satisfied_by(e, buckets_on(6, {{0, 1}, {1, 1}})));
    REQUIRE_FALSE(satisfied_by(e, buckets_on(6, {{5, 1}})));
    SECTION("monotone in the domain: extending never flips true to false") {
        Rng rng(5);
        const auto h = validate({{0, 1, 2}, {2, 3, 4}, {1, 3, 5}}, 6, 3);
        for (int trial = 0; trial < 200; ++trial) {
            ProjectedConfig y = ProjectedConfig::none(h.n);
            for (int v = 0; v < h.n; ++v)
                if (rng.uniform01() < 0.5) y.set(v, 1 + static_cast<int>(rng.bounded(2)));
            for (const auto& edge : h.edges) {
                const bool before = satisfied_by(edge, y);
                ProjectedConfig extended = y;
                for (int v = 0; v < h.n; ++v)
                    if (!extended.has(v) && rng.uniform01() < 0.5)
                        extended.set(v, 1 + static_cast<int>(rng.bounded(2)));
                if (before) REQUIRE(satisfied_by(edge, extended));
            }
        }
    }
}

TEST_CASE("pruned component discovery") {
    const auto path3 = validate({{0, 1, 2}, {2, 3, 4}, {4, 5, 6}}, 7, 3);
    SECTION("everything satisfied leaves the start isolated") {
        ProjectedConfig y = ProjectedConfig::full(7);
        for (int v = 0; v < 7; ++v) y.set(v, 1 + v % 2);
        // with alternating buckets every edge has a disagreeing pair
        const auto comp = pruned_component(path3, y, 0, kUncapped);
        REQUIRE(comp.vertices == std::vector<int>{0});
        REQUIRE(comp.edges.empty());
        REQUIRE_FALSE(comp.cap_exceeded);
    }
    SECTION("empty bucket domain keeps the full path") {
        const auto comp = pruned_component(path3, ProjectedConfig::none(7), 0, 10);
        REQUIRE(comp.edges == std::vector<int>{0, 1, 2});
        REQUIRE(comp.vertices == std::vector<int>{0, 1, 2, 3, 4, 5, 6});
        REQUIRE_FALSE(comp.cap_exceeded);
    }
    SECTION("cap=1 truncates after discovering two edges") {
        const auto comp = pruned_component(path3, ProjectedConfig::none(7), 0, 1);
        REQUIRE(comp.cap_exceeded);
        REQUIRE(comp.edges.size() == 2);
    }
    SECTION("isolated vertex yields empty edge set") {
        const auto h = validate({{0, 1, 2}}, 5, 3);
        const auto comp = pruned_component(h, ProjectedConfig::none(5), 4, kUncapped);
        REQUIRE(comp.vertices == std::vector<int>{4});
        REQUIRE(comp.edges.empty());
    }
}

TEST_CASE("uncapped discovery partitions the vertices like union-find") {
    Rng rng(17);
    for (std::uint64_t seed = 1; seed <= 12; ++seed) {
        GenSpec spec;
        spec.n = 9;
        spec.k = 3;
        spec.m = 5;
        spec.max_degree = 3;
        spec.seed = seed;
        const auto h = generate_instance(spec);
        ProjectedConfig y = ProjectedConfig::none(h.n);
        for (int v = 0; v < h.n; ++v)
            if (rng.uniform01() < 0.7) y.set(v, 1 + static_cast<int>(rng.bounded(2)));
        const auto roots = testcorpus::union_find_components(h, y);
        std::map<int, std::set<int>> expected;
        for (int v = 0; v < h.n; ++v) expected[roots[static_cast<std::size_t>(v)]].insert(v);

        std::set<std::set<int>> found;
        PruneScratch scratch;
        scratch.begin_pass(h);
        for (int v = 0; v < h.n; ++v) {
            if (scratch.vertex_seen(v)) continue;
            const auto comp = pruned_component_marked(h, y, v, kUncapped, scratch);
            found.insert(std::set<int>(comp.vertices.begin(), comp.vertices.end()));
        }
        std::set<std::set<int>> expected_sets;
        for (const auto& [root, members] : expected) expected_sets.insert(members);
        REQUIRE(found == expected_sets);
    }
}

TEST_CASE("instance text round-trips") {
    GenSpec spec;
    spec.n = 8;
    spec.k = 3;
    spec.m = 4;
    spec.max_degree = 2;
    spec.seed = 5;
    const auto h = generate_instance(spec);
    const std::string text = write_instance(h);
    const auto back = parse_instance(text);
    REQUIRE(back.n == h.n);
    REQUIRE(back.k == h.k);
    REQUIRE(back.edges == h.edges);
    REQUIRE(write_instance(back) == text);

    SECTION("comments and blank lines are skipped") {
        const std::string annotated = "# instance\n\n" + text;
        const auto again = parse_instance(annotated);
        REQUIRE(again.edges == h.edges);
    }
    SECTION("parse failures") {
        REQUIRE_THROWS_AS(parse_instance(""), ParseError);
        REQUIRE_THROWS_AS(parse_instance("3 1 3\n0 1\n"), ParseError);
        REQUIRE_THROWS_AS(parse_instance("3 2 3\n0 1 2\n"), ParseError);
    }
}
