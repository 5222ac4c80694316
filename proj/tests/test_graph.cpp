#include <random>
#include <set>

#include "doctest.h"

#include "clk/errors.hpp"
#include "clk/generators.hpp"
#include "clk/graph.hpp"
#include "oracles.hpp"

using namespace clk;

TEST_CASE("ball examples") {
    auto p = oracle::path(5);
    CHECK(ball(p, 2, 1) == VertexSet{1, 2, 3});
    VertexSet x{0, 3};
    CHECK(ball(p, x, 0) == x);
    CHECK_THROWS_AS(ball(p, 7, 1), InputError);
}

TEST_CASE("ball and distance agree with Floyd-Warshall on random graphs") {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        auto g = gnp(20, 0.2, seed);
        auto d = oracle::all_pairs(g);
        for (Vertex s = 0; s < g.size(); ++s) {
            for (Distance t = 0; t <= 3; ++t) CHECK(ball(g, s, t) == oracle::ball(d, {s}, t));
            for (Vertex v = 0; v < g.size(); ++v) {
                Distance want = d[s][v] == oracle::kInf ? kUnreachable : d[s][v];
                CHECK(distance(g, s, v) == want);
            }
        }
    }
}

TEST_CASE("ball is monotone and composes") {
    std::mt19937_64 rng(3);
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        auto g = gnp(30, 0.08, seed);
        auto x = oracle::random_args(rng, g.size(), 3);
        auto xs = make_vertex_set(x);
        for (Distance t = 1; t <= 4; ++t) {
            auto small = ball(g, xs, t - 1);
            auto big = ball(g, xs, t);
            CHECK(std::includes(big.begin(), big.end(), small.begin(), small.end()));
            CHECK(big == ball(g, ball(g, xs, 1), t - 1));
        }
    }
}

TEST_CASE("distance examples") {
    ColoredGraph two(2, {});
    CHECK(distance(two, 0, 0) == 0);
    CHECK(distance(two, 0, 1) == kUnreachable);
    CHECK(distance(oracle::cycle(6), 0, 3) == 3);
    // Direction and color are ignored.
    ColoredGraph directed(3, {{0, 1, 2}, {2, 1, 0}});
    CHECK(distance(directed, 0, 2) == 2);
}

TEST_CASE("power graph") {
    auto p4 = oracle::path(4);
    auto sq = power_graph(p4, 2);
    auto pairs = undirected_pairs(sq);
    std::set<std::pair<Vertex, Vertex>> got(pairs.begin(), pairs.end());
    CHECK(got == std::set<std::pair<Vertex, Vertex>>{{0, 1}, {1, 2}, {2, 3}, {0, 2}, {1, 3}});
    CHECK(power_graph(oracle::complete(5), 3) == oracle::complete(5));
    CHECK_THROWS_AS(power_graph(p4, 0), InputError);

    ColoredGraph colored(3, {{0, 1, 4}, {1, 2, 1}});
    CHECK(power_graph(colored, 1) == oracle::path(3));

    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        auto g = gnp(25, 0.12, seed);
        auto d = oracle::all_pairs(g);
        for (std::uint32_t m = 1; m <= 3; ++m) {
            auto pg = power_graph(g, m);
            CHECK_FALSE(pg.has_loops());
            for (Vertex u = 0; u < g.size(); ++u) {
                for (Vertex v = 0; v < g.size(); ++v) {
                    bool want = u != v && d[u][v] <= m;
                    CHECK(pg.has_edge(u, v, 0) == want);
                }
            }
        }
    }
}

TEST_CASE("power of power on trees and general graphs") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        auto tree = random_forest_union(30, 1, seed);
        CHECK(power_graph(power_graph(tree, 2), 2) == power_graph(tree, 4));
        auto g = gnp(25, 0.1, seed);
        auto lhs = undirected_pairs(power_graph(power_graph(g, 2), 3));
        auto rhs = undirected_pairs(power_graph(g, 6));
        CHECK(std::includes(rhs.begin(), rhs.end(), lhs.begin(), lhs.end()));
    }
}

TEST_CASE("degeneracy orientation") {
    auto k4 = oracle::complete(4);
    CHECK(degeneracy(k4) == 3);
    CHECK(degeneracy(random_forest_union(50, 1, 4)) <= 1);
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        auto g = random_forest_union(10, 2, seed);
        CHECK(degeneracy(g) <= 3);
    }
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        Palette pal{2, 3, true};
        auto g = random_forest_union(60, 3, seed, pal);
        auto o = degeneracy_orientation(g);
        CHECK(o.max_out_degree <= 5);
        std::vector<Edge> back;
        for (Vertex v = 0; v < g.size(); ++v) {
            CHECK(o.out_neighbor_count(v) <= o.max_out_degree);
            for (const auto& e : o.out[v]) {
                back.push_back(e.forward ? Edge{v, e.neighbor, e.color} : Edge{e.neighbor, v, e.color});
            }
        }
        std::sort(back.begin(), back.end());
        std::vector<Edge> want(g.edges().begin(), g.edges().end());
        std::sort(want.begin(), want.end());
        CHECK(back == want);
    }
}

TEST_CASE("subdivide") {
    auto edge = subdivide(oracle::path(2));
    CHECK(edge.size() == 3);
    CHECK(undirected_pairs(edge).size() == 2);
    auto k4 = subdivide(oracle::complete(4));
    CHECK(k4.size() == 10);
    CHECK(undirected_pairs(k4).size() == 12);
    auto tri = subdivide(oracle::complete(3));
    CHECK(tri.size() == 6);
    for (Vertex v = 0; v < 6; ++v) CHECK(tri.neighbors(v).size() == 2);
    CHECK(distance(tri, 0, 1) == 2);
    CHECK_THROWS_AS(subdivide(ColoredGraph(2, {{0, 1, 0}})), InputError);

    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        auto g = gnp(12, 0.4, seed);
        auto s = subdivide(g);
        CHECK(s.size() == g.size() + undirected_pairs(g).size());
        CHECK(degeneracy(s) <= 3);
        auto d = oracle::all_pairs(s);
        for (Vertex u = 0; u < g.size(); ++u) {
            for (Vertex v = u + 1; v < g.size(); ++v) {
                bool mid = false;
                for (Vertex z = 0; z < s.size(); ++z) mid = mid || (d[u][z] == 1 && d[z][v] == 1);
                CHECK(g.has_edge(u, v, 0) == mid);
            }
        }
        // Bipartite: every cycle even, so no edge inside a BFS layer.
        for (const auto& e : s.edges()) {
            bool split = d[0][e.from] == oracle::kInf || d[0][e.from] % 2 != d[0][e.to] % 2;
            CHECK(split);
        }
    }
}

TEST_CASE("induced subgraph, removal, line graph") {
    auto c = oracle::cycle(5);
    std::vector<Vertex> keep{0, 1, 2};
    auto sub = induced_subgraph(c, keep);
    CHECK(sub.graph == oracle::path(3));
    CHECK(sub.to_parent == keep);
    auto rest = remove_vertices(c, std::vector<Vertex>{0});
    CHECK(rest.graph == oracle::path(4));
    CHECK(rest.to_parent == std::vector<Vertex>{1, 2, 3, 4});
    auto lg = line_graph(oracle::path(4));
    CHECK(lg == oracle::path(3));
    CHECK(line_graph(oracle::complete(3)) == oracle::complete(3));
}

TEST_CASE("graph text format") {
    ColoredGraph g(4, {{0, 1, 0}, {1, 0, 0}, {2, 3, 1}, {3, 3, 2}}, {{1}, {}, {0, 2}, {}});
    auto text = format_graph(g);
    CHECK(parse_graph(text) == g);
    CHECK(parse_graph("# c\nn 2\ne 0 1 0\n") == ColoredGraph(2, {{0, 1, 0}}));
    CHECK_THROWS_AS(parse_graph("e 0 1 0\n"), InputError);
    CHECK_THROWS_AS(parse_graph("n 2\ne 0 5 0\n"), InputError);
    CHECK_THROWS_AS(parse_graph("n 2\nzz\n"), InputError);
}

TEST_CASE("edges are a relation") {
    ColoredGraph g(2, {{0, 1, 0}, {0, 1, 0}, {0, 1, 1}});
    CHECK(g.edges().size() == 2);
    CHECK(g.has_edge(0, 1, 1));
    CHECK_FALSE(g.has_edge(1, 0, 1));
    CHECK_THROWS_AS(ColoredGraph(2, {{0, 2, 0}}), InputError);
}
