#include <random>

#include "doctest.h"

#include "clk/arboricity.hpp"
#include "clk/errors.hpp"
#include "clk/generators.hpp"
#include "clk/scheme.hpp"
#include "oracles.hpp"

using namespace clk;

TEST_CASE("arboricity labels on forests and subdivided cliques") {
    auto forest = random_forest_union(200, 1, 3);
    auto build = build_arboricity(forest);
    CHECK(build.degeneracy <= 1);
    for (const auto& l : build.bundle.labels) CHECK(decode_arboricity_label(l).neighbors.size() <= 1);
    CHECK(build.within_budget);

    auto sub = build_arboricity(subdivided_clique(20));
    CHECK(sub.degeneracy <= 3);
    for (const auto& l : sub.bundle.labels) CHECK(decode_arboricity_label(l).neighbors.size() <= 3);
    CHECK(labels_injective(sub.bundle));
}

TEST_CASE("arboricity label layout") {
    ArboricityLabel l;
    l.id = 300;
    l.c1 = 2;
    l.c2 = 2;
    l.neighbors = {4, 900};
    l.masks = {{true, false, false, true}, {false, false, true, true}};
    l.colors = {true, false};
    l.loops = {false, true};
    auto bytes = encode_arboricity_label(l);
    // id(2) c1(1) c2(1) count(1) ids(1+2) then 2*4 + 2 + 2 = 12 bits -> 2 bytes.
    CHECK(bytes.size() == 10);
    auto back = decode_arboricity_label(bytes);
    CHECK(back.id == 300);
    CHECK(back.neighbors == l.neighbors);
    CHECK(back.masks == l.masks);
    CHECK(back.colors == l.colors);
    CHECK(back.loops == l.loops);
    CHECK(back.edge_to(4, 0));
    CHECK(back.edge_from(4, 1));
    CHECK(back.edge_to(900, 1));
    CHECK(back.edge_from(900, 1));
    CHECK_FALSE(back.edge_to(900, 0));
}

TEST_CASE("stars and paths differ by out-degree") {
    // A star's centre is peeled last, so every leaf stores its one edge.
    std::vector<std::pair<Vertex, Vertex>> star;
    for (Vertex v = 1; v < 50; ++v) star.emplace_back(0, v);
    auto s = build_arboricity(make_undirected(50, star));
    auto p = build_arboricity(oracle::path(50));
    CHECK(s.degeneracy == 1);
    CHECK(p.degeneracy == 1);
    // id(1) c1(1) c2(1) count(1) neighbour(1) + 2 mask bits -> 6 bytes max; isolated-owner labels have 5.
    CHECK(s.max_bits == 48);
    CHECK(p.max_bits == 48);
    CHECK(label_length_report(s.bundle).histogram.size() == 2);
}

TEST_CASE("arboricity decoder equals the naive model on random qf formulas") {
    std::mt19937_64 rng(31);
    for (int gi = 0; gi < 20; ++gi) {
        Palette pal{2, 2, true};
        auto g = random_forest_union(30 + rng() % 50, 1 + rng() % 4, rng(), pal);
        auto built = build_labels(g, BuildOptions{});
        CHECK(built.catalog.empty());
        LabeledGraph lg(read_bundle(write_bundle(built.bundle)), std::nullopt);
        oracle::Model model(g);
        for (int i = 0; i < 50; ++i) {
            std::size_t m = 1 + rng() % 3;
            auto f = random_qf_formula(rng, m, 2, 2, 2, 5);
            auto a = oracle::random_args(rng, g.size(), m);
            auto w = oracle::random_sets(rng, g.size(), 2, 0.05);
            auto before = lg.decoder().operations();
            CHECK(lg.ask(&f, a, w) == model.eval(f, a, w));
            std::size_t k = m + w[0].size() + w[1].size();
            CHECK(lg.decoder().operations() - before <= k * k);
        }
    }
}

TEST_CASE("arboricity decoder edge and membership queries") {
    auto g = random_forest_union(100, 2, 8);
    auto built = build_labels(g, BuildOptions{});
    LabeledGraph lg(built.bundle, std::nullopt);
    auto edge = parse_formula("[x,y] edge(x,y)");
    auto member = parse_formula("[x|Y] x in Y");
    std::mt19937_64 rng(1);
    for (int i = 0; i < 1000; ++i) {
        auto a = oracle::random_args(rng, 100, 2);
        CHECK(lg.ask(&edge, a, {}) == g.has_edge(a[0], a[1], 0));
    }
    std::vector<VertexSet> w{{3, 5, 9}};
    CHECK(lg.ask(&member, std::vector<Vertex>{5}, w));
    CHECK_FALSE(lg.ask(&member, std::vector<Vertex>{4}, w));
}

TEST_CASE("arboricity decoder rejects quantified and long-distance queries") {
    auto g = subdivided_clique(6);
    auto built = build_labels(g, BuildOptions{});
    LabeledGraph lg(built.bundle, std::nullopt);
    auto phi0 = parse_formula("[x,y] x!=y & E z. (z!=x & z!=y & edge(x,z) & edge(z,y))");
    std::vector<Vertex> a{0, 1};
    CHECK_THROWS_AS(lg.ask(&phi0, a, {}), UnsupportedQuery);
    auto d2 = parse_formula("[x,y] dist(x,y)<=2");
    CHECK_THROWS_AS(lg.ask(&d2, a, {}), UnsupportedQuery);
    auto d1 = parse_formula("[x,y] dist(x,y)<=1");
    CHECK_FALSE(lg.ask(&d1, a, {}));
    CHECK_THROWS_AS(lg.ask(nullptr, a, {}), InputError);
}

TEST_CASE("arboricity budget") {
    for (std::size_t n : {256u, 4096u, 65536u}) {
        auto g = random_forest_union(n, 2, n);
        auto b = build_arboricity(g);
        CHECK(b.budget_bits == arboricity_label_budget(n, b.degeneracy, g.vertex_palette_size()));
        CHECK(b.max_bits <= b.budget_bits);
    }
}
