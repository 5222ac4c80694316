#include <cmath>
#include <random>

#include "doctest.h"

#include "clk/errors.hpp"
#include "clk/generators.hpp"
#include "clk/piece.hpp"
#include "oracles.hpp"

using namespace clk;

namespace {

std::size_t ceil_log2(std::size_t n) {
    std::size_t k = 0;
    while ((std::size_t{1} << k) < n) ++k;
    return k;
}

}  // namespace

TEST_CASE("centroid examples") {
    auto single = centroid_decomposition(ColoredGraph(1, {}));
    CHECK(single[0].size() == 1);
    CHECK(single[0][0].dist == 0);
    auto p2 = centroid_decomposition(oracle::path(2));
    CHECK(p2[0][0].centroid == p2[1][0].centroid);
    CHECK_THROWS_AS(centroid_decomposition(oracle::cycle(4)), InputError);

    CentroidLabeler lab;
    auto two_trees = make_undirected(4, std::vector<std::pair<Vertex, Vertex>>{{0, 1}, {2, 3}});
    auto built = lab.build(0, two_trees);
    CHECK(centroid_distance(built.sublabels[0], built.sublabels[0]) == 0);
    CHECK(centroid_distance(built.sublabels[0], built.sublabels[2]) == kUnreachable);
    CHECK(centroid_distance(built.sublabels[0], built.sublabels[1]) == 1);
    auto other = lab.build(1, two_trees);
    CHECK_THROWS_AS(centroid_distance(built.sublabels[0], other.sublabels[1]), WrongPiece);
}

TEST_CASE("centroid distances are exact on random forests") {
    std::mt19937_64 rng(77);
    CentroidLabeler lab;
    for (int i = 0; i < 100; ++i) {
        std::size_t n = 2 + rng() % 400;
        auto f = random_forest_union(n, 1, rng());
        if (rng() % 2) f = remove_vertices(f, std::vector<Vertex>{static_cast<Vertex>(rng() % n)}).graph;
        auto built = lab.build(0, f);
        auto d = oracle::all_pairs(f);
        for (const auto& s : built.sublabels) {
            CHECK(decode_centroid_label(s).size() <= ceil_log2(f.size()) + 1);
        }
        for (int q = 0; q < 50; ++q) {
            auto a = oracle::random_args(rng, f.size(), 3);
            Distance want = d[a[0]][a[1]] == oracle::kInf ? kUnreachable : d[a[0]][a[1]];
            auto uv = centroid_distance(built.sublabels[a[0]], built.sublabels[a[1]]);
            CHECK(uv == want);
            CHECK(uv == centroid_distance(built.sublabels[a[1]], built.sublabels[a[0]]));
            auto uw = centroid_distance(built.sublabels[a[0]], built.sublabels[a[2]]);
            auto wv = centroid_distance(built.sublabels[a[2]], built.sublabels[a[1]]);
            if (uw != kUnreachable && wv != kUnreachable) CHECK(uv <= uw + wv);
        }
    }
}

TEST_CASE("centroid labels on a 2000-vertex tree") {
    auto f = random_forest_union(2000, 1, 5);
    CentroidLabeler lab;
    auto built = lab.build(0, f);
    for (const auto& s : built.sublabels) {
        CHECK(decode_centroid_label(s).size() <= 12);
        double l = std::log2(2000.0);
        CHECK(8.0 * s.size() <= 16.0 * l * l);
    }
}

TEST_CASE("catalog labeler") {
    CatalogLabeler lab;
    auto k3 = oracle::complete(3);
    auto built = lab.build(4, k3);
    auto piece = lab.prepare(4, built.section);
    ByteReader r(built.section);
    CHECK(decode_graph(r) == k3);
    CHECK(piece->count(parse_formula("edge(x,y)"), {}) == 6);
    CHECK_THROWS_AS(lab.build(0, ColoredGraph()), InputError);

    auto elsewhere = lab.build(5, k3);
    std::vector<ByteView> wrong{elsewhere.sublabels[0]};
    CHECK_THROWS_AS(piece->holds(parse_formula("x=x"), wrong, {}), WrongPiece);

    auto one = lab.build(0, ColoredGraph(1, {}, {{1}}));
    auto p1 = lab.prepare(0, one.section);
    std::vector<ByteView> arg{one.sublabels[0]};
    CHECK(p1->holds(parse_formula("col[1](x)"), arg, {}));
    CHECK_FALSE(p1->holds(parse_formula("E z. z!=x"), arg, {}));

    std::mt19937_64 rng(3);
    for (int i = 0; i < 100; ++i) {
        Palette pal{2, 2, true};
        auto g = random_forest_union(1 + rng() % 30, 2, rng(), pal);
        auto b = lab.build(static_cast<std::uint32_t>(i), g);
        ByteReader rr(b.section);
        CHECK(decode_graph(rr) == g);
        auto p = lab.prepare(static_cast<std::uint32_t>(i), b.section);
        auto f = parse_formula("[x|Y] E z. (z in Y & (edge[0](x,z) | edge[1](z,x)))");
        auto a = oracle::random_args(rng, g.size(), 1);
        auto w = oracle::random_sets(rng, g.size(), 1, 0.3);
        SetSublabels ws(1);
        for (auto v : w[0]) ws[0].push_back(b.sublabels[v]);
        std::vector<ByteView> args{b.sublabels[a[0]]};
        oracle::Model model(g);
        CHECK(p->holds(f, args, ws) == model.eval(f, a, w));
        CHECK(p->count(f, ws) == model.count(f, w));
    }
}

TEST_CASE("labelers agree on distance queries over forests") {
    CatalogLabeler cat;
    CentroidLabeler cen;
    auto f = parse_formula("[x,y|Y] dist(x,y)<=3 & !(x in Y)");
    std::mt19937_64 rng(19);
    for (int i = 0; i < 20; ++i) {
        auto g = random_forest_union(60, 1, rng());
        auto a = cat.build(0, g), b = cen.build(0, g);
        auto pa = cat.prepare(0, a.section);
        auto pb = cen.prepare(0, b.section);
        for (int q = 0; q < 30; ++q) {
            auto x = oracle::random_args(rng, 60, 2);
            auto w = oracle::random_sets(rng, 60, 1, 0.2);
            SetSublabels wa(1), wb(1);
            for (auto v : w[0]) {
                wa[0].push_back(a.sublabels[v]);
                wb[0].push_back(b.sublabels[v]);
            }
            std::vector<ByteView> xa{a.sublabels[x[0]], a.sublabels[x[1]]}, xb{b.sublabels[x[0]], b.sublabels[x[1]]};
            CHECK(pa->holds(f, xa, wa) == pb->holds(f, xb, wb));
            CHECK(pa->distance(xa[0], xa[1]) == pb->distance(xb[0], xb[1]));
        }
    }
    auto built = cen.build(0, oracle::path(3));
    auto p = cen.prepare(0, built.section);
    std::vector<ByteView> x{built.sublabels[0], built.sublabels[1]};
    CHECK_THROWS_AS(p->holds(parse_formula("[x,y] edge(x,y)"), x, {}), UnsupportedQuery);
    CHECK_THROWS_AS(p->count(parse_formula("[x,y] dist(x,y)<=1"), {}), UnsupportedQuery);
}
