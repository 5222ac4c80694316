#include <random>

#include "doctest.h"

#include "clk/cover.hpp"
#include "clk/errors.hpp"
#include "clk/generators.hpp"
#include "oracles.hpp"

using namespace clk;

namespace {

bool overlaps(const VertexSet& a, const VertexSet& b) {
    for (auto v : a) {
        if (std::binary_search(b.begin(), b.end(), v)) return true;
    }
    return false;
}

}  // namespace

TEST_CASE("ball cover examples") {
    auto edgeless = build_ball_cover(ColoredGraph(5, {}), 2);
    CHECK(edgeless.pieces.size() == 5);
    CHECK(edgeless.ell == 0);

    auto c12 = build_ball_cover(oracle::cycle(12), 1);
    CHECK(c12.pieces.size() == 12);
    for (const auto& p : c12.pieces) CHECK(p.size() == 3);
    CHECK(c12.ell == 4);
    CHECK(validate_cover(oracle::cycle(12), c12).ok);

    CHECK(build_ball_cover(oracle::complete(6), 3).pieces.size() == 1);
}

TEST_CASE("validate_cover") {
    auto g = oracle::cycle(12);
    auto cover = build_ball_cover(g, 1);
    cover.pieces.erase(cover.pieces.begin() + 5);
    normalize_cover(cover, g.size());
    auto rep = validate_cover(g, cover);
    CHECK_FALSE(rep.ok);
    CHECK(rep.ball_violations == 1);
    CHECK(rep.witness != kNoVertex);
    auto b = ball(g, rep.witness, 1);
    for (const auto& p : cover.pieces) CHECK_FALSE(std::includes(p.begin(), p.end(), b.begin(), b.end()));

    Cover whole;
    whole.r = 5;
    whole.pieces = {ball(g, 0, 12)};
    normalize_cover(whole, g.size());
    auto all = validate_cover(g, whole);
    CHECK(all.ok);
    CHECK(all.max_degree == 0);
    CHECK(all.width_status == "declared, unverified");

    auto tight = validate_cover(g, build_ball_cover(g, 1), 3);
    CHECK_FALSE(tight.ell_ok);
}

TEST_CASE("intersection graph equals pairwise overlap") {
    std::mt19937_64 rng(6);
    Cover disjoint;
    disjoint.pieces = {{0, 1}, {2}, {3, 4}};
    CHECK(intersection_graph(disjoint, 5).edges().empty());
    Cover two;
    two.pieces = {{0, 1}, {1, 2}};
    CHECK(undirected_pairs(intersection_graph(two, 3)).size() == 1);

    for (int i = 0; i < 30; ++i) {
        Cover c;
        std::size_t n = 30;
        for (int k = 0; k < 12; ++k) {
            std::vector<Vertex> piece;
            for (Vertex v = 0; v < n; ++v) {
                if (rng() % 8 == 0) piece.push_back(v);
            }
            if (piece.empty()) piece.push_back(static_cast<Vertex>(rng() % n));
            c.pieces.push_back(piece);
        }
        auto h = intersection_graph(c, n);
        for (Vertex a = 0; a < c.pieces.size(); ++a) {
            for (Vertex b = 0; b < c.pieces.size(); ++b) {
                CHECK(h.has_edge(a, b, 0) == (a != b && overlaps(c.pieces[a], c.pieces[b])));
            }
        }
    }
}

TEST_CASE("distance-m colorings") {
    auto check_proper = [](const ColoredGraph& h, std::uint32_t m) {
        auto col = distance_m_coloring(h, m);
        auto d = oracle::all_pairs(h);
        bool proper = true;
        for (Vertex a = 0; a < h.size(); ++a) {
            for (Vertex b = a + 1; b < h.size(); ++b) proper = proper && !(d[a][b] <= m && col[a] == col[b]);
        }
        CHECK(proper);
        return color_count(col);
    };
    CHECK(check_proper(ColoredGraph(6, {}), 2) == 1);
    CHECK(check_proper(oracle::path(10), 2) <= 3);
    CHECK(check_proper(oracle::cycle(5), 1) <= 3);
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        auto h = bounded_degree(40, 3, seed);
        for (std::uint32_t m = 1; m <= 3; ++m) {
            // Greedy uses at most maxdeg(H^m) + 1 colors.
            auto pm = power_graph(h, m);
            std::size_t maxdeg = 0;
            for (Vertex v = 0; v < pm.size(); ++v) maxdeg = std::max(maxdeg, pm.neighbors(v).size());
            CHECK(check_proper(h, m) <= maxdeg + 1);
        }
    }
}

TEST_CASE("kernels and inner radius") {
    auto g = oracle::cycle(12);
    std::vector<Vertex> all(12);
    for (Vertex v = 0; v < 12; ++v) all[v] = v;
    CHECK(kernel(g, all, 3) == all);
    auto piece = ball(g, 0, 2);
    CHECK(kernel(g, piece, 0) == piece);
    CHECK(kernel(g, piece, 1) == ball(g, 0, 1));
    auto ir = inner_radius(g, piece, 5);
    for (std::size_t i = 0; i < piece.size(); ++i) {
        Distance want = 2 - std::min<Distance>(distance(g, 0, piece[i]), 2);
        CHECK(ir[i] == want);
    }
}

TEST_CASE("unit-interval covers") {
    auto clique = unit_interval(10, 1000.0, 3);
    auto one = build_unit_interval_cover(clique.graph, clique.order, 1);
    CHECK(one.pieces.size() == 1);

    auto p = oracle::path(12);
    std::vector<Vertex> order(12);
    for (Vertex v = 0; v < 12; ++v) order[v] = v;
    auto spaced = build_unit_interval_cover_spaced(p, order, 1, 1);
    std::vector<VertexSet> want;
    for (Vertex v = 0; v < 12; ++v) want.push_back(ball(p, v, 2));
    std::sort(want.begin(), want.end());
    want.erase(std::unique(want.begin(), want.end()), want.end());
    auto got = spaced.pieces;
    std::sort(got.begin(), got.end());
    CHECK(got == want);
    CHECK(spaced.nice);

    CHECK_THROWS_AS(build_unit_interval_cover(p, std::vector<Vertex>{}, 1), InputError);

    std::size_t certified = 0, total = 0;
    for (std::uint64_t seed = 1; seed <= 40; ++seed) {
        for (Distance r = 1; r <= 3; ++r) {
            auto ig = unit_interval(150 + seed * 5, 1.5, seed);
            auto cover = build_unit_interval_cover(ig.graph, ig.order, r);
            auto rep = validate_cover(ig.graph, cover, 2 * r + 2);
            CHECK(rep.covers_vertices);
            CHECK(rep.ball_violations == 0);
            ++total;
            certified += rep.ok;
        }
    }
    CHECK(certified * 100 >= total * 95);
}

TEST_CASE("cover text format") {
    auto g = oracle::cycle(9);
    auto c = build_ball_cover(g, 1);
    c.g_profile = "3q";
    auto back = parse_cover(format_cover(c), 9);
    CHECK(back.pieces == c.pieces);
    CHECK(back.r == c.r);
    CHECK(back.g_profile == "3q");
    CHECK_THROWS_AS(parse_cover("r 1\npiece 0 99\n", 9), InputError);
}

TEST_CASE("basic local check equals brute force") {
    std::mt19937_64 rng(23);
    const char* psis[] = {"[x] E z. edge(x,z)", "[x] E z. E w. (z!=w & edge(x,z) & edge(x,w))",
                          "[x|Y] x in Y | col[0](x)", "[x] A z. (edge(x,z) -> E w. (w!=x & edge(z,w)))"};
    // Degree >= 1 on P10, t = 1, s = 2: the endpoints.
    CHECK(basic_local_check(oracle::path(10), parse_formula(psis[0]), 1, 2));
    CHECK_FALSE(basic_local_check(oracle::path(3), parse_formula(psis[0]), 1, 2));
    CHECK_FALSE(basic_local_check(ColoredGraph(3, {}), parse_formula(psis[0]), 1, 1));
    for (int i = 0; i < 200; ++i) {
        std::size_t n = 10 + rng() % 51;
        Palette pal{1, 1, false};
        ColoredGraph g = rng() % 2 ? bounded_degree(n, 3, rng(), pal) : random_forest_union(n, 1, rng(), pal);
        auto psi = parse_formula(psis[rng() % 4]);
        Distance t = 1 + rng() % 2;
        std::size_t s = 1 + rng() % 3;
        auto sets = oracle::random_sets(rng, n, psi.set_arity(), 0.2);
        LocalCheckStats stats;
        bool got = basic_local_check(g, psi, t, s, sets, &stats);
        CHECK(got == oracle::basic_local(g, psi, t, s, sets));
    }
}
