#include <random>

#include "doctest.h"

#include "clk/cwd.hpp"
#include "clk/errors.hpp"
#include "oracles.hpp"

using namespace clk;

TEST_CASE("term examples") {
    auto two = eval_term(parse_term("oplus(const[1]{},const[1]{})"));
    CHECK(two.graph.size() == 2);
    CHECK(two.graph.edges().empty());

    auto one = eval_term(term_eta(3, 1, 2, term_union(term_const(1), term_const(2))));
    CHECK(one.graph.edges().size() == 1);
    CHECK(one.graph.has_edge(0, 1, 3));

    auto c = eval_term(parse_term("const[2]{p1,e0}"));
    CHECK(c.labels == std::vector<std::uint32_t>{2});
    CHECK(c.graph.has_color(0, 1));
    CHECK(c.graph.has_edge(0, 0, 0));

    // Triangle staircase with labels {1,2}.
    auto k2 = term_eta(0, 2, 1, term_eta(0, 1, 2, term_union(term_const(1), term_const(2))));
    auto step = term_union(term_rho(2, 1, k2), term_const(2));
    auto k3 = term_eta(0, 2, 1, term_eta(0, 1, 2, step));
    CHECK(eval_term(k3).graph == oracle::complete(3));
}

TEST_CASE("malformed terms are structural errors") {
    CHECK_THROWS_AS(eval_term(term_eta(0, 1, 1, term_const(1))), StructuralError);
    CHECK_THROWS_AS(eval_term(term_rho(2, 2, term_const(1))), StructuralError);
    CHECK_THROWS_AS(eval_term(term_const(0)), StructuralError);
    CHECK_THROWS_AS(eval_term(term_union(term_const(1), nullptr)), StructuralError);
    CHECK_THROWS(parse_term("oplus(const[1]{}"));
}

TEST_CASE("clique terms") {
    CHECK_THROWS(clique_term(0));
    CHECK(eval_term(clique_term(1)).graph.size() == 1);
    CHECK(undirected_pairs(eval_term(clique_term(2)).graph).size() == 1);
    CHECK(undirected_pairs(eval_term(clique_term(7)).graph).size() == 21);
    for (std::size_t n = 1; n <= 50; ++n) {
        auto t = clique_term(n);
        CHECK(term_width(t) <= 2);
        auto g = eval_term(t).graph;
        CHECK(g == oracle::complete(n));
        // Induced subgraphs of a clique are cliques.
        std::vector<Vertex> half;
        for (Vertex v = 0; v < n; v += 2) half.push_back(v);
        CHECK(induced_subgraph(g, half).graph == oracle::complete(half.size()));
    }
}

TEST_CASE("random term invariants") {
    std::mt19937_64 rng(17);
    for (int i = 0; i < 200; ++i) {
        std::size_t leaves = 1 + rng() % 25;
        std::uint32_t k = 2 + rng() % 3;
        auto t = random_term(rng, leaves, k);
        auto v = eval_term(t);
        CHECK(v.graph.size() == leaves);
        CHECK(term_leaves(t) == leaves);
        CHECK(term_width(t) <= k);

        Color c = rng() % 2;
        std::uint32_t a = 1 + rng() % k, b = 1 + (a % k);
        auto once = eval_term(term_eta(c, a, b, t));
        auto twice = eval_term(term_eta(c, a, b, term_eta(c, a, b, t)));
        CHECK(once.graph == twice.graph);
        CHECK(once.labels == twice.labels);
        // Every label-a vertex points to every other label-b vertex.
        for (Vertex x = 0; x < leaves; ++x) {
            for (Vertex y = 0; y < leaves; ++y) {
                if (x != y && v.labels[x] == a && v.labels[y] == b) CHECK(once.graph.has_edge(x, y, c));
            }
        }

        auto relabeled = eval_term(term_rho(a, b, t));
        CHECK(relabeled.graph == v.graph);
        for (Vertex x = 0; x < leaves; ++x) {
            CHECK(relabeled.labels[x] == (v.labels[x] == a ? b : v.labels[x]));
        }

        auto text = print_term(t);
        CHECK(term_equal(parse_term(text), t));
        CHECK(print_term(parse_term(text)) == text);
    }
}

TEST_CASE("hnm graphs") {
    for (std::size_t m = 1; m <= 5; ++m) {
        CHECK(hnm_graph(1, m, E2Mode::Strict) == oracle::complete(m));
    }
    auto h = hnm_graph(4, 4, E2Mode::Strict);
    CHECK(h.size() == 16);
    for (std::size_t i = 0; i < 4; ++i) {
        std::vector<Vertex> col;
        for (Vertex j = 0; j < 4; ++j) col.push_back(static_cast<Vertex>(i * 4 + j));
        CHECK(induced_subgraph(h, col).graph == oracle::complete(4));
    }

    // m = 1: E2 display verbatim gives l = i+1..min(m, n) = nothing in strict mode.
    for (std::size_t n = 1; n <= 6; ++n) {
        auto strict = hnm_graph(n, 1, E2Mode::Strict);
        auto consecutive = hnm_graph(n, 1, E2Mode::Consecutive);
        CHECK(strict.size() == n);
        std::vector<std::pair<Vertex, Vertex>> want_strict, want_consecutive;
        for (std::size_t i = 1; i < n; ++i) {
            for (std::size_t l = i + 1; l <= std::min<std::size_t>(1, n); ++l) {
                want_strict.emplace_back(static_cast<Vertex>(i - 1), static_cast<Vertex>(l - 1));
            }
            want_consecutive.emplace_back(static_cast<Vertex>(i - 1), static_cast<Vertex>(i));
        }
        CHECK(undirected_pairs(strict) == want_strict);
        CHECK(undirected_pairs(consecutive) == want_consecutive);
    }

    // Strict H(4,4): v(i,j) joins v(l,j) for every l in i+1..4.
    for (std::size_t i = 1; i <= 4; ++i) {
        for (std::size_t l = 1; l <= 4; ++l) {
            for (std::size_t j = 1; j <= 4; ++j) {
                Vertex a = static_cast<Vertex>((i - 1) * 4 + j - 1), b = static_cast<Vertex>((l - 1) * 4 + j - 1);
                if (i != l) CHECK(h.has_edge(a, b, 0));
            }
        }
    }
    auto hc = hnm_graph(4, 4, E2Mode::Consecutive);
    CHECK_FALSE(hc.has_edge(0, 8, 0));
    CHECK(hc.has_edge(0, 4, 0));
}
