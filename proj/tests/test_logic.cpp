#include <random>

#include "doctest.h"

#include "clk/distance_type.hpp"
#include "clk/errors.hpp"
#include "clk/eval.hpp"
#include "clk/formula.hpp"
#include "clk/generators.hpp"
#include "clk/plan.hpp"
#include "oracles.hpp"

using namespace clk;

namespace {

const std::vector<std::string> kFree{"x", "y"};

// Random FO formula over free x, y and set Y; quantifiers bind z, w, u.
NodePtr random_node(std::mt19937_64& rng, std::vector<std::string>& scope, int depth) {
    auto var = [&] { return scope[rng() % scope.size()]; };
    int pick = static_cast<int>(rng() % (depth > 0 ? 11 : 6));
    switch (pick) {
    case 0: return f_eq(var(), var());
    case 1: return f_edge(rng() % 2, var(), var());
    case 2: return f_col(rng() % 2, var());
    case 3: return f_in(var(), "Y");
    case 4: return f_dist_le(var(), var(), rng() % 4);
    case 5: return f_dist_gt(var(), var(), rng() % 3);
    case 6: return f_not(random_node(rng, scope, depth - 1));
    case 7: return f_and({random_node(rng, scope, depth - 1), random_node(rng, scope, depth - 1)});
    case 8: return f_or({random_node(rng, scope, depth - 1), random_node(rng, scope, depth - 1)});
    case 9: return f_implies(random_node(rng, scope, depth - 1), random_node(rng, scope, depth - 1));
    default: {
        static const char* names[] = {"z", "w", "u"};
        std::string v = names[rng() % 3];
        scope.push_back(v);
        auto body = random_node(rng, scope, depth - 1);
        scope.pop_back();
        return rng() % 2 ? f_exists(v, body) : f_forall(v, body);
    }
    }
}

Formula random_formula(std::mt19937_64& rng, int depth) {
    std::vector<std::string> scope = kFree;
    return Formula(random_node(rng, scope, depth), kFree, {"Y"});
}

ColoredGraph random_graph(std::mt19937_64& rng, std::size_t n) {
    Palette pal{2, 2, true};
    return random_forest_union(n, 1 + rng() % 2, rng(), pal);
}

Sampler small_sampler(std::uint64_t seed, std::size_t n = 14) {
    Sampler s;
    s.graph = [n](std::mt19937_64& rng) { return random_forest_union(n, 2, rng()); };
    s.graphs = 6;
    s.per_graph = 25;
    s.seed = seed;
    s.set_density = 0.3;
    return s;
}

}  // namespace

TEST_CASE("parse and print round trip") {
    for (const char* text : {"x=y", "E z. (edge[1](x,z) & z in Y)", "[x,y|Y] !(dist(x,y)<=3) | col[2](x) -> x!=y",
                             "A z. E w. dist(z,w)>1", "true & false"}) {
        auto f = parse_formula(text);
        auto printed = print_formula(f);
        CHECK(parse_formula(printed) == f);
        CHECK(print_formula(parse_formula(printed)) == printed);
    }
    std::mt19937_64 rng(2);
    for (int i = 0; i < 200; ++i) {
        auto f = random_formula(rng, 4);
        CHECK(parse_formula(print_formula(f)) == f);
    }
    CHECK_THROWS_AS(parse_formula("E . x"), InputError);
    CHECK_THROWS_AS(parse_formula("edge(x,"), InputError);
    CHECK(parse_formula("[y,x] edge(x,y)").fo_params() == std::vector<std::string>{"y", "x"});
    CHECK(is_quantifier_free(parse_formula("x=y & x in Y")));
    CHECK_FALSE(is_quantifier_free(parse_formula("E z. z=x")));
}

TEST_CASE("eval_oracle examples") {
    auto p3 = oracle::path(3);
    auto phi0 = parse_formula("[x,y] x!=y & E z. (z!=x & z!=y & edge(x,z) & edge(z,y))");
    std::vector<Vertex> a02{0, 2}, a01{0, 1};
    CHECK(eval_oracle(p3, phi0, a02));
    CHECK_FALSE(eval_oracle(p3, phi0, a01));
    CHECK(eval_oracle(p3, parse_formula("x=x"), std::vector<Vertex>{1}));
    CHECK_THROWS(eval_oracle(p3, phi0, std::vector<Vertex>{0}));

    // Neighbourhood meets Y.
    std::mt19937_64 rng(8);
    auto f = parse_formula("[x|Y] E z. (z in Y & edge(x,z))");
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        auto g = gnp(8, 0.3, seed);
        for (int i = 0; i < 50; ++i) {
            auto a = oracle::random_args(rng, 8, 1);
            auto w = oracle::random_sets(rng, 8, 1, 0.4);
            bool want = false;
            for (auto z : w[0]) want = want || g.has_edge(a[0], z, 0);
            CHECK(eval_oracle(g, f, a, w) == want);
        }
    }
}

TEST_CASE("count_oracle examples") {
    CHECK(count_oracle(oracle::path(7), parse_formula("x=x")) == 7);
    CHECK(count_oracle(oracle::complete(4), parse_formula("edge(x,y)")) == 12);
    auto phi0 = parse_formula("[x,y] x!=y & E z. (z!=x & z!=y & edge(x,z) & edge(z,y))");
    CHECK(count_oracle(oracle::path(4), phi0) == 4);
    CHECK(count_oracle(oracle::path(4), parse_formula("E z. edge(z,z)")) == 0);
    CHECK(count_oracle(oracle::path(4), parse_formula("E z. z=z")) == 1);
}

TEST_CASE("evaluators agree with the naive model") {
    std::mt19937_64 rng(42);
    for (int gi = 0; gi < 30; ++gi) {
        auto g = random_graph(rng, 4 + rng() % 10);
        oracle::Model model(g);
        Evaluator guarded(g);
        Evaluator plain(g, EvalOptions{false});
        for (int i = 0; i < 20; ++i) {
            auto f = random_formula(rng, 3);
            auto w = oracle::random_sets(rng, g.size(), 1, 0.3);
            auto a = oracle::random_args(rng, g.size(), 2);
            bool want = model.eval(f, a, w);
            CHECK(guarded.holds(f, a, w) == want);
            CHECK(plain.holds(f, a, w) == want);
            CHECK(eval_oracle(g, f, a, w) == want);
            auto c = model.count(f, w);
            CHECK(guarded.count(f, w) == c);
            CHECK(count_oracle(g, f, w) == c);
        }
    }
}

TEST_CASE("dist atom equals its chain expansion") {
    auto chain = [](Distance k) {
        if (k == 0) return std::string("x=y");
        std::string s = "x=y | edge(x,y) | edge(y,x)";
        if (k >= 2) s += " | E z1. ((edge(x,z1) | edge(z1,x)) & (edge(z1,y) | edge(y,z1)))";
        if (k >= 3) {
            s += " | E z1. E z2. ((edge(x,z1) | edge(z1,x)) & (edge(z1,z2) | edge(z2,z1)) & (edge(z2,y) | edge(y,z2)))";
        }
        return "[x,y] " + s;
    };
    for (std::uint64_t seed = 1; seed <= 6; ++seed) {
        Palette pal{0, 1, true};
        auto g = random_forest_union(25, 2, seed, pal);
        for (Distance k = 0; k <= 3; ++k) {
            auto atom = parse_formula("[x,y] dist(x,y)<=" + std::to_string(k));
            auto expanded = parse_formula(chain(k));
            CHECK(count_oracle(g, atom) == count_oracle(g, expanded));
        }
    }
}

TEST_CASE("deleting W equals marking W") {
    // Relativising every quantifier to the complement of W reads G \ W.
    std::mt19937_64 rng(9);
    auto inside = parse_formula("[x,y] E z. (edge(x,z) & edge(z,y))");
    auto marked = parse_formula("[x,y|W] E z. (!(z in W) & edge(x,z) & edge(z,y))");
    for (int i = 0; i < 20; ++i) {
        auto g = gnp(15, 0.25, rng());
        auto w = oracle::random_sets(rng, 15, 1, 0.3);
        auto rest = remove_vertices(g, w[0]);
        for (Vertex a = 0; a < rest.graph.size(); ++a) {
            for (Vertex b = 0; b < rest.graph.size(); ++b) {
                std::vector<Vertex> local{a, b}, parent{rest.to_parent[a], rest.to_parent[b]};
                CHECK(eval_oracle(rest.graph, inside, local) == eval_oracle(g, marked, parent, w));
            }
        }
    }
}

TEST_CASE("distance types") {
    auto p10 = oracle::path(10);
    std::vector<Vertex> one{3}, same{4, 4}, far{0, 9};
    CHECK(distance_type(p10, one, 1).mask == 0);
    CHECK(distance_type(p10, same, 1).edge(0, 1));
    CHECK_FALSE(distance_type(p10, far, 1).edge(0, 1));
    for (std::size_t m = 1; m <= 4; ++m) CHECK(all_distance_types(m, 1).size() == (1u << pair_count(m)));

    std::mt19937_64 rng(4);
    for (int i = 0; i < 100; ++i) {
        auto g = gnp(20, 0.1, rng());
        auto d = oracle::all_pairs(g);
        std::size_t m = 1 + rng() % 3;
        Distance t = rng() % 2;
        auto a = oracle::random_args(rng, 20, m);
        auto delta = distance_type(g, a, t);
        for (std::size_t x = 0; x < m; ++x) {
            for (std::size_t y = x + 1; y < m; ++y) CHECK(delta.edge(x, y) == (d[a[x]][a[y]] <= 2 * t + 1));
        }
        for (const auto& other : all_distance_types(m, t)) {
            CHECK(eval_oracle(g, rho_formula(t, other), a) == (other == delta));
        }
        CHECK(parse_distance_type(delta.to_text(), m, t) == delta);
    }
    // Complete type on a clique; empty type inside one small component.
    auto k3 = oracle::complete(3);
    DistanceType full{3, 1, 0b111};
    CHECK(eval_oracle(k3, rho_formula(1, full), std::vector<Vertex>{0, 1, 2}));
    DistanceType none{2, 1, 0};
    CHECK_FALSE(eval_oracle(k3, rho_formula(1, none), std::vector<Vertex>{0, 1}));
}

TEST_CASE("validators") {
    auto edge = parse_formula("[x,y] edge(x,y)");
    CHECK(validate_t_connected(edge, 1, small_sampler(1)).ok);
    auto on_path = small_sampler(2);
    on_path.graph = [](std::mt19937_64&) { return oracle::path(40); };
    auto far = validate_t_connected(parse_formula("[x,y] dist(x,y)>5"), 1, on_path);
    CHECK_FALSE(far.ok);
    CHECK_FALSE(far.witness.empty());

    auto near_y = parse_formula("[x|Y] E z. (edge(x,z) & z in Y)");
    CHECK(validate_locality(near_y, 1, small_sampler(3)).ok);
    CHECK_FALSE(validate_locality(parse_formula("[x] E z. dist(x,z)>3"), 1, on_path).ok);

    auto phi0 = parse_formula("[x,y] x!=y & E z. (z!=x & z!=y & edge(x,z) & edge(z,y))");
    CHECK(validate_boundedness(phi0, 3, small_sampler(5)).ok);
    CHECK_FALSE(validate_boundedness(parse_formula("[x,y] dist(x,y)<=2"), 2, small_sampler(6)).ok);
}

TEST_CASE("connected truth localises to the 2t-ball of the first argument") {
    auto phi = parse_formula("[x,y] E z. (edge(x,z) & edge(z,y))");
    std::mt19937_64 rng(12);
    for (int i = 0; i < 30; ++i) {
        auto g = gnp(20, 0.15, rng());
        auto a = oracle::random_args(rng, 20, 2);
        auto b = induced_subgraph(g, ball(g, a[0], 4));
        auto from = b.from_parent(g.size());
        bool global = eval_oracle(g, phi, a);
        bool local = from[a[1]] != kNoVertex && eval_oracle(b.graph, phi, std::vector<Vertex>{from[a[0]], from[a[1]]});
        CHECK(global == local);
    }
}

TEST_CASE("plans") {
    auto phi0 = parse_formula("[x,y] x!=y & E z. (z!=x & z!=y & edge(x,z) & edge(z,y))");
    auto sampler = small_sampler(7, 20);
    sampler.per_graph = 80;

    auto trivial = parse_plan("kind general\nvars x y\nlocal l\nt 2\ncase 1-2\ncomp c : " + print_node(phi0.root()) +
                              "\nend\ncombine l\n");
    CHECK(validate_plan(trivial, phi0, sampler).ok);

    auto good = parse_plan(
        "kind local\nvars x y\nt 1\ncase 1-2\ncomp c : x!=y & E z. (z!=x & z!=y & edge(x,z) & edge(z,y))\n");
    auto report = validate_plan(good, phi0, sampler);
    CHECK(report.ok);
    CHECK(report.checked >= 400);

    auto wrong = parse_plan("kind local\nvars x y\nt 1\ncase 1-2\ncomp c : edge(x,y)\n");
    auto bad = validate_plan(wrong, phi0, sampler);
    CHECK_FALSE(bad.ok);
    CHECK_FALSE(bad.witness.empty());

    auto conj = parse_plan(conjunctive_plan_text(1, {"x", "y"}, {"Y"}, {{{"x"}, "x in Y"}, {{"y"}, "col[0](y)"}}));
    CHECK(conj.kind == PlanKind::Local);
    CHECK(conj.local.is_conjunctive());

    CHECK_THROWS_AS(parse_plan("kind local\nvars x\nt 1\ncomp c : edge(x,q)\n"), InputError);
}
