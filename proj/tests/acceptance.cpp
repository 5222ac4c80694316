// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "clk/arboricity.hpp"
#include "clk/codec.hpp"
#include "clk/cover.hpp"
#include "clk/cwd.hpp"
#include "clk/errors.hpp"
#include "clk/expansion.hpp"
#include "clk/generators.hpp"
#include "clk/harness.hpp"
#include "clk/piece.hpp"
#include "clk/plan.hpp"
#include "clk/scheme.hpp"
#include "clk/schemes.hpp"
#include "oracles.hpp"

using namespace clk;

namespace {

struct Outcome {
    bool ok = true;
    std::ostringstream detail;

    void fail(const std::string& why) {
        if (ok) detail << "first failure: " << why << "; ";
        ok = false;
    }
};

LabeledGraph reload(const BuildResult& built) {
    auto bundle = read_bundle(write_bundle(built.bundle));
    std::optional<Catalog> catalog;
    if (!built.catalog.empty()) catalog = read_catalog(write_catalog(built.catalog));
    return LabeledGraph(std::move(bundle), std::move(catalog));
}

BuildOptions options(SchemeId scheme, const std::string& plan) {
    BuildOptions o;
    o.scheme = scheme;
    o.plan = parse_plan(plan);
    return o;
}

std::size_t varbytes(std::uint64_t v) {
    std::size_t n = 1;
    while (v >= 128) {
        v >>= 7;
        ++n;
    }
    return n;
}

std::size_t ceil_log2(std::size_t n) {
    std::size_t k = 0;
    while ((std::size_t{1} << k) < n) ++k;
    return k;
}

// Degeneracy by repeated removal of a minimum-degree vertex.
std::size_t degeneracy_oracle(const ColoredGraph& g) {
    std::vector<std::set<Vertex>> adj(g.size());
    for (const auto& e : g.edges()) {
        if (e.from == e.to) continue;
        adj[e.from].insert(e.to);
        adj[e.to].insert(e.from);
    }
    std::set<std::pair<std::size_t, Vertex>> queue;
    for (Vertex v = 0; v < g.size(); ++v) queue.emplace(adj[v].size(), v);
    std::size_t d = 0;
    while (!queue.empty()) {
        auto [deg, v] = *queue.begin();
        queue.erase(queue.begin());
        d = std::max(d, deg);
        for (auto u : adj[v]) {
            queue.erase({adj[u].size(), u});
            adj[u].erase(v);
            queue.emplace(adj[u].size(), u);
        }
        adj[v].clear();
    }
    return d;
}

struct Line {
    double slope = 0, intercept = 0, max_residual = 0;
};

Line least_squares(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    Line l;
    l.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    l.intercept = (sy - l.slope * sx) / n;
    for (std::size_t i = 0; i < x.size(); ++i) {
        l.max_residual = std::max(l.max_residual, std::abs(y[i] - (l.slope * x[i] + l.intercept)));
    }
    return l;
}

// Random forest: a random tree with about a tenth of its vertices deleted.
ColoredGraph random_forest(std::mt19937_64& rng, std::size_t n, const Palette& palette = {}) {
    auto tree = random_forest_union(n, 1, rng(), palette);
    if (rng() % 2 == 0 || n < 4) return tree;
    std::vector<Vertex> drop;
    for (Vertex v = 0; v < n; ++v) {
        if (rng() % 10 == 0) drop.push_back(v);
    }
    if (drop.size() == n) drop.pop_back();
    return remove_vertices(tree, drop).graph;
}

Outcome criterion1() {
    Outcome out;
    std::mt19937_64 rng(101);
    std::size_t instances = 0, mismatches = 0;
    for (int gi = 0; gi < 50; ++gi) {
        Palette pal{2, 2, true};
        std::size_t n = 2 + rng() % 299;
        std::size_t k = 1 + rng() % 4;
        auto g = random_forest_union(n, k, rng(), pal);
        LabeledGraph lg = reload(build_labels(g, BuildOptions{}));
        oracle::Model model(g);
        for (int i = 0; i < 20; ++i) {
            std::size_t m = 1 + rng() % 3;
            auto f = random_qf_formula(rng, m, 2, 2, 2, 1 + rng() % 6);
            auto a = oracle::random_args(rng, n, m);
            auto w = oracle::random_sets(rng, n, 2, 0.05);
            ++instances;
            if (lg.ask(&f, a, w) != model.eval(f, a, w)) {
                ++mismatches;
                out.fail(print_formula(f));
            }
        }
    }
    out.detail << instances << " instances, " << mismatches << " mismatches";
    if (instances < 1000) out.fail("too few instances");
    return out;
}

Outcome criterion2() {
    Outcome out;
    std::vector<double> x, y;
    std::size_t worst_d = 0;
    for (std::size_t e = 8; e <= 16; ++e) {
        const std::size_t n = std::size_t{1} << e;
        Palette pal{2, 1, false};
        auto g = random_forest_union(n, 2, 1000 + e, pal);
        auto built = build_labels(g, BuildOptions{});
        const std::size_t d = degeneracy_oracle(g);
        worst_d = std::max(worst_d, d);
        const std::size_t bits = label_length_report(built.bundle).max_bits;
        const std::size_t bound = (d + 1) * 8 * varbytes(n) + pal.vertex_colors + 64;
        const std::size_t catalog = built.report.at("sizes").at("catalog_bytes").get<std::size_t>();
        out.detail << "n=2^" << e << " d=" << d << " bits=" << bits << "/" << bound << "; ";
        if (bits > bound) out.fail("n=2^" + std::to_string(e) + " exceeds the bound");
        if (catalog != 0 || !built.catalog.empty()) out.fail("nonempty catalog");
        x.push_back(static_cast<double>(e));
        y.push_back(static_cast<double>(bits));
    }
    // Every field is a varint of at most ceil(log2(n)/7) bytes, so the label
    // is affine in log2 n up to one byte of rounding per stored id.
    auto fit = least_squares(x, y);
    const double allowed = 8.0 * static_cast<double>(worst_d + 1);
    out.detail << "fit slope=" << fit.slope << " max_residual=" << fit.max_residual << " (allowed " << allowed << ")";
    if (fit.slope <= 0) out.fail("labels do not grow with log n");
    if (fit.max_residual > allowed) out.fail("growth is not affine in log n");
    return out;
}

Outcome criterion3() {
    Outcome out;
    const std::string phi0 = "E z. (edge(x,z) & edge(z,y))";
    const std::string sentence = "E x. E y. E z. (x in Y & y in Y & edge(x,z) & edge(z,y) & x != y)";
    const std::string plans[] = {
        "kind bounded\nvars x y\nquery " + phi0 + "\np 3\nbasic c : " + phi0 + "\ncombine c\n",
        "kind bounded\nvars x y\nquery dist(x,y)<=2\np 3\nbasic c : dist(x,y)<=2\ncombine c\n",
        "kind bounded\nsets Y\nquery " + sentence + "\np 3\nbasic c : " + sentence + "\ncombine c\n",
    };
    std::mt19937_64 rng(303);
    std::size_t counts[3] = {0, 0, 0}, mismatches = 0, worst = 0, bound_at_worst = 0;
    for (int gi = 0; gi < 30; ++gi) {
        auto g = random_forest(rng, 20 + rng() % 101);
        oracle::Model model(g);
        for (int pi = 0; pi < 3; ++pi) {
            auto o = options(SchemeId::Expansion, plans[pi]);
            auto built = build_labels(g, o);
            const auto parts = built.report.at("parts").get<std::size_t>();
            const auto most = built.report.at("max_memberships").get<std::size_t>();
            const auto bound = binomial(parts == 0 ? 0 : parts - 1, 2);
            if (most > bound) out.fail("membership lists exceed C(N-1, p-1)");
            if (most >= worst) {
                worst = most;
                bound_at_worst = bound;
            }
            LabeledGraph lg = reload(built);
            const auto& q = *o.plan->query;
            for (int i = 0; i < 10; ++i) {
                auto a = oracle::random_args(rng, g.size(), q.arity());
                if (a.size() == 2 && rng() % 2) {
                    auto b = ball(g, a[0], 2);
                    a[1] = b[rng() % b.size()];
                }
                auto w = oracle::random_sets(rng, g.size(), q.set_arity(), 0.1);
                ++counts[pi];
                if (lg.ask(nullptr, a, w) != model.eval(q, a, w)) {
                    ++mismatches;
                    out.fail(plans[pi]);
                }
            }
        }
    }
    out.detail << "phi0 " << counts[0] << ", dist<=2 " << counts[1] << ", m=0 sentence " << counts[2]
               << " instances, " << mismatches << " mismatches; largest membership list " << worst << " (bound "
               << bound_at_worst << ")";
    if (counts[0] < 300 || counts[1] < 300) out.fail("too few instances");
    return out;
}

Outcome criterion4() {
    Outcome out;
    auto rep = contrast_experiment({10, 20, 30, 40, 50, 60});
    if (!rep.at("arboricity_rejects").get<bool>()) out.fail("arboricity answered phi0");
    if (!rep.at("local_agrees").get<bool>()) out.fail("local scheme disagrees with the oracle");
    double last = -1;
    for (const auto& row : rep.at("rows")) {
        const double ratio = row.at("local").at("ratio_to_log2_n").get<double>();
        out.detail << "n=" << row.at("n") << " ratio=" << ratio << "; ";
        if (ratio <= last) out.fail("label+catalog size per log2 n is not increasing");
        last = ratio;
    }
    // Direct check that the arboricity decoder refuses phi0.
    auto g = subdivided_clique(10);
    LabeledGraph lg = reload(build_labels(g, BuildOptions{}));
    auto phi0 = parse_formula("[x,y] E z. (edge(x,z) & edge(z,y))");
    try {
        lg.ask(&phi0, std::vector<Vertex>{0, 1}, {});
        out.fail("no UnsupportedQuery");
    } catch (const UnsupportedQuery&) {
    }
    return out;
}

struct LocalCase {
    std::string plan;
    std::size_t arity;
};

Outcome criterion5() {
    Outcome out;
    const std::string phi0 = "E z. (edge(x,z) & edge(z,y))";
    const std::vector<std::string> plans = {
        "kind local\nvars x y\nquery " + phi0 + "\nt 1\ncase 1-2\ncomp c : " + phi0 + "\n",
        "kind local\nvars x y\nsets Y\nquery dist(x,y)<=4 & !(y in Y)\nt 2\ncase 1-2\ncomp c : dist(x,y)<=4 & !(y in Y)\n",
        "kind local\nvars x\nsets Y\nquery E z. (dist(x,z)<=2 & z in Y)\nt 2\ncase none\n"
        "comp c : E z. (dist(x,z)<=2 & z in Y)\n",
        "kind local\nvars x y\nsets Y\nquery (dist(x,y)>3 & x in Y & !(y in Y)) | (dist(x,y)<=3 & (x in Y | y in Y))\n"
        "t 1\ncase none\ncomp a : x in Y\ncomp b : y in Y\ncombine a & !b\ncase 1-2\ncomp c : x in Y | y in Y\n",
    };

    // Plans are validated against their queries before use.
    Sampler sampler;
    sampler.graph = [](std::mt19937_64& rng) {
        return rng() % 2 ? unit_interval(30, 1.2, rng()).graph : bounded_degree(30, 4, rng());
    };
    for (const auto& text : plans) {
        auto plan = parse_plan(text);
        auto rep = validate_plan(plan, *plan.query, sampler);
        if (!rep.ok) out.fail("plan failed validation: " + rep.witness);
    }

    std::mt19937_64 rng(505);
    std::size_t interval_instances = 0, degree_instances = 0, mismatches = 0;
    std::size_t certified = 0, covers = 0, respaced = 0;
    for (int family = 0; family < 2; ++family) {
        for (int gi = 0; gi < 20; ++gi) {
            const std::size_t n = 50 + rng() % 251;
            const auto& text = plans[gi % plans.size()];
            auto o = options(SchemeId::Local, text);
            ColoredGraph g;
            if (family == 0) {
                auto ig = unit_interval(n, 0.8 + (rng() % 10) / 10.0, rng());
                g = ig.graph;
                o.cover_kind = CoverKind::Interval;
                o.order = ig.order;
            } else {
                g = bounded_degree(n, 2 + rng() % 3, rng());
            }
            auto built = build_labels(g, o);
            if (family == 0) {
                ++covers;
                certified += built.report.at("cover").at("validation").at("ok").get<bool>();
                respaced += !built.report.at("cover").at("notes").empty();
            }
            LabeledGraph lg = reload(built);
            oracle::Model model(g);
            const auto& q = *o.plan->query;
            for (int i = 0; i < 25; ++i) {
                auto a = oracle::random_args(rng, g.size(), q.arity());
                if (a.size() == 2 && rng() % 2) {
                    auto b = ball(g, a[0], 4);
                    a[1] = b[rng() % b.size()];
                }
                auto w = oracle::random_sets(rng, g.size(), q.set_arity(), 0.1);
                (family == 0 ? interval_instances : degree_instances)++;
                if (lg.ask(nullptr, a, w) != model.eval(q, a, w)) {
                    ++mismatches;
                    out.fail(text);
                }
            }
        }
    }

    // Certification rate over a wider sweep of generated unit-interval graphs.
    for (std::uint64_t seed = 1; seed <= 200; ++seed) {
        auto ig = unit_interval(20 + seed % 281, 0.5 + (seed % 20) / 10.0, seed);
        const Distance r = 1 + seed % 10;
        auto cover = build_unit_interval_cover(ig.graph, ig.order, r);
        ++covers;
        respaced += !cover.notes.empty();
        certified += validate_cover(ig.graph, cover, 2 * r + 2).ok;
    }
    out.detail << "unit-interval " << interval_instances << ", bounded-degree " << degree_instances << " instances, "
               << mismatches << " mismatches; interval covers certified " << certified << "/" << covers
               << " (" << respaced << " with widened representative spacing)";
    if (interval_instances < 500 || degree_instances < 500) out.fail("too few instances");
    if (certified * 100 < covers * 95) out.fail("certification rate below 95%");
    return out;
}

Outcome criterion6() {
    Outcome out;
    std::mt19937_64 rng(606);
    const char* psis[] = {"[x] E z. edge(x,z)", "[x] E z. E w. (z!=w & edge(x,z) & edge(x,w))",
                          "[x|Y] x in Y | col[0](x)", "[x] A z. (edge(x,z) -> E w. (w!=x & edge(z,w)))",
                          "[x|Y] E z. (dist(x,z)<=2 & z in Y & !(z=x))"};
    std::size_t trues = 0, mismatches = 0;
    for (int i = 0; i < 200; ++i) {
        std::size_t n = 5 + rng() % 56;
        Palette pal{1, 1, false};
        ColoredGraph g;
        switch (rng() % 3) {
        case 0: g = bounded_degree(n, 3, rng(), pal); break;
        case 1: g = random_forest_union(n, 1, rng(), pal); break;
        default: g = unit_interval(n, 0.7, rng(), pal).graph; break;
        }
        auto psi = parse_formula(psis[rng() % 5]);
        Distance t = 1 + rng() % 2;
        std::size_t s = 1 + rng() % 3;
        auto sets = oracle::random_sets(rng, n, psi.set_arity(), 0.15);
        bool got = basic_local_check(g, psi, t, s, sets);
        bool want = oracle::basic_local(g, psi, t, s, sets);
        trues += want;
        if (got != want) {
            ++mismatches;
            out.fail(print_formula(psi));
        }
    }
    out.detail << "200 instances (" << trues << " true), " << mismatches << " mismatches";
    return out;
}

Outcome criterion7() {
    Outcome out;
    std::mt19937_64 rng(707);
    CentroidLabeler lab;
    std::size_t pairs = 0, wrong = 0, worst_entries_slack = 1000, log_checked = 0;
    double worst_ratio = 0;
    for (int i = 0; i < 500; ++i) {
        const std::size_t n0 = 2 + rng() % 1999;
        auto f = random_forest(rng, n0);
        const std::size_t n = f.size();
        auto built = lab.build(0, f);
        const double l = std::log2(static_cast<double>(n));
        for (const auto& s : built.sublabels) {
            const std::size_t entries = decode_centroid_label(s).size();
            if (entries > ceil_log2(n) + 1) out.fail("too many entries at n=" + std::to_string(n));
            worst_entries_slack = std::min(worst_entries_slack, ceil_log2(n) + 1 - std::min(entries, ceil_log2(n) + 1));
            const std::size_t bits = 8 * s.size();
            if (bits > 16 + 16 * varbytes(n) * (ceil_log2(n) + 1)) out.fail("label exceeds its field layout");
            if (n >= 4) {
                ++log_checked;
                worst_ratio = std::max(worst_ratio, static_cast<double>(bits) / (l * l));
                if (static_cast<double>(bits) > 16.0 * l * l) out.fail("bits exceed 16 log^2 n");
            }
        }
        for (int src = 0; src < 3; ++src) {
            Vertex a = static_cast<Vertex>(rng() % n);
            auto d = oracle::bfs(f, a);
            for (Vertex b = 0; b < n; ++b) {
                Distance want = d[b] == oracle::kInf ? kUnreachable : d[b];
                ++pairs;
                if (centroid_distance(built.sublabels[a], built.sublabels[b]) != want) {
                    ++wrong;
                    out.fail("wrong distance");
                }
            }
        }
    }
    out.detail << "500 forests, " << pairs << " pairs vs BFS, " << wrong << " wrong; max bits/log2^2 n = " << worst_ratio
               << " over " << log_checked << " labels with n>=4 (c = 16)";
    return out;
}

struct CoverCheck {
    bool ok = true;
    std::string why;
};

// Same-colored pieces: kernel vertices of one lie farther than r from the
// other; every vertex is in some kernel.
CoverCheck cover_claims(const ColoredGraph& g, const Cover& cover, const std::vector<std::uint32_t>& gamma, Distance r) {
    auto d = oracle::all_pairs(g);
    std::vector<clk::VertexSet> kern;
    std::vector<char> in_kernel(g.size(), 0);
    for (const auto& u : cover.pieces) {
        clk::VertexSet k;
        for (auto x : u) {
            auto b = oracle::ball(d, {x}, r);
            if (std::includes(u.begin(), u.end(), b.begin(), b.end())) {
                k.push_back(x);
                in_kernel[x] = 1;
            }
        }
        kern.push_back(k);
    }
    for (Vertex v = 0; v < g.size(); ++v) {
        if (!in_kernel[v]) return {false, "vertex outside every kernel"};
    }
    for (std::size_t a = 0; a < cover.pieces.size(); ++a) {
        for (std::size_t b = 0; b < cover.pieces.size(); ++b) {
            if (a == b || gamma[a] != gamma[b]) continue;
            for (auto x : kern[a]) {
                for (auto y : cover.pieces[b]) {
                    if (d[x][y] <= r) return {false, "same-colored pieces too close"};
                }
            }
        }
    }
    return {};
}

Outcome criterion8() {
    Outcome out;
    std::mt19937_64 rng(808);
    const std::string connected = "kind connected\nvars x y\nsets Y\nt 1\nphi : edge(x,y) & y in Y\n";
    const auto connected_f = parse_formula("[x,y|Y] edge(x,y) & y in Y");
    const std::string conjunctive =
        conjunctive_plan_text(1, {"x", "y"}, {"Y"}, {{{"x"}, "x in Y"}, {{"y"}, "E z. (edge(y,z) & z in Y)"}});
    const auto bx = parse_formula("[x|Y] x in Y");
    const auto by = parse_formula("[y|Y] E z. (edge(y,z) & z in Y)");

    std::size_t counted[2] = {0, 0}, mod_checks = 0, mismatches = 0, covers = 0;
    for (int gi = 0; gi < 20; ++gi) {
        const bool interval = gi % 2 == 0;
        const std::size_t n = 20 + rng() % 131;
        ColoredGraph g;
        std::vector<Vertex> order;
        if (interval) {
            auto ig = unit_interval(n, 1.0, rng());
            g = ig.graph;
            order = ig.order;
        } else {
            g = bounded_degree(n, 3, rng());
        }
        oracle::Model model(g);
        for (int mode = 0; mode < 2; ++mode) {
            std::vector<std::vector<VertexSet>> draws;
            std::vector<std::uint64_t> want;
            for (int i = 0; i < 5; ++i) {
                auto w = oracle::random_sets(rng, n, 1, 0.2);
                std::uint64_t c = 0;
                if (mode == 0) {
                    c = model.count(connected_f, w);
                } else {
                    for (Vertex x = 0; x < n; ++x) {
                        if (!model.eval(bx, {x}, w)) continue;
                        for (Vertex y = 0; y < n; ++y) c += model.dist[x][y] > 3 && model.eval(by, {y}, w);
                    }
                }
                draws.push_back(w);
                want.push_back(c);
            }
            for (std::uint64_t s : {0u, 2u, 3u, 5u}) {
                auto o = options(SchemeId::Counting, mode == 0 ? connected : conjunctive);
                if (interval) {
                    o.cover_kind = CoverKind::Interval;
                    o.order = order;
                }
                o.modulus = s;
                auto built = build_labels(g, o);
                if (!built.report.at("kernel_separation").at("ok").get<bool>()) out.fail("kernel separation");
                if (s == 0) {
                    // Rebuild the cover and its coloring and check the claims from distances.
                    const Distance r = built.report.at("r").get<Distance>();
                    Cover cover = interval ? build_unit_interval_cover(g, order, r) : build_ball_cover(g, r);
                    auto gamma = distance_m_coloring(intersection_graph(cover, n), mode == 0 ? 1 : 2);
                    ++covers;
                    auto check = cover_claims(g, cover, gamma, r);
                    if (!check.ok) out.fail(check.why);
                }
                LabeledGraph lg = reload(built);
                for (std::size_t i = 0; i < draws.size(); ++i) {
                    std::uint64_t got = lg.count(draws[i]);
                    if (s == 0) {
                        ++counted[mode];
                    } else {
                        ++mod_checks;
                    }
                    if (got != (s ? want[i] % s : want[i])) {
                        ++mismatches;
                        out.fail(mode == 0 ? "connected count" : "conjunctive count");
                    }
                }
            }
        }
    }
    out.detail << "connected " << counted[0] << ", conjunctive " << counted[1] << " exact counts, " << mod_checks
               << " mod-s counts, " << mismatches << " mismatches; claims checked on " << covers << " covers";
    if (counted[0] < 100 || counted[1] < 100) out.fail("too few instances");
    return out;
}

Outcome criterion9() {
    Outcome out;
    std::mt19937_64 rng(909);
    std::size_t bad = 0;
    for (int i = 0; i < 200; ++i) {
        const std::size_t leaves = 1 + rng() % 30;
        const std::uint32_t k = 2 + rng() % 3;
        auto t = random_term(rng, leaves, k);
        auto v = eval_term(t);
        bool ok = v.graph.size() == leaves && term_leaves(t) == leaves;
        const Color c = rng() % 2;
        const std::uint32_t a = 1 + rng() % k, b = 1 + (a % k);
        auto once = eval_term(term_eta(c, a, b, t));
        auto twice = eval_term(term_eta(c, a, b, term_eta(c, a, b, t)));
        ok = ok && once.graph == twice.graph && once.labels == twice.labels;
        auto relabeled = eval_term(term_rho(a, b, t));
        ok = ok && undirected_pairs(relabeled.graph) == undirected_pairs(v.graph) && relabeled.graph == v.graph;
        if (!ok) {
            ++bad;
            out.fail(print_term(t));
        }
    }
    std::size_t clique_bad = 0;
    for (std::size_t n = 1; n <= 50; ++n) {
        if (!(eval_term(clique_term(n)).graph == oracle::complete(n))) {
            ++clique_bad;
            out.fail("clique_term(" + std::to_string(n) + ")");
        }
    }
    out.detail << "200 random terms, " << bad << " invariant failures; clique_term(1..50) " << clique_bad
               << " differ from K_n";
    return out;
}

Outcome criterion10() {
    Outcome out;
    const char* specs[] = {
        R"({"generator":{"kind":"forest_union","n":150,"k":3,"vertex_colors":2,"edge_colors":2,"directed":true,"seed":5},"scheme":"arboricity","samples":300,"qf_vars":3,"qf_sets":2,"qf_atoms":5,"seed":3})",
        R"({"generator":{"kind":"unit_interval","n":120,"density":1.5,"seed":2},"scheme":"local","cover":"interval","plan":"kind local\nvars x y\nquery E z. (edge(x,z) & edge(z,y))\nt 1\ncase 1-2\ncomp c : E z. (edge(x,z) & edge(z,y))\n","samples":200})",
        R"({"generator":{"kind":"bounded_degree","n":100,"degree":4,"seed":3},"scheme":"local","labeler":"catalog","plan":"kind local\nvars x\nsets Y\nquery E z. (edge(x,z) & z in Y)\nt 1\ncase none\ncomp c : E z. (edge(x,z) & z in Y)\n","samples":200})",
        R"({"generator":{"kind":"forest_union","n":100,"k":1,"seed":2},"scheme":"expansion","plan":"kind bounded\nvars x y\nquery E z. (edge(x,z) & edge(z,y))\np 3\nbasic c : E z. (edge(x,z) & edge(z,y))\ncombine c\n","samples":200})",
        R"({"generator":{"kind":"unit_interval","n":80,"density":1.0,"seed":4},"scheme":"counting","cover":"interval","modulus":3,"plan":"kind connected\nvars x y\nsets Y\nt 1\nphi : edge(x,y) & y in Y\n","samples":30})",
        R"({"generator":{"kind":"bounded_degree","n":60,"degree":3,"seed":4},"scheme":"scattered","plan":"kind scattered\nsets Y\nt 1\ns 2\npsi w : E z. (edge(w,z) & z in Y)\n","samples":40,"set_density":0.05})",
        R"({"generator":{"kind":"grid","w":8,"h":8},"scheme":"general","plan":"kind general\nvars x y\nlocal near\nt 1\ncase 1-2\ncomp c : E z. (edge(x,z) & edge(z,y))\nend\nsentence deg t 1 s 2 w : E a. E b. E c. (a!=b & b!=c & a!=c & edge(w,a) & edge(w,b) & edge(w,c))\ncombine near & deg\n","samples":100})",
    };
    std::size_t suites = 0, queries = 0;
    for (const char* spec : specs) {
        auto j = nlohmann::json::parse(spec);
        nlohmann::json rep;
        try {
            rep = crossval(Experiment::from_json(j));
        } catch (const std::exception& e) {
            out.fail(j.at("scheme").get<std::string>() + ": " + e.what());
            continue;
        }
        ++suites;
        queries += rep.at("instances").get<std::size_t>();
        if (!rep.at("ok").get<bool>() || !rep.at("graph_freed_before_queries").get<bool>()) {
            out.fail("crossval " + j.at("scheme").get<std::string>() + ": " + rep.dump());
        }
    }

    // Flip every byte of bundle and catalog for one build of each scheme family.
    std::size_t positions = 0;
    std::vector<BuildResult> builds;
    builds.push_back(build_labels(random_forest_union(40, 2, 1), BuildOptions{}));
    auto ig = unit_interval(40, 1.2, 3);
    auto local = options(SchemeId::Local, "kind local\nvars x y\nquery E z. (edge(x,z) & edge(z,y))\nt 1\ncase 1-2\n"
                                          "comp c : E z. (edge(x,z) & edge(z,y))\n");
    local.cover_kind = CoverKind::Interval;
    local.order = ig.order;
    builds.push_back(build_labels(ig.graph, local));
    builds.push_back(build_labels(random_forest_union(30, 1, 4),
                                  options(SchemeId::Expansion, "kind bounded\nvars x y\nquery dist(x,y)<=2\np 3\n"
                                                               "basic c : dist(x,y)<=2\ncombine c\n")));
    auto counting = options(SchemeId::Counting, "kind connected\nvars x y\nt 1\nphi : edge(x,y)\n");
    counting.cover_kind = CoverKind::Interval;
    counting.order = ig.order;
    builds.push_back(build_labels(ig.graph, counting));
    for (const auto& b : builds) {
        auto rep = corruption_check(b.bundle, b.catalog);
        positions += rep.at("bundle_positions").get<std::size_t>() + rep.at("catalog_positions").get<std::size_t>();
        if (!rep.at("ok").get<bool>()) out.fail("an undetected corruption: " + rep.dump());
    }
    out.detail << suites << " crossval suites, " << queries << " label-only queries after freeing the graph; "
               << positions << " corrupted byte positions, all rejected";
    return out;
}

}  // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
        {"qf oracle equivalence", criterion1},      {"arboricity label compactness", criterion2},
        {"bounded-expansion scheme", criterion3},    {"subdivided-clique contrast", criterion4},
        {"cover pipelines", criterion5},             {"basic local sentence checker", criterion6},
        {"forest centroid distance labels", criterion7}, {"counting pipelines", criterion8},
        {"clique-width algebra", criterion9},        {"decoder purity", criterion10},
    };
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto start = std::chrono::steady_clock::now();
        Outcome r;
        try {
            r = criteria[i].second();
        } catch (const std::exception& e) {
            r.fail(std::string("exception: ") + e.what());
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        failures += !r.ok;
        std::printf("%s criterion %zu (%s): %s [%.1fs]\n", r.ok ? "PASS" : "FAIL", i + 1, criteria[i].first,
                    r.detail.str().c_str(), secs);
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
