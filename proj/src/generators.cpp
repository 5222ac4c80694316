#include "clk/generators.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "clk/cwd.hpp"
#include "clk/errors.hpp"

namespace clk {

namespace {

std::size_t pick(std::mt19937_64& rng, std::size_t bound) {
    return std::uniform_int_distribution<std::size_t>(0, bound - 1)(rng);
}

void add_edge(std::vector<Edge>& edges, std::mt19937_64& rng, const Palette& palette, Vertex u, Vertex v) {
    Color c = static_cast<Color>(pick(rng, std::max<std::size_t>(palette.edge_colors, 1)));
    std::size_t dir = palette.directed ? pick(rng, 3) : 2;
    if (dir != 1) edges.push_back({u, v, c});
    if (dir != 0) edges.push_back({v, u, c});
}

std::vector<std::vector<Color>> vertex_colors(std::mt19937_64& rng, std::size_t n, const Palette& palette) {
    std::vector<std::vector<Color>> out(n);
    for (auto& cs : out) {
        for (Color c = 0; c < palette.vertex_colors; ++c) {
            if (pick(rng, 2)) cs.push_back(c);
        }
    }
    return out;
}

}  // namespace

ColoredGraph random_forest_union(std::size_t n, std::size_t k, std::uint64_t seed, const Palette& palette) {
    std::mt19937_64 rng(seed);
    std::vector<Edge> edges;
    std::vector<Vertex> perm(n);
    for (std::size_t f = 0; f < k; ++f) {
        std::iota(perm.begin(), perm.end(), 0);
        std::shuffle(perm.begin(), perm.end(), rng);
        for (std::size_t i = 1; i < n; ++i) add_edge(edges, rng, palette, perm[i], perm[pick(rng, i)]);
    }
    auto colors = vertex_colors(rng, n, palette);
    return ColoredGraph(n, std::move(edges), std::move(colors));
}

IntervalGraph unit_interval(std::size_t n, double density, std::uint64_t seed, const Palette& palette) {
    if (density <= 0) throw InputError("unit_interval needs a positive density");
    std::mt19937_64 rng(seed);
    IntervalGraph out;
    out.left.resize(n);
    std::uniform_real_distribution<double> pos(0.0, static_cast<double>(n) / density);
    for (auto& l : out.left) l = pos(rng);
    out.order.resize(n);
    std::iota(out.order.begin(), out.order.end(), 0);
    std::sort(out.order.begin(), out.order.end(), [&](Vertex a, Vertex b) {
        return out.left[a] < out.left[b] || (out.left[a] == out.left[b] && a < b);
    });
    std::vector<Edge> edges;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n && out.left[out.order[j]] - out.left[out.order[i]] <= 1.0; ++j) {
            add_edge(edges, rng, palette, out.order[i], out.order[j]);
        }
    }
    auto colors = vertex_colors(rng, n, palette);
    out.graph = ColoredGraph(n, std::move(edges), std::move(colors));
    return out;
}

bool interval_model_consistent(const IntervalGraph& ig) {
    const std::size_t n = ig.graph.size();
    if (ig.left.size() != n || ig.order.size() != n) return false;
    for (std::size_t i = 1; i < n; ++i) {
        if (ig.left[ig.order[i - 1]] > ig.left[ig.order[i]]) return false;
    }
    for (Vertex u = 0; u < n; ++u) {
        auto nb = ig.graph.neighbors(u);
        for (Vertex v = 0; v < n; ++v) {
            if (u == v) continue;
            bool overlap = std::fabs(ig.left[u] - ig.left[v]) <= 1.0;
            if (overlap != std::binary_search(nb.begin(), nb.end(), v)) return false;
        }
    }
    return true;
}

ColoredGraph bounded_degree(std::size_t n, std::size_t max_degree, std::uint64_t seed, const Palette& palette) {
    std::mt19937_64 rng(seed);
    std::vector<Edge> edges;
    std::vector<std::size_t> degree(n, 0);
    std::vector<std::pair<Vertex, Vertex>> seen;
    if (n >= 2) {
        for (std::size_t attempt = 0; attempt < n * max_degree; ++attempt) {
            Vertex u = static_cast<Vertex>(pick(rng, n));
            Vertex v = static_cast<Vertex>(pick(rng, n));
            if (u == v || degree[u] >= max_degree || degree[v] >= max_degree) continue;
            auto key = std::minmax(u, v);
            if (std::find(seen.begin(), seen.end(), std::pair<Vertex, Vertex>(key)) != seen.end()) continue;
            seen.emplace_back(key);
            ++degree[u];
            ++degree[v];
            add_edge(edges, rng, palette, u, v);
        }
    }
    auto colors = vertex_colors(rng, n, palette);
    return ColoredGraph(n, std::move(edges), std::move(colors));
}

ColoredGraph grid(std::size_t w, std::size_t h) {
    std::vector<std::pair<Vertex, Vertex>> pairs;
    for (std::size_t y = 0; y < h; ++y) {
        for (std::size_t x = 0; x < w; ++x) {
            Vertex v = static_cast<Vertex>(y * w + x);
            if (x + 1 < w) pairs.emplace_back(v, v + 1);
            if (y + 1 < h) pairs.emplace_back(v, static_cast<Vertex>(v + w));
        }
    }
    return make_undirected(w * h, pairs);
}

ColoredGraph subdivided_clique(std::size_t n) {
    std::vector<std::pair<Vertex, Vertex>> pairs;
    for (Vertex u = 0; u < n; ++u) {
        for (Vertex v = u + 1; v < n; ++v) pairs.emplace_back(u, v);
    }
    return subdivide(make_undirected(n, pairs));
}

ColoredGraph gnp(std::size_t n, double p, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::bernoulli_distribution coin(p);
    std::vector<std::pair<Vertex, Vertex>> pairs;
    for (Vertex u = 0; u < n; ++u) {
        for (Vertex v = u + 1; v < n; ++v) {
            if (coin(rng)) pairs.emplace_back(u, v);
        }
    }
    return make_undirected(n, pairs);
}

GeneratedGraph generate(const nlohmann::json& spec) {
    const std::string kind = spec.at("kind").get<std::string>();
    const std::uint64_t seed = spec.value("seed", std::uint64_t{1});
    Palette palette;
    palette.vertex_colors = spec.value("vertex_colors", std::size_t{0});
    palette.edge_colors = spec.value("edge_colors", std::size_t{1});
    palette.directed = spec.value("directed", false);
    const std::size_t n = spec.value("n", std::size_t{0});
    GeneratedGraph out;
    if (kind == "forest_union") {
        out.graph = random_forest_union(n, spec.value("k", std::size_t{1}), seed, palette);
    } else if (kind == "unit_interval") {
        auto ig = unit_interval(n, spec.value("density", 1.0), seed, palette);
        out.graph = std::move(ig.graph);
        out.order = std::move(ig.order);
    } else if (kind == "bounded_degree") {
        out.graph = bounded_degree(n, spec.value("degree", std::size_t{3}), seed, palette);
    } else if (kind == "grid") {
        out.graph = grid(spec.at("w").get<std::size_t>(), spec.at("h").get<std::size_t>());
    } else if (kind == "subdivided_clique") {
        out.graph = subdivided_clique(n);
    } else if (kind == "hnm") {
        std::string e2 = spec.value("e2", std::string("strict"));
        if (e2 != "strict" && e2 != "consecutive") throw InputError("e2 must be strict or consecutive");
        out.graph = hnm_graph(n, spec.at("m").get<std::size_t>(), e2 == "strict" ? E2Mode::Strict : E2Mode::Consecutive);
    } else if (kind == "gnp") {
        out.graph = gnp(n, spec.value("p", 0.1), seed);
    } else if (kind == "file") {
        out.graph = read_graph_file(spec.at("path").get<std::string>());
    } else {
        throw InputError("unknown generator " + kind);
    }
    return out;
}

Formula random_qf_formula(std::mt19937_64& rng, std::size_t m, std::size_t q, std::size_t vertex_palette,
                          std::size_t edge_palette, std::size_t atoms) {
    if (m == 0) throw InputError("random formulas need at least one variable");
    std::vector<std::string> vars, sets;
    for (std::size_t i = 0; i < m; ++i) vars.push_back("x" + std::to_string(i + 1));
    for (std::size_t i = 0; i < q; ++i) sets.push_back("Y" + std::to_string(i + 1));
    auto var = [&] { return vars[pick(rng, m)]; };
    auto atom = [&]() -> NodePtr {
        for (;;) {
            switch (pick(rng, 6)) {
            case 0: return f_eq(var(), var());
            case 1: return f_edge(static_cast<Color>(pick(rng, std::max<std::size_t>(edge_palette, 1))), var(), var());
            case 2:
                if (vertex_palette == 0) continue;
                return f_col(static_cast<Color>(pick(rng, vertex_palette)), var());
            case 3:
                if (q == 0) continue;
                return f_in(var(), sets[pick(rng, q)]);
            case 4: return f_dist_le(var(), var(), static_cast<Distance>(pick(rng, 2)));
            default: return f_dist_gt(var(), var(), static_cast<Distance>(pick(rng, 2)));
            }
        }
    };
    auto rec = [&](auto&& self, std::size_t budget) -> NodePtr {
        if (budget <= 1) return pick(rng, 4) == 0 ? f_not(atom()) : atom();
        std::size_t left = 1 + pick(rng, budget - 1);
        NodePtr a = self(self, left);
        NodePtr b = self(self, budget - left);
        switch (pick(rng, 4)) {
        case 0: return f_and({a, b});
        case 1: return f_or({a, b});
        case 2: return f_implies(a, b);
        default: return f_not(f_and({a, b}));
        }
    };
    return Formula(rec(rec, std::max<std::size_t>(atoms, 1)), vars, sets);
}

}  // namespace clk
