#pragma once

// Reference implementations used only by tests. They read the edge list
// directly and share no code with the library's evaluators.

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <set>
#include <tuple>
#include <string>
#include <vector>

#include "clk/formula.hpp"
#include "clk/graph.hpp"

namespace oracle {

using clk::Color;
using clk::Distance;
using clk::Vertex;

inline constexpr Distance kInf = 1u << 30;

// Floyd-Warshall over the underlying undirected graph.
inline std::vector<std::vector<Distance>> all_pairs(const clk::ColoredGraph& g) {
    const std::size_t n = g.size();
    std::vector<std::vector<Distance>> d(n, std::vector<Distance>(n, kInf));
    for (std::size_t v = 0; v < n; ++v) d[v][v] = 0;
    for (const auto& e : g.edges()) {
        if (e.from == e.to) continue;
        d[e.from][e.to] = d[e.to][e.from] = 1;
    }
    for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t i = 0; i < n; ++i) {
            if (d[i][k] == kInf) continue;
            for (std::size_t j = 0; j < n; ++j) {
                if (d[k][j] != kInf && d[i][k] + d[k][j] < d[i][j]) d[i][j] = d[i][k] + d[k][j];
            }
        }
    }
    return d;
}

struct Model {
    const clk::ColoredGraph& g;
    std::vector<std::vector<Distance>> dist;
    std::map<std::string, std::vector<char>> sets;
    std::set<std::tuple<Vertex, Vertex, Color>> edge_set;

    explicit Model(const clk::ColoredGraph& graph) : g(graph), dist(all_pairs(graph)) {
        for (const auto& e : g.edges()) edge_set.emplace(e.from, e.to, e.color);
    }

    bool edge(Vertex u, Vertex v, Color c) const { return edge_set.count({u, v, c}) != 0; }

    bool color(Vertex v, Color c) const {
        for (auto k : g.colors(v)) {
            if (k == c) return true;
        }
        return false;
    }

    bool holds(const clk::NodePtr& n, std::map<std::string, Vertex>& env) const {
        using clk::Op;
        switch (n->op) {
        case Op::True: return true;
        case Op::False: return false;
        case Op::Eq: return env.at(n->x) == env.at(n->y);
        case Op::Edge: return edge(env.at(n->x), env.at(n->y), n->color);
        case Op::Col: return color(env.at(n->x), n->color);
        case Op::In: return sets.at(n->set)[env.at(n->x)] != 0;
        case Op::DistLe: return dist[env.at(n->x)][env.at(n->y)] <= n->k;
        case Op::DistGt: return dist[env.at(n->x)][env.at(n->y)] > n->k;
        case Op::Not: return !holds(n->kids[0], env);
        case Op::And:
            for (const auto& k : n->kids) {
                if (!holds(k, env)) return false;
            }
            return true;
        case Op::Or:
            for (const auto& k : n->kids) {
                if (holds(k, env)) return true;
            }
            return false;
        case Op::Implies: return !holds(n->kids[0], env) || holds(n->kids[1], env);
        case Op::Exists:
        case Op::Forall: {
            const bool exists = n->op == Op::Exists;
            auto saved = env.find(n->x) == env.end() ? std::optional<Vertex>() : std::optional<Vertex>(env[n->x]);
            bool result = !exists;
            for (Vertex v = 0; v < g.size(); ++v) {
                env[n->x] = v;
                if (holds(n->kids[0], env) == exists) {
                    result = exists;
                    break;
                }
            }
            if (saved) {
                env[n->x] = *saved;
            } else {
                env.erase(n->x);
            }
            return result;
        }
        }
        return false;
    }

    void bind_sets(const clk::Formula& f, const std::vector<clk::VertexSet>& s) {
        sets.clear();
        for (std::size_t i = 0; i < f.set_arity(); ++i) {
            std::vector<char> mark(g.size(), 0);
            for (auto v : s[i]) mark[v] = 1;
            sets[f.set_params()[i]] = mark;
        }
    }

    bool eval(const clk::Formula& f, const std::vector<Vertex>& args, const std::vector<clk::VertexSet>& s) {
        bind_sets(f, s);
        std::map<std::string, Vertex> env;
        for (std::size_t i = 0; i < args.size(); ++i) env[f.fo_params()[i]] = args[i];
        return holds(f.root(), env);
    }

    std::uint64_t count(const clk::Formula& f, const std::vector<clk::VertexSet>& s) {
        bind_sets(f, s);
        const std::size_t m = f.arity();
        if (m == 0) {
            std::map<std::string, Vertex> env;
            return holds(f.root(), env) ? 1 : 0;
        }
        std::uint64_t total = 0;
        std::vector<Vertex> a(m, 0);
        if (g.size() == 0) return 0;
        while (true) {
            std::map<std::string, Vertex> env;
            for (std::size_t i = 0; i < m; ++i) env[f.fo_params()[i]] = a[i];
            total += holds(f.root(), env);
            std::size_t i = 0;
            while (i < m && ++a[i] == g.size()) a[i++] = 0;
            if (i == m) break;
        }
        return total;
    }
};

inline bool acyclic(const clk::ColoredGraph& g) {
    std::vector<Vertex> parent(g.size());
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](Vertex v) {
        while (parent[v] != v) v = parent[v] = parent[parent[v]];
        return v;
    };
    std::vector<std::pair<Vertex, Vertex>> seen;
    for (const auto& e : g.edges()) {
        if (e.from == e.to) continue;
        auto key = std::minmax(e.from, e.to);
        if (std::find(seen.begin(), seen.end(), std::pair<Vertex, Vertex>(key)) != seen.end()) continue;
        seen.emplace_back(key);
        Vertex a = find(e.from), b = find(e.to);
        if (a == b) return false;
        parent[a] = b;
    }
    return true;
}

inline std::vector<clk::VertexSet> random_sets(std::mt19937_64& rng, std::size_t n, std::size_t q, double p) {
    std::bernoulli_distribution coin(p);
    std::vector<clk::VertexSet> out(q);
    for (auto& s : out) {
        for (Vertex v = 0; v < n; ++v) {
            if (coin(rng)) s.push_back(v);
        }
    }
    return out;
}

inline std::vector<Vertex> random_args(std::mt19937_64& rng, std::size_t n, std::size_t m) {
    std::uniform_int_distribution<Vertex> pick(0, static_cast<Vertex>(n - 1));
    std::vector<Vertex> out(m);
    for (auto& v : out) v = pick(rng);
    return out;
}

// Whether s members of p are pairwise farther than 2t apart, by exhaustive search.
inline bool scattered(const std::vector<std::vector<Distance>>& d, const std::vector<Vertex>& p, Distance t,
                      std::size_t s, std::vector<Vertex>& chosen, std::size_t from = 0) {
    if (chosen.size() == s) return true;
    for (std::size_t i = from; i < p.size(); ++i) {
        bool ok = true;
        for (auto c : chosen) ok = ok && d[c][p[i]] > 2 * t;
        if (!ok) continue;
        chosen.push_back(p[i]);
        if (scattered(d, p, t, s, chosen, i + 1)) return true;
        chosen.pop_back();
    }
    return false;
}

inline clk::ColoredGraph path(std::size_t n) {
    std::vector<std::pair<Vertex, Vertex>> pairs;
    for (Vertex v = 0; v + 1 < n; ++v) pairs.emplace_back(v, v + 1);
    return clk::make_undirected(n, pairs);
}

inline clk::ColoredGraph cycle(std::size_t n) {
    std::vector<std::pair<Vertex, Vertex>> pairs;
    for (Vertex v = 0; v < n; ++v) pairs.emplace_back(v, static_cast<Vertex>((v + 1) % n));
    return clk::make_undirected(n, pairs);
}

inline clk::ColoredGraph complete(std::size_t n) {
    std::vector<std::pair<Vertex, Vertex>> pairs;
    for (Vertex u = 0; u < n; ++u) {
        for (Vertex v = u + 1; v < n; ++v) pairs.emplace_back(u, v);
    }
    return clk::make_undirected(n, pairs);
}

// Ball from the distance matrix.
inline clk::VertexSet ball(const std::vector<std::vector<Distance>>& d, const std::vector<Vertex>& centers,
                           Distance t) {
    clk::VertexSet out;
    for (Vertex v = 0; v < d.size(); ++v) {
        for (auto c : centers) {
            if (d[c][v] <= t) {
                out.push_back(v);
                break;
            }
        }
    }
    return out;
}

// Distances from one source by BFS over the undirected edge list.
inline std::vector<Distance> bfs(const clk::ColoredGraph& g, Vertex source) {
    std::vector<std::vector<Vertex>> adj(g.size());
    for (const auto& e : g.edges()) {
        if (e.from == e.to) continue;
        adj[e.from].push_back(e.to);
        adj[e.to].push_back(e.from);
    }
    std::vector<Distance> d(g.size(), kInf);
    std::vector<Vertex> queue{source};
    d[source] = 0;
    for (std::size_t head = 0; head < queue.size(); ++head) {
        Vertex u = queue[head];
        for (auto v : adj[u]) {
            if (d[v] != kInf) continue;
            d[v] = d[u] + 1;
            queue.push_back(v);
        }
    }
    return d;
}

// Basic (t,s)-local sentence by definition: s witnesses pairwise farther than
// 2t, each satisfying psi inside its own radius-t ball.
inline bool basic_local(const clk::ColoredGraph& g, const clk::Formula& psi, Distance t, std::size_t s,
                        const std::vector<clk::VertexSet>& sets) {
    auto d = all_pairs(g);
    std::vector<Vertex> p;
    for (Vertex a = 0; a < g.size(); ++a) {
        auto b = ball(d, {a}, t);
        auto sub = clk::induced_subgraph(g, b);
        auto from = sub.from_parent(g.size());
        std::vector<clk::VertexSet> clipped(sets.size());
        for (std::size_t i = 0; i < sets.size(); ++i) {
            for (auto v : sets[i]) {
                if (from[v] != clk::kNoVertex) clipped[i].push_back(from[v]);
            }
            std::sort(clipped[i].begin(), clipped[i].end());
        }
        Model model(sub.graph);
        if (model.eval(psi, {from[a]}, clipped)) p.push_back(a);
    }
    std::vector<Vertex> chosen;
    return scattered(d, p, t, s, chosen);
}

}  // namespace oracle
