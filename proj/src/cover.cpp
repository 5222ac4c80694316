#include "clk/cover.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "clk/errors.hpp"
#include "clk/eval.hpp"

namespace clk {

std::vector<std::vector<std::uint32_t>> pieces_of(const Cover& cover, std::size_t n) {
    std::vector<std::vector<std::uint32_t>> out(n);
    for (std::uint32_t p = 0; p < cover.pieces.size(); ++p) {
        for (Vertex v : cover.pieces[p]) {
            if (v >= n) throw InputError("cover piece " + std::to_string(p) + " names vertex " + std::to_string(v));
            out[v].push_back(p);
        }
    }
    return out;
}

ColoredGraph intersection_graph(const Cover& cover, std::size_t n) {
    auto index = pieces_of(cover, n);
    std::vector<std::pair<Vertex, Vertex>> pairs;
    std::vector<char> mark(cover.pieces.size(), 0);
    for (std::uint32_t p = 0; p < cover.pieces.size(); ++p) {
        std::vector<std::uint32_t> touched;
        for (Vertex v : cover.pieces[p]) {
            for (std::uint32_t q : index[v]) {
                if (q > p && !mark[q]) {
                    mark[q] = 1;
                    touched.push_back(q);
                }
            }
        }
        for (std::uint32_t q : touched) {
            mark[q] = 0;
            pairs.emplace_back(p, q);
        }
    }
    return make_undirected(cover.pieces.size(), pairs);
}

void normalize_cover(Cover& cover, std::size_t n) {
    for (auto& p : cover.pieces) p = make_vertex_set(std::move(p));
    cover.pieces.erase(std::remove_if(cover.pieces.begin(), cover.pieces.end(),
                                      [](const VertexSet& p) { return p.empty(); }),
                       cover.pieces.end());
    std::sort(cover.pieces.begin(), cover.pieces.end());
    cover.pieces.erase(std::unique(cover.pieces.begin(), cover.pieces.end()), cover.pieces.end());
    ColoredGraph h = intersection_graph(cover, n);
    cover.ell = 0;
    for (Vertex p = 0; p < h.size(); ++p) cover.ell = std::max(cover.ell, h.neighbors(p).size());
}

Cover build_ball_cover(const ColoredGraph& g, Distance r) {
    Cover cover;
    cover.r = r;
    for (Vertex v = 0; v < g.size(); ++v) cover.pieces.push_back(ball(g, v, r));
    normalize_cover(cover, g.size());
    std::size_t largest = 0;
    for (const auto& p : cover.pieces) largest = std::max(largest, p.size());
    cover.nice = true;
    cover.g_profile = "g(q) = " + std::to_string(largest) + "*q (vertex-count bound)";
    return cover;
}

Cover build_unit_interval_cover_spaced(const ColoredGraph& g, std::span<const Vertex> order, Distance r,
                                       std::size_t spacing) {
    const std::size_t n = g.size();
    if (order.size() != n) throw InputError("the interval order must list every vertex exactly once");
    if (spacing == 0) throw InputError("representative spacing must be positive");
    std::vector<std::size_t> pos(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        check_vertex(g, order[i]);
        if (pos[order[i]] != n) throw InputError("vertex " + std::to_string(order[i]) + " repeats in the order");
        pos[order[i]] = i;
    }
    const Distance radius = r + 1 + static_cast<Distance>(spacing / 2);
    Cover cover;
    cover.r = r;
    std::vector<char> seen(n, 0);
    for (Vertex start : order) {
        if (seen[start]) continue;
        std::vector<Distance> dist = bfs_distances(g, std::span<const Vertex>(&start, 1));
        std::vector<std::vector<Vertex>> layers;
        for (Vertex v = 0; v < n; ++v) {
            if (dist[v] == kUnreachable) continue;
            seen[v] = 1;
            if (dist[v] >= layers.size()) layers.resize(dist[v] + 1);
            layers[dist[v]].push_back(v);
        }
        auto head = [&](std::size_t layer) {
            return *std::min_element(layers[layer].begin(), layers[layer].end(),
                                     [&](Vertex a, Vertex b) { return pos[a] < pos[b]; });
        };
        std::size_t last = 0;
        for (std::size_t j = 0; j < layers.size(); j += spacing) {
            cover.pieces.push_back(ball(g, head(j), radius));
            last = j;
        }
        if (last + spacing / 2 < layers.size() - 1) cover.pieces.push_back(ball(g, head(layers.size() - 1), radius));
    }
    normalize_cover(cover, n);
    cover.nice = true;
    cover.g_profile = "g(q) = " + std::to_string(3 * (r + 1)) + "*q";
    return cover;
}

Cover build_unit_interval_cover(const ColoredGraph& g, std::span<const Vertex> order, Distance r) {
    const std::size_t target = 2 * static_cast<std::size_t>(r) + 2;
    Cover first;
    for (std::size_t spacing = 1; spacing <= 4 * target + 4; spacing *= 2) {
        Cover c = build_unit_interval_cover_spaced(g, order, r, spacing);
        CoverReport rep = validate_cover(g, c, target);
        if (spacing == 1) first = c;
        if (rep.ok) {
            if (spacing > 1) {
                c.notes.push_back("representative spacing raised to " + std::to_string(spacing) +
                                  " to meet ell <= " + std::to_string(target));
            }
            return c;
        }
    }
    first.notes.push_back("no spacing certified (r, ell <= " + std::to_string(target) + "); spacing 1 kept");
    return first;
}

nlohmann::json CoverReport::to_json() const {
    nlohmann::json j;
    j["ok"] = ok;
    j["covers_vertices"] = covers_vertices;
    j["ball_violations"] = ball_violations;
    if (witness != kNoVertex) j["witness"] = witness;
    j["max_degree"] = max_degree;
    if (ell_target) j["ell_target"] = ell_target;
    j["ell_ok"] = ell_ok;
    j["width"] = width_status;
    return j;
}

CoverReport validate_cover(const ColoredGraph& g, const Cover& cover, std::size_t ell_target) {
    CoverReport rep;
    auto index = pieces_of(cover, g.size());
    for (Vertex v = 0; v < g.size(); ++v) {
        if (index[v].empty()) rep.covers_vertices = false;
        VertexSet nb = ball(g, v, cover.r);
        bool inside = false;
        for (std::uint32_t p : index[v]) {
            const auto& piece = cover.pieces[p];
            if (std::includes(piece.begin(), piece.end(), nb.begin(), nb.end())) {
                inside = true;
                break;
            }
        }
        if (!inside) {
            if (rep.ball_violations++ == 0) rep.witness = v;
        }
    }
    ColoredGraph h = intersection_graph(cover, g.size());
    for (Vertex p = 0; p < h.size(); ++p) rep.max_degree = std::max(rep.max_degree, h.neighbors(p).size());
    rep.ell_target = ell_target;
    rep.ell_ok = ell_target == 0 || rep.max_degree <= ell_target;
    rep.ok = rep.covers_vertices && rep.ball_violations == 0 && rep.ell_ok;
    return rep;
}

std::vector<std::uint32_t> distance_m_coloring(const ColoredGraph& h, std::uint32_t m) {
    ColoredGraph pw = m == 0 ? h : power_graph(h, m);
    std::vector<std::uint32_t> color(h.size(), 0);
    std::vector<char> used;
    for (Vertex v = 0; v < h.size(); ++v) {
        used.assign(pw.neighbors(v).size() + 1, 0);
        for (Vertex w : pw.neighbors(v)) {
            if (w < v && color[w] < used.size()) used[color[w]] = 1;
        }
        std::uint32_t c = 0;
        while (used[c]) ++c;
        color[v] = c;
    }
    return color;
}

std::uint32_t color_count(const std::vector<std::uint32_t>& coloring) {
    std::uint32_t top = 0;
    for (auto c : coloring) top = std::max(top, c + 1);
    return top;
}

std::vector<Distance> inner_radius(const ColoredGraph& g, std::span<const Vertex> piece, Distance cap) {
    std::vector<char> inside(g.size(), 0);
    for (Vertex v : piece) {
        check_vertex(g, v);
        inside[v] = 1;
    }
    std::vector<Distance> out;
    out.reserve(piece.size());
    std::vector<Distance> dist(g.size(), kUnreachable);
    std::vector<Vertex> queue, touched;
    for (Vertex x : piece) {
        queue.assign(1, x);
        touched.assign(1, x);
        dist[x] = 0;
        Distance result = cap;
        for (std::size_t i = 0; i < queue.size(); ++i) {
            Vertex u = queue[i];
            if (!inside[u]) {
                result = dist[u] - 1;
                break;
            }
            if (dist[u] >= cap) continue;
            for (Vertex w : g.neighbors(u)) {
                if (dist[w] != kUnreachable) continue;
                dist[w] = dist[u] + 1;
                queue.push_back(w);
                touched.push_back(w);
            }
        }
        for (Vertex v : touched) dist[v] = kUnreachable;
        out.push_back(result);
    }
    return out;
}

VertexSet kernel(const ColoredGraph& g, std::span<const Vertex> piece, Distance t) {
    VertexSet sorted = make_vertex_set(std::vector<Vertex>(piece.begin(), piece.end()));
    auto radius = inner_radius(g, sorted, t);
    VertexSet out;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        if (radius[i] >= t) out.push_back(sorted[i]);
    }
    return out;
}

Cover parse_cover(std::string_view text, std::size_t n) {
    Cover cover;
    bool have_r = false;
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream words(line);
        std::string key;
        if (!(words >> key)) continue;
        auto fail = [&](const std::string& msg) {
            throw InputError("cover line " + std::to_string(lineno) + ": " + msg);
        };
        if (key == "r") {
            long long r = -1;
            if (!(words >> r) || r < 0) fail("expected a radius");
            cover.r = static_cast<Distance>(r);
            have_r = true;
        } else if (key == "nice") {
            cover.nice = true;
        } else if (key == "g") {
            std::getline(words, cover.g_profile);
            auto start = cover.g_profile.find_first_not_of(' ');
            cover.g_profile = start == std::string::npos ? "" : cover.g_profile.substr(start);
        } else if (key == "piece") {
            VertexSet piece;
            long long v;
            while (words >> v) {
                if (v < 0 || static_cast<std::size_t>(v) >= n) fail("vertex " + std::to_string(v) + " out of range");
                piece.push_back(static_cast<Vertex>(v));
            }
            if (!words.eof()) fail("bad vertex id");
            if (piece.empty()) fail("empty piece");
            cover.pieces.push_back(make_vertex_set(std::move(piece)));
        } else {
            fail("unknown keyword '" + key + "'");
        }
    }
    if (!have_r) throw InputError("cover file has no `r` line");
    normalize_cover(cover, n);
    return cover;
}

std::string format_cover(const Cover& cover) {
    std::ostringstream out;
    out << "r " << cover.r << "\n";
    if (cover.nice) out << "nice\n";
    if (!cover.g_profile.empty()) out << "g " << cover.g_profile << "\n";
    for (const auto& p : cover.pieces) {
        out << "piece";
        for (Vertex v : p) out << ' ' << v;
        out << "\n";
    }
    return out.str();
}

namespace {

bool scattered_exact(DistanceOracle& dist, const std::vector<Vertex>& pool, std::size_t from, std::size_t need,
                     Distance gap, std::vector<Vertex>& chosen, std::uint64_t& nodes) {
    ++nodes;
    if (chosen.size() == need) return true;
    if (chosen.size() + (pool.size() - from) < need) return false;
    for (std::size_t i = from; i < pool.size(); ++i) {
        if (chosen.size() + (pool.size() - i) < need) return false;
        bool far = true;
        for (Vertex c : chosen) {
            if (dist.within(c, pool[i], gap)) {
                far = false;
                break;
            }
        }
        if (!far) continue;
        chosen.push_back(pool[i]);
        if (scattered_exact(dist, pool, i + 1, need, gap, chosen, nodes)) return true;
        chosen.pop_back();
    }
    return false;
}

}  // namespace

bool basic_local_check(const ColoredGraph& g, const Formula& psi, Distance t, std::size_t s,
                       std::span<const VertexSet> sets, LocalCheckStats* stats) {
    if (psi.arity() != 1) throw InputError("a basic local sentence needs psi with exactly one free variable");
    if (sets.size() != psi.set_arity()) throw InputError("set argument count does not match psi");
    LocalCheckStats local;
    LocalCheckStats& st = stats ? *stats : local;
    st = {};
    if (s == 0) {
        st.greedy_decided = true;
        return true;
    }
    std::vector<Vertex> pool;
    for (Vertex a = 0; a < g.size(); ++a) {
        VertexSet nb = ball(g, a, t);
        auto sub = induced_subgraph(g, nb);
        auto from = sub.from_parent(g.size());
        std::vector<VertexSet> clipped(sets.size());
        for (std::size_t i = 0; i < sets.size(); ++i) {
            for (Vertex w : sets[i]) {
                if (from[w] != kNoVertex) clipped[i].push_back(from[w]);
            }
            std::sort(clipped[i].begin(), clipped[i].end());
        }
        Vertex arg[1] = {from[a]};
        if (eval_oracle(sub.graph, psi, arg, clipped)) pool.push_back(a);
    }
    st.candidates = pool.size();
    if (pool.size() < s) {
        st.greedy_decided = true;
        return false;
    }
    DistanceOracle dist(g);
    const Distance gap = 2 * t;
    std::vector<Vertex> chosen;
    for (Vertex v : pool) {
        bool far = true;
        for (Vertex c : chosen) {
            if (dist.within(c, v, gap)) {
                far = false;
                break;
            }
        }
        if (far) chosen.push_back(v);
        if (chosen.size() >= s) {
            st.greedy_decided = true;
            return true;
        }
    }
    chosen.clear();
    return scattered_exact(dist, pool, 0, s, gap, chosen, st.branch_nodes);
}

}  // namespace clk
