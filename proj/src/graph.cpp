#include "clk/graph.hpp"

#include <algorithm>
#include <deque>
#include <numeric>

#include "clk/errors.hpp"

namespace clk {

ColoredGraph::ColoredGraph(std::size_t n, std::vector<Edge> edges,
                           std::vector<std::vector<Color>> vertex_colors)
    : edges_(std::move(edges)), colors_(std::move(vertex_colors)) {
    if (colors_.empty()) {
        colors_.resize(n);
    } else if (colors_.size() != n) {
        throw InputError("vertex color table has " + std::to_string(colors_.size()) +
                         " rows for " + std::to_string(n) + " vertices");
    }
    std::sort(edges_.begin(), edges_.end());
    edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());

    neighbors_.resize(n);
    out_.resize(n);
    for (const Edge& e : edges_) {
        if (e.from >= n || e.to >= n) {
            throw InputError("edge endpoint out of range: " + std::to_string(e.from) + " " +
                             std::to_string(e.to));
        }
        edge_palette_ = std::max<std::size_t>(edge_palette_, std::size_t{e.color} + 1);
        out_[e.from].emplace_back(e.to, e.color);
        if (e.from == e.to) {
            has_loops_ = true;
            continue;
        }
        neighbors_[e.from].push_back(e.to);
        neighbors_[e.to].push_back(e.from);
    }
    for (auto& list : neighbors_) {
        std::sort(list.begin(), list.end());
        list.erase(std::unique(list.begin(), list.end()), list.end());
    }
    for (auto& cs : colors_) {
        std::sort(cs.begin(), cs.end());
        cs.erase(std::unique(cs.begin(), cs.end()), cs.end());
        if (!cs.empty()) {
            vertex_palette_ = std::max<std::size_t>(vertex_palette_, std::size_t{cs.back()} + 1);
        }
    }
    by_color_.resize(vertex_palette_);
    for (Vertex v = 0; v < n; ++v) {
        for (Color c : colors_[v]) by_color_[c].push_back(v);
    }
}

bool ColoredGraph::has_color(Vertex v, Color c) const {
    const auto& cs = colors_[v];
    return std::binary_search(cs.begin(), cs.end(), c);
}

bool ColoredGraph::has_edge(Vertex from, Vertex to, Color c) const {
    const auto& list = out_[from];
    return std::binary_search(list.begin(), list.end(), std::make_pair(to, c));
}

std::span<const Vertex> ColoredGraph::vertices_with_color(Color c) const {
    if (c >= by_color_.size()) return {};
    return by_color_[c];
}

bool ColoredGraph::is_simple_undirected() const {
    if (has_loops_ || edge_palette_ > 1) return false;
    for (const Edge& e : edges_) {
        if (!has_edge(e.to, e.from, e.color)) return false;
    }
    return true;
}

bool ColoredGraph::operator==(const ColoredGraph& other) const {
    return edges_ == other.edges_ && colors_ == other.colors_;
}

void check_vertex(const ColoredGraph& g, Vertex v) {
    if (v >= g.size()) {
        throw InputError("vertex id " + std::to_string(v) + " out of range (n=" +
                         std::to_string(g.size()) + ")");
    }
}

VertexSet make_vertex_set(std::vector<Vertex> vertices) {
    std::sort(vertices.begin(), vertices.end());
    vertices.erase(std::unique(vertices.begin(), vertices.end()), vertices.end());
    return vertices;
}

std::vector<Distance> bfs_distances(const ColoredGraph& g, std::span<const Vertex> sources,
                                    Distance limit) {
    std::vector<Distance> dist(g.size(), kUnreachable);
    std::vector<Vertex> frontier;
    for (Vertex s : sources) {
        check_vertex(g, s);
        if (dist[s] != 0) {
            dist[s] = 0;
            frontier.push_back(s);
        }
    }
    std::size_t head = 0;
    while (head < frontier.size()) {
        Vertex u = frontier[head++];
        if (dist[u] >= limit) continue;
        for (Vertex w : g.neighbors(u)) {
            if (dist[w] == kUnreachable) {
                dist[w] = dist[u] + 1;
                frontier.push_back(w);
            }
        }
    }
    return dist;
}

VertexSet ball(const ColoredGraph& g, std::span<const Vertex> centers, Distance radius) {
    auto dist = bfs_distances(g, centers, radius);
    VertexSet out;
    for (Vertex v = 0; v < g.size(); ++v) {
        if (dist[v] <= radius) out.push_back(v);
    }
    return out;
}

VertexSet ball(const ColoredGraph& g, Vertex center, Distance radius) {
    return ball(g, std::span<const Vertex>(&center, 1), radius);
}

Distance distance(const ColoredGraph& g, Vertex u, Vertex v) {
    check_vertex(g, u);
    check_vertex(g, v);
    if (u == v) return 0;
    return bfs_distances(g, std::span<const Vertex>(&u, 1))[v];
}

ColoredGraph power_graph(const ColoredGraph& g, std::uint32_t m) {
    if (m == 0) throw InputError("power_graph needs m >= 1");
    std::vector<Edge> edges;
    for (Vertex u = 0; u < g.size(); ++u) {
        auto dist = bfs_distances(g, std::span<const Vertex>(&u, 1), m);
        for (Vertex v = 0; v < g.size(); ++v) {
            if (v != u && dist[v] <= m) edges.push_back({u, v, 0});
        }
    }
    return ColoredGraph(g.size(), std::move(edges));
}

std::size_t Orientation::out_neighbor_count(Vertex v) const {
    std::vector<Vertex> targets;
    for (const auto& e : out[v]) {
        if (e.neighbor != v) targets.push_back(e.neighbor);
    }
    std::sort(targets.begin(), targets.end());
    return static_cast<std::size_t>(std::unique(targets.begin(), targets.end()) - targets.begin());
}

Orientation degeneracy_orientation(const ColoredGraph& g) {
    const std::size_t n = g.size();
    std::vector<std::size_t> degree(n);
    std::size_t max_degree = 0;
    for (Vertex v = 0; v < n; ++v) {
        degree[v] = g.neighbors(v).size();
        max_degree = std::max(max_degree, degree[v]);
    }
    // Bucket queue keyed by current degree; ties go to the smallest id.
    std::vector<std::vector<Vertex>> buckets(max_degree + 1);
    for (Vertex v = n; v-- > 0;) buckets[degree[v]].push_back(v);
    std::vector<std::size_t> position(n, 0);
    std::vector<bool> removed(n, false);
    Orientation result;
    result.out.resize(n);
    result.peel_order.reserve(n);
    std::size_t low = 0;
    while (result.peel_order.size() < n) {
        while (low > 0 && !buckets[low - 1].empty()) --low;
        while (buckets[low].empty()) ++low;
        Vertex v = buckets[low].back();
        buckets[low].pop_back();
        if (removed[v] || degree[v] != low) continue;
        removed[v] = true;
        position[v] = result.peel_order.size();
        result.peel_order.push_back(v);
        for (Vertex w : g.neighbors(v)) {
            if (removed[w]) continue;
            --degree[w];
            buckets[degree[w]].push_back(w);
            if (degree[w] < low) low = degree[w];
        }
    }
    for (const Edge& e : g.edges()) {
        if (e.from == e.to) {
            result.out[e.from].push_back({e.from, e.color, true});
        } else if (position[e.from] < position[e.to]) {
            result.out[e.from].push_back({e.to, e.color, true});
        } else {
            result.out[e.to].push_back({e.from, e.color, false});
        }
    }
    for (Vertex v = 0; v < n; ++v) {
        result.max_out_degree = std::max(result.max_out_degree, result.out_neighbor_count(v));
    }
    return result;
}

std::size_t degeneracy(const ColoredGraph& g) { return degeneracy_orientation(g).max_out_degree; }

std::vector<std::pair<Vertex, Vertex>> undirected_pairs(const ColoredGraph& g) {
    std::vector<std::pair<Vertex, Vertex>> pairs;
    for (Vertex u = 0; u < g.size(); ++u) {
        for (Vertex v : g.neighbors(u)) {
            if (u < v) pairs.emplace_back(u, v);
        }
    }
    return pairs;
}

ColoredGraph subdivide(const ColoredGraph& g) {
    if (!g.is_simple_undirected() || g.vertex_palette_size() > 0) {
        throw InputError("subdivide expects a simple undirected uncolored graph");
    }
    auto pairs = undirected_pairs(g);
    std::vector<std::pair<Vertex, Vertex>> out;
    Vertex next = static_cast<Vertex>(g.size());
    for (auto [u, v] : pairs) {
        out.emplace_back(u, next);
        out.emplace_back(next, v);
        ++next;
    }
    return make_undirected(next, out);
}

std::vector<Vertex> InducedSubgraph::from_parent(std::size_t parent_size) const {
    std::vector<Vertex> map(parent_size, kNoVertex);
    for (Vertex i = 0; i < to_parent.size(); ++i) map[to_parent[i]] = i;
    return map;
}

InducedSubgraph induced_subgraph(const ColoredGraph& g, std::span<const Vertex> vertices) {
    InducedSubgraph sub;
    sub.to_parent.assign(vertices.begin(), vertices.end());
    sub.to_parent = make_vertex_set(std::move(sub.to_parent));
    for (Vertex v : sub.to_parent) check_vertex(g, v);
    auto local = sub.from_parent(g.size());
    std::vector<Edge> edges;
    std::vector<std::vector<Color>> colors;
    colors.reserve(sub.to_parent.size());
    for (Vertex v : sub.to_parent) {
        auto cs = g.colors(v);
        colors.emplace_back(cs.begin(), cs.end());
        for (auto [w, c] : g.out_edges(v)) {
            if (local[w] != kNoVertex) edges.push_back({local[v], local[w], c});
        }
    }
    sub.graph = ColoredGraph(sub.to_parent.size(), std::move(edges), std::move(colors));
    return sub;
}

InducedSubgraph remove_vertices(const ColoredGraph& g, std::span<const Vertex> vertices) {
    std::vector<bool> drop(g.size(), false);
    for (Vertex v : vertices) {
        check_vertex(g, v);
        drop[v] = true;
    }
    std::vector<Vertex> keep;
    for (Vertex v = 0; v < g.size(); ++v) {
        if (!drop[v]) keep.push_back(v);
    }
    return induced_subgraph(g, keep);
}

ColoredGraph line_graph(const ColoredGraph& g) {
    auto pairs = undirected_pairs(g);
    std::vector<std::vector<Vertex>> incident(g.size());
    for (Vertex i = 0; i < pairs.size(); ++i) {
        incident[pairs[i].first].push_back(i);
        incident[pairs[i].second].push_back(i);
    }
    std::vector<std::pair<Vertex, Vertex>> out;
    for (const auto& list : incident) {
        for (std::size_t a = 0; a < list.size(); ++a) {
            for (std::size_t b = a + 1; b < list.size(); ++b) out.emplace_back(list[a], list[b]);
        }
    }
    return make_undirected(pairs.size(), out);
}

ColoredGraph with_extra_colors(const ColoredGraph& g,
                               const std::vector<std::vector<Color>>& extra) {
    std::vector<std::vector<Color>> colors(g.size());
    for (Vertex v = 0; v < g.size(); ++v) {
        auto cs = g.colors(v);
        colors[v].assign(cs.begin(), cs.end());
        if (v < extra.size()) colors[v].insert(colors[v].end(), extra[v].begin(), extra[v].end());
    }
    return ColoredGraph(g.size(), std::vector<Edge>(g.edges().begin(), g.edges().end()),
                        std::move(colors));
}

std::vector<Edge> undirected_edges(std::span<const std::pair<Vertex, Vertex>> pairs, Color color) {
    std::vector<Edge> edges;
    edges.reserve(pairs.size() * 2);
    for (auto [u, v] : pairs) {
        edges.push_back({u, v, color});
        edges.push_back({v, u, color});
    }
    return edges;
}

ColoredGraph make_undirected(std::size_t n, std::span<const std::pair<Vertex, Vertex>> pairs) {
    return ColoredGraph(n, undirected_edges(pairs));
}

bool is_forest(const ColoredGraph& g) {
    if (g.has_loops()) return false;
    std::vector<Vertex> parent(g.size());
    std::iota(parent.begin(), parent.end(), Vertex{0});
    auto find = [&](Vertex x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (auto [u, v] : undirected_pairs(g)) {
        Vertex a = find(u), b = find(v);
        if (a == b) return false;
        parent[a] = b;
    }
    return true;
}

}  // namespace clk
