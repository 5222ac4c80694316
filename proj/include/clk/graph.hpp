#pragma once

#include <compare>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace clk {

using Vertex = std::uint32_t;
using Color = std::uint32_t;
using Distance = std::uint32_t;

inline constexpr Distance kUnreachable = std::numeric_limits<Distance>::max();

// Sorted, duplicate-free list of vertex ids.
using VertexSet = std::vector<Vertex>;

struct Edge {
    Vertex from = 0;
    Vertex to = 0;
    Color color = 0;

    auto operator<=>(const Edge&) const = default;
};

/*
 * Directed graph with a set of colors per vertex and one color per edge.
 * Edges are a relation: duplicate (from, to, color) triples collapse.
 * Immutable after construction.
 */
class ColoredGraph {
public:
    ColoredGraph() = default;
    ColoredGraph(std::size_t n, std::vector<Edge> edges,
                 std::vector<std::vector<Color>> vertex_colors = {});

    std::size_t size() const noexcept { return colors_.size(); }
    std::span<const Edge> edges() const noexcept { return edges_; }

    std::span<const Color> colors(Vertex v) const { return colors_[v]; }
    bool has_color(Vertex v, Color c) const;
    bool has_edge(Vertex from, Vertex to, Color c) const;

    // Undirected neighbourhood ignoring colors, without v itself.
    std::span<const Vertex> neighbors(Vertex v) const { return neighbors_[v]; }
    // (target, color) pairs sorted by target then color.
    std::span<const std::pair<Vertex, Color>> out_edges(Vertex v) const { return out_[v]; }
    // Vertices carrying color c, ascending.
    std::span<const Vertex> vertices_with_color(Color c) const;

    // One past the largest color in use, 0 when the palette is empty.
    std::size_t vertex_palette_size() const noexcept { return vertex_palette_; }
    std::size_t edge_palette_size() const noexcept { return edge_palette_; }

    bool has_loops() const noexcept { return has_loops_; }
    // Every edge is mirrored with the same color, no loops, a single edge color.
    bool is_simple_undirected() const;

    bool operator==(const ColoredGraph& other) const;

private:
    std::vector<Edge> edges_;
    std::vector<std::vector<Color>> colors_;
    std::vector<std::vector<Vertex>> neighbors_;
    std::vector<std::vector<std::pair<Vertex, Color>>> out_;
    std::vector<std::vector<Vertex>> by_color_;
    std::size_t vertex_palette_ = 0;
    std::size_t edge_palette_ = 0;
    bool has_loops_ = false;
};

void check_vertex(const ColoredGraph& g, Vertex v);
VertexSet make_vertex_set(std::vector<Vertex> vertices);

// Undirected BFS distances from a set of sources; entries beyond `limit` stay kUnreachable.
std::vector<Distance> bfs_distances(const ColoredGraph& g, std::span<const Vertex> sources,
                                    Distance limit = kUnreachable);

VertexSet ball(const ColoredGraph& g, std::span<const Vertex> centers, Distance radius);
VertexSet ball(const ColoredGraph& g, Vertex center, Distance radius);
Distance distance(const ColoredGraph& g, Vertex u, Vertex v);

// Simple undirected graph joining vertices at distance 1..m; colors are dropped.
ColoredGraph power_graph(const ColoredGraph& g, std::uint32_t m);

// Every edge stored once, at the endpoint that was peeled first.
struct OrientedEdge {
    Vertex neighbor = 0;
    Color color = 0;
    bool forward = true;  // true: owner -> neighbor, false: neighbor -> owner
};

struct Orientation {
    std::vector<std::vector<OrientedEdge>> out;
    std::vector<Vertex> peel_order;
    // Largest number of distinct non-loop out-neighbours; equals the degeneracy.
    std::size_t max_out_degree = 0;

    std::size_t out_neighbor_count(Vertex v) const;
};

Orientation degeneracy_orientation(const ColoredGraph& g);
std::size_t degeneracy(const ColoredGraph& g);

// Inserts a fresh vertex on every undirected edge. Original ids are kept,
// subdivision vertices follow in (u < v) lexicographic edge order.
ColoredGraph subdivide(const ColoredGraph& g);

struct InducedSubgraph {
    ColoredGraph graph;
    std::vector<Vertex> to_parent;  // local id -> parent id

    // Parent id -> local id, kUnreachable-style sentinel when absent.
    std::vector<Vertex> from_parent(std::size_t parent_size) const;
};

inline constexpr Vertex kNoVertex = std::numeric_limits<Vertex>::max();

InducedSubgraph induced_subgraph(const ColoredGraph& g, std::span<const Vertex> vertices);
InducedSubgraph remove_vertices(const ColoredGraph& g, std::span<const Vertex> vertices);
// Vertices are the undirected non-loop edges {u,v}, u < v, in lexicographic order.
ColoredGraph line_graph(const ColoredGraph& g);

// Adds vertex colors to an existing graph (used for marker predicates).
ColoredGraph with_extra_colors(const ColoredGraph& g,
                               const std::vector<std::vector<Color>>& extra);

// Symmetric single-color helpers used by generators and tests.
std::vector<Edge> undirected_edges(std::span<const std::pair<Vertex, Vertex>> pairs,
                                   Color color = 0);
ColoredGraph make_undirected(std::size_t n, std::span<const std::pair<Vertex, Vertex>> pairs);
// Distinct unordered non-loop pairs of und(g), u < v.
std::vector<std::pair<Vertex, Vertex>> undirected_pairs(const ColoredGraph& g);
bool is_forest(const ColoredGraph& g);

// Line-based text format: `n <count>`, `vc <v> <color>...`, `e <u> <v> <color>`, `#` comments.
ColoredGraph parse_graph(std::string_view text);
std::string format_graph(const ColoredGraph& g);
ColoredGraph read_graph_file(const std::string& path);
void write_graph_file(const ColoredGraph& g, const std::string& path);

}  // namespace clk
