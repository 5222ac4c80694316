#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "clk/formula.hpp"
#include "clk/graph.hpp"

namespace clk {

/*
 * A family of vertex sets such that every radius-r ball lies inside one of
 * them. `ell` is the measured maximum degree of the intersection graph. The
 * clique-width profile is declared text only.
 */
struct Cover {
    std::vector<VertexSet> pieces;
    Distance r = 0;
    std::size_t ell = 0;
    bool nice = false;
    std::string g_profile;
    std::vector<std::string> notes;
};

// Pieces containing each vertex, ascending piece ids.
std::vector<std::vector<std::uint32_t>> pieces_of(const Cover& cover, std::size_t n);

// Sorts pieces, removes duplicates and measures ell.
void normalize_cover(Cover& cover, std::size_t n);

Cover build_ball_cover(const ColoredGraph& g, Distance r);

/*
 * Pieces N^R(rep) for representatives taken every `spacing` BFS layers from
 * the leftmost vertex of each component, R = r + 1 + spacing / 2. Starts at
 * spacing 1 and doubles while the cover fails condition (1) or ell > 2r + 2.
 */
Cover build_unit_interval_cover(const ColoredGraph& g, std::span<const Vertex> order, Distance r);
Cover build_unit_interval_cover_spaced(const ColoredGraph& g, std::span<const Vertex> order, Distance r,
                                       std::size_t spacing);

struct CoverReport {
    bool ok = true;
    bool covers_vertices = true;
    std::size_t ball_violations = 0;
    Vertex witness = kNoVertex;  // first vertex whose r-ball fits in no piece
    std::size_t max_degree = 0;
    std::size_t ell_target = 0;  // 0 when no target was given
    bool ell_ok = true;
    std::string width_status = "declared, unverified";

    nlohmann::json to_json() const;
};

// Checks every r-ball against the pieces and measures the intersection degree.
CoverReport validate_cover(const ColoredGraph& g, const Cover& cover, std::size_t ell_target = 0);

// One vertex per piece, symmetric edges between overlapping pieces.
ColoredGraph intersection_graph(const Cover& cover, std::size_t n);

// Greedy proper coloring of the m-th power of h, in vertex order.
std::vector<std::uint32_t> distance_m_coloring(const ColoredGraph& h, std::uint32_t m);
std::uint32_t color_count(const std::vector<std::uint32_t>& coloring);

// {x in U : N^t(x) ⊆ U}.
VertexSet kernel(const ColoredGraph& g, std::span<const Vertex> piece, Distance t);

// Largest k <= cap with N^k(x) ⊆ piece, for every x of the piece (parallel to it).
std::vector<Distance> inner_radius(const ColoredGraph& g, std::span<const Vertex> piece, Distance cap);

/*
 * Text format: `r <n>`, optional `nice`, optional `g <profile>`,
 * `piece <v> <v> ...` per piece, `#` comments.
 */
Cover parse_cover(std::string_view text, std::size_t n);
std::string format_cover(const Cover& cover);

/*
 * Whether s vertices pairwise farther than 2t apart satisfy psi, where psi
 * is evaluated on the induced t-ball of each candidate. Greedy first, then
 * exact branch and bound.
 */
struct LocalCheckStats {
    std::size_t candidates = 0;
    bool greedy_decided = false;
    std::uint64_t branch_nodes = 0;
};

bool basic_local_check(const ColoredGraph& g, const Formula& psi, Distance t, std::size_t s,
                       std::span<const VertexSet> sets = {}, LocalCheckStats* stats = nullptr);

}  // namespace clk
