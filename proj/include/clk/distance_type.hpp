#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "clk/eval.hpp"
#include "clk/formula.hpp"
#include "clk/graph.hpp"

namespace clk {

/*
 * Graph on argument positions 0..m-1 with an edge {i,j} iff the two
 * arguments are within distance 2t+1. Edges are bits of `mask`, one per
 * pair i<j in lexicographic order.
 */
struct DistanceType {
    std::size_t m = 0;
    Distance t = 0;
    std::uint64_t mask = 0;

    bool edge(std::size_t i, std::size_t j) const;
    void set_edge(std::size_t i, std::size_t j);
    // Connected components, each ascending, ordered by smallest member.
    std::vector<std::vector<std::size_t>> components() const;
    // "1-2 2-3" with 1-based positions, or "none".
    std::string to_text() const;

    bool operator==(const DistanceType&) const = default;
};

std::size_t pair_count(std::size_t m);
std::size_t pair_index(std::size_t i, std::size_t j, std::size_t m);
DistanceType parse_distance_type(std::string_view text, std::size_t m, Distance t);

DistanceType distance_type(const ColoredGraph& g, std::span<const Vertex> args, Distance t);
DistanceType distance_type(DistanceOracle& dist, std::span<const Vertex> args, Distance t);
// All 2^(m(m-1)/2) types, by increasing mask.
std::vector<DistanceType> all_distance_types(std::size_t m, Distance t);

// Conjunction of dist<=2t+1 for edges and dist>2t+1 for non-edges over `vars`.
NodePtr rho_node(const DistanceType& delta, const std::vector<std::string>& vars);
// Same, with parameters x1..xm.
Formula rho_formula(Distance t, const DistanceType& delta);

}  // namespace clk
