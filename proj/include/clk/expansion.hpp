#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "clk/graph.hpp"

namespace clk {

// Vertex partition into parts 0..parts-1, every part nonempty.
struct ExpansionPartition {
    std::vector<std::uint32_t> part;
    std::size_t parts = 0;
};

// Renumbers parts by first appearance in vertex order and drops empty ones.
void compact_partition(ExpansionPartition& partition);

// Part = BFS depth mod (p+1), roots are the smallest ids of their trees.
ExpansionPartition tree_depth_mod_partition(const ColoredGraph& forest, std::size_t p);
// Greedy proper coloring of und(g) in vertex order.
ExpansionPartition greedy_coloring_partition(const ColoredGraph& g);
// Vertices of degree > threshold get a part each; the rest are greedily colored.
ExpansionPartition isolation_partition(const ColoredGraph& g, std::size_t threshold);

// Text: `part <v> <id>` per vertex, `#` comments.
ExpansionPartition parse_partition(std::string_view text, std::size_t n);
std::string format_partition(const ExpansionPartition& partition);

// Deletes degree <= 1 vertices and suppresses degree-2 vertices; empty result iff treewidth <= 2.
bool treewidth_at_most_two(const ColoredGraph& g);

struct PartitionLevel {
    std::size_t i = 0;
    std::string status;  // "pass", "fail" or "unchecked"
    std::string witness;
};

struct PartitionReport {
    bool ok = true;  // no checked level failed
    std::size_t parts = 0;
    std::vector<PartitionLevel> levels;

    nlohmann::json to_json() const;
};

/*
 * Level i: every union of i parts has treewidth <= i-1. Levels 1..3 are
 * checked (stable, acyclic, series-parallel reduction), higher levels are
 * reported unchecked.
 */
PartitionReport validate_partition(const ColoredGraph& g, const ExpansionPartition& partition, std::size_t p);

std::uint64_t binomial(std::uint64_t n, std::uint64_t k);

}  // namespace clk
