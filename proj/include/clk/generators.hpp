#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "json.hpp"

#include "clk/formula.hpp"
#include "clk/graph.hpp"

namespace clk {

// Palette and orientation shared by the random generators.
struct Palette {
    std::size_t vertex_colors = 0;  // each vertex gets each color with probability 1/2
    std::size_t edge_colors = 1;
    bool directed = false;  // random orientation per edge (one or both directions)
};

// Union of k random spanning forests on the same vertex set; k = 1 is a tree.
ColoredGraph random_forest_union(std::size_t n, std::size_t k, std::uint64_t seed, const Palette& palette = {});

struct IntervalGraph {
    ColoredGraph graph;
    std::vector<Vertex> order;  // vertices by left endpoint
    std::vector<double> left;   // interval of v is [left[v], left[v] + 1]
};

// Left endpoints uniform in [0, n / density]; ids are shuffled.
IntervalGraph unit_interval(std::size_t n, double density, std::uint64_t seed, const Palette& palette = {});
// Adjacency equals interval overlap and the order sorts left endpoints.
bool interval_model_consistent(const IntervalGraph& ig);

ColoredGraph bounded_degree(std::size_t n, std::size_t max_degree, std::uint64_t seed, const Palette& palette = {});
ColoredGraph grid(std::size_t w, std::size_t h);
// Subdivision of K_n: n + C(n,2) vertices.
ColoredGraph subdivided_clique(std::size_t n);
ColoredGraph gnp(std::size_t n, double p, std::uint64_t seed);

struct GeneratedGraph {
    ColoredGraph graph;
    std::vector<Vertex> order;  // only for unit-interval graphs
};

/*
 * JSON generator spec: {"kind": forest_union|unit_interval|bounded_degree|grid|
 * subdivided_clique|hnm|gnp|file, "n", "k", "density", "degree", "w", "h",
 * "m", "e2", "p", "path", "seed", "vertex_colors", "edge_colors", "directed"}.
 */
GeneratedGraph generate(const nlohmann::json& spec);

// Random quantifier-free formula over x1..xm and Y1..Yq with `atoms` atoms.
Formula random_qf_formula(std::mt19937_64& rng, std::size_t m, std::size_t q, std::size_t vertex_palette,
                          std::size_t edge_palette, std::size_t atoms);

}  // namespace clk
