#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

#include "clk/codec.hpp"
#include "clk/piece.hpp"
#include "clk/scheme.hpp"

namespace clk {

/*
 * One fully seeded run: a generator spec, a scheme with its plan, and the
 * number of sampled queries. JSON keys mirror the fields; "scheme" takes a
 * scheme name, "cover" ball|interval, "partition" auto|greedy|isolation,
 * "labeler" catalog|centroid.
 */
struct Experiment {
    nlohmann::json generator;
    SchemeId scheme = SchemeId::Arboricity;
    std::string plan;          // plan text for plan-driven schemes
    std::string query;         // arboricity: fixed formula; empty draws a random one per instance
    std::size_t qf_vars = 2;   // random formulas: variables, set variables, atoms
    std::size_t qf_sets = 1;
    std::size_t qf_atoms = 4;
    CoverKind cover = CoverKind::Ball;
    std::string partition = "auto";
    LabelerKind labeler = LabelerKind::Catalog;
    std::uint64_t modulus = 0;
    bool force = false;
    std::size_t samples = 100;
    double set_density = 0.1;
    std::uint64_t seed = 1;

    static Experiment from_json(const nlohmann::json& j);
    nlohmann::json to_json() const;
};

/*
 * Builds labels, computes oracle answers for every sampled instance, frees
 * the graph, reloads bundle and catalog from their serialized bytes and
 * answers every instance from labels only. Mismatches are reported with a
 * witness whose sets are shrunk while the mismatch persists.
 */
nlohmann::json crossval(const Experiment& experiment);

// Flips each byte of the serialized bundle and catalog in turn; every flip must be rejected on load.
nlohmann::json corruption_check(const LabelBundle& bundle, const Catalog& catalog, std::size_t max_positions = 0);

/*
 * Builds the experiment for each n (generator key "n"; "w"/"h" for grids),
 * records label and catalog sizes, and fits max_bits = a*log2(n) + b.
 */
nlohmann::json bench_label_growth(const Experiment& base, const std::vector<std::size_t>& sizes);

/*
 * Subdivided cliques: the arboricity decoder must reject the common-neighbour
 * query; the local scheme answers it and its label + catalog size per log2 n
 * is recorded; the expansion scheme records its partition size.
 */
nlohmann::json contrast_experiment(const std::vector<std::size_t>& sizes, std::size_t expansion_limit = 30);

// Common neighbour of x and y, as a local plan with t = 1.
std::string common_neighbor_local_plan();
// Same query as a bounded plan with p = 3.
std::string common_neighbor_bounded_plan();

// Least-squares fit y = a*x + b.
struct LinearFit {
    double slope = 0;
    double intercept = 0;
    double max_residual = 0;
    double r2 = 1;
};

LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace clk
