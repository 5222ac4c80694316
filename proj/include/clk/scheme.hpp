#pragma once

#include <atomic>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "clk/codec.hpp"
#include "clk/formula.hpp"
#include "clk/graph.hpp"
#include "clk/piece.hpp"
#include "clk/plan.hpp"

namespace clk {

// For each set argument, the labels of its members.
using LabelSets = std::vector<std::vector<ByteView>>;

/*
 * Answers queries from labels and the catalog only. Instances own a copy of
 * the catalog and never see the graph. ask/count may be called concurrently.
 */
class Decoder {
public:
    virtual ~Decoder() = default;
    virtual SchemeId scheme() const = 0;
    // Signature of the built query; the arboricity decoder accepts any formula instead.
    virtual std::size_t arity() const { return 0; }
    virtual std::size_t set_arity() const { return 0; }
    // `query` must be null for plan-driven schemes and non-null for arboricity.
    virtual bool ask(const Formula* query, std::span<const ByteView> args, const LabelSets& sets) = 0;
    virtual std::uint64_t count(const LabelSets& sets);
    virtual std::optional<std::uint64_t> modulus() const { return std::nullopt; }

    // Elementary label operations performed so far (pair checks, piece lookups).
    std::uint64_t operations() const noexcept { return ops_.load(); }

protected:
    std::atomic<std::uint64_t> ops_{0};
};

// `catalog` may be null only for the arboricity scheme.
std::unique_ptr<Decoder> open_decoder(SchemeId scheme, const Catalog* catalog);

enum class CoverKind : std::uint8_t { Ball, Interval };

struct Cover;
struct ExpansionPartition;

struct BuildOptions {
    SchemeId scheme = SchemeId::Arboricity;
    std::optional<QueryPlan> plan;
    std::shared_ptr<const Cover> cover;  // user cover, otherwise constructed
    CoverKind cover_kind = CoverKind::Ball;
    std::vector<Vertex> order;  // unit-interval order for CoverKind::Interval
    std::shared_ptr<const ExpansionPartition> partition;
    LabelerKind labeler = LabelerKind::Catalog;
    std::uint64_t modulus = 0;  // counting: 0 for exact counts, otherwise s >= 2
    bool force = false;         // counting: skip the t-connectedness check
    std::size_t alpha_budget = 50000;
    std::uint64_t seed = 1;
};

struct BuildResult {
    LabelBundle bundle;
    Catalog catalog;
    nlohmann::json report;
};

BuildResult build_labels(const ColoredGraph& g, const BuildOptions& options);

// Label-size summary shared by all scheme reports.
nlohmann::json size_report(const LabelBundle& bundle, const Catalog& catalog);

/*
 * A bundle paired with its decoder; queries name vertices by id and are
 * translated to labels. Still has no access to the graph.
 */
class LabeledGraph {
public:
    LabeledGraph(LabelBundle bundle, std::optional<Catalog> catalog);

    const LabelBundle& bundle() const noexcept { return bundle_; }
    Decoder& decoder() noexcept { return *decoder_; }

    bool ask(const Formula* query, std::span<const Vertex> args, std::span<const VertexSet> sets);
    std::uint64_t count(std::span<const VertexSet> sets);

private:
    LabelBundle bundle_;
    std::optional<Catalog> catalog_;
    std::unique_ptr<Decoder> decoder_;

    ByteView label(Vertex v) const;
    LabelSets label_sets(std::span<const VertexSet> sets) const;
};

}  // namespace clk
