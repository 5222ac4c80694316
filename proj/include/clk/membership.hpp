#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "json.hpp"

#include "clk/codec.hpp"
#include "clk/graph.hpp"
#include "clk/piece.hpp"

namespace clk {

/*
 * One entry of a vertex's piece list: piece id, the largest k (capped at
 * build time) with N^k(x) inside the piece, and the labeler's sublabel.
 * Encoded as varint piece, varint depth, varint length + sublabel.
 */
struct Membership {
    std::uint32_t piece = 0;
    Distance depth = 0;
    ByteView sublabel;
};

struct MembershipOut {
    std::uint32_t piece = 0;
    Distance depth = 0;
    Bytes sublabel;
};

// Entries sorted by piece id, prefixed by a varint count.
void put_memberships(ByteWriter& w, std::vector<MembershipOut> entries);
std::vector<Membership> get_memberships(ByteReader& r);
const Membership* find_membership(const std::vector<Membership>& list, std::uint32_t piece);

// A decoded argument: vertex id plus its piece list (views into the label).
struct PieceArg {
    Vertex id = 0;
    std::vector<Membership> pieces;
};

// For each set, the sublabels of the members lying in `piece`.
SetSublabels clip_sets(const std::vector<std::vector<PieceArg>>& sets, std::uint32_t piece);

/*
 * Runs the labeler on one piece, stores its catalog section under `section`
 * and appends the membership entry of every piece vertex to `per_vertex`.
 * `depth`, when given, is parallel to `piece.to_parent`.
 */
void add_piece(Catalog& catalog, const std::string& section, const PieceLabeler& labeler, std::uint32_t id,
               const InducedSubgraph& piece, std::vector<std::vector<MembershipOut>>& per_vertex,
               const std::vector<Distance>* depth = nullptr);

/*
 * Lazily prepared pieces of one catalog. Thread-safe; pieces are built at
 * most once and kept for the lifetime of the cache.
 */
class PieceCache {
public:
    PieceCache(const Catalog& catalog, LabelerKind kind, std::function<std::string(std::uint32_t)> section_name);

    PreparedPiece& get(std::uint32_t id);
    const PieceLabeler& labeler() const noexcept { return *labeler_; }

private:
    const Catalog& catalog_;
    std::unique_ptr<PieceLabeler> labeler_;
    std::function<std::string(std::uint32_t)> section_name_;
    std::mutex mu_;
    std::map<std::uint32_t, std::unique_ptr<PreparedPiece>> pieces_;
};

// JSON stored in a catalog section.
void put_json_section(Catalog& catalog, const std::string& name, const nlohmann::json& value);
nlohmann::json get_json_section(const Catalog& catalog, const std::string& name);

// Plan source in section "plan".
void put_text_section(Catalog& catalog, const std::string& name, const std::string& text);
std::string get_text_section(const Catalog& catalog, const std::string& name);

// Decodes "varint id, memberships" label prefix used by several schemes.
PieceArg read_piece_arg(ByteReader& r);

}  // namespace clk
