#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "clk/codec.hpp"
#include "clk/formula.hpp"
#include "clk/graph.hpp"

namespace clk {

enum class LabelerKind : std::uint8_t { Catalog = 1, Centroid = 2 };

const char* labeler_name(LabelerKind kind);
LabelerKind labeler_from_name(const std::string& name);

struct PieceBuild {
    std::vector<Bytes> sublabels;  // indexed by local vertex id of the piece
    Bytes section;                 // catalog payload; empty for label-pure labelers
};

// Set arguments handed to a piece: for each set, sublabels of its members inside the piece.
using SetSublabels = std::vector<std::vector<ByteView>>;

/*
 * Query answering for one piece, built from its catalog section (if any)
 * and the sublabels of the arguments. Holds no reference to the source graph.
 */
class PreparedPiece {
public:
    virtual ~PreparedPiece() = default;
    virtual bool holds(const Formula& f, std::span<const ByteView> args, const SetSublabels& sets) = 0;
    virtual std::uint64_t count(const Formula& f, const SetSublabels& sets) = 0;
    // Distance inside the piece, kUnreachable across components.
    virtual Distance distance(ByteView a, ByteView b) = 0;
};

class PieceLabeler {
public:
    virtual ~PieceLabeler() = default;
    virtual LabelerKind kind() const = 0;
    virtual PieceBuild build(std::uint32_t piece_id, const ColoredGraph& piece) const = 0;
    virtual std::unique_ptr<PreparedPiece> prepare(std::uint32_t piece_id, ByteView section) const = 0;
    // Whether prepare() needs a catalog section.
    virtual bool uses_catalog() const = 0;
};

std::unique_ptr<PieceLabeler> make_labeler(LabelerKind kind);

// Piece id stored at the front of every sublabel.
std::uint32_t sublabel_piece(ByteView sublabel);

/*
 * Catalog-backed labeler: sublabel (piece id, local id), section = the
 * serialized piece. Formulas are evaluated on the decoded piece.
 */
class CatalogLabeler final : public PieceLabeler {
public:
    LabelerKind kind() const override { return LabelerKind::Catalog; }
    PieceBuild build(std::uint32_t piece_id, const ColoredGraph& piece) const override;
    std::unique_ptr<PreparedPiece> prepare(std::uint32_t piece_id, ByteView section) const override;
    bool uses_catalog() const override { return true; }
};

struct CentroidEntry {
    Vertex centroid = 0;  // local id of the centroid
    Distance dist = 0;
};

/*
 * Label-pure forest labeler. Sublabel: varint piece id, varint entry count,
 * then (varint centroid, varint distance) per level of the centroid
 * decomposition, root level first. Supports quantifier-free formulas over
 * =, dist and set membership only.
 */
class CentroidLabeler final : public PieceLabeler {
public:
    LabelerKind kind() const override { return LabelerKind::Centroid; }
    PieceBuild build(std::uint32_t piece_id, const ColoredGraph& piece) const override;
    std::unique_ptr<PreparedPiece> prepare(std::uint32_t piece_id, ByteView section) const override;
    bool uses_catalog() const override { return false; }
};

// Per vertex, entries from the outermost centroid inwards. Throws InputError on cyclic input.
std::vector<std::vector<CentroidEntry>> centroid_decomposition(const ColoredGraph& forest);
Bytes encode_centroid_label(std::uint32_t piece_id, const std::vector<CentroidEntry>& entries);
std::vector<CentroidEntry> decode_centroid_label(ByteView sublabel);
Distance centroid_distance(ByteView a, ByteView b);

}  // namespace clk
