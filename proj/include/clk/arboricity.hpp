#pragma once

#include <cstdint>
#include <vector>

#include "clk/codec.hpp"
#include "clk/graph.hpp"
#include "clk/scheme.hpp"

namespace clk {

/*
 * Label layout (scheme 0x01):
 *   varint id, varint c1 (vertex palette), varint c2 (edge palette),
 *   varint d_x (out-neighbour count), d_x varint neighbour ids ascending,
 *   then bit-packed: per neighbour 2*c2 bits (bit 2c: id -> neighbour has
 *   color c, bit 2c+1: neighbour -> id has color c), c1 vertex-color bits,
 *   c2 loop bits.
 * Every undirected adjacency is stored at exactly one endpoint, chosen by a
 * degeneracy orientation, so d_x <= degeneracy.
 */
struct ArboricityLabel {
    Vertex id = 0;
    std::size_t c1 = 0;
    std::size_t c2 = 0;
    std::vector<Vertex> neighbors;
    std::vector<std::vector<bool>> masks;  // per neighbour, 2*c2 bits
    std::vector<bool> colors;
    std::vector<bool> loops;

    // Directed edge id -> v of color c, if v is in this label's list (or v == id).
    bool stores(Vertex v) const;
    bool edge_to(Vertex v, Color c) const;
    bool edge_from(Vertex v, Color c) const;
};

Bytes encode_arboricity_label(const ArboricityLabel& label);
ArboricityLabel decode_arboricity_label(ByteView bytes);

// Upper bound on label bits: (d+1) * 8 * varbytes(n) + |C1| + 64.
std::size_t arboricity_label_budget(std::size_t n, std::size_t degeneracy, std::size_t vertex_palette);

struct ArboricityBuild {
    LabelBundle bundle;
    std::size_t degeneracy = 0;
    std::size_t budget_bits = 0;
    std::size_t max_bits = 0;
    bool within_budget = true;
};

ArboricityBuild build_arboricity(const ColoredGraph& g);

/*
 * Reconstructs the substructure induced on the arguments and set members,
 * then evaluates a quantifier-free formula on it. Quantifiers and distance
 * atoms with k >= 2 are rejected.
 */
class ArboricityDecoder final : public Decoder {
public:
    SchemeId scheme() const override { return SchemeId::Arboricity; }
    bool ask(const Formula* query, std::span<const ByteView> args, const LabelSets& sets) override;
};

}  // namespace clk
