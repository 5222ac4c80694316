#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "clk/graph.hpp"

namespace clk {

using Bytes = std::vector<std::uint8_t>;
using ByteView = std::span<const std::uint8_t>;

enum class SchemeId : std::uint8_t {
    None = 0x00,
    Arboricity = 0x01,
    Expansion = 0x02,
    Local = 0x03,
    GeneralNoSets = 0x04,
    Scattered = 0x05,
    Counting = 0x06,
};

const char* scheme_name(SchemeId id);
SchemeId scheme_from_name(const std::string& name);

std::size_t varint_size(std::uint64_t value);

class ByteWriter {
public:
    void put_byte(std::uint8_t b) { out_.push_back(b); }
    void put_varint(std::uint64_t value);
    void put_bytes(ByteView bytes) { out_.insert(out_.end(), bytes.begin(), bytes.end()); }
    // Varint length prefix followed by the payload.
    void put_blob(ByteView bytes);
    void put_string(const std::string& s);
    void put_u32le(std::uint32_t value);

    const Bytes& bytes() const noexcept { return out_; }
    Bytes take() { return std::move(out_); }

private:
    Bytes out_;
};

// All reads past the end throw FormatError(Truncated).
class ByteReader {
public:
    explicit ByteReader(ByteView in) : in_(in) {}

    std::uint8_t get_byte();
    std::uint64_t get_varint();
    ByteView get_bytes(std::size_t count);
    ByteView get_blob();
    std::string get_string();
    std::uint32_t get_u32le();

    bool at_end() const noexcept { return pos_ == in_.size(); }
    std::size_t remaining() const noexcept { return in_.size() - pos_; }
    std::size_t position() const noexcept { return pos_; }

private:
    ByteView in_;
    std::size_t pos_ = 0;
};

// LSB-first bit packing, zero-padded to a byte boundary.
class BitWriter {
public:
    void put(bool bit);
    Bytes finish() const { return bytes_; }
    std::size_t bit_count() const noexcept { return bits_; }

private:
    Bytes bytes_;
    std::size_t bits_ = 0;
};

class BitReader {
public:
    explicit BitReader(ByteView in) : in_(in) {}
    bool get();

private:
    ByteView in_;
    std::size_t bit_ = 0;
};

inline std::size_t packed_size(std::size_t bits) { return (bits + 7) / 8; }

std::uint32_t crc32(ByteView bytes);

/*
 * Labels of one build. labels[v] is J(v); the first field of every label is
 * the vertex id as a varint.
 */
struct LabelBundle {
    SchemeId scheme = SchemeId::None;
    std::vector<Bytes> labels;

    std::size_t size() const noexcept { return labels.size(); }
    ByteView label(Vertex v) const { return labels.at(v); }
};

/*
 * Shared read-only side data emitted next to the labels. Never counted as
 * label bits; its byte size is reported separately.
 */
struct Catalog {
    SchemeId scheme = SchemeId::None;
    std::map<std::string, Bytes> sections;

    bool empty() const noexcept { return sections.empty(); }
    bool has(const std::string& name) const { return sections.count(name) != 0; }
    ByteView section(const std::string& name) const;
    std::size_t byte_size() const;
    std::uint32_t checksum() const;
};

// Bundle file: "CLK1", scheme byte, varint n, per vertex varint length + payload, CRC32 trailer.
Bytes write_bundle(const LabelBundle& bundle);
LabelBundle read_bundle(ByteView data);
// Catalog file: "CLKC", scheme byte, varint section count,
// (varint name length, name, varint size, bytes) per section, CRC32 trailer.
Bytes write_catalog(const Catalog& catalog);
Catalog read_catalog(ByteView data);

void write_file(const std::string& path, ByteView data);
Bytes read_file(const std::string& path);

// First field of a label.
Vertex label_vertex(ByteView label);

struct LengthReport {
    std::size_t max_bits = 0;
    double mean_bits = 0.0;
    std::map<std::size_t, std::size_t> histogram;  // bits -> label count
};

LengthReport label_length_report(const LabelBundle& bundle);
// Labels are pairwise distinct.
bool labels_injective(const LabelBundle& bundle);

void encode_graph(ByteWriter& out, const ColoredGraph& g);
ColoredGraph decode_graph(ByteReader& in);

}  // namespace clk
