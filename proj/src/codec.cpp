#include "clk/codec.hpp"

#include <zlib.h>

#include <algorithm>
#include <cstring>
#include <fstream>
#include <set>
#include <sstream>

#include "clk/errors.hpp"

namespace clk {

namespace {

constexpr char kBundleMagic[4] = {'C', 'L', 'K', '1'};
constexpr char kCatalogMagic[4] = {'C', 'L', 'K', 'C'};

void check_magic(ByteView data, const char (&magic)[4]) {
    if (data.size() < 4 || std::memcmp(data.data(), magic, 4) != 0) {
        throw FormatError(ErrorCode::BadMagic, "expected magic " + std::string(magic, 4));
    }
}

// Splits off and verifies the CRC32 trailer; returns the covered prefix.
ByteView check_trailer(ByteView data) {
    if (data.size() < 8) throw FormatError(ErrorCode::Truncated, "file shorter than header and trailer");
    ByteView body = data.first(data.size() - 4);
    ByteReader trailer(data.last(4));
    std::uint32_t stored = trailer.get_u32le();
    if (stored != crc32(body)) throw FormatError(ErrorCode::ChecksumMismatch, "CRC32 trailer does not match");
    return body;
}

}  // namespace

const char* scheme_name(SchemeId id) {
    switch (id) {
    case SchemeId::None: return "none";
    case SchemeId::Arboricity: return "arboricity";
    case SchemeId::Expansion: return "expansion";
    case SchemeId::Local: return "local";
    case SchemeId::GeneralNoSets: return "general";
    case SchemeId::Scattered: return "scattered";
    case SchemeId::Counting: return "counting";
    }
    return "unknown";
}

SchemeId scheme_from_name(const std::string& name) {
    for (auto id : {SchemeId::Arboricity, SchemeId::Expansion, SchemeId::Local,
                    SchemeId::GeneralNoSets, SchemeId::Scattered, SchemeId::Counting}) {
        if (name == scheme_name(id)) return id;
    }
    throw InputError("unknown scheme '" + name + "'");
}

std::size_t varint_size(std::uint64_t value) {
    std::size_t n = 1;
    while (value >= 0x80) {
        value >>= 7;
        ++n;
    }
    return n;
}

void ByteWriter::put_varint(std::uint64_t value) {
    while (value >= 0x80) {
        out_.push_back(static_cast<std::uint8_t>(value | 0x80));
        value >>= 7;
    }
    out_.push_back(static_cast<std::uint8_t>(value));
}

void ByteWriter::put_blob(ByteView bytes) {
    put_varint(bytes.size());
    put_bytes(bytes);
}

void ByteWriter::put_string(const std::string& s) {
    put_varint(s.size());
    out_.insert(out_.end(), s.begin(), s.end());
}

void ByteWriter::put_u32le(std::uint32_t value) {
    for (int i = 0; i < 4; ++i) out_.push_back(static_cast<std::uint8_t>(value >> (8 * i)));
}

std::uint8_t ByteReader::get_byte() {
    if (pos_ >= in_.size()) throw FormatError(ErrorCode::Truncated, "unexpected end of data");
    return in_[pos_++];
}

std::uint64_t ByteReader::get_varint() {
    std::uint64_t value = 0;
    for (int shift = 0; shift < 64; shift += 7) {
        std::uint8_t b = get_byte();
        value |= static_cast<std::uint64_t>(b & 0x7f) << shift;
        if ((b & 0x80) == 0) return value;
    }
    throw FormatError(ErrorCode::Truncated, "varint longer than 64 bits");
}

ByteView ByteReader::get_bytes(std::size_t count) {
    if (count > remaining()) throw FormatError(ErrorCode::Truncated, "payload runs past end of data");
    ByteView out = in_.subspan(pos_, count);
    pos_ += count;
    return out;
}

ByteView ByteReader::get_blob() { return get_bytes(get_varint()); }

std::string ByteReader::get_string() {
    auto bytes = get_blob();
    return std::string(bytes.begin(), bytes.end());
}

std::uint32_t ByteReader::get_u32le() {
    std::uint32_t value = 0;
    for (int i = 0; i < 4; ++i) value |= static_cast<std::uint32_t>(get_byte()) << (8 * i);
    return value;
}

void BitWriter::put(bool bit) {
    if (bits_ % 8 == 0) bytes_.push_back(0);
    if (bit) bytes_.back() |= static_cast<std::uint8_t>(1u << (bits_ % 8));
    ++bits_;
}

bool BitReader::get() {
    std::size_t byte = bit_ / 8;
    if (byte >= in_.size()) throw FormatError(ErrorCode::Truncated, "bit field runs past end of label");
    bool value = (in_[byte] >> (bit_ % 8)) & 1u;
    ++bit_;
    return value;
}

std::uint32_t crc32(ByteView bytes) {
    uLong crc = ::crc32(0L, Z_NULL, 0);
    return static_cast<std::uint32_t>(::crc32(crc, bytes.data(), static_cast<uInt>(bytes.size())));
}

ByteView Catalog::section(const std::string& name) const {
    auto it = sections.find(name);
    if (it == sections.end()) throw FormatError(ErrorCode::Truncated, "catalog has no section '" + name + "'");
    return it->second;
}

std::size_t Catalog::byte_size() const { return write_catalog(*this).size(); }

std::uint32_t Catalog::checksum() const {
    Bytes data = write_catalog(*this);
    ByteReader r(ByteView(data).last(4));
    return r.get_u32le();
}

Bytes write_bundle(const LabelBundle& bundle) {
    ByteWriter w;
    w.put_bytes(ByteView(reinterpret_cast<const std::uint8_t*>(kBundleMagic), 4));
    w.put_byte(static_cast<std::uint8_t>(bundle.scheme));
    w.put_varint(bundle.labels.size());
    for (const Bytes& label : bundle.labels) w.put_blob(label);
    Bytes out = w.take();
    std::uint32_t crc = crc32(out);
    ByteWriter t;
    t.put_u32le(crc);
    out.insert(out.end(), t.bytes().begin(), t.bytes().end());
    return out;
}

LabelBundle read_bundle(ByteView data) {
    check_magic(data, kBundleMagic);
    ByteView body = check_trailer(data);
    ByteReader r(body.subspan(4));
    LabelBundle bundle;
    bundle.scheme = static_cast<SchemeId>(r.get_byte());
    std::uint64_t n = r.get_varint();
    if (n > body.size()) throw FormatError(ErrorCode::Truncated, "label count exceeds payload");
    bundle.labels.reserve(n);
    for (std::uint64_t i = 0; i < n; ++i) {
        ByteView label = r.get_blob();
        bundle.labels.emplace_back(label.begin(), label.end());
    }
    if (!r.at_end()) throw FormatError(ErrorCode::Truncated, "trailing bytes after last label");
    return bundle;
}

Bytes write_catalog(const Catalog& catalog) {
    ByteWriter w;
    w.put_bytes(ByteView(reinterpret_cast<const std::uint8_t*>(kCatalogMagic), 4));
    w.put_byte(static_cast<std::uint8_t>(catalog.scheme));
    w.put_varint(catalog.sections.size());
    for (const auto& [name, bytes] : catalog.sections) {
        w.put_string(name);
        w.put_blob(bytes);
    }
    Bytes out = w.take();
    std::uint32_t crc = crc32(out);
    ByteWriter t;
    t.put_u32le(crc);
    out.insert(out.end(), t.bytes().begin(), t.bytes().end());
    return out;
}

Catalog read_catalog(ByteView data) {
    check_magic(data, kCatalogMagic);
    ByteView body = check_trailer(data);
    ByteReader r(body.subspan(4));
    Catalog catalog;
    catalog.scheme = static_cast<SchemeId>(r.get_byte());
    std::uint64_t count = r.get_varint();
    for (std::uint64_t i = 0; i < count; ++i) {
        std::string name = r.get_string();
        ByteView bytes = r.get_blob();
        catalog.sections.emplace(std::move(name), Bytes(bytes.begin(), bytes.end()));
    }
    if (!r.at_end()) throw FormatError(ErrorCode::Truncated, "trailing bytes after last section");
    return catalog;
}

void write_file(const std::string& path, ByteView data) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write " + path);
    out.write(reinterpret_cast<const char*>(data.data()), static_cast<std::streamsize>(data.size()));
}

Bytes read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open " + path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    std::string s = buffer.str();
    return Bytes(s.begin(), s.end());
}

Vertex label_vertex(ByteView label) {
    ByteReader r(label);
    return static_cast<Vertex>(r.get_varint());
}

LengthReport label_length_report(const LabelBundle& bundle) {
    LengthReport report;
    std::size_t total = 0;
    for (const Bytes& label : bundle.labels) {
        std::size_t bits = label.size() * 8;
        report.max_bits = std::max(report.max_bits, bits);
        total += bits;
        ++report.histogram[bits];
    }
    if (!bundle.labels.empty()) {
        report.mean_bits = static_cast<double>(total) / static_cast<double>(bundle.labels.size());
    }
    return report;
}

bool labels_injective(const LabelBundle& bundle) {
    std::set<Bytes> seen(bundle.labels.begin(), bundle.labels.end());
    return seen.size() == bundle.labels.size();
}

void encode_graph(ByteWriter& out, const ColoredGraph& g) {
    out.put_varint(g.size());
    for (Vertex v = 0; v < g.size(); ++v) {
        auto cs = g.colors(v);
        out.put_varint(cs.size());
        for (Color c : cs) out.put_varint(c);
    }
    out.put_varint(g.edges().size());
    for (const Edge& e : g.edges()) {
        out.put_varint(e.from);
        out.put_varint(e.to);
        out.put_varint(e.color);
    }
}

ColoredGraph decode_graph(ByteReader& in) {
    std::uint64_t n = in.get_varint();
    if (n > in.remaining()) throw FormatError(ErrorCode::Truncated, "graph vertex count exceeds payload");
    std::vector<std::vector<Color>> colors(n);
    for (auto& cs : colors) {
        std::uint64_t k = in.get_varint();
        if (k > in.remaining()) throw FormatError(ErrorCode::Truncated, "color list exceeds payload");
        for (std::uint64_t i = 0; i < k; ++i) cs.push_back(static_cast<Color>(in.get_varint()));
    }
    std::uint64_t m = in.get_varint();
    if (m > in.remaining()) throw FormatError(ErrorCode::Truncated, "edge count exceeds payload");
    std::vector<Edge> edges;
    edges.reserve(m);
    for (std::uint64_t i = 0; i < m; ++i) {
        Edge e;
        e.from = static_cast<Vertex>(in.get_varint());
        e.to = static_cast<Vertex>(in.get_varint());
        e.color = static_cast<Color>(in.get_varint());
        edges.push_back(e);
    }
    return ColoredGraph(n, std::move(edges), std::move(colors));
}

}  // namespace clk
