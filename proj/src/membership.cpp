#include "clk/membership.hpp"

#include <algorithm>

#include "clk/errors.hpp"

namespace clk {

void put_memberships(ByteWriter& w, std::vector<MembershipOut> entries) {
    std::sort(entries.begin(), entries.end(),
              [](const MembershipOut& a, const MembershipOut& b) { return a.piece < b.piece; });
    w.put_varint(entries.size());
    for (const auto& e : entries) {
        w.put_varint(e.piece);
        w.put_varint(e.depth);
        w.put_blob(e.sublabel);
    }
}

std::vector<Membership> get_memberships(ByteReader& r) {
    std::uint64_t count = r.get_varint();
    if (count > r.remaining()) throw FormatError(ErrorCode::Truncated, "piece count exceeds label");
    std::vector<Membership> out(count);
    for (auto& m : out) {
        m.piece = static_cast<std::uint32_t>(r.get_varint());
        m.depth = static_cast<Distance>(r.get_varint());
        m.sublabel = r.get_blob();
    }
    return out;
}

const Membership* find_membership(const std::vector<Membership>& list, std::uint32_t piece) {
    auto it = std::lower_bound(list.begin(), list.end(), piece,
                               [](const Membership& m, std::uint32_t p) { return m.piece < p; });
    return it != list.end() && it->piece == piece ? &*it : nullptr;
}

SetSublabels clip_sets(const std::vector<std::vector<PieceArg>>& sets, std::uint32_t piece) {
    SetSublabels out(sets.size());
    for (std::size_t i = 0; i < sets.size(); ++i) {
        for (const auto& member : sets[i]) {
            if (const Membership* m = find_membership(member.pieces, piece)) out[i].push_back(m->sublabel);
        }
    }
    return out;
}

void add_piece(Catalog& catalog, const std::string& section, const PieceLabeler& labeler, std::uint32_t id,
               const InducedSubgraph& piece, std::vector<std::vector<MembershipOut>>& per_vertex,
               const std::vector<Distance>* depth) {
    PieceBuild built = labeler.build(id, piece.graph);
    if (labeler.uses_catalog()) catalog.sections[section] = std::move(built.section);
    for (std::size_t i = 0; i < piece.to_parent.size(); ++i) {
        MembershipOut m;
        m.piece = id;
        m.depth = depth ? (*depth)[i] : 0;
        m.sublabel = std::move(built.sublabels[i]);
        per_vertex.at(piece.to_parent[i]).push_back(std::move(m));
    }
}

PieceCache::PieceCache(const Catalog& catalog, LabelerKind kind,
                       std::function<std::string(std::uint32_t)> section_name)
    : catalog_(catalog), labeler_(make_labeler(kind)), section_name_(std::move(section_name)) {}

PreparedPiece& PieceCache::get(std::uint32_t id) {
    std::lock_guard lock(mu_);
    auto it = pieces_.find(id);
    if (it != pieces_.end()) return *it->second;
    ByteView section;
    if (labeler_->uses_catalog()) section = catalog_.section(section_name_(id));
    auto prepared = labeler_->prepare(id, section);
    PreparedPiece& ref = *prepared;
    pieces_.emplace(id, std::move(prepared));
    return ref;
}

void put_json_section(Catalog& catalog, const std::string& name, const nlohmann::json& value) {
    std::string text = value.dump();
    catalog.sections[name] = Bytes(text.begin(), text.end());
}

nlohmann::json get_json_section(const Catalog& catalog, const std::string& name) {
    ByteView bytes = catalog.section(name);
    auto parsed = nlohmann::json::parse(bytes.begin(), bytes.end(), nullptr, false);
    if (parsed.is_discarded()) throw FormatError(ErrorCode::Truncated, "catalog section " + name + " is not valid JSON");
    return parsed;
}

void put_text_section(Catalog& catalog, const std::string& name, const std::string& text) {
    catalog.sections[name] = Bytes(text.begin(), text.end());
}

std::string get_text_section(const Catalog& catalog, const std::string& name) {
    ByteView bytes = catalog.section(name);
    return std::string(bytes.begin(), bytes.end());
}

PieceArg read_piece_arg(ByteReader& r) {
    PieceArg a;
    a.id = static_cast<Vertex>(r.get_varint());
    a.pieces = get_memberships(r);
    return a;
}

}  // namespace clk
