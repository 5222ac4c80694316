#include <algorithm>

#include "clk/errors.hpp"
#include "clk/schemes.hpp"

namespace clk {

namespace {

Bytes pack_bits(const std::vector<bool>& bits) {
    BitWriter w;
    for (bool b : bits) w.put(b);
    return w.finish();
}

std::vector<bool> unpack_bits(ByteView bytes, std::size_t count) {
    if (packed_size(count) != bytes.size()) throw FormatError(ErrorCode::Truncated, "bit vector has the wrong length");
    BitReader r(bytes);
    std::vector<bool> out(count);
    for (std::size_t i = 0; i < count; ++i) out[i] = r.get();
    return out;
}

class GeneralDecoder final : public Decoder {
public:
    explicit GeneralDecoder(const Catalog& catalog)
        : catalog_(catalog),
          plan_(parse_plan(get_text_section(catalog_, "plan"))),
          meta_(get_json_section(catalog_, "meta")),
          cache_(catalog_, labeler_from_name(meta_.at("labeler").get<std::string>()), piece_section) {
        if (plan_.kind != PlanKind::General) throw FormatError(ErrorCode::Truncated, "catalog plan is not general");
        catalog_bits_ = unpack_bits(catalog_.section("bits/b"), plan_.general.sentences.size());
    }

    SchemeId scheme() const override { return SchemeId::GeneralNoSets; }
    std::size_t arity() const override { return plan_.arity(); }

    bool ask(const Formula* query, std::span<const ByteView> args, const LabelSets& sets) override {
        if (query) throw UnsupportedQuery("general labels answer the plan they were built for; pass no formula");
        if (!sets.empty()) throw UnsupportedQuery("this scheme takes no set arguments");
        if (args.size() != arity()) throw InputError("expected " + std::to_string(arity()) + " arguments");
        std::vector<PieceArg> a;
        std::vector<bool> bits = catalog_bits_;
        for (std::size_t i = 0; i < args.size(); ++i) {
            ByteReader r(args[i]);
            PieceArg p;
            p.id = static_cast<Vertex>(r.get_varint());
            std::uint64_t count = r.get_varint();
            if (count != bits.size()) throw FormatError(ErrorCode::Truncated, "sentence bit count disagrees with the catalog");
            auto label_bits = unpack_bits(r.get_bytes(packed_size(count)), count);
            // The first argument's copy of the bits is authoritative, as in the label-only model.
            if (i == 0) bits = label_bits;
            p.pieces = get_memberships(r);
            if (!r.at_end()) throw FormatError(ErrorCode::Truncated, "trailing bytes in label");
            a.push_back(std::move(p));
        }
        const std::vector<std::vector<PieceArg>> no_sets;
        return plan_.general.combine->eval([&](const std::string& name) {
            for (std::size_t i = 0; i < plan_.general.sentences.size(); ++i) {
                if (plan_.general.sentences[i].name == name) {
                    ++ops_;
                    return static_cast<bool>(bits[i]);
                }
            }
            for (const auto& [n, local] : plan_.general.locals) {
                if (n == name) return LocalAnswerer(cache_, ops_).answer(local, a, no_sets);
            }
            throw InputError("unknown part " + name);
        });
    }

private:
    Catalog catalog_;
    QueryPlan plan_;
    nlohmann::json meta_;
    PieceCache cache_;
    std::vector<bool> catalog_bits_;
};

}  // namespace

BuildResult build_general_scheme(const ColoredGraph& g, const BuildOptions& options) {
    if (!options.plan || options.plan->kind != PlanKind::General) {
        throw InputError("the general scheme needs a plan of kind general");
    }
    const QueryPlan& plan = *options.plan;
    if (plan.set_arity() != 0) throw InputError("the general scheme takes no set variables");
    const std::size_t m = plan.arity();
    BuildResult out;
    out.report["scheme"] = "general";

    std::vector<bool> bits;
    nlohmann::json sentences = nlohmann::json::array();
    for (const auto& s : plan.general.sentences) {
        LocalCheckStats stats;
        bool b = basic_local_check(g, s.psi, s.t, s.s, {}, &stats);
        bits.push_back(b);
        sentences.push_back({{"name", s.name},
                             {"value", b},
                             {"candidates", stats.candidates},
                             {"greedy_decided", stats.greedy_decided},
                             {"branch_nodes", stats.branch_nodes}});
    }
    out.report["sentences"] = sentences;

    Distance top_t = 0;
    for (const auto& [name, local] : plan.general.locals) top_t = std::max(top_t, local.t);
    const bool has_locals = !plan.general.locals.empty() && m > 0;
    const Distance r = static_cast<Distance>(std::max<std::size_t>(m, 1) * (2 * top_t + 1));

    auto labeler = make_labeler(options.labeler);
    out.catalog.scheme = SchemeId::GeneralNoSets;
    put_text_section(out.catalog, "plan", plan.source);
    put_json_section(out.catalog, "meta", {{"labeler", labeler_name(options.labeler)}, {"r", r}, {"m", m}});
    out.catalog.sections["bits/b"] = pack_bits(bits);
    std::vector<std::vector<MembershipOut>> per_vertex(g.size());
    if (has_locals) {
        Cover cover = resolve_cover(g, options, r, out.report);
        put_json_section(out.catalog, "cover/meta", cover_json(cover));
        per_vertex = build_cover_pieces(g, cover, *labeler, r, out.catalog);
    }
    Bytes packed = pack_bits(bits);
    out.bundle.scheme = SchemeId::GeneralNoSets;
    for (Vertex v = 0; v < g.size(); ++v) {
        ByteWriter w;
        w.put_varint(v);
        w.put_varint(bits.size());
        w.put_bytes(packed);
        put_memberships(w, std::move(per_vertex[v]));
        out.bundle.labels.push_back(w.take());
    }
    out.report["r"] = r;
    out.report["m"] = m;
    out.report["labeler"] = labeler_name(options.labeler);
    out.report["sizes"] = size_report(out.bundle, out.catalog);
    return out;
}

std::unique_ptr<Decoder> make_general_decoder(const Catalog& catalog) {
    return std::make_unique<GeneralDecoder>(catalog);
}

}  // namespace clk
