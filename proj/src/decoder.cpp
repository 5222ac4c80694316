#include "clk/arboricity.hpp"
#include "clk/errors.hpp"
#include "clk/scheme.hpp"
#include "clk/schemes.hpp"

namespace clk {

std::uint64_t Decoder::count(const LabelSets&) {
    throw UnsupportedQuery(std::string(scheme_name(scheme())) + " labels do not answer counting queries");
}

std::unique_ptr<Decoder> open_decoder(SchemeId scheme, const Catalog* catalog) {
    if (scheme == SchemeId::Arboricity) {
        if (catalog && !catalog->empty()) throw InputError("arboricity labels take no catalog");
        return std::make_unique<ArboricityDecoder>();
    }
    if (!catalog) throw InputError(std::string(scheme_name(scheme)) + " labels need their catalog");
    if (catalog->scheme != scheme) throw InputError("the catalog belongs to a different scheme");
    try {
        switch (scheme) {
        case SchemeId::Expansion: return make_bounded_decoder(*catalog);
        case SchemeId::Local: return make_local_decoder(*catalog);
        case SchemeId::GeneralNoSets: return make_general_decoder(*catalog);
        case SchemeId::Scattered: return make_scattered_decoder(*catalog);
        case SchemeId::Counting: return make_counting_decoder(*catalog);
        default: break;
        }
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(ErrorCode::Truncated, std::string("malformed catalog metadata: ") + e.what());
    }
    throw InputError("unknown scheme");
}

nlohmann::json size_report(const LabelBundle& bundle, const Catalog& catalog) {
    LengthReport lr = label_length_report(bundle);
    nlohmann::json hist = nlohmann::json::object();
    for (auto [bits, count] : lr.histogram) hist[std::to_string(bits)] = count;
    return {{"n", bundle.size()},
            {"max_bits", lr.max_bits},
            {"mean_bits", lr.mean_bits},
            {"catalog_bytes", catalog.empty() ? 0 : catalog.byte_size()},
            {"histogram", hist}};
}

BuildResult build_labels(const ColoredGraph& g, const BuildOptions& options) {
    switch (options.scheme) {
    case SchemeId::Arboricity: {
        ArboricityBuild b = build_arboricity(g);
        BuildResult out;
        out.bundle = std::move(b.bundle);
        out.catalog.scheme = SchemeId::Arboricity;
        out.report = {{"scheme", "arboricity"},
                      {"degeneracy", b.degeneracy},
                      {"budget_bits", b.budget_bits},
                      {"within_budget", b.within_budget}};
        out.report["sizes"] = size_report(out.bundle, out.catalog);
        return out;
    }
    case SchemeId::Expansion: return build_bounded_scheme(g, options);
    case SchemeId::Local: return build_local_scheme(g, options);
    case SchemeId::GeneralNoSets: return build_general_scheme(g, options);
    case SchemeId::Scattered: return build_scattered_scheme(g, options);
    case SchemeId::Counting: return build_counting_scheme(g, options);
    default: throw InputError("unknown scheme");
    }
}

LabeledGraph::LabeledGraph(LabelBundle bundle, std::optional<Catalog> catalog)
    : bundle_(std::move(bundle)), catalog_(std::move(catalog)) {
    decoder_ = open_decoder(bundle_.scheme, catalog_ ? &*catalog_ : nullptr);
}

ByteView LabeledGraph::label(Vertex v) const {
    if (v >= bundle_.size()) throw InputError("vertex " + std::to_string(v) + " has no label");
    return bundle_.label(v);
}

LabelSets LabeledGraph::label_sets(std::span<const VertexSet> sets) const {
    LabelSets out;
    for (const auto& s : sets) {
        out.emplace_back();
        for (Vertex v : s) out.back().push_back(label(v));
    }
    return out;
}

bool LabeledGraph::ask(const Formula* query, std::span<const Vertex> args, std::span<const VertexSet> sets) {
    std::vector<ByteView> a;
    for (Vertex v : args) a.push_back(label(v));
    return decoder_->ask(query, a, label_sets(sets));
}

std::uint64_t LabeledGraph::count(std::span<const VertexSet> sets) { return decoder_->count(label_sets(sets)); }

}  // namespace clk
