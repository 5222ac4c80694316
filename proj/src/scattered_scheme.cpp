#include <algorithm>
#include <set>

#include "clk/errors.hpp"
#include "clk/eval.hpp"
#include "clk/schemes.hpp"

namespace clk {

namespace {

std::string union_key(const std::vector<std::uint32_t>& colors) {
    std::string key;
    for (std::size_t i = 0; i < colors.size(); ++i) key += (i ? "." : "") + std::to_string(colors[i]);
    return key;
}

// Non-decreasing s-tuples over [0, c).
std::vector<std::vector<std::uint32_t>> multisets(std::uint32_t c, std::size_t s) {
    std::vector<std::vector<std::uint32_t>> out;
    std::vector<std::uint32_t> cur;
    auto rec = [&](auto&& self, std::uint32_t from) -> void {
        if (cur.size() == s) {
            out.push_back(cur);
            return;
        }
        for (std::uint32_t i = from; i < c; ++i) {
            cur.push_back(i);
            self(self, i);
            cur.pop_back();
        }
    };
    rec(rec, 0);
    return out;
}

/*
 * Exists w1..ws, pairwise farther than 2t, w_j carrying kernel marker
 * base + colors[j] and satisfying psi. Nested so each quantifier sees its
 * marker as a guard.
 */
Formula multiset_sentence(const BasicSentence& sentence, const std::vector<std::uint32_t>& colors, Color base,
                          const std::vector<std::string>& sets) {
    const std::string& var = sentence.psi.fo_params()[0];
    std::vector<std::string> w;
    for (std::size_t i = 0; i < colors.size(); ++i) w.push_back("sw" + std::to_string(i + 1));
    NodePtr body = f_true();
    for (std::size_t j = colors.size(); j-- > 0;) {
        std::vector<NodePtr> parts{f_col(base + colors[j], w[j])};
        for (std::size_t i = 0; i < j; ++i) parts.push_back(f_dist_gt(w[i], w[j], 2 * sentence.t));
        parts.push_back(rename_free(sentence.psi.root(), {{var, w[j]}}));
        if (j + 1 < colors.size()) parts.push_back(body);
        body = f_exists(w[j], f_and(std::move(parts)));
    }
    return Formula(body, {}, sets);
}

std::vector<bool> unpack(ByteView bytes, std::size_t count) {
    if (packed_size(count) != bytes.size()) throw FormatError(ErrorCode::Truncated, "bit vector has the wrong length");
    BitReader r(bytes);
    std::vector<bool> out(count);
    for (std::size_t i = 0; i < count; ++i) out[i] = r.get();
    return out;
}

class ScatteredDecoder final : public Decoder {
public:
    explicit ScatteredDecoder(const Catalog& catalog)
        : catalog_(catalog),
          plan_(parse_plan(get_text_section(catalog_, "plan"))),
          meta_(get_json_section(catalog_, "meta")),
          unions_(meta_.at("unions").get<std::vector<std::vector<std::uint32_t>>>()),
          cache_(catalog_, labeler_from_name(meta_.at("labeler").get<std::string>()),
                 [this](std::uint32_t id) { return "union/" + union_key(unions_.at(id)); }) {
        if (plan_.kind != PlanKind::Scattered) throw FormatError(ErrorCode::Truncated, "catalog plan is not scattered");
        Color base = meta_.at("base").get<Color>();
        for (const auto& u : unions_) sentences_.push_back(multiset_sentence(plan_.scattered, u, base, plan_.sets));
        bits_ = unpack(catalog_.section("bits/b"), unions_.size());
    }

    SchemeId scheme() const override { return SchemeId::Scattered; }
    std::size_t set_arity() const override { return plan_.set_arity(); }

    bool ask(const Formula* query, std::span<const ByteView> args, const LabelSets& sets) override {
        if (query) throw UnsupportedQuery("scattered labels answer the sentence they were built for; pass no formula");
        if (!args.empty()) throw InputError("a basic local sentence takes no vertex arguments");
        if (sets.size() != set_arity()) throw InputError("expected " + std::to_string(set_arity()) + " sets");
        std::vector<std::vector<PieceArg>> members(sets.size());
        std::set<std::uint32_t> touched;
        for (std::size_t i = 0; i < sets.size(); ++i) {
            for (ByteView l : sets[i]) {
                ByteReader r(l);
                members[i].push_back(read_piece_arg(r));
                if (!r.at_end()) throw FormatError(ErrorCode::Truncated, "trailing bytes in label");
                for (const auto& m : members[i].back().pieces) touched.insert(m.piece);
            }
        }
        // Unions disjoint from every set are answered by their stored bit.
        for (std::uint32_t k = 0; k < unions_.size(); ++k) {
            ++ops_;
            if (!touched.count(k) && bits_[k]) return true;
        }
        for (std::uint32_t k : touched) {
            if (k >= unions_.size()) throw FormatError(ErrorCode::Truncated, "label names an unknown union");
            ++ops_;
            if (cache_.get(k).holds(sentences_[k], {}, clip_sets(members, k))) return true;
        }
        return false;
    }

private:
    Catalog catalog_;
    QueryPlan plan_;
    nlohmann::json meta_;
    std::vector<std::vector<std::uint32_t>> unions_;
    PieceCache cache_;
    std::vector<Formula> sentences_;
    std::vector<bool> bits_;
};

}  // namespace

BuildResult build_scattered_scheme(const ColoredGraph& g, const BuildOptions& options) {
    if (!options.plan || options.plan->kind != PlanKind::Scattered) {
        throw InputError("the scattered scheme needs a plan of kind scattered");
    }
    const QueryPlan& plan = *options.plan;
    const BasicSentence& sentence = plan.scattered;
    if (sentence.s == 0) throw InputError("a basic local sentence needs s >= 1");
    const Distance t = sentence.t;
    const Distance r = 2 * t + 1;
    BuildResult out;
    out.report["scheme"] = "scattered";
    Cover cover = resolve_cover(g, options, r, out.report);
    if (!cover.nice) throw InputError("the scattered scheme needs a cover flagged nice");

    ColoredGraph h = intersection_graph(cover, g.size());
    auto gamma = distance_m_coloring(h, static_cast<std::uint32_t>(sentence.s));
    const std::uint32_t colors = color_count(gamma);

    // Kernel color: smallest piece color among pieces whose 2t-kernel holds the vertex.
    std::vector<std::uint32_t> kernel_color(g.size(), UINT32_MAX);
    for (std::uint32_t id = 0; id < cover.pieces.size(); ++id) {
        auto depth = inner_radius(g, cover.pieces[id], 2 * t);
        for (std::size_t i = 0; i < depth.size(); ++i) {
            if (depth[i] >= 2 * t) {
                Vertex x = cover.pieces[id][i];
                kernel_color[x] = std::min(kernel_color[x], gamma[id]);
            }
        }
    }
    Color base = marker_base(g, std::vector<NodePtr>{sentence.psi.root()});
    std::vector<std::vector<Color>> marks(g.size());
    for (Vertex x = 0; x < g.size(); ++x) {
        if (kernel_color[x] == UINT32_MAX) throw CoverDefect("vertex " + std::to_string(x) + " lies in no 2t-kernel");
        marks[x].push_back(base + kernel_color[x]);
    }
    ColoredGraph marked = with_extra_colors(g, marks);

    auto labeler = make_labeler(options.labeler);
    auto unions = multisets(colors, sentence.s);
    out.catalog.scheme = SchemeId::Scattered;
    std::vector<std::vector<MembershipOut>> per_vertex(g.size());
    std::vector<bool> bits;
    const std::vector<VertexSet> empty_sets(plan.set_arity());
    std::size_t largest = 0;
    for (std::uint32_t k = 0; k < unions.size(); ++k) {
        std::vector<Vertex> vs;
        for (std::uint32_t id = 0; id < cover.pieces.size(); ++id) {
            if (std::find(unions[k].begin(), unions[k].end(), gamma[id]) != unions[k].end()) {
                vs.insert(vs.end(), cover.pieces[id].begin(), cover.pieces[id].end());
            }
        }
        auto sub = induced_subgraph(marked, make_vertex_set(std::move(vs)));
        largest = std::max(largest, sub.to_parent.size());
        Formula sk = multiset_sentence(sentence, unions[k], base, plan.sets);
        bits.push_back(sub.graph.size() > 0 && eval_oracle(sub.graph, sk, {}, empty_sets));
        if (sub.graph.size() > 0) add_piece(out.catalog, "union/" + union_key(unions[k]), *labeler, k, sub, per_vertex);
    }
    BitWriter bw;
    for (bool b : bits) bw.put(b);
    out.catalog.sections["bits/b"] = bw.finish();
    ByteWriter cw;
    cw.put_varint(gamma.size());
    for (auto c : gamma) cw.put_varint(c);
    out.catalog.sections["coloring/γ"] = cw.take();
    put_text_section(out.catalog, "plan", plan.source);
    put_json_section(out.catalog, "meta",
                     {{"labeler", labeler_name(options.labeler)}, {"t", t}, {"s", sentence.s}, {"base", base},
                      {"colors", colors}, {"unions", unions}});
    put_json_section(out.catalog, "cover/meta", cover_json(cover));

    out.bundle.scheme = SchemeId::Scattered;
    for (Vertex v = 0; v < g.size(); ++v) {
        ByteWriter w;
        w.put_varint(v);
        put_memberships(w, std::move(per_vertex[v]));
        out.bundle.labels.push_back(w.take());
    }
    out.report["r"] = r;
    out.report["colors"] = colors;
    out.report["unions"] = unions.size();
    out.report["largest_union"] = largest;
    out.report["labeler"] = labeler_name(options.labeler);
    out.report["sizes"] = size_report(out.bundle, out.catalog);
    return out;
}

std::unique_ptr<Decoder> make_scattered_decoder(const Catalog& catalog) {
    return std::make_unique<ScatteredDecoder>(catalog);
}

}  // namespace clk
