#include <algorithm>

#include "clk/errors.hpp"
#include "clk/schemes.hpp"

namespace clk {

std::string piece_section(std::uint32_t id) { return "piece/" + std::to_string(id); }

nlohmann::json cover_json(const Cover& cover) {
    nlohmann::json j;
    j["r"] = cover.r;
    j["pieces"] = cover.pieces.size();
    j["ell"] = cover.ell;
    j["nice"] = cover.nice;
    j["g_profile"] = cover.g_profile;
    j["notes"] = cover.notes;
    std::size_t largest = 0;
    for (const auto& p : cover.pieces) largest = std::max(largest, p.size());
    j["largest_piece"] = largest;
    return j;
}

Cover resolve_cover(const ColoredGraph& g, const BuildOptions& options, Distance r, nlohmann::json& report) {
    Cover cover;
    if (options.cover) {
        cover = *options.cover;
        if (cover.r < r) {
            throw InputError("the supplied cover has radius " + std::to_string(cover.r) + ", the scheme needs " +
                             std::to_string(r));
        }
    } else if (options.cover_kind == CoverKind::Interval) {
        if (options.order.empty() && g.size() > 0) throw InputError("a unit-interval cover needs a vertex order");
        cover = build_unit_interval_cover(g, options.order, r);
    } else {
        cover = build_ball_cover(g, r);
    }
    nlohmann::json j = cover_json(cover);
    if (options.force) {
        j["validation"] = "skipped (forced)";
    } else {
        Cover probe = cover;
        probe.r = r;
        CoverReport rep = validate_cover(g, probe, options.cover_kind == CoverKind::Interval ? 2 * r + 2 : 0);
        j["validation"] = rep.to_json();
        if (!rep.covers_vertices) throw CoverDefect("the cover misses some vertex");
        if (rep.ball_violations) {
            throw CoverDefect("the radius-" + std::to_string(r) + " ball of vertex " + std::to_string(rep.witness) +
                              " fits in no piece");
        }
    }
    report["cover"] = j;
    return cover;
}

namespace {

void max_color(const NodePtr& n, Color& top) {
    if (n->op == Op::Col) top = std::max(top, n->color + 1);
    for (const auto& k : n->kids) max_color(k, top);
}

}  // namespace

Color marker_base(const ColoredGraph& g, std::span<const NodePtr> nodes) {
    Color top = static_cast<Color>(g.vertex_palette_size());
    for (const auto& n : nodes) max_color(n, top);
    return top;
}

std::vector<std::vector<MembershipOut>> build_cover_pieces(const ColoredGraph& g, const Cover& cover,
                                                           const PieceLabeler& labeler, Distance depth_cap,
                                                           Catalog& catalog) {
    std::vector<std::vector<MembershipOut>> per_vertex(g.size());
    for (std::uint32_t id = 0; id < cover.pieces.size(); ++id) {
        const VertexSet& piece = cover.pieces[id];
        auto sub = induced_subgraph(g, piece);
        auto depth = inner_radius(g, piece, depth_cap);
        add_piece(catalog, piece_section(id), labeler, id, sub, per_vertex, &depth);
    }
    return per_vertex;
}

DistanceType LocalAnswerer::distance_type(const LocalPlan& plan, std::span<const PieceArg> args) {
    DistanceType d;
    d.m = args.size();
    d.t = plan.t;
    const Distance near = 2 * plan.t + 1;
    for (std::size_t i = 0; i < args.size(); ++i) {
        const Membership* deep = nullptr;
        for (const auto& m : args[i].pieces) {
            if (m.depth >= near) {
                deep = &m;
                break;
            }
        }
        if (!deep) {
            throw CoverDefect("no piece holds the radius-" + std::to_string(near) + " ball of vertex " +
                              std::to_string(args[i].id));
        }
        for (std::size_t j = i + 1; j < args.size(); ++j) {
            ++ops_;
            const Membership* other = find_membership(args[j].pieces, deep->piece);
            if (!other) continue;
            Distance dist = cache_.get(deep->piece).distance(deep->sublabel, other->sublabel);
            if (dist != kUnreachable && dist <= near) d.set_edge(i, j);
        }
    }
    return d;
}

bool LocalAnswerer::answer(const LocalPlan& plan, std::span<const PieceArg> args,
                           const std::vector<std::vector<PieceArg>>& sets) {
    DistanceType d = distance_type(plan, args);
    const LocalCase* c = plan.find(d);
    if (!c) return false;
    return c->combine->eval([&](const std::string& name) {
        const LocalComponent* comp = nullptr;
        for (const auto& k : c->comps) {
            if (k.name == name) comp = &k;
        }
        if (!comp) throw InputError("unknown component " + name);
        ++ops_;
        if (comp->positions.empty()) throw InputError("component " + name + " has no variables");
        // Smallest piece holding the t-ball of every argument of the component.
        const PieceArg& lead = args[comp->positions.front()];
        for (const auto& m : lead.pieces) {
            if (m.depth < plan.t) continue;
            std::vector<ByteView> subs;
            bool all = true;
            for (std::size_t p : comp->positions) {
                const Membership* mm = find_membership(args[p].pieces, m.piece);
                if (!mm || mm->depth < plan.t) {
                    all = false;
                    break;
                }
                subs.push_back(mm->sublabel);
            }
            if (!all) continue;
            return cache_.get(m.piece).holds(comp->formula, subs, clip_sets(sets, m.piece));
        }
        throw CoverDefect("no piece holds the radius-" + std::to_string(plan.t) + " balls of component " + name);
    });
}

namespace {

class LocalDecoder final : public Decoder {
public:
    explicit LocalDecoder(const Catalog& catalog)
        : catalog_(catalog),
          plan_(parse_plan(get_text_section(catalog_, "plan"))),
          meta_(get_json_section(catalog_, "meta")),
          cache_(catalog_, labeler_from_name(meta_.at("labeler").get<std::string>()), piece_section) {
        if (plan_.kind != PlanKind::Local) throw FormatError(ErrorCode::Truncated, "catalog plan is not local");
    }

    SchemeId scheme() const override { return SchemeId::Local; }
    std::size_t arity() const override { return plan_.arity(); }
    std::size_t set_arity() const override { return plan_.set_arity(); }

    bool ask(const Formula* query, std::span<const ByteView> args, const LabelSets& sets) override {
        if (query) throw UnsupportedQuery("local labels answer the plan they were built for; pass no formula");
        if (args.size() != arity() || sets.size() != set_arity()) {
            throw InputError("expected " + std::to_string(arity()) + " arguments and " + std::to_string(set_arity()) +
                             " sets");
        }
        std::vector<PieceArg> a;
        for (ByteView l : args) a.push_back(parse(l));
        std::vector<std::vector<PieceArg>> s(sets.size());
        for (std::size_t i = 0; i < sets.size(); ++i) {
            for (ByteView l : sets[i]) s[i].push_back(parse(l));
        }
        return LocalAnswerer(cache_, ops_).answer(plan_.local, a, s);
    }

private:
    Catalog catalog_;
    QueryPlan plan_;
    nlohmann::json meta_;
    PieceCache cache_;

    static PieceArg parse(ByteView label) {
        ByteReader r(label);
        PieceArg a = read_piece_arg(r);
        if (!r.at_end()) throw FormatError(ErrorCode::Truncated, "trailing bytes in label");
        return a;
    }
};

}  // namespace

BuildResult build_local_scheme(const ColoredGraph& g, const BuildOptions& options) {
    if (!options.plan || options.plan->kind != PlanKind::Local) {
        throw InputError("the local scheme needs a plan of kind local");
    }
    const QueryPlan& plan = *options.plan;
    const std::size_t m = plan.arity();
    const Distance t = plan.local.t;
    const Distance r = static_cast<Distance>(std::max<std::size_t>(m, 1) * (2 * t + 1));
    BuildResult out;
    out.report["scheme"] = "local";
    Cover cover = resolve_cover(g, options, r, out.report);
    auto labeler = make_labeler(options.labeler);
    out.catalog.scheme = SchemeId::Local;
    put_text_section(out.catalog, "plan", plan.source);
    put_json_section(out.catalog, "meta", {{"labeler", labeler_name(options.labeler)}, {"r", r}, {"t", t}, {"m", m}});
    put_json_section(out.catalog, "cover/meta", cover_json(cover));
    auto per_vertex = build_cover_pieces(g, cover, *labeler, r, out.catalog);
    out.bundle.scheme = SchemeId::Local;
    std::size_t most = 0;
    for (Vertex v = 0; v < g.size(); ++v) {
        most = std::max(most, per_vertex[v].size());
        ByteWriter w;
        w.put_varint(v);
        put_memberships(w, std::move(per_vertex[v]));
        out.bundle.labels.push_back(w.take());
    }
    out.report["r"] = r;
    out.report["t"] = t;
    out.report["m"] = m;
    out.report["labeler"] = labeler_name(options.labeler);
    out.report["distance_types"] = std::uint64_t{1} << pair_count(m);
    out.report["cases"] = plan.local.cases.size();
    out.report["max_pieces_per_vertex"] = most;
    out.report["sizes"] = size_report(out.bundle, out.catalog);
    return out;
}

std::unique_ptr<Decoder> make_local_decoder(const Catalog& catalog) { return std::make_unique<LocalDecoder>(catalog); }

}  // namespace clk
