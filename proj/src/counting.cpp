#include <algorithm>
#include <map>
#include <set>

#include "clk/errors.hpp"
#include "clk/eval.hpp"
#include "clk/schemes.hpp"

namespace clk {

KernelSeparation check_kernel_separation(const ColoredGraph& g, const Cover& cover,
                                         const std::vector<std::uint32_t>& gamma, Distance k) {
    KernelSeparation out;
    auto owners = pieces_of(cover, g.size());
    for (std::uint32_t id = 0; id < cover.pieces.size() && out.ok; ++id) {
        const auto& piece = cover.pieces[id];
        auto depth = inner_radius(g, piece, k);
        for (std::size_t i = 0; i < piece.size() && out.ok; ++i) {
            if (depth[i] < k) continue;
            VertexSet near = ball(g, piece[i], k);
            for (Vertex y : near) {
                ++out.checked;
                for (auto other : owners[y]) {
                    if (other != id && gamma[other] == gamma[id]) {
                        out.ok = false;
                        out.witness = "kernel vertex " + std::to_string(piece[i]) + " of piece " + std::to_string(id) +
                                      " is within " + std::to_string(k) + " of piece " + std::to_string(other) +
                                      " of the same color";
                        break;
                    }
                }
                if (!out.ok) break;
            }
        }
    }
    return out;
}

namespace {

std::string tuple_key(const std::vector<std::uint32_t>& colors) {
    std::string key;
    for (std::size_t i = 0; i < colors.size(); ++i) key += (i ? "." : "") + std::to_string(colors[i]);
    return key;
}

// Nonempty subsets of [0, c) with at most k elements, by size then lexicographically.
std::vector<std::vector<std::uint32_t>> color_subsets(std::uint32_t c, std::size_t k) {
    std::vector<std::vector<std::uint32_t>> out;
    std::vector<std::uint32_t> cur;
    for (std::size_t size = 1; size <= std::min<std::size_t>(k, c); ++size) {
        auto rec = [&](auto&& self, std::uint32_t from) -> void {
            if (cur.size() == size) {
                out.push_back(cur);
                return;
            }
            for (std::uint32_t i = from; i < c; ++i) {
                cur.push_back(i);
                self(self, i + 1);
                cur.pop_back();
            }
        };
        rec(rec, 0);
    }
    return out;
}

std::size_t max_blocks(const LocalPlan& local) {
    std::size_t k = 0;
    for (const auto& [mask, c] : local.cases) k = std::max(k, c.delta.components().size());
    return k;
}

NodePtr case_body(const LocalPlan& local, const LocalCase& c) {
    DistanceType d = c.delta;
    d.t = local.t;
    NodePtr body = c.combine->to_node([&](const std::string& name) {
        for (const auto& comp : c.comps) {
            if (comp.name == name) return comp.formula.root();
        }
        throw InputError("unknown component " + name);
    });
    return f_and({rho_node(d, local.vars), body});
}

struct CountTerm {
    std::uint32_t piece = 0;
    Formula formula;
};

/*
 * Connected mode: one term per color i, phi with the first argument marked
 * by kernel color i, counted in the union of color-i pieces.
 * Conjunctive mode: per case and per ordered color tuple (one color per
 * block of the distance type), the case formula with each block's first
 * argument marked, counted in the union of the tuple's distinct colors.
 */
std::vector<CountTerm> count_terms(const QueryPlan& plan, const nlohmann::json& meta,
                                   const std::vector<std::vector<std::uint32_t>>& unions) {
    const Color base = meta.at("base").get<Color>();
    const auto colors = meta.at("colors").get<std::uint32_t>();
    std::vector<CountTerm> out;
    if (plan.kind == PlanKind::Connected) {
        const std::string& first = plan.formula.fo_params().front();
        for (std::uint32_t i = 0; i < colors; ++i) {
            out.push_back({i, Formula(f_and({plan.formula.root(), f_col(base + i, first)}), plan.formula.fo_params(),
                                      plan.formula.set_params())});
        }
        return out;
    }
    std::map<std::vector<std::uint32_t>, std::uint32_t> index;
    for (std::uint32_t k = 0; k < unions.size(); ++k) index[unions[k]] = k;
    for (const auto& [mask, c] : plan.local.cases) {
        NodePtr body = case_body(plan.local, c);
        auto blocks = c.delta.components();
        std::vector<std::uint32_t> tuple(blocks.size(), 0);
        while (true) {
            std::vector<NodePtr> parts{body};
            for (std::size_t l = 0; l < blocks.size(); ++l) {
                parts.push_back(f_col(base + tuple[l], plan.local.vars[blocks[l].front()]));
            }
            std::vector<std::uint32_t> key = tuple;
            std::sort(key.begin(), key.end());
            key.erase(std::unique(key.begin(), key.end()), key.end());
            out.push_back({index.at(key), Formula(f_and(std::move(parts)), plan.vars, plan.sets)});
            std::size_t l = 0;
            while (l < tuple.size() && ++tuple[l] == colors) tuple[l++] = 0;
            if (l == tuple.size()) break;
        }
    }
    return out;
}

class CountingDecoder final : public Decoder {
public:
    explicit CountingDecoder(const Catalog& catalog)
        : catalog_(catalog),
          plan_(parse_plan(get_text_section(catalog_, "plan"))),
          meta_(get_json_section(catalog_, "meta")),
          connected_(meta_.at("mode").get<std::string>() == "connected"),
          unions_(meta_.at("unions").get<std::vector<std::vector<std::uint32_t>>>()),
          cache_(catalog_, labeler_from_name(meta_.at("labeler").get<std::string>()),
                 [this](std::uint32_t id) { return section(id); }),
          terms_(count_terms(plan_, meta_, unions_)),
          modulus_(meta_.at("modulus").get<std::uint64_t>()) {
        if (connected_ != (plan_.kind == PlanKind::Connected)) {
            throw FormatError(ErrorCode::Truncated, "catalog mode disagrees with its plan");
        }
    }

    SchemeId scheme() const override { return SchemeId::Counting; }
    std::size_t arity() const override { return plan_.arity(); }
    std::size_t set_arity() const override { return plan_.set_arity(); }
    std::optional<std::uint64_t> modulus() const override {
        return modulus_ ? std::optional<std::uint64_t>(modulus_) : std::nullopt;
    }

    bool ask(const Formula*, std::span<const ByteView>, const LabelSets&) override {
        throw UnsupportedQuery("counting labels answer counting queries only");
    }

    std::uint64_t count(const LabelSets& sets) override {
        if (sets.size() != set_arity()) throw InputError("expected " + std::to_string(set_arity()) + " sets");
        std::vector<std::vector<PieceArg>> members(sets.size());
        for (std::size_t i = 0; i < sets.size(); ++i) {
            for (ByteView l : sets[i]) {
                ByteReader r(l);
                members[i].push_back(read_piece_arg(r));
                if (!r.at_end()) throw FormatError(ErrorCode::Truncated, "trailing bytes in label");
            }
        }
        std::uint64_t total = 0;
        for (const auto& term : terms_) {
            ++ops_;
            std::uint64_t c = cache_.get(term.piece).count(term.formula, clip_sets(members, term.piece));
            total = modulus_ ? (total + c % modulus_) % modulus_ : total + c;
        }
        return total;
    }

private:
    Catalog catalog_;
    QueryPlan plan_;
    nlohmann::json meta_;
    bool connected_;
    std::vector<std::vector<std::uint32_t>> unions_;
    PieceCache cache_;
    std::vector<CountTerm> terms_;
    std::uint64_t modulus_;

    std::string section(std::uint32_t id) const {
        if (connected_) return "color/" + std::to_string(id);
        return "ctuple/" + tuple_key(unions_.at(id));
    }
};

// Smallest piece color among pieces holding N^k(x), for every x.
std::vector<std::uint32_t> kernel_colors(const ColoredGraph& g, const Cover& cover,
                                         const std::vector<std::uint32_t>& gamma, Distance k) {
    std::vector<std::uint32_t> out(g.size(), UINT32_MAX);
    for (std::uint32_t id = 0; id < cover.pieces.size(); ++id) {
        auto depth = inner_radius(g, cover.pieces[id], k);
        for (std::size_t i = 0; i < depth.size(); ++i) {
            if (depth[i] >= k) {
                Vertex x = cover.pieces[id][i];
                out[x] = std::min(out[x], gamma[id]);
            }
        }
    }
    for (Vertex x = 0; x < g.size(); ++x) {
        if (out[x] == UINT32_MAX) throw CoverDefect("vertex " + std::to_string(x) + " lies in no kernel");
    }
    return out;
}

}  // namespace

BuildResult build_counting_scheme(const ColoredGraph& g, const BuildOptions& options) {
    if (!options.plan) throw InputError("the counting scheme needs a plan");
    const QueryPlan& plan = *options.plan;
    const bool connected = plan.kind == PlanKind::Connected;
    if (!connected && plan.kind != PlanKind::Local) {
        throw InputError("the counting scheme needs a plan of kind connected or local");
    }
    if (!connected && !plan.local.is_conjunctive()) {
        throw InputError("counting a local plan needs every case in conjunctive form");
    }
    if (plan.arity() == 0) throw InputError("counting needs at least one free variable");
    if (options.modulus == 1) throw InputError("the modulus must be at least 2");
    BuildResult out;
    out.report["scheme"] = "counting";
    out.report["mode"] = connected ? "connected" : "conjunctive";
    const std::size_t m = plan.arity();
    const Distance t = connected ? plan.t : plan.local.t;

    if (connected) {
        if (options.force) {
            out.report["t_connected"] = "skipped (forced)";
            out.report["tainted"] = true;
        } else {
            Sampler sampler;
            sampler.graph = [&g](std::mt19937_64&) { return g; };
            sampler.graphs = 1;
            sampler.per_graph = 200;
            sampler.seed = options.seed;
            ValidationReport rep = validate_t_connected(plan.formula, t, sampler);
            out.report["t_connected"] = {{"ok", rep.ok}, {"checked", rep.checked}, {"failures", rep.failures}};
            if (!rep.ok) throw InputError("the formula is not " + std::to_string(t) + "-connected: " + rep.witness);
        }
    }

    const Distance r = connected ? 2 * t : static_cast<Distance>(m * (2 * t + 1));
    Cover cover = resolve_cover(g, options, r, out.report);
    ColoredGraph h = intersection_graph(cover, g.size());
    auto gamma = distance_m_coloring(h, connected ? 1 : static_cast<std::uint32_t>(m));
    const std::uint32_t colors = color_count(gamma);
    auto kc = kernel_colors(g, cover, gamma, r);
    KernelSeparation sep = check_kernel_separation(g, cover, gamma, r);
    out.report["kernel_separation"] = {{"ok", sep.ok}, {"checked", sep.checked}, {"witness", sep.witness}};

    std::vector<NodePtr> mentioned;
    if (connected) {
        mentioned.push_back(plan.formula.root());
    } else {
        for (const auto& [mask, c] : plan.local.cases) mentioned.push_back(case_body(plan.local, c));
    }
    const Color base = marker_base(g, mentioned);
    std::vector<std::vector<Color>> marks(g.size());
    for (Vertex x = 0; x < g.size(); ++x) marks[x].push_back(base + kc[x]);
    ColoredGraph marked = with_extra_colors(g, marks);

    std::vector<std::vector<std::uint32_t>> unions;
    if (connected) {
        for (std::uint32_t i = 0; i < colors; ++i) unions.push_back({i});
    } else {
        unions = color_subsets(colors, max_blocks(plan.local));
    }
    auto labeler = make_labeler(options.labeler);
    out.catalog.scheme = SchemeId::Counting;
    std::vector<std::vector<MembershipOut>> per_vertex(g.size());
    std::size_t largest = 0;
    for (std::uint32_t k = 0; k < unions.size(); ++k) {
        std::vector<Vertex> vs;
        for (std::uint32_t id = 0; id < cover.pieces.size(); ++id) {
            if (std::binary_search(unions[k].begin(), unions[k].end(), gamma[id])) {
                vs.insert(vs.end(), cover.pieces[id].begin(), cover.pieces[id].end());
            }
        }
        auto sub = induced_subgraph(marked, make_vertex_set(std::move(vs)));
        largest = std::max(largest, sub.to_parent.size());
        std::string name = connected ? "color/" + std::to_string(k) : "ctuple/" + tuple_key(unions[k]);
        add_piece(out.catalog, name, *labeler, k, sub, per_vertex);
    }
    ByteWriter cw;
    cw.put_varint(gamma.size());
    for (auto c : gamma) cw.put_varint(c);
    out.catalog.sections["coloring/γ"] = cw.take();
    put_text_section(out.catalog, "plan", plan.source);
    put_json_section(out.catalog, "meta",
                     {{"mode", connected ? "connected" : "conjunctive"},
                      {"labeler", labeler_name(options.labeler)},
                      {"t", t},
                      {"m", m},
                      {"base", base},
                      {"colors", colors},
                      {"unions", unions},
                      {"modulus", options.modulus}});
    put_json_section(out.catalog, "cover/meta", cover_json(cover));

    out.bundle.scheme = SchemeId::Counting;
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
    out.report["colors"] = colors;
    out.report["unions"] = unions.size();
    out.report["largest_union"] = largest;
    out.report["max_unions_per_vertex"] = most;
    out.report["modulus"] = options.modulus;
    out.report["labeler"] = labeler_name(options.labeler);
    out.report["sizes"] = size_report(out.bundle, out.catalog);
    return out;
}

std::unique_ptr<Decoder> make_counting_decoder(const Catalog& catalog) {
    return std::make_unique<CountingDecoder>(catalog);
}

}  // namespace clk
