#include "clk/arboricity.hpp"

#include <algorithm>
#include <map>

#include "clk/errors.hpp"
#include "clk/eval.hpp"

namespace clk {

namespace {

void check_supported(const NodePtr& n) {
    if (is_quantifier(n->op)) {
        throw UnsupportedQuery("arboricity labels answer quantifier-free formulas only");
    }
    if ((n->op == Op::DistLe || n->op == Op::DistGt) && n->k >= 2) {
        throw UnsupportedQuery("arboricity labels cannot decide dist(" + n->x + "," + n->y + ") against " +
                               std::to_string(n->k));
    }
    for (const auto& k : n->kids) check_supported(k);
}

std::size_t neighbor_index(const ArboricityLabel& label, Vertex v) {
    auto it = std::lower_bound(label.neighbors.begin(), label.neighbors.end(), v);
    if (it == label.neighbors.end() || *it != v) return label.neighbors.size();
    return static_cast<std::size_t>(it - label.neighbors.begin());
}

}  // namespace

bool ArboricityLabel::stores(Vertex v) const { return neighbor_index(*this, v) < neighbors.size(); }

bool ArboricityLabel::edge_to(Vertex v, Color c) const {
    if (c >= c2) return false;
    if (v == id) return loops[c];
    std::size_t i = neighbor_index(*this, v);
    return i < neighbors.size() && masks[i][2 * c];
}

bool ArboricityLabel::edge_from(Vertex v, Color c) const {
    if (c >= c2) return false;
    if (v == id) return loops[c];
    std::size_t i = neighbor_index(*this, v);
    return i < neighbors.size() && masks[i][2 * c + 1];
}

Bytes encode_arboricity_label(const ArboricityLabel& label) {
    ByteWriter w;
    w.put_varint(label.id);
    w.put_varint(label.c1);
    w.put_varint(label.c2);
    w.put_varint(label.neighbors.size());
    for (Vertex v : label.neighbors) w.put_varint(v);
    BitWriter bits;
    for (const auto& mask : label.masks) {
        for (bool b : mask) bits.put(b);
    }
    for (bool b : label.colors) bits.put(b);
    for (bool b : label.loops) bits.put(b);
    w.put_bytes(bits.finish());
    return w.take();
}

ArboricityLabel decode_arboricity_label(ByteView bytes) {
    ByteReader r(bytes);
    ArboricityLabel label;
    label.id = static_cast<Vertex>(r.get_varint());
    label.c1 = r.get_varint();
    label.c2 = r.get_varint();
    std::uint64_t count = r.get_varint();
    if (count > r.remaining()) throw FormatError(ErrorCode::Truncated, "neighbour count exceeds label");
    label.neighbors.resize(count);
    for (auto& v : label.neighbors) v = static_cast<Vertex>(r.get_varint());
    if (!std::is_sorted(label.neighbors.begin(), label.neighbors.end())) {
        throw FormatError(ErrorCode::Truncated, "neighbour list out of order");
    }
    std::size_t nbits = count * 2 * label.c2 + label.c1 + label.c2;
    if (packed_size(nbits) != r.remaining()) throw FormatError(ErrorCode::Truncated, "bit section has the wrong length");
    BitReader bits(r.get_bytes(r.remaining()));
    label.masks.assign(count, std::vector<bool>(2 * label.c2));
    for (auto& mask : label.masks) {
        for (std::size_t i = 0; i < mask.size(); ++i) mask[i] = bits.get();
    }
    label.colors.resize(label.c1);
    for (std::size_t i = 0; i < label.c1; ++i) label.colors[i] = bits.get();
    label.loops.resize(label.c2);
    for (std::size_t i = 0; i < label.c2; ++i) label.loops[i] = bits.get();
    return label;
}

std::size_t arboricity_label_budget(std::size_t n, std::size_t degeneracy, std::size_t vertex_palette) {
    return (degeneracy + 1) * 8 * varint_size(std::max<std::size_t>(n, 1)) + vertex_palette + 64;
}

ArboricityBuild build_arboricity(const ColoredGraph& g) {
    Orientation o = degeneracy_orientation(g);
    const std::size_t c1 = g.vertex_palette_size(), c2 = g.edge_palette_size();
    ArboricityBuild out;
    out.bundle.scheme = SchemeId::Arboricity;
    out.degeneracy = o.max_out_degree;
    for (Vertex v = 0; v < g.size(); ++v) {
        ArboricityLabel label;
        label.id = v;
        label.c1 = c1;
        label.c2 = c2;
        label.loops.assign(c2, false);
        std::map<Vertex, std::vector<bool>> masks;
        for (const OrientedEdge& e : o.out[v]) {
            if (e.neighbor == v) {
                label.loops[e.color] = true;
                continue;
            }
            auto& mask = masks[e.neighbor];
            mask.resize(2 * c2, false);
            mask[2 * e.color + (e.forward ? 0 : 1)] = true;
        }
        for (auto& [nb, mask] : masks) {
            label.neighbors.push_back(nb);
            label.masks.push_back(std::move(mask));
        }
        label.colors.assign(c1, false);
        for (Color c : g.colors(v)) label.colors[c] = true;
        out.bundle.labels.push_back(encode_arboricity_label(label));
    }
    out.budget_bits = arboricity_label_budget(g.size(), out.degeneracy, c1);
    out.max_bits = label_length_report(out.bundle).max_bits;
    out.within_budget = out.max_bits <= out.budget_bits;
    return out;
}

bool ArboricityDecoder::ask(const Formula* query, std::span<const ByteView> args, const LabelSets& sets) {
    if (!query) throw InputError("the arboricity scheme needs a formula with every query");
    if (args.size() != query->arity() || sets.size() != query->set_arity()) {
        throw InputError("argument count does not match the formula signature");
    }
    check_supported(query->root());

    // Distinct vertices among the arguments and set members, each decoded once.
    std::map<Vertex, ArboricityLabel> decoded;
    auto take = [&](ByteView bytes) {
        ArboricityLabel label = decode_arboricity_label(bytes);
        Vertex id = label.id;
        decoded.emplace(id, std::move(label));
        return id;
    };
    std::vector<Vertex> arg_ids;
    for (ByteView a : args) arg_ids.push_back(take(a));
    std::vector<std::vector<Vertex>> set_ids(sets.size());
    for (std::size_t i = 0; i < sets.size(); ++i) {
        for (ByteView w : sets[i]) set_ids[i].push_back(take(w));
    }

    std::vector<const ArboricityLabel*> local;
    std::map<Vertex, Vertex> to_local;
    for (const auto& [id, label] : decoded) {
        to_local[id] = static_cast<Vertex>(local.size());
        local.push_back(&label);
    }
    std::size_t c2 = local.empty() ? 0 : local.front()->c2;
    std::vector<Edge> edges;
    std::vector<std::vector<Color>> colors(local.size());
    std::uint64_t checks = 0;
    for (Vertex i = 0; i < local.size(); ++i) {
        const ArboricityLabel& a = *local[i];
        for (Color c = 0; c < a.c1; ++c) {
            if (a.colors[c]) colors[i].push_back(c);
        }
        for (Color c = 0; c < a.c2; ++c) {
            if (a.loops[c]) edges.push_back({i, i, c});
        }
        for (Vertex j = i + 1; j < local.size(); ++j) {
            const ArboricityLabel& b = *local[j];
            ++checks;
            const ArboricityLabel* owner = a.stores(b.id) ? &a : (b.stores(a.id) ? &b : nullptr);
            if (!owner) continue;
            for (Color c = 0; c < c2; ++c) {
                bool ab = owner == &a ? a.edge_to(b.id, c) : b.edge_from(a.id, c);
                bool ba = owner == &a ? a.edge_from(b.id, c) : b.edge_to(a.id, c);
                if (ab) edges.push_back({i, j, c});
                if (ba) edges.push_back({j, i, c});
            }
        }
    }
    ops_ += checks;

    ColoredGraph sub(local.size(), std::move(edges), std::move(colors));
    std::vector<Vertex> local_args;
    for (Vertex v : arg_ids) local_args.push_back(to_local[v]);
    std::vector<VertexSet> local_sets;
    for (const auto& s : set_ids) {
        std::vector<Vertex> members;
        for (Vertex v : s) members.push_back(to_local[v]);
        local_sets.push_back(make_vertex_set(std::move(members)));
    }
    return eval_oracle(sub, *query, local_args, local_sets);
}

}  // namespace clk
