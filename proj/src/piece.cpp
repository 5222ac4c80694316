#include "clk/piece.hpp"

#include <algorithm>
#include <mutex>

#include "clk/errors.hpp"
#include "clk/eval.hpp"

namespace clk {

namespace {

std::pair<std::uint32_t, Vertex> decode_catalog_sublabel(ByteView sublabel) {
    ByteReader r(sublabel);
    auto piece = static_cast<std::uint32_t>(r.get_varint());
    auto local = static_cast<Vertex>(r.get_varint());
    return {piece, local};
}

class CatalogPiece final : public PreparedPiece {
public:
    CatalogPiece(std::uint32_t id, ColoredGraph g) : id_(id), graph_(std::move(g)), eval_(graph_) {}

    bool holds(const Formula& f, std::span<const ByteView> args, const SetSublabels& sets) override {
        std::vector<Vertex> local;
        for (ByteView a : args) local.push_back(local_id(a));
        auto local_sets = map_sets(sets);
        std::lock_guard lock(mu_);
        return eval_.holds(f, local, local_sets);
    }

    std::uint64_t count(const Formula& f, const SetSublabels& sets) override {
        auto local_sets = map_sets(sets);
        std::lock_guard lock(mu_);
        return eval_.count(f, local_sets);
    }

    Distance distance(ByteView a, ByteView b) override {
        Vertex u = local_id(a), v = local_id(b);
        std::lock_guard lock(mu_);
        return eval_.distances().distance(u, v);
    }

private:
    std::uint32_t id_;
    ColoredGraph graph_;
    Evaluator eval_;
    std::mutex mu_;

    Vertex local_id(ByteView sublabel) const {
        auto [piece, local] = decode_catalog_sublabel(sublabel);
        if (piece != id_) {
            throw WrongPiece("argument belongs to piece " + std::to_string(piece) + ", not piece " + std::to_string(id_));
        }
        if (local >= graph_.size()) throw WrongPiece("local id outside piece " + std::to_string(id_));
        return local;
    }

    std::vector<VertexSet> map_sets(const SetSublabels& sets) const {
        std::vector<VertexSet> out;
        for (const auto& s : sets) {
            std::vector<Vertex> members;
            for (ByteView b : s) members.push_back(local_id(b));
            out.push_back(make_vertex_set(std::move(members)));
        }
        return out;
    }
};

class CentroidPiece final : public PreparedPiece {
public:
    explicit CentroidPiece(std::uint32_t id) : id_(id) {}

    bool holds(const Formula& f, std::span<const ByteView> args, const SetSublabels& sets) override {
        if (args.size() != f.arity() || sets.size() != f.set_arity()) {
            throw InputError("argument count does not match the formula");
        }
        for (ByteView a : args) check(a);
        return eval(f.root(), f, args, sets);
    }

    std::uint64_t count(const Formula&, const SetSublabels&) override {
        throw UnsupportedQuery("centroid labels answer distance queries only; counting needs the catalog labeler");
    }

    Distance distance(ByteView a, ByteView b) override {
        check(a);
        check(b);
        return centroid_distance(a, b);
    }

private:
    std::uint32_t id_;

    void check(ByteView sublabel) const {
        std::uint32_t piece = sublabel_piece(sublabel);
        if (piece != id_) {
            throw WrongPiece("argument belongs to piece " + std::to_string(piece) + ", not piece " + std::to_string(id_));
        }
    }

    ByteView arg(const Formula& f, std::span<const ByteView> args, const std::string& var) const {
        const auto& ps = f.fo_params();
        auto it = std::find(ps.begin(), ps.end(), var);
        if (it == ps.end()) throw UnsupportedQuery("centroid labels cannot evaluate quantified variables");
        return args[static_cast<std::size_t>(it - ps.begin())];
    }

    static bool same(ByteView a, ByteView b) { return std::equal(a.begin(), a.end(), b.begin(), b.end()); }

    bool eval(const NodePtr& n, const Formula& f, std::span<const ByteView> args, const SetSublabels& sets) const {
        switch (n->op) {
        case Op::True: return true;
        case Op::False: return false;
        case Op::Eq: return same(arg(f, args, n->x), arg(f, args, n->y));
        case Op::DistLe:
        case Op::DistGt: {
            Distance d = centroid_distance(arg(f, args, n->x), arg(f, args, n->y));
            bool le = d != kUnreachable && d <= n->k;
            return n->op == Op::DistLe ? le : !le;
        }
        case Op::In: {
            ByteView a = arg(f, args, n->x);
            const auto& ss = f.set_params();
            auto idx = static_cast<std::size_t>(std::find(ss.begin(), ss.end(), n->set) - ss.begin());
            for (ByteView w : sets.at(idx)) {
                if (same(a, w)) return true;
            }
            return false;
        }
        case Op::Not: return !eval(n->kids[0], f, args, sets);
        case Op::And:
            for (const auto& k : n->kids) {
                if (!eval(k, f, args, sets)) return false;
            }
            return true;
        case Op::Or:
            for (const auto& k : n->kids) {
                if (eval(k, f, args, sets)) return true;
            }
            return false;
        case Op::Implies: return !eval(n->kids[0], f, args, sets) || eval(n->kids[1], f, args, sets);
        case Op::Edge:
        case Op::Col: throw UnsupportedQuery("centroid labels carry no edge or color information");
        case Op::Exists:
        case Op::Forall: throw UnsupportedQuery("centroid labels answer quantifier-free distance formulas only");
        }
        return false;
    }
};

}  // namespace

const char* labeler_name(LabelerKind kind) { return kind == LabelerKind::Catalog ? "catalog" : "centroid"; }

LabelerKind labeler_from_name(const std::string& name) {
    if (name == "catalog") return LabelerKind::Catalog;
    if (name == "centroid") return LabelerKind::Centroid;
    throw InputError("unknown labeler '" + name + "'");
}

std::unique_ptr<PieceLabeler> make_labeler(LabelerKind kind) {
    switch (kind) {
    case LabelerKind::Catalog: return std::make_unique<CatalogLabeler>();
    case LabelerKind::Centroid: return std::make_unique<CentroidLabeler>();
    }
    throw InputError("unknown labeler kind");
}

std::uint32_t sublabel_piece(ByteView sublabel) {
    ByteReader r(sublabel);
    return static_cast<std::uint32_t>(r.get_varint());
}

PieceBuild CatalogLabeler::build(std::uint32_t piece_id, const ColoredGraph& piece) const {
    if (piece.size() == 0) throw InputError("empty piece " + std::to_string(piece_id));
    PieceBuild out;
    for (Vertex v = 0; v < piece.size(); ++v) {
        ByteWriter w;
        w.put_varint(piece_id);
        w.put_varint(v);
        out.sublabels.push_back(w.take());
    }
    ByteWriter w;
    encode_graph(w, piece);
    out.section = w.take();
    return out;
}

std::unique_ptr<PreparedPiece> CatalogLabeler::prepare(std::uint32_t piece_id, ByteView section) const {
    ByteReader r(section);
    ColoredGraph g = decode_graph(r);
    if (!r.at_end()) throw FormatError(ErrorCode::Truncated, "trailing bytes in piece section");
    return std::make_unique<CatalogPiece>(piece_id, std::move(g));
}

std::vector<std::vector<CentroidEntry>> centroid_decomposition(const ColoredGraph& forest) {
    if (!is_forest(forest)) throw InputError("centroid labels need an acyclic piece");
    std::size_t n = forest.size();
    std::vector<std::vector<CentroidEntry>> entries(n);
    std::vector<char> removed(n, 0);
    std::vector<Vertex> parent(n, kNoVertex), order, size(n, 0);
    std::vector<Distance> dist(n, kUnreachable);
    std::vector<char> seen(n, 0);
    // Components are processed breadth-first so each vertex receives its entries level by level.
    std::vector<Vertex> queue;
    for (Vertex v = 0; v < n; ++v) {
        if (seen[v]) continue;
        // Mark the whole top-level component so later seeds skip it.
        std::vector<Vertex> stack{v};
        seen[v] = 1;
        while (!stack.empty()) {
            Vertex u = stack.back();
            stack.pop_back();
            for (Vertex w : forest.neighbors(u)) {
                if (!seen[w]) {
                    seen[w] = 1;
                    stack.push_back(w);
                }
            }
        }
        queue.push_back(v);
    }
    for (std::size_t head = 0; head < queue.size(); ++head) {
        Vertex root = queue[head];
        order.clear();
        order.push_back(root);
        parent[root] = kNoVertex;
        for (std::size_t i = 0; i < order.size(); ++i) {
            Vertex u = order[i];
            for (Vertex w : forest.neighbors(u)) {
                if (removed[w] || w == parent[u]) continue;
                parent[w] = u;
                order.push_back(w);
            }
        }
        for (auto it = order.rbegin(); it != order.rend(); ++it) {
            Vertex u = *it;
            size[u] = 1;
            for (Vertex w : forest.neighbors(u)) {
                if (!removed[w] && parent[w] == u && w != parent[u]) size[u] += size[w];
            }
        }
        std::size_t total = order.size();
        Vertex best = kNoVertex;
        std::size_t best_weight = total + 1;
        for (Vertex u : order) {
            std::size_t weight = total - size[u];
            for (Vertex w : forest.neighbors(u)) {
                if (!removed[w] && parent[w] == u && w != parent[u]) weight = std::max<std::size_t>(weight, size[w]);
            }
            if (weight < best_weight || (weight == best_weight && u < best)) {
                best = u;
                best_weight = weight;
            }
        }
        // Distances from the centroid inside this component.
        std::vector<Vertex> bfs{best};
        dist[best] = 0;
        for (std::size_t i = 0; i < bfs.size(); ++i) {
            Vertex u = bfs[i];
            for (Vertex w : forest.neighbors(u)) {
                if (removed[w] || dist[w] != kUnreachable) continue;
                dist[w] = dist[u] + 1;
                bfs.push_back(w);
            }
        }
        for (Vertex u : bfs) {
            entries[u].push_back({best, dist[u]});
            dist[u] = kUnreachable;
        }
        removed[best] = 1;
        for (Vertex w : forest.neighbors(best)) {
            if (!removed[w]) queue.push_back(w);
        }
    }
    return entries;
}

Bytes encode_centroid_label(std::uint32_t piece_id, const std::vector<CentroidEntry>& entries) {
    ByteWriter w;
    w.put_varint(piece_id);
    w.put_varint(entries.size());
    for (const auto& e : entries) {
        w.put_varint(e.centroid);
        w.put_varint(e.dist);
    }
    return w.take();
}

std::vector<CentroidEntry> decode_centroid_label(ByteView sublabel) {
    ByteReader r(sublabel);
    r.get_varint();
    std::uint64_t count = r.get_varint();
    if (count > r.remaining()) throw FormatError(ErrorCode::Truncated, "centroid entry count exceeds label");
    std::vector<CentroidEntry> out(count);
    for (auto& e : out) {
        e.centroid = static_cast<Vertex>(r.get_varint());
        e.dist = static_cast<Distance>(r.get_varint());
    }
    return out;
}

Distance centroid_distance(ByteView a, ByteView b) {
    auto ea = decode_centroid_label(a);
    auto eb = decode_centroid_label(b);
    if (sublabel_piece(a) != sublabel_piece(b)) throw WrongPiece("centroid labels from different pieces");
    Distance best = kUnreachable;
    for (std::size_t i = 0; i < std::min(ea.size(), eb.size()); ++i) {
        if (ea[i].centroid != eb[i].centroid) break;
        best = std::min(best, ea[i].dist + eb[i].dist);
    }
    return best;
}

PieceBuild CentroidLabeler::build(std::uint32_t piece_id, const ColoredGraph& piece) const {
    if (piece.size() == 0) throw InputError("empty piece " + std::to_string(piece_id));
    PieceBuild out;
    for (const auto& e : centroid_decomposition(piece)) out.sublabels.push_back(encode_centroid_label(piece_id, e));
    return out;
}

std::unique_ptr<PreparedPiece> CentroidLabeler::prepare(std::uint32_t piece_id, ByteView) const {
    return std::make_unique<CentroidPiece>(piece_id);
}

}  // namespace clk
