#include "clk/expansion.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "clk/errors.hpp"
#include "clk/eval.hpp"
#include "clk/schemes.hpp"

namespace clk {

std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
    if (k > n) return 0;
    k = std::min(k, n - k);
    std::uint64_t out = 1;
    for (std::uint64_t i = 1; i <= k; ++i) {
        // out * (n - k + i) / i stays integral at every step.
        unsigned __int128 next = static_cast<unsigned __int128>(out) * (n - k + i) / i;
        if (next > UINT64_MAX) return UINT64_MAX;
        out = static_cast<std::uint64_t>(next);
    }
    return out;
}

void compact_partition(ExpansionPartition& partition) {
    std::map<std::uint32_t, std::uint32_t> renumber;
    for (auto& p : partition.part) {
        auto [it, fresh] = renumber.emplace(p, static_cast<std::uint32_t>(renumber.size()));
        p = it->second;
    }
    partition.parts = renumber.size();
}

ExpansionPartition tree_depth_mod_partition(const ColoredGraph& forest, std::size_t p) {
    if (p == 0) throw InputError("the partition bound p must be at least 1");
    if (!is_forest(forest)) throw InputError("the depth partition needs an acyclic graph");
    const std::size_t n = forest.size();
    ExpansionPartition out;
    out.part.assign(n, 0);
    std::vector<Distance> depth(n, kUnreachable);
    for (Vertex root = 0; root < n; ++root) {
        if (depth[root] != kUnreachable) continue;
        depth[root] = 0;
        std::vector<Vertex> queue{root};
        for (std::size_t i = 0; i < queue.size(); ++i) {
            Vertex u = queue[i];
            for (Vertex w : forest.neighbors(u)) {
                if (depth[w] != kUnreachable) continue;
                depth[w] = depth[u] + 1;
                queue.push_back(w);
            }
        }
    }
    for (Vertex v = 0; v < n; ++v) out.part[v] = static_cast<std::uint32_t>(depth[v] % (p + 1));
    compact_partition(out);
    return out;
}

namespace {

std::vector<std::uint32_t> greedy_colors(const ColoredGraph& g, const std::vector<char>& skip) {
    std::vector<std::uint32_t> color(g.size(), UINT32_MAX);
    std::vector<char> used;
    for (Vertex v = 0; v < g.size(); ++v) {
        if (skip[v]) continue;
        used.assign(g.neighbors(v).size() + 1, 0);
        for (Vertex w : g.neighbors(v)) {
            if (color[w] < used.size()) used[color[w]] = 1;
        }
        std::uint32_t c = 0;
        while (used[c]) ++c;
        color[v] = c;
    }
    return color;
}

}  // namespace

ExpansionPartition greedy_coloring_partition(const ColoredGraph& g) {
    ExpansionPartition out;
    out.part = greedy_colors(g, std::vector<char>(g.size(), 0));
    compact_partition(out);
    return out;
}

ExpansionPartition isolation_partition(const ColoredGraph& g, std::size_t threshold) {
    std::vector<char> heavy(g.size(), 0);
    for (Vertex v = 0; v < g.size(); ++v) heavy[v] = g.neighbors(v).size() > threshold;
    ExpansionPartition out;
    out.part = greedy_colors(g, heavy);
    std::uint32_t next = 0;
    for (auto c : out.part) {
        if (c != UINT32_MAX) next = std::max(next, c + 1);
    }
    for (Vertex v = 0; v < g.size(); ++v) {
        if (heavy[v]) out.part[v] = next++;
    }
    compact_partition(out);
    return out;
}

ExpansionPartition parse_partition(std::string_view text, std::size_t n) {
    ExpansionPartition out;
    out.part.assign(n, UINT32_MAX);
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream words(line);
        std::string key;
        if (!(words >> key)) continue;
        long long v = -1, id = -1;
        std::string extra;
        if (key != "part" || !(words >> v >> id) || (words >> extra)) {
            throw InputError("partition line " + std::to_string(lineno) + ": expected `part <v> <id>`");
        }
        if (v < 0 || static_cast<std::size_t>(v) >= n || id < 0 || id > UINT32_MAX - 1) {
            throw InputError("partition line " + std::to_string(lineno) + ": value out of range");
        }
        if (out.part[v] != UINT32_MAX) throw InputError("vertex " + std::to_string(v) + " is assigned twice");
        out.part[v] = static_cast<std::uint32_t>(id);
    }
    for (Vertex v = 0; v < n; ++v) {
        if (out.part[v] == UINT32_MAX) throw InputError("vertex " + std::to_string(v) + " has no part");
    }
    compact_partition(out);
    return out;
}

std::string format_partition(const ExpansionPartition& partition) {
    std::ostringstream out;
    for (Vertex v = 0; v < partition.part.size(); ++v) out << "part " << v << ' ' << partition.part[v] << "\n";
    return out.str();
}

bool treewidth_at_most_two(const ColoredGraph& g) {
    std::vector<std::set<Vertex>> adj(g.size());
    for (auto [u, v] : undirected_pairs(g)) {
        adj[u].insert(v);
        adj[v].insert(u);
    }
    std::vector<char> gone(g.size(), 0);
    std::vector<Vertex> work;
    for (Vertex v = 0; v < g.size(); ++v) work.push_back(v);
    std::size_t left = g.size();
    while (!work.empty()) {
        Vertex v = work.back();
        work.pop_back();
        if (gone[v] || adj[v].size() > 2) continue;
        std::vector<Vertex> nb(adj[v].begin(), adj[v].end());
        for (Vertex w : nb) adj[w].erase(v);
        if (nb.size() == 2) {
            adj[nb[0]].insert(nb[1]);
            adj[nb[1]].insert(nb[0]);
        }
        adj[v].clear();
        gone[v] = 1;
        --left;
        for (Vertex w : nb) work.push_back(w);
    }
    return left == 0;
}

nlohmann::json PartitionReport::to_json() const {
    nlohmann::json j;
    j["ok"] = ok;
    j["parts"] = parts;
    j["levels"] = nlohmann::json::array();
    for (const auto& l : levels) {
        nlohmann::json e{{"i", l.i}, {"status", l.status}};
        if (!l.witness.empty()) e["witness"] = l.witness;
        j["levels"].push_back(e);
    }
    return j;
}

namespace {

template <typename Fn>
void for_each_subset(std::size_t n, std::size_t k, Fn&& fn) {
    std::vector<std::uint32_t> cur;
    auto rec = [&](auto&& self, std::uint32_t from) -> bool {
        if (cur.size() == k) return fn(cur);
        for (std::uint32_t i = from; i < n; ++i) {
            if (n - i < k - cur.size()) return true;
            cur.push_back(i);
            if (!self(self, i + 1)) return false;
            cur.pop_back();
        }
        return true;
    };
    rec(rec, 0);
}

std::string subset_text(const std::vector<std::uint32_t>& s) {
    std::string out = "parts {";
    for (std::size_t i = 0; i < s.size(); ++i) out += (i ? "," : "") + std::to_string(s[i]);
    return out + "}";
}

}  // namespace

PartitionReport validate_partition(const ColoredGraph& g, const ExpansionPartition& partition, std::size_t p) {
    if (partition.part.size() != g.size()) throw InputError("the partition does not match the graph size");
    PartitionReport rep;
    rep.parts = partition.parts;
    std::vector<std::vector<Vertex>> members(partition.parts);
    for (Vertex v = 0; v < g.size(); ++v) members.at(partition.part[v]).push_back(v);
    constexpr std::uint64_t kMaxSubsets = 20000;
    for (std::size_t i = 1; i <= p; ++i) {
        PartitionLevel level;
        level.i = i;
        if (i > 3) {
            level.status = "unchecked";
        } else if (i > partition.parts) {
            level.status = "pass";
            level.witness = "fewer than " + std::to_string(i) + " parts";
        } else if (binomial(partition.parts, i) > kMaxSubsets) {
            level.status = "unchecked";
            level.witness = std::to_string(binomial(partition.parts, i)) + " part subsets exceed the check budget";
        } else {
            level.status = "pass";
            for_each_subset(partition.parts, i, [&](const std::vector<std::uint32_t>& s) {
                std::vector<Vertex> vs;
                for (auto q : s) vs.insert(vs.end(), members[q].begin(), members[q].end());
                auto sub = induced_subgraph(g, make_vertex_set(std::move(vs)));
                bool good = true;
                if (i == 1) {
                    good = undirected_pairs(sub.graph).empty();
                } else if (i == 2) {
                    good = is_forest(make_undirected(sub.graph.size(), undirected_pairs(sub.graph)));
                } else {
                    good = treewidth_at_most_two(sub.graph);
                }
                if (good) return true;
                level.status = "fail";
                level.witness = subset_text(s);
                return false;
            });
            if (level.status == "fail") rep.ok = false;
        }
        rep.levels.push_back(level);
    }
    return rep;
}

namespace {

std::vector<std::vector<std::uint32_t>> alpha_family(std::size_t parts, std::size_t size) {
    std::vector<std::vector<std::uint32_t>> out;
    for_each_subset(parts, size, [&](const std::vector<std::uint32_t>& s) {
        out.push_back(s);
        return true;
    });
    return out;
}

std::string alpha_key(const std::vector<std::uint32_t>& alpha) {
    std::string key = "alpha/";
    for (std::size_t i = 0; i < alpha.size(); ++i) key += (i ? "." : "") + std::to_string(alpha[i]);
    return key;
}

class BoundedDecoder final : public Decoder {
public:
    explicit BoundedDecoder(const Catalog& catalog)
        : catalog_(catalog),
          plan_(parse_plan(get_text_section(catalog_, "plan"))),
          meta_(get_json_section(catalog_, "meta")),
          alphas_(alpha_family(meta_.at("parts").get<std::size_t>(), meta_.at("alpha_size").get<std::size_t>())),
          cache_(catalog_, labeler_from_name(meta_.at("labeler").get<std::string>()),
                 [this](std::uint32_t id) { return alpha_key(alphas_.at(id)); }) {
        if (plan_.kind != PlanKind::Bounded) throw FormatError(ErrorCode::Truncated, "catalog plan is not bounded");
        if (plan_.arity() == 0) {
            std::size_t count = plan_.bounded.basics.size() * alphas_.size();
            ByteView bytes = catalog_.section("bits/balpha");
            if (packed_size(count) != bytes.size()) throw FormatError(ErrorCode::Truncated, "b_alpha bits have the wrong length");
            BitReader r(bytes);
            for (std::size_t i = 0; i < count; ++i) bits_.push_back(r.get());
        }
    }

    SchemeId scheme() const override { return SchemeId::Expansion; }
    std::size_t arity() const override { return plan_.arity(); }
    std::size_t set_arity() const override { return plan_.set_arity(); }

    bool ask(const Formula* query, std::span<const ByteView> args, const LabelSets& sets) override {
        if (query) throw UnsupportedQuery("bounded labels answer the plan they were built for; pass no formula");
        if (args.size() != arity() || sets.size() != set_arity()) {
            throw InputError("expected " + std::to_string(arity()) + " arguments and " + std::to_string(set_arity()) +
                             " sets");
        }
        std::vector<PieceArg> a;
        for (ByteView l : args) a.push_back(parse(l));
        std::vector<std::vector<PieceArg>> s(sets.size());
        std::set<std::uint32_t> touched;
        for (std::size_t i = 0; i < sets.size(); ++i) {
            for (ByteView l : sets[i]) {
                s[i].push_back(parse(l));
                for (const auto& m : s[i].back().pieces) touched.insert(m.piece);
            }
        }
        return plan_.bounded.combine->eval([&](const std::string& name) {
            for (std::size_t j = 0; j < plan_.bounded.basics.size(); ++j) {
                if (plan_.bounded.basics[j].first == name) return basic(j, a, s, touched);
            }
            throw InputError("unknown basic formula " + name);
        });
    }

private:
    Catalog catalog_;
    QueryPlan plan_;
    nlohmann::json meta_;
    std::vector<std::vector<std::uint32_t>> alphas_;
    PieceCache cache_;
    std::vector<bool> bits_;

    static PieceArg parse(ByteView label) {
        ByteReader r(label);
        PieceArg a = read_piece_arg(r);
        if (!r.at_end()) throw FormatError(ErrorCode::Truncated, "trailing bytes in label");
        return a;
    }

    bool holds_in(std::uint32_t alpha, std::size_t j, const std::vector<PieceArg>& a,
                  const std::vector<std::vector<PieceArg>>& s) {
        if (alpha >= alphas_.size()) throw FormatError(ErrorCode::Truncated, "label names an unknown alpha");
        ++ops_;
        std::vector<ByteView> subs;
        for (const auto& arg : a) subs.push_back(find_membership(arg.pieces, alpha)->sublabel);
        return cache_.get(alpha).holds(plan_.bounded.basics[j].second, subs, clip_sets(s, alpha));
    }

    bool basic(std::size_t j, const std::vector<PieceArg>& a, const std::vector<std::vector<PieceArg>>& s,
               const std::set<std::uint32_t>& touched) {
        if (!a.empty()) {
            // Alphas whose part union contains every argument.
            for (const auto& m : a.front().pieces) {
                bool common = true;
                for (const auto& other : a) common = common && find_membership(other.pieces, m.piece);
                if (common && holds_in(m.piece, j, a, s)) return true;
            }
            return false;
        }
        for (std::uint32_t k = 0; k < alphas_.size(); ++k) {
            ++ops_;
            if (!touched.count(k) && bits_[j * alphas_.size() + k]) return true;
        }
        for (std::uint32_t k : touched) {
            if (holds_in(k, j, a, s)) return true;
        }
        return false;
    }
};

}  // namespace

BuildResult build_bounded_scheme(const ColoredGraph& g, const BuildOptions& options) {
    if (!options.plan || options.plan->kind != PlanKind::Bounded) {
        throw InputError("the expansion scheme needs a plan of kind bounded");
    }
    const QueryPlan& plan = *options.plan;
    const std::size_t p = plan.bounded.p;
    if (p == 0) throw InputError("the bound p must be at least 1");
    ExpansionPartition partition;
    if (options.partition) {
        partition = *options.partition;
        if (partition.part.size() != g.size()) throw InputError("the partition does not match the graph size");
    } else if (is_forest(g)) {
        partition = tree_depth_mod_partition(g, p);
    } else {
        throw InputError("graphs with cycles need a partition (--partition)");
    }
    BuildResult out;
    out.report["scheme"] = "expansion";
    const std::size_t parts = partition.parts;
    const std::size_t size = std::min(p, parts);
    const std::uint64_t count = binomial(parts, size);
    out.report["parts"] = parts;
    out.report["alphas"] = count;
    if (count > options.alpha_budget) {
        throw PartitionTooCoarse(std::to_string(parts) + " parts give " + std::to_string(count) +
                                     " part sets, above the budget of " + std::to_string(options.alpha_budget),
                                 parts);
    }
    out.report["partition"] = validate_partition(g, partition, p).to_json();

    auto alphas = alpha_family(parts, size);
    std::vector<std::vector<Vertex>> members(parts);
    for (Vertex v = 0; v < g.size(); ++v) members[partition.part[v]].push_back(v);
    auto labeler = make_labeler(options.labeler);
    out.catalog.scheme = SchemeId::Expansion;
    std::vector<std::vector<MembershipOut>> per_vertex(g.size());
    std::vector<std::vector<bool>> bits(plan.bounded.basics.size());
    const std::vector<VertexSet> empty_sets(plan.set_arity());
    for (std::uint32_t k = 0; k < alphas.size(); ++k) {
        std::vector<Vertex> vs;
        for (auto q : alphas[k]) vs.insert(vs.end(), members[q].begin(), members[q].end());
        auto sub = induced_subgraph(g, make_vertex_set(std::move(vs)));
        add_piece(out.catalog, alpha_key(alphas[k]), *labeler, k, sub, per_vertex);
        if (plan.arity() == 0) {
            Evaluator ev(sub.graph);
            for (std::size_t j = 0; j < plan.bounded.basics.size(); ++j) {
                bits[j].push_back(ev.holds(plan.bounded.basics[j].second, {}, empty_sets));
            }
        }
    }
    if (plan.arity() == 0) {
        BitWriter bw;
        for (const auto& row : bits) {
            for (bool b : row) bw.put(b);
        }
        out.catalog.sections["bits/balpha"] = bw.finish();
    }
    put_text_section(out.catalog, "plan", plan.source);
    put_json_section(out.catalog, "meta",
                     {{"labeler", labeler_name(options.labeler)}, {"p", p}, {"parts", parts}, {"alpha_size", size}});
    const std::uint64_t bound = size == 0 ? 0 : binomial(parts - 1, size - 1);
    std::size_t most = 0;
    out.bundle.scheme = SchemeId::Expansion;
    for (Vertex v = 0; v < g.size(); ++v) {
        most = std::max(most, per_vertex[v].size());
        ByteWriter w;
        w.put_varint(v);
        put_memberships(w, std::move(per_vertex[v]));
        out.bundle.labels.push_back(w.take());
    }
    out.report["p"] = p;
    out.report["max_memberships"] = most;
    out.report["membership_bound"] = bound;
    out.report["membership_bound_ok"] = most <= bound;
    out.report["labeler"] = labeler_name(options.labeler);
    out.report["sizes"] = size_report(out.bundle, out.catalog);
    return out;
}

std::unique_ptr<Decoder> make_bounded_decoder(const Catalog& catalog) {
    return std::make_unique<BoundedDecoder>(catalog);
}

}  // namespace clk
