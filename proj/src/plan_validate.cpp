#include <algorithm>
#include <sstream>

#include "clk/errors.hpp"
#include "clk/eval.hpp"
#include "clk/plan.hpp"

namespace clk {

std::vector<Vertex> random_args(std::mt19937_64& rng, std::size_t n, std::size_t m) {
    if (n == 0 && m > 0) throw InputError("cannot draw arguments from an empty graph");
    std::uniform_int_distribution<Vertex> pick(0, static_cast<Vertex>(n - 1));
    std::vector<Vertex> out(m);
    for (auto& v : out) v = pick(rng);
    return out;
}

std::vector<VertexSet> random_sets(std::mt19937_64& rng, std::size_t n, std::size_t q, double density) {
    std::bernoulli_distribution coin(density);
    std::vector<VertexSet> out(q);
    for (auto& s : out) {
        for (Vertex v = 0; v < n; ++v) {
            if (coin(rng)) s.push_back(v);
        }
    }
    return out;
}

std::string describe_instance(std::span<const Vertex> args, std::span<const VertexSet> sets) {
    std::ostringstream out;
    out << "args=(";
    for (std::size_t i = 0; i < args.size(); ++i) out << (i ? "," : "") << args[i];
    out << ")";
    for (std::size_t i = 0; i < sets.size(); ++i) {
        out << " W" << i + 1 << "={";
        for (std::size_t j = 0; j < sets[i].size(); ++j) out << (j ? "," : "") << sets[i][j];
        out << "}";
    }
    return out.str();
}

namespace {

// Half the draws keep all arguments near the first one, so local and
// connected formulas see both near and far tuples.
std::vector<Vertex> draw_args(std::mt19937_64& rng, DistanceOracle& dist, std::size_t n, std::size_t m,
                              Distance radius) {
    std::vector<Vertex> args = random_args(rng, n, m);
    if (m > 1 && std::bernoulli_distribution(0.5)(rng)) {
        const auto& near = dist.ball(args[0], radius);
        std::uniform_int_distribution<std::size_t> pick(0, near.size() - 1);
        for (std::size_t i = 1; i < m; ++i) args[i] = near[pick(rng)];
    }
    return args;
}

void record_failure(ValidationReport& report, const std::string& what) {
    report.ok = false;
    if (report.failures++ == 0) report.witness = what;
}

std::vector<VertexSet> clip(std::span<const VertexSet> sets, const std::vector<Vertex>& to_parent,
                            const std::vector<Vertex>& from_parent) {
    std::vector<VertexSet> out(sets.size());
    for (std::size_t i = 0; i < sets.size(); ++i) {
        for (Vertex v : sets[i]) {
            if (from_parent[v] != kNoVertex) out[i].push_back(from_parent[v]);
        }
        std::sort(out[i].begin(), out[i].end());
    }
    (void)to_parent;
    return out;
}

template <typename Check>
ValidationReport run_samples(const Sampler& sampler, std::size_t m, std::size_t q, Distance radius, Check&& check) {
    ValidationReport report;
    if (!sampler.graph) throw InputError("sampler has no graph generator");
    std::mt19937_64 rng(sampler.seed);
    for (std::size_t gi = 0; gi < sampler.graphs; ++gi) {
        ColoredGraph g = sampler.graph(rng);
        if (g.size() == 0) continue;
        Evaluator ev(g);
        for (std::size_t s = 0; s < sampler.per_graph; ++s) {
            auto args = draw_args(rng, ev.distances(), g.size(), m, radius);
            auto sets = random_sets(rng, g.size(), q, sampler.set_density);
            ++report.checked;
            std::string failure = check(g, ev, args, sets);
            if (!failure.empty()) {
                record_failure(report, "graph " + std::to_string(gi) + " (n=" + std::to_string(g.size()) +
                                           "), " + describe_instance(args, sets) + ": " + failure);
            }
        }
    }
    return report;
}

Distance plan_radius(const QueryPlan& plan) {
    switch (plan.kind) {
    case PlanKind::Local: return 2 * plan.local.t + 1;
    case PlanKind::Connected: return std::max<Distance>(plan.t, 1);
    default: return 2;
    }
}

}  // namespace

ValidationReport validate_plan(const QueryPlan& plan, const Formula& phi, const Sampler& sampler) {
    if (phi.arity() != plan.arity() || phi.set_arity() != plan.set_arity()) {
        throw InputError("formula signature does not match the plan");
    }
    return run_samples(sampler, plan.arity(), plan.set_arity(), plan_radius(plan),
                       [&](const ColoredGraph& g, Evaluator& ev, const std::vector<Vertex>& args,
                           const std::vector<VertexSet>& sets) -> std::string {
                           bool truth = ev.holds(phi, args, sets);
                           bool via_plan = evaluate_plan(g, plan, args, sets);
                           if (truth == via_plan) return {};
                           return std::string("formula says ") + (truth ? "true" : "false") + ", plan says " +
                                  (via_plan ? "true" : "false");
                       });
}

ValidationReport validate_locality(const Formula& phi, Distance t, const Sampler& sampler) {
    if (phi.arity() == 0) throw InputError("locality is defined around at least one variable");
    return run_samples(sampler, phi.arity(), phi.set_arity(), 2 * t + 1,
                       [&](const ColoredGraph& g, Evaluator& ev, const std::vector<Vertex>& args,
                           const std::vector<VertexSet>& sets) -> std::string {
                           VertexSet nb = ball(g, args, t);
                           auto sub = induced_subgraph(g, nb);
                           auto from = sub.from_parent(g.size());
                           std::vector<Vertex> local_args;
                           for (Vertex a : args) local_args.push_back(from[a]);
                           bool global = ev.holds(phi, args, sets);
                           bool local = eval_oracle(sub.graph, phi, local_args, clip(sets, sub.to_parent, from));
                           if (global == local) return {};
                           return std::string("on G: ") + (global ? "true" : "false") + ", on the radius-" +
                                  std::to_string(t) + " ball: " + (local ? "true" : "false");
                       });
}

namespace {

// Calls fn for every subset of `pool` of size <= k until fn returns true.
template <typename Fn>
bool subsets_upto(const std::vector<Vertex>& pool, std::size_t k, std::vector<Vertex>& cur, std::size_t from, Fn&& fn) {
    if (fn(cur)) return true;
    if (cur.size() == k) return false;
    for (std::size_t i = from; i < pool.size(); ++i) {
        cur.push_back(pool[i]);
        if (subsets_upto(pool, k, cur, i + 1, fn)) return true;
        cur.pop_back();
    }
    return false;
}

}  // namespace

ValidationReport validate_boundedness(const Formula& phi, std::size_t p, const Sampler& sampler) {
    ValidationReport report;
    bool noted = false;
    auto inner = run_samples(
        sampler, phi.arity(), phi.set_arity(), 2,
        [&](const ColoredGraph& g, Evaluator& ev, const std::vector<Vertex>& args,
            const std::vector<VertexSet>& sets) -> std::string {
            if (g.size() > 40) {
                if (!noted) report.notes.push_back("graphs above 40 vertices skipped: witness search is exhaustive");
                noted = true;
                return {};
            }
            VertexSet base = make_vertex_set(args);
            if (base.size() > p) {
                return ev.holds(phi, args, sets) ? "true although the arguments alone exceed p" : std::string{};
            }
            std::vector<Vertex> pool;
            for (Vertex v = 0; v < g.size(); ++v) {
                if (!std::binary_search(base.begin(), base.end(), v)) pool.push_back(v);
            }
            std::vector<Vertex> witness;
            std::vector<Vertex> cur;
            bool found = subsets_upto(pool, p - base.size(), cur, 0, [&](const std::vector<Vertex>& extra) {
                std::vector<Vertex> x = base;
                x.insert(x.end(), extra.begin(), extra.end());
                auto sub = induced_subgraph(g, make_vertex_set(x));
                auto from = sub.from_parent(g.size());
                std::vector<Vertex> local_args;
                for (Vertex a : args) local_args.push_back(from[a]);
                if (eval_oracle(sub.graph, phi, local_args, clip(sets, sub.to_parent, from))) {
                    witness = sub.to_parent;
                    return true;
                }
                return false;
            });
            bool global = ev.holds(phi, args, sets);
            if (found != global) {
                return std::string("on G: ") + (global ? "true" : "false") + ", witness of size <= " +
                       std::to_string(p) + (found ? " exists" : " does not exist");
            }
            if (found) {
                // Persistence: add one random vertex at a time up to the whole graph.
                std::mt19937_64 rng(g.size() * 7919 + witness.size());
                std::vector<Vertex> y = witness;
                std::vector<Vertex> rest;
                for (Vertex v = 0; v < g.size(); ++v) {
                    if (std::find(y.begin(), y.end(), v) == y.end()) rest.push_back(v);
                }
                std::shuffle(rest.begin(), rest.end(), rng);
                for (std::size_t i = 0; i < rest.size(); i += std::max<std::size_t>(1, rest.size() / 4)) {
                    y.insert(y.end(), rest.begin() + static_cast<long>(i),
                             rest.begin() + static_cast<long>(std::min(rest.size(), i + std::max<std::size_t>(1, rest.size() / 4))));
                    auto sub = induced_subgraph(g, make_vertex_set(y));
                    auto from = sub.from_parent(g.size());
                    std::vector<Vertex> local_args;
                    for (Vertex a : args) local_args.push_back(from[a]);
                    if (!eval_oracle(sub.graph, phi, local_args, clip(sets, sub.to_parent, from))) {
                        return "truth lost on a superset of the witness of size " + std::to_string(y.size());
                    }
                }
            }
            return {};
        });
    inner.notes.insert(inner.notes.end(), report.notes.begin(), report.notes.end());
    return inner;
}

ValidationReport validate_t_connected(const Formula& phi, Distance t, const Sampler& sampler) {
    return run_samples(sampler, phi.arity(), phi.set_arity(), std::max<Distance>(t, 1),
                       [&](const ColoredGraph& g, Evaluator& ev, const std::vector<Vertex>& args,
                           const std::vector<VertexSet>& sets) -> std::string {
                           bool global = ev.holds(phi, args, sets);
                           bool close = true;
                           for (std::size_t i = 0; i < args.size(); ++i) {
                               for (std::size_t j = i + 1; j < args.size(); ++j) {
                                   if (!ev.distances().within(args[i], args[j], t)) close = false;
                               }
                           }
                           bool local = false;
                           if (close) {
                               VertexSet nb = ball(g, args, t);
                               auto sub = induced_subgraph(g, nb);
                               auto from = sub.from_parent(g.size());
                               std::vector<Vertex> local_args;
                               for (Vertex a : args) local_args.push_back(from[a]);
                               local = eval_oracle(sub.graph, phi, local_args, clip(sets, sub.to_parent, from));
                           }
                           if (global == (close && local)) return {};
                           return std::string("on G: ") + (global ? "true" : "false") + ", arguments " +
                                  (close ? "within" : "not within") + " distance " + std::to_string(t) +
                                  ", on the joint ball: " + (local ? "true" : "false");
                       });
}

}  // namespace clk
