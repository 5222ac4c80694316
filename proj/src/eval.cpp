#include "clk/eval.hpp"

#include <algorithm>
#include <memory>

#include "clk/errors.hpp"

namespace clk {

namespace {

constexpr std::size_t kMaxCachedEntries = std::size_t{1} << 25;
constexpr std::uint32_t kNone = 0xffffffffu;

}  // namespace

void DistanceOracle::trim() {
    if (cached_entries_ > kMaxCachedEntries) {
        rows_.clear();
        balls_.clear();
        cached_entries_ = 0;
    }
}

const std::vector<Distance>& DistanceOracle::row(Vertex u) {
    auto it = rows_.find(u);
    if (it != rows_.end()) return it->second;
    trim();
    Vertex src[1] = {u};
    auto [pos, inserted] = rows_.emplace(u, bfs_distances(*g_, src));
    cached_entries_ += g_->size();
    return pos->second;
}

Distance DistanceOracle::distance(Vertex u, Vertex v) {
    if (u == v) return 0;
    return row(u)[v];
}

bool DistanceOracle::within(Vertex u, Vertex v, Distance k) {
    if (u == v) return true;
    if (k == 0) return false;
    auto nb = g_->neighbors(u);
    if (std::binary_search(nb.begin(), nb.end(), v)) return true;
    if (k == 1) return false;
    auto it = rows_.find(u);
    if (it == rows_.end()) {
        auto jt = rows_.find(v);
        if (jt != rows_.end()) return jt->second[u] <= k;
    }
    return row(u)[v] <= k;
}

const std::vector<Vertex>& DistanceOracle::ball(Vertex u, Distance k) {
    auto key = std::make_pair(u, k);
    auto it = balls_.find(key);
    if (it != balls_.end()) return it->second;
    trim();
    std::vector<Vertex> out;
    if (k == 0) {
        out = {u};
    } else if (k == 1) {
        auto nb = g_->neighbors(u);
        out.assign(nb.begin(), nb.end());
        out.insert(std::lower_bound(out.begin(), out.end(), u), u);
    } else {
        const auto& r = row(u);
        for (Vertex v = 0; v < r.size(); ++v) {
            if (r[v] <= k) out.push_back(v);
        }
    }
    cached_entries_ += out.size();
    return balls_.emplace(key, std::move(out)).first->second;
}

enum class GuardKind : std::uint8_t { None, Eq, Edge, In, Dist, Col };

struct Guard {
    GuardKind kind = GuardKind::None;
    std::uint32_t other = kNone;  // slot of the already-bound variable
    Color color = 0;
    Distance k = 0;
    std::uint32_t set = 0;
};

struct CNode {
    Op op = Op::True;
    std::uint32_t a = kNone;
    std::uint32_t b = kNone;
    Color color = 0;
    Distance k = 0;
    std::uint32_t set = 0;
    std::uint32_t var = kNone;
    std::vector<std::uint32_t> kids;
    Guard guard;
};

struct Evaluator::Program {
    std::vector<std::string> fo;
    std::vector<std::string> sets;
    std::vector<CNode> nodes;
    std::uint32_t root = 0;
    std::uint32_t slots = 0;
    // Counting plan: per parameter index, conjuncts to check once it is bound.
    std::vector<std::uint32_t> initial;  // conjuncts without free variables
    std::vector<std::vector<std::uint32_t>> stage;
    std::vector<Guard> stage_guard;
};

struct Evaluator::Run {
    const ColoredGraph& g;
    DistanceOracle& dist;
    const Program& prog;
    std::vector<Vertex> env;
    std::span<const VertexSet> sets;
    std::vector<std::vector<std::uint8_t>> member;
    bool guarded;

    bool in_set(std::uint32_t set, Vertex v) const { return member[set][v] != 0; }

    bool atom(const CNode& n) {
        switch (n.op) {
        case Op::True: return true;
        case Op::False: return false;
        case Op::Eq: return env[n.a] == env[n.b];
        case Op::Edge: return g.has_edge(env[n.a], env[n.b], n.color);
        case Op::Col: return g.has_color(env[n.a], n.color);
        case Op::In: return in_set(n.set, env[n.a]);
        case Op::DistLe: return dist.within(env[n.a], env[n.b], n.k);
        case Op::DistGt: return !dist.within(env[n.a], env[n.b], n.k);
        default: return false;
        }
    }

    // Calls fn(v) for every v that may satisfy the guard; returns false if fn asked to stop.
    template <typename Fn>
    bool candidates(const Guard& guard, Fn&& fn) {
        switch (guard.kind) {
        case GuardKind::None:
            for (Vertex v = 0; v < g.size(); ++v) {
                if (!fn(v)) return false;
            }
            return true;
        case GuardKind::Eq: return fn(env[guard.other]);
        case GuardKind::Edge: {
            Vertex x = env[guard.other];
            auto nb = g.neighbors(x);
            // Copy: fn may evaluate nested guards that reuse the neighbour span, which is stable,
            // but a loop at x also makes x itself a candidate.
            for (Vertex v : nb) {
                if (!fn(v)) return false;
            }
            if (g.has_loops()) return fn(x);
            return true;
        }
        case GuardKind::In:
            for (Vertex v : sets[guard.set]) {
                if (!fn(v)) return false;
            }
            return true;
        case GuardKind::Dist: {
            // The ball may be evicted by nested lookups, so iterate over a copy.
            std::vector<Vertex> ball = dist.ball(env[guard.other], guard.k);
            for (Vertex v : ball) {
                if (!fn(v)) return false;
            }
            return true;
        }
        case GuardKind::Col:
            for (Vertex v : g.vertices_with_color(guard.color)) {
                if (!fn(v)) return false;
            }
            return true;
        }
        return true;
    }

    bool eval(std::uint32_t id) {
        const CNode& n = prog.nodes[id];
        switch (n.op) {
        case Op::Not: return !eval(n.kids[0]);
        case Op::And:
            for (auto k : n.kids) {
                if (!eval(k)) return false;
            }
            return true;
        case Op::Or:
            for (auto k : n.kids) {
                if (eval(k)) return true;
            }
            return false;
        case Op::Implies: return !eval(n.kids[0]) || eval(n.kids[1]);
        case Op::Exists: {
            bool found = false;
            Guard guard = guarded ? n.guard : Guard{};
            candidates(guard, [&](Vertex v) {
                env[n.var] = v;
                if (eval(n.kids[0])) {
                    found = true;
                    return false;
                }
                return true;
            });
            return found;
        }
        case Op::Forall: {
            bool all = true;
            Guard guard = guarded ? n.guard : Guard{};
            candidates(guard, [&](Vertex v) {
                env[n.var] = v;
                if (!eval(n.kids[0])) {
                    all = false;
                    return false;
                }
                return true;
            });
            return all;
        }
        default: return atom(n);
        }
    }

    std::uint64_t count_from(std::size_t i) {
        if (i == prog.fo.size()) return 1;
        std::uint64_t total = 0;
        candidates(prog.stage_guard[i], [&](Vertex v) {
            env[i] = v;
            for (auto c : prog.stage[i]) {
                if (!eval(c)) return true;
            }
            total += count_from(i + 1);
            return true;
        });
        return total;
    }
};

namespace {

class Compiler {
public:
    Compiler(std::vector<CNode>& nodes, const std::vector<std::string>& fo, const std::vector<std::string>& sets)
        : nodes_(nodes), sets_(sets) {
        for (std::uint32_t i = 0; i < fo.size(); ++i) scope_.emplace_back(fo[i], i);
        slots_ = static_cast<std::uint32_t>(fo.size());
    }

    std::uint32_t slots() const { return slots_; }

    std::uint32_t compile(const NodePtr& node) {
        CNode c;
        c.op = node->op;
        c.color = node->color;
        c.k = node->k;
        switch (node->op) {
        case Op::True:
        case Op::False: break;
        case Op::Col: c.a = slot(node->x); break;
        case Op::In: {
            c.a = slot(node->x);
            auto it = std::find(sets_.begin(), sets_.end(), node->set);
            if (it == sets_.end()) throw InputError("unbound set variable " + node->set);
            c.set = static_cast<std::uint32_t>(it - sets_.begin());
            break;
        }
        case Op::Eq:
        case Op::Edge:
        case Op::DistLe:
        case Op::DistGt:
            c.a = slot(node->x);
            c.b = slot(node->y);
            break;
        case Op::Exists:
        case Op::Forall: {
            c.var = slots_++;
            scope_.emplace_back(node->x, c.var);
            c.kids.push_back(compile(node->kids[0]));
            scope_.pop_back();
            c.guard = find_guard(node, c.var);
            break;
        }
        default:
            for (const auto& kid : node->kids) c.kids.push_back(compile(kid));
        }
        nodes_.push_back(std::move(c));
        return static_cast<std::uint32_t>(nodes_.size() - 1);
    }

    std::uint32_t slot(const std::string& name) const {
        for (auto it = scope_.rbegin(); it != scope_.rend(); ++it) {
            if (it->first == name) return it->second;
        }
        throw InputError("unbound variable " + name);
    }

    // Best guard on `var` among atoms, where `bound(slot)` says which other slots are usable.
    template <typename Bound>
    Guard guard_from_atoms(const std::vector<NodePtr>& atoms, std::uint32_t var, Bound&& bound) const {
        Guard best;
        int best_rank = 100;
        auto consider = [&](Guard g, int rank) {
            if (rank < best_rank) {
                best = g;
                best_rank = rank;
            }
        };
        for (const auto& a : atoms) {
            switch (a->op) {
            case Op::Eq:
            case Op::Edge:
            case Op::DistLe: {
                std::uint32_t x = slot_or_none(a->x), y = slot_or_none(a->y);
                std::uint32_t other = kNone;
                if (x == var && y != var && bound(y)) other = y;
                if (y == var && x != var && bound(x)) other = x;
                if (other == kNone) break;
                Guard g;
                g.other = other;
                if (a->op == Op::Eq) {
                    g.kind = GuardKind::Eq;
                    consider(g, 0);
                } else if (a->op == Op::Edge) {
                    g.kind = GuardKind::Edge;
                    consider(g, 1);
                } else {
                    g.kind = GuardKind::Dist;
                    g.k = a->k;
                    consider(g, 3);
                }
                break;
            }
            case Op::In:
                if (slot_or_none(a->x) == var) {
                    Guard g;
                    g.kind = GuardKind::In;
                    g.set = static_cast<std::uint32_t>(std::find(sets_.begin(), sets_.end(), a->set) - sets_.begin());
                    consider(g, 2);
                }
                break;
            case Op::Col:
                if (slot_or_none(a->x) == var) {
                    Guard g;
                    g.kind = GuardKind::Col;
                    g.color = a->color;
                    consider(g, 4);
                }
                break;
            default: break;
            }
        }
        return best;
    }

private:
    std::vector<CNode>& nodes_;
    const std::vector<std::string>& sets_;
    std::vector<std::pair<std::string, std::uint32_t>> scope_;
    std::uint32_t slots_ = 0;

    std::uint32_t slot_or_none(const std::string& name) const {
        for (auto it = scope_.rbegin(); it != scope_.rend(); ++it) {
            if (it->first == name) return it->second;
        }
        return kNone;
    }

    Guard find_guard(const NodePtr& q, std::uint32_t var) {
        // Scope: the quantified variable is temporarily visible again for slot lookup.
        scope_.emplace_back(q->x, var);
        std::vector<NodePtr> atoms;
        const NodePtr& body = q->kids[0];
        auto outer = [&](std::uint32_t s) { return s != kNone && s < var; };
        if (q->op == Op::Exists) {
            flatten_and(body, atoms);
        } else if (body->op == Op::Implies) {
            flatten_and(body->kids[0], atoms);
        } else if (body->op == Op::Or) {
            for (const auto& kid : body->kids) {
                if (kid->op == Op::Not && is_atom(kid->kids[0]->op)) atoms.push_back(kid->kids[0]);
            }
        } else if (body->op == Op::Not && is_atom(body->kids[0]->op)) {
            // A x. !a(x): only vertices satisfying the atom can falsify the body.
            atoms.push_back(body->kids[0]);
        }
        Guard g = guard_from_atoms(atoms, var, outer);
        scope_.pop_back();
        return g;
    }

public:
    static void flatten_and(const NodePtr& node, std::vector<NodePtr>& out) {
        if (node->op == Op::And) {
            for (const auto& kid : node->kids) flatten_and(kid, out);
        } else {
            out.push_back(node);
        }
    }
};

}  // namespace

Evaluator::Evaluator(const ColoredGraph& g, EvalOptions options) : g_(&g), options_(options), dist_(g) {}

Evaluator::~Evaluator() = default;

Evaluator::Program& Evaluator::program(const Formula& f) {
    auto it = programs_.find(f.root().get());
    if (it != programs_.end() && it->second.second->fo == f.fo_params() &&
        it->second.second->sets == f.set_params()) {
        return *it->second.second;
    }
    if (programs_.size() > 256) programs_.clear();
    auto prog = std::make_unique<Program>();
    prog->fo = f.fo_params();
    prog->sets = f.set_params();
    Compiler compiler(prog->nodes, prog->fo, prog->sets);
    prog->root = compiler.compile(f.root());
    prog->slots = compiler.slots();

    // Counting stages: each top-level conjunct runs once its last parameter is bound.
    std::vector<NodePtr> conjuncts;
    Compiler::flatten_and(f.root(), conjuncts);
    std::size_t m = prog->fo.size();
    prog->stage.assign(m, {});
    prog->stage_guard.assign(m, Guard{});
    std::vector<std::vector<NodePtr>> stage_atoms(m);
    for (const auto& c : conjuncts) {
        int last = -1;
        for (const auto& v : free_fo_vars(c)) {
            auto pos = std::find(prog->fo.begin(), prog->fo.end(), v) - prog->fo.begin();
            last = std::max(last, static_cast<int>(pos));
        }
        std::uint32_t id = compiler.compile(c);
        if (last < 0) {
            prog->initial.push_back(id);
        } else {
            prog->stage[last].push_back(id);
            if (is_atom(c->op)) stage_atoms[last].push_back(c);
        }
    }
    for (std::size_t i = 0; i < m; ++i) {
        auto bound = [&](std::uint32_t s) { return s < i; };
        prog->stage_guard[i] = compiler.guard_from_atoms(stage_atoms[i], static_cast<std::uint32_t>(i), bound);
    }
    prog->slots = std::max(prog->slots, compiler.slots());
    Program& ref = *prog;
    programs_[f.root().get()] = {f.root(), std::move(prog)};
    return ref;
}

namespace {

std::vector<std::vector<std::uint8_t>> membership(const ColoredGraph& g, std::span<const VertexSet> sets) {
    std::vector<std::vector<std::uint8_t>> member(sets.size(), std::vector<std::uint8_t>(g.size(), 0));
    for (std::size_t i = 0; i < sets.size(); ++i) {
        for (Vertex v : sets[i]) {
            check_vertex(g, v);
            member[i][v] = 1;
        }
    }
    return member;
}

}  // namespace

bool Evaluator::holds(const Formula& f, std::span<const Vertex> args, std::span<const VertexSet> sets) {
    if (args.size() != f.arity()) {
        throw InputError("formula expects " + std::to_string(f.arity()) + " arguments, got " +
                         std::to_string(args.size()));
    }
    if (sets.size() != f.set_arity()) {
        throw InputError("formula expects " + std::to_string(f.set_arity()) + " set arguments, got " +
                         std::to_string(sets.size()));
    }
    for (Vertex v : args) check_vertex(*g_, v);
    Program& prog = program(f);
    Run run{*g_, dist_, prog, std::vector<Vertex>(prog.slots, 0), sets, membership(*g_, sets), options_.guarded};
    std::copy(args.begin(), args.end(), run.env.begin());
    return run.eval(prog.root);
}

std::uint64_t Evaluator::count(const Formula& f, std::span<const VertexSet> sets) {
    if (sets.size() != f.set_arity()) {
        throw InputError("formula expects " + std::to_string(f.set_arity()) + " set arguments, got " +
                         std::to_string(sets.size()));
    }
    Program& prog = program(f);
    Run run{*g_, dist_, prog, std::vector<Vertex>(prog.slots, 0), sets, membership(*g_, sets), options_.guarded};
    if (prog.fo.empty()) return run.eval(prog.root) ? 1 : 0;
    if (!options_.guarded) {
        // Plain enumeration of V^m.
        std::uint64_t total = 0;
        std::size_t m = prog.fo.size();
        std::vector<Vertex> tuple(m, 0);
        if (g_->size() == 0) return 0;
        while (true) {
            std::copy(tuple.begin(), tuple.end(), run.env.begin());
            if (run.eval(prog.root)) ++total;
            std::size_t i = 0;
            while (i < m && ++tuple[i] == g_->size()) tuple[i++] = 0;
            if (i == m) break;
        }
        return total;
    }
    for (auto c : prog.initial) {
        if (!run.eval(c)) return 0;
    }
    return run.count_from(0);
}

bool eval_oracle(const ColoredGraph& g, const Formula& f, std::span<const Vertex> args,
                 std::span<const VertexSet> sets) {
    Evaluator ev(g);
    return ev.holds(f, args, sets);
}

std::uint64_t count_oracle(const ColoredGraph& g, const Formula& f, std::span<const VertexSet> sets) {
    Evaluator ev(g);
    return ev.count(f, sets);
}

}  // namespace clk
