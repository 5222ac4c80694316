#include "clk/formula.hpp"

#include <algorithm>
#include <functional>
#include <optional>
#include <set>

#include "clk/errors.hpp"

namespace clk {

namespace {

NodePtr make(Node n) { return std::make_shared<const Node>(std::move(n)); }

NodePtr atom(Op op, std::string x, std::string y = {}) {
    Node n;
    n.op = op;
    n.x = std::move(x);
    n.y = std::move(y);
    return make(std::move(n));
}

void collect_free(const NodePtr& node, std::vector<std::string>& bound, std::vector<std::string>& fo,
                  std::vector<std::string>& sets) {
    auto add_fo = [&](const std::string& v) {
        if (std::find(bound.begin(), bound.end(), v) != bound.end()) return;
        if (std::find(fo.begin(), fo.end(), v) == fo.end()) fo.push_back(v);
    };
    switch (node->op) {
    case Op::True:
    case Op::False: return;
    case Op::Col: add_fo(node->x); return;
    case Op::In:
        add_fo(node->x);
        if (std::find(sets.begin(), sets.end(), node->set) == sets.end()) sets.push_back(node->set);
        return;
    case Op::Eq:
    case Op::Edge:
    case Op::DistLe:
    case Op::DistGt:
        add_fo(node->x);
        add_fo(node->y);
        return;
    case Op::Exists:
    case Op::Forall:
        bound.push_back(node->x);
        collect_free(node->kids[0], bound, fo, sets);
        bound.pop_back();
        return;
    default:
        for (const auto& kid : node->kids) collect_free(kid, bound, fo, sets);
    }
}

void collect_names(const NodePtr& node, std::set<std::string>& names) {
    if (!node->x.empty()) names.insert(node->x);
    if (!node->y.empty()) names.insert(node->y);
    for (const auto& kid : node->kids) collect_names(kid, names);
}

// Renames binders that clash with `taken` (parameters and enclosing binders).
NodePtr normalize(const NodePtr& node, std::set<std::string>& taken, std::set<std::string>& used,
                  std::map<std::string, std::string>& renaming) {
    auto var = [&](const std::string& v) {
        auto it = renaming.find(v);
        return it == renaming.end() ? v : it->second;
    };
    Node out = *node;
    switch (node->op) {
    case Op::True:
    case Op::False: return node;
    case Op::Col:
    case Op::In: out.x = var(node->x); return make(std::move(out));
    case Op::Eq:
    case Op::Edge:
    case Op::DistLe:
    case Op::DistGt:
        out.x = var(node->x);
        out.y = var(node->y);
        return make(std::move(out));
    case Op::Exists:
    case Op::Forall: {
        std::string name = node->x;
        if (taken.count(name)) {
            std::size_t i = 1;
            while (used.count(node->x + "_" + std::to_string(i))) ++i;
            name = node->x + "_" + std::to_string(i);
        }
        used.insert(name);
        taken.insert(name);
        auto saved = renaming.find(node->x) == renaming.end()
                         ? std::optional<std::string>{}
                         : std::optional<std::string>{renaming[node->x]};
        renaming[node->x] = name;
        out.x = name;
        out.kids = {normalize(node->kids[0], taken, used, renaming)};
        if (saved) {
            renaming[node->x] = *saved;
        } else {
            renaming.erase(node->x);
        }
        taken.erase(name);
        return make(std::move(out));
    }
    default:
        out.kids.clear();
        for (const auto& kid : node->kids) out.kids.push_back(normalize(kid, taken, used, renaming));
        return make(std::move(out));
    }
}

int precedence(Op op) {
    switch (op) {
    case Op::Implies: return 1;
    case Op::Or: return 2;
    case Op::And: return 3;
    case Op::Not: return 4;
    case Op::Exists:
    case Op::Forall: return 0;
    default: return 5;
    }
}

void print(const NodePtr& node, std::string& out);

void print_child(const NodePtr& kid, bool wrap, std::string& out) {
    if (wrap) out += '(';
    print(kid, out);
    if (wrap) out += ')';
}

void print(const NodePtr& node, std::string& out) {
    switch (node->op) {
    case Op::True: out += "true"; return;
    case Op::False: out += "false"; return;
    case Op::Eq: out += node->x + "=" + node->y; return;
    case Op::Edge:
        out += "edge[" + std::to_string(node->color) + "](" + node->x + "," + node->y + ")";
        return;
    case Op::Col: out += "col[" + std::to_string(node->color) + "](" + node->x + ")"; return;
    case Op::In: out += node->x + " in " + node->set; return;
    case Op::DistLe:
        out += "dist(" + node->x + "," + node->y + ")<=" + std::to_string(node->k);
        return;
    case Op::DistGt:
        out += "dist(" + node->x + "," + node->y + ")>" + std::to_string(node->k);
        return;
    case Op::Not: {
        const NodePtr& kid = node->kids[0];
        if (kid->op == Op::Eq) {
            out += kid->x + "!=" + kid->y;
            return;
        }
        out += '!';
        print_child(kid, precedence(kid->op) < precedence(Op::Not), out);
        return;
    }
    case Op::And:
    case Op::Or: {
        const char* sep = node->op == Op::And ? " & " : " | ";
        for (std::size_t i = 0; i < node->kids.size(); ++i) {
            if (i) out += sep;
            const NodePtr& kid = node->kids[i];
            print_child(kid, precedence(kid->op) <= precedence(node->op), out);
        }
        return;
    }
    case Op::Implies:
        print_child(node->kids[0], precedence(node->kids[0]->op) <= precedence(Op::Implies), out);
        out += " -> ";
        print_child(node->kids[1], precedence(node->kids[1]->op) < precedence(Op::Implies) &&
                                       !is_quantifier(node->kids[1]->op),
                    out);
        return;
    case Op::Exists:
    case Op::Forall:
        out += node->op == Op::Exists ? "E " : "A ";
        out += node->x + ". ";
        print(node->kids[0], out);
        return;
    }
}

}  // namespace

bool is_atom(Op op) { return static_cast<int>(op) <= static_cast<int>(Op::DistGt); }
bool is_quantifier(Op op) { return op == Op::Exists || op == Op::Forall; }

NodePtr f_true() { return atom(Op::True, {}); }
NodePtr f_false() { return atom(Op::False, {}); }
NodePtr f_eq(std::string x, std::string y) { return atom(Op::Eq, std::move(x), std::move(y)); }
NodePtr f_neq(std::string x, std::string y) { return f_not(f_eq(std::move(x), std::move(y))); }

NodePtr f_edge(Color c, std::string x, std::string y) {
    Node n;
    n.op = Op::Edge;
    n.x = std::move(x);
    n.y = std::move(y);
    n.color = c;
    return make(std::move(n));
}

NodePtr f_col(Color c, std::string x) {
    Node n;
    n.op = Op::Col;
    n.x = std::move(x);
    n.color = c;
    return make(std::move(n));
}

NodePtr f_in(std::string x, std::string set) {
    Node n;
    n.op = Op::In;
    n.x = std::move(x);
    n.set = std::move(set);
    return make(std::move(n));
}

NodePtr f_dist_le(std::string x, std::string y, Distance k) {
    Node n;
    n.op = Op::DistLe;
    n.x = std::move(x);
    n.y = std::move(y);
    n.k = k;
    return make(std::move(n));
}

NodePtr f_dist_gt(std::string x, std::string y, Distance k) {
    Node n;
    n.op = Op::DistGt;
    n.x = std::move(x);
    n.y = std::move(y);
    n.k = k;
    return make(std::move(n));
}

NodePtr f_not(NodePtr a) {
    Node n;
    n.op = Op::Not;
    n.kids = {std::move(a)};
    return make(std::move(n));
}

NodePtr f_and(std::vector<NodePtr> kids) {
    if (kids.empty()) return f_true();
    if (kids.size() == 1) return kids[0];
    Node n;
    n.op = Op::And;
    n.kids = std::move(kids);
    return make(std::move(n));
}

NodePtr f_or(std::vector<NodePtr> kids) {
    if (kids.empty()) return f_false();
    if (kids.size() == 1) return kids[0];
    Node n;
    n.op = Op::Or;
    n.kids = std::move(kids);
    return make(std::move(n));
}

NodePtr f_implies(NodePtr a, NodePtr b) {
    Node n;
    n.op = Op::Implies;
    n.kids = {std::move(a), std::move(b)};
    return make(std::move(n));
}

NodePtr f_exists(std::string var, NodePtr body) {
    Node n;
    n.op = Op::Exists;
    n.x = std::move(var);
    n.kids = {std::move(body)};
    return make(std::move(n));
}

NodePtr f_forall(std::string var, NodePtr body) {
    Node n;
    n.op = Op::Forall;
    n.x = std::move(var);
    n.kids = {std::move(body)};
    return make(std::move(n));
}

bool node_equal(const NodePtr& a, const NodePtr& b) {
    if (a.get() == b.get()) return true;
    if (a->op != b->op || a->x != b->x || a->y != b->y || a->set != b->set || a->color != b->color ||
        a->k != b->k || a->kids.size() != b->kids.size()) {
        return false;
    }
    for (std::size_t i = 0; i < a->kids.size(); ++i) {
        if (!node_equal(a->kids[i], b->kids[i])) return false;
    }
    return true;
}

std::vector<std::string> free_fo_vars(const NodePtr& node) {
    std::vector<std::string> bound, fo, sets;
    collect_free(node, bound, fo, sets);
    return fo;
}

std::vector<std::string> free_set_vars(const NodePtr& node) {
    std::vector<std::string> bound, fo, sets;
    collect_free(node, bound, fo, sets);
    return sets;
}

bool node_is_quantifier_free(const NodePtr& node) {
    if (is_quantifier(node->op)) return false;
    return std::all_of(node->kids.begin(), node->kids.end(), node_is_quantifier_free);
}

std::size_t quantifier_depth(const NodePtr& node) {
    std::size_t best = 0;
    for (const auto& kid : node->kids) best = std::max(best, quantifier_depth(kid));
    return best + (is_quantifier(node->op) ? 1 : 0);
}

NodePtr rename_free(const NodePtr& node, const std::map<std::string, std::string>& renaming) {
    if (renaming.empty()) return node;
    auto var = [&](const std::string& v) {
        auto it = renaming.find(v);
        return it == renaming.end() ? v : it->second;
    };
    Node out = *node;
    switch (node->op) {
    case Op::True:
    case Op::False: return node;
    case Op::Col:
    case Op::In: out.x = var(node->x); return make(std::move(out));
    case Op::Eq:
    case Op::Edge:
    case Op::DistLe:
    case Op::DistGt:
        out.x = var(node->x);
        out.y = var(node->y);
        return make(std::move(out));
    case Op::Exists:
    case Op::Forall: {
        auto inner = renaming;
        inner.erase(node->x);
        for (const auto& [from, to] : inner) {
            if (to == node->x) {
                throw InputError("renaming " + from + " to " + to + " would be captured by a quantifier");
            }
        }
        out.kids = {rename_free(node->kids[0], inner)};
        return make(std::move(out));
    }
    default:
        out.kids.clear();
        for (const auto& kid : node->kids) out.kids.push_back(rename_free(kid, renaming));
        return make(std::move(out));
    }
}

Formula::Formula() : root_(f_true()) {}

Formula::Formula(NodePtr root, std::vector<std::string> fo_params, std::vector<std::string> set_params)
    : fo_(std::move(fo_params)), sets_(std::move(set_params)) {
    if (!root) throw StructuralError("formula has no root");
    std::set<std::string> seen;
    for (const auto& v : fo_) {
        if (!seen.insert(v).second) throw InputError("duplicate parameter " + v);
    }
    for (const auto& v : sets_) {
        if (!seen.insert(v).second) throw InputError("duplicate parameter " + v);
    }
    for (const auto& v : free_fo_vars(root)) {
        if (std::find(fo_.begin(), fo_.end(), v) == fo_.end()) {
            throw InputError("unbound variable " + v);
        }
    }
    for (const auto& v : free_set_vars(root)) {
        if (std::find(sets_.begin(), sets_.end(), v) == sets_.end()) {
            throw InputError("unbound set variable " + v);
        }
    }
    std::set<std::string> taken(fo_.begin(), fo_.end());
    std::set<std::string> used;
    collect_names(root, used);
    used.insert(fo_.begin(), fo_.end());
    std::map<std::string, std::string> renaming;
    root_ = normalize(root, taken, used, renaming);
}

Formula::Formula(NodePtr root) : Formula(root, free_fo_vars(root), free_set_vars(root)) {}

bool Formula::operator==(const Formula& other) const {
    return fo_ == other.fo_ && sets_ == other.sets_ && node_equal(root_, other.root_);
}

std::string print_node(const NodePtr& node) {
    std::string out;
    print(node, out);
    return out;
}

std::string print_formula(const Formula& f) {
    std::string out = "[";
    for (std::size_t i = 0; i < f.fo_params().size(); ++i) {
        if (i) out += ',';
        out += f.fo_params()[i];
    }
    out += '|';
    for (std::size_t i = 0; i < f.set_params().size(); ++i) {
        if (i) out += ',';
        out += f.set_params()[i];
    }
    out += "] ";
    print(f.root(), out);
    return out;
}

bool is_quantifier_free(const Formula& f) { return node_is_quantifier_free(f.root()); }

}  // namespace clk
