#include "clk/plan.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include "clk/errors.hpp"
#include "clk/eval.hpp"

namespace clk {

namespace {

BoolExprPtr make_expr(BoolExpr e) { return std::make_shared<const BoolExpr>(std::move(e)); }

class ExprParser {
public:
    explicit ExprParser(std::string_view text) : text_(text) {}

    BoolExprPtr parse() {
        auto e = implies();
        skip();
        if (pos_ != text_.size()) fail("unexpected trailing input");
        return e;
    }

private:
    std::string_view text_;
    std::size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& msg) const {
        throw InputError("combine expression '" + std::string(text_) + "': " + msg);
    }
    void skip() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }
    bool accept(std::string_view tok) {
        skip();
        if (text_.substr(pos_, tok.size()) == tok) {
            pos_ += tok.size();
            return true;
        }
        return false;
    }

    BoolExprPtr implies() {
        auto lhs = disj();
        if (accept("->")) {
            BoolExpr e;
            e.kind = BoolExpr::Kind::Implies;
            e.kids = {lhs, implies()};
            return make_expr(std::move(e));
        }
        return lhs;
    }
    BoolExprPtr disj() {
        std::vector<BoolExprPtr> kids{conj()};
        while (accept("|")) kids.push_back(conj());
        if (kids.size() == 1) return kids[0];
        BoolExpr e;
        e.kind = BoolExpr::Kind::Or;
        e.kids = std::move(kids);
        return make_expr(std::move(e));
    }
    BoolExprPtr conj() {
        std::vector<BoolExprPtr> kids{unary()};
        while (accept("&")) kids.push_back(unary());
        if (kids.size() == 1) return kids[0];
        BoolExpr e;
        e.kind = BoolExpr::Kind::And;
        e.kids = std::move(kids);
        return make_expr(std::move(e));
    }
    BoolExprPtr unary() {
        if (accept("!")) {
            BoolExpr e;
            e.kind = BoolExpr::Kind::Not;
            e.kids = {unary()};
            return make_expr(std::move(e));
        }
        if (accept("(")) {
            auto inner = implies();
            if (!accept(")")) fail("expected ')'");
            return inner;
        }
        skip();
        std::size_t end = pos_;
        while (end < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[end])) || text_[end] == '_')) ++end;
        if (end == pos_) fail("expected a name");
        std::string name(text_.substr(pos_, end - pos_));
        pos_ = end;
        BoolExpr e;
        if (name == "true" || name == "false") {
            e.kind = BoolExpr::Kind::Const;
            e.value = name == "true";
        } else {
            e.kind = BoolExpr::Kind::Name;
            e.name = name;
        }
        return make_expr(std::move(e));
    }
};

std::string trim(std::string_view s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return std::string(s.substr(a, b - a));
}

std::vector<std::string> words(std::string_view s) {
    std::vector<std::string> out;
    std::istringstream in{std::string(s)};
    std::string w;
    while (in >> w) out.push_back(w);
    return out;
}

struct Line {
    std::size_t number;
    std::string head;  // first word
    std::string rest;  // text after the first word, trimmed
};

[[noreturn]] void fail_at(const Line& line, const std::string& msg) {
    throw InputError("plan line " + std::to_string(line.number) + ": " + msg);
}

std::uint32_t number_of(const Line& line, const std::string& s) {
    std::uint32_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) fail_at(line, "expected a number, got '" + s + "'");
    return v;
}

// Splits "name words : formula" at the first colon.
std::pair<std::string, std::string> split_colon(const Line& line) {
    auto colon = line.rest.find(':');
    if (colon == std::string::npos) fail_at(line, "expected ':' before the formula");
    return {trim(std::string_view(line.rest).substr(0, colon)), trim(std::string_view(line.rest).substr(colon + 1))};
}

NodePtr formula_of(const Line& line, const std::string& text) {
    try {
        return parse_node(text);
    } catch (const InputError& e) {
        fail_at(line, e.what());
    }
}

Formula make_formula(const Line& line, NodePtr node, std::vector<std::string> fo, std::vector<std::string> sets) {
    try {
        return Formula(std::move(node), std::move(fo), std::move(sets));
    } catch (const InputError& e) {
        fail_at(line, e.what());
    }
}

struct LocalBuilder {
    LocalPlan plan;
    std::optional<DistanceType> current;
    std::vector<LocalComponent> comps;
    BoolExprPtr combine;
    bool conjunctive = false;
    std::vector<std::pair<std::vector<std::size_t>, std::pair<std::string, NodePtr>>> blocks;
    bool t_set = false;

    std::size_t position(const Line& line, const std::string& var) const {
        auto it = std::find(plan.vars.begin(), plan.vars.end(), var);
        if (it == plan.vars.end()) fail_at(line, "unknown variable " + var);
        return static_cast<std::size_t>(it - plan.vars.begin());
    }

    void flush() {
        if (!current) return;
        LocalCase c;
        c.delta = *current;
        c.comps = std::move(comps);
        std::vector<std::string> names;
        for (const auto& comp : c.comps) names.push_back(comp.name);
        c.combine = combine ? combine : bool_and_of(names);
        plan.cases[c.delta.mask] = std::move(c);
        current.reset();
        comps.clear();
        combine.reset();
    }

    bool handle(const Line& line) {
        if (line.head == "t") {
            plan.t = number_of(line, line.rest);
            t_set = true;
            return true;
        }
        if (line.head == "form") {
            if (line.rest != "conjunctive") fail_at(line, "unknown form '" + line.rest + "'");
            conjunctive = true;
            return true;
        }
        if (line.head == "block") {
            if (!conjunctive) fail_at(line, "'block' requires 'form conjunctive'");
            auto [head, text] = split_colon(line);
            std::vector<std::size_t> pos;
            std::string cleaned = head;
            std::replace(cleaned.begin(), cleaned.end(), ',', ' ');
            for (const auto& v : words(cleaned)) pos.push_back(position(line, v));
            std::sort(pos.begin(), pos.end());
            if (pos.empty()) fail_at(line, "block needs at least one variable");
            blocks.push_back({pos, {"b" + std::to_string(blocks.size() + 1), formula_of(line, text)}});
            for (const auto& v : free_fo_vars(blocks.back().second.second)) {
                if (!std::binary_search(pos.begin(), pos.end(), position(line, v))) {
                    fail_at(line, "block formula uses variable " + v + " outside its block");
                }
            }
            return true;
        }
        if (line.head == "case") {
            if (conjunctive) fail_at(line, "'case' cannot be mixed with 'form conjunctive'");
            flush();
            DistanceType d;
            try {
                d = parse_distance_type(line.rest, plan.vars.size(), plan.t);
            } catch (const InputError& e) {
                fail_at(line, e.what());
            }
            if (plan.cases.count(d.mask)) fail_at(line, "duplicate case " + d.to_text());
            current = d;
            return true;
        }
        if (line.head == "comp") {
            if (!current) fail_at(line, "'comp' outside a case");
            auto [name, text] = split_colon(line);
            if (name.empty() || words(name).size() != 1) fail_at(line, "component needs a single name");
            NodePtr node = formula_of(line, text);
            auto free = free_fo_vars(node);
            if (free.empty()) fail_at(line, "component formula must mention at least one variable");
            auto components = current->components();
            std::size_t first = position(line, free[0]);
            const std::vector<std::size_t>* owner = nullptr;
            for (const auto& c : components) {
                if (std::find(c.begin(), c.end(), first) != c.end()) owner = &c;
            }
            for (const auto& v : free) {
                std::size_t p = position(line, v);
                if (std::find(owner->begin(), owner->end(), p) == owner->end()) {
                    fail_at(line, "component formula spans several components of the distance type");
                }
            }
            std::vector<std::string> fo;
            for (std::size_t p : *owner) fo.push_back(plan.vars[p]);
            for (const auto& c : comps) {
                if (c.name == name) fail_at(line, "duplicate component name " + name);
            }
            comps.push_back({name, *owner, make_formula(line, node, fo, plan.sets)});
            return true;
        }
        if (line.head == "combine") {
            if (!current) fail_at(line, "'combine' outside a case");
            try {
                combine = parse_bool_expr(line.rest);
            } catch (const InputError& e) {
                fail_at(line, e.what());
            }
            std::vector<std::string> used;
            combine->names(used);
            for (const auto& n : used) {
                bool known = std::any_of(comps.begin(), comps.end(), [&](const auto& c) { return c.name == n; });
                if (!known) fail_at(line, "combine refers to unknown component " + n);
            }
            return true;
        }
        return false;
    }

    LocalPlan finish(const Line& at) {
        flush();
        if (!t_set) fail_at(at, "local plan needs a 't' line");
        for (auto& [mask, c] : plan.cases) c.delta.t = plan.t;
        if (conjunctive) {
            std::vector<std::size_t> seen(plan.vars.size(), 0);
            for (const auto& b : blocks) {
                for (std::size_t p : b.first) ++seen[p];
            }
            for (std::size_t i = 0; i < seen.size(); ++i) {
                if (seen[i] != 1) fail_at(at, "variable " + plan.vars[i] + " must lie in exactly one block");
            }
            std::vector<std::vector<std::size_t>> partition;
            for (const auto& b : blocks) partition.push_back(b.first);
            std::sort(partition.begin(), partition.end());
            for (const auto& d : all_distance_types(plan.vars.size(), plan.t)) {
                auto comps_of_d = d.components();
                std::sort(comps_of_d.begin(), comps_of_d.end());
                if (comps_of_d != partition) continue;
                LocalCase c;
                c.delta = d;
                std::vector<std::string> names;
                for (const auto& b : blocks) {
                    std::vector<std::string> fo;
                    for (std::size_t p : b.first) fo.push_back(plan.vars[p]);
                    c.comps.push_back({b.second.first, b.first, make_formula(at, b.second.second, fo, plan.sets)});
                    names.push_back(b.second.first);
                }
                c.combine = bool_and_of(names);
                plan.cases[d.mask] = std::move(c);
            }
        }
        return std::move(plan);
    }
};

const char* kKinds[] = {"qf", "bounded", "local", "scattered", "general", "connected"};

BasicSentence parse_sentence(const Line& line, const std::vector<std::string>& sets) {
    // sentence <name> t <n> s <n> <var> : <formula>
    auto [head, text] = split_colon(line);
    auto w = words(head);
    if (w.size() != 6 || w[1] != "t" || w[3] != "s") {
        fail_at(line, "expected 'sentence <name> t <n> s <n> <var> : <formula>'");
    }
    BasicSentence s;
    s.name = w[0];
    s.t = number_of(line, w[2]);
    s.s = number_of(line, w[4]);
    if (s.s == 0) fail_at(line, "s must be at least 1");
    s.psi = make_formula(line, formula_of(line, text), {w[5]}, sets);
    return s;
}

}  // namespace

bool BoolExpr::eval(const std::function<bool(const std::string&)>& part) const {
    switch (kind) {
    case Kind::Const: return value;
    case Kind::Name: return part(name);
    case Kind::Not: return !kids[0]->eval(part);
    case Kind::And:
        for (const auto& k : kids) {
            if (!k->eval(part)) return false;
        }
        return true;
    case Kind::Or:
        for (const auto& k : kids) {
            if (k->eval(part)) return true;
        }
        return false;
    case Kind::Implies: return !kids[0]->eval(part) || kids[1]->eval(part);
    }
    return false;
}

void BoolExpr::names(std::vector<std::string>& out) const {
    if (kind == Kind::Name && std::find(out.begin(), out.end(), name) == out.end()) out.push_back(name);
    for (const auto& k : kids) k->names(out);
}

NodePtr BoolExpr::to_node(const std::function<NodePtr(const std::string&)>& part) const {
    switch (kind) {
    case Kind::Const: return value ? f_true() : f_false();
    case Kind::Name: return part(name);
    case Kind::Not: return f_not(kids[0]->to_node(part));
    case Kind::Implies: return f_implies(kids[0]->to_node(part), kids[1]->to_node(part));
    case Kind::And:
    case Kind::Or: {
        std::vector<NodePtr> nodes;
        for (const auto& k : kids) nodes.push_back(k->to_node(part));
        return kind == Kind::And ? f_and(std::move(nodes)) : f_or(std::move(nodes));
    }
    }
    return f_false();
}

BoolExprPtr parse_bool_expr(std::string_view text) { return ExprParser(text).parse(); }

BoolExprPtr bool_and_of(const std::vector<std::string>& names) {
    if (names.empty()) return make_expr(BoolExpr{});
    std::vector<BoolExprPtr> kids;
    for (const auto& n : names) {
        BoolExpr e;
        e.kind = BoolExpr::Kind::Name;
        e.name = n;
        kids.push_back(make_expr(std::move(e)));
    }
    if (kids.size() == 1) return kids[0];
    BoolExpr e;
    e.kind = BoolExpr::Kind::And;
    e.kids = std::move(kids);
    return make_expr(std::move(e));
}

const char* plan_kind_name(PlanKind kind) { return kKinds[static_cast<int>(kind)]; }

const LocalCase* LocalPlan::find(const DistanceType& delta) const {
    auto it = cases.find(delta.mask);
    return it == cases.end() ? nullptr : &it->second;
}

bool LocalPlan::is_conjunctive() const {
    for (const auto& [mask, c] : cases) {
        const BoolExpr& e = *c.combine;
        std::vector<std::string> names;
        if (e.kind == BoolExpr::Kind::Name) {
            names.push_back(e.name);
        } else if (e.kind == BoolExpr::Kind::And) {
            for (const auto& k : e.kids) {
                if (k->kind != BoolExpr::Kind::Name) return false;
                names.push_back(k->name);
            }
        } else if (!(e.kind == BoolExpr::Kind::Const && e.value)) {
            return false;
        }
        std::set<std::vector<std::size_t>> owners;
        for (const auto& n : names) {
            for (const auto& comp : c.comps) {
                if (comp.name == n && !owners.insert(comp.positions).second) return false;
            }
        }
    }
    return true;
}

QueryPlan parse_plan(std::string_view text) {
    std::vector<Line> lines;
    std::size_t number = 0;
    std::string_view rest = text;
    while (!rest.empty()) {
        auto nl = rest.find('\n');
        std::string_view raw = rest.substr(0, nl);
        rest = nl == std::string_view::npos ? std::string_view{} : rest.substr(nl + 1);
        ++number;
        if (auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
        std::string line = trim(raw);
        if (line.empty()) continue;
        auto sp = line.find_first_of(" \t");
        Line l{number, line.substr(0, sp), sp == std::string::npos ? std::string{} : trim(std::string_view(line).substr(sp))};
        lines.push_back(std::move(l));
    }
    if (lines.empty()) throw InputError("empty plan");

    QueryPlan plan;
    plan.source = std::string(text);
    bool have_kind = false;
    std::optional<Line> query_line;
    std::vector<Line> body;
    int depth = 0;
    for (const auto& line : lines) {
        if (depth == 0 && line.head == "kind") {
            bool found = false;
            for (int k = 0; k < 6; ++k) {
                if (line.rest == kKinds[k]) {
                    plan.kind = static_cast<PlanKind>(k);
                    found = true;
                }
            }
            if (!found) fail_at(line, "unknown plan kind '" + line.rest + "'");
            have_kind = true;
        } else if (depth == 0 && line.head == "vars") {
            plan.vars = words(line.rest);
        } else if (depth == 0 && line.head == "sets") {
            plan.sets = words(line.rest);
        } else if (depth == 0 && line.head == "query") {
            query_line = line;
        } else {
            if (line.head == "local") ++depth;
            if (line.head == "end") --depth;
            body.push_back(line);
        }
    }
    if (!have_kind) throw InputError("plan has no 'kind' line");
    {
        std::set<std::string> names;
        for (const auto& v : plan.vars) {
            if (!std::islower(static_cast<unsigned char>(v[0])) || !names.insert(v).second) {
                throw InputError("bad or duplicate plan variable " + v);
            }
        }
        for (const auto& v : plan.sets) {
            if (!std::isupper(static_cast<unsigned char>(v[0])) || !names.insert(v).second) {
                throw InputError("bad or duplicate plan set variable " + v);
            }
        }
    }
    const Line last = lines.back();

    switch (plan.kind) {
    case PlanKind::QuantifierFree:
    case PlanKind::Connected: {
        bool have_phi = false;
        bool have_t = false;
        for (const auto& line : body) {
            if (line.head == "t" && plan.kind == PlanKind::Connected) {
                plan.t = number_of(line, line.rest);
                have_t = true;
            } else if (line.head == "phi") {
                Line l = line;
                l.rest = line.rest;
                auto colon = l.rest.find(':');
                std::string text_part = colon == std::string::npos ? l.rest : trim(std::string_view(l.rest).substr(colon + 1));
                plan.formula = make_formula(line, formula_of(line, text_part), plan.vars, plan.sets);
                have_phi = true;
            } else {
                fail_at(line, "unexpected '" + line.head + "' in a " + plan_kind_name(plan.kind) + " plan");
            }
        }
        if (!have_phi) fail_at(last, "plan needs a 'phi' line");
        if (plan.kind == PlanKind::Connected && !have_t) fail_at(last, "connected plan needs a 't' line");
        if (plan.kind == PlanKind::QuantifierFree && !is_quantifier_free(plan.formula)) {
            fail_at(last, "qf plan formula has quantifiers");
        }
        break;
    }
    case PlanKind::Bounded: {
        bool have_p = false;
        for (const auto& line : body) {
            if (line.head == "p") {
                plan.bounded.p = number_of(line, line.rest);
                if (plan.bounded.p == 0) fail_at(line, "p must be at least 1");
                have_p = true;
            } else if (line.head == "basic") {
                auto [name, text_part] = split_colon(line);
                plan.bounded.basics.emplace_back(name, make_formula(line, formula_of(line, text_part), plan.vars, plan.sets));
            } else if (line.head == "combine") {
                plan.bounded.combine = parse_bool_expr(line.rest);
            } else {
                fail_at(line, "unexpected '" + line.head + "' in a bounded plan");
            }
        }
        if (!have_p) fail_at(last, "bounded plan needs a 'p' line");
        if (plan.bounded.basics.empty()) fail_at(last, "bounded plan needs at least one 'basic' line");
        std::vector<std::string> names;
        for (const auto& b : plan.bounded.basics) names.push_back(b.first);
        if (!plan.bounded.combine) plan.bounded.combine = bool_and_of(names);
        std::vector<std::string> used;
        plan.bounded.combine->names(used);
        for (const auto& n : used) {
            if (std::find(names.begin(), names.end(), n) == names.end()) {
                fail_at(last, "combine refers to unknown basic formula " + n);
            }
        }
        break;
    }
    case PlanKind::Local: {
        LocalBuilder b;
        b.plan.vars = plan.vars;
        b.plan.sets = plan.sets;
        // 't' must be known before cases are parsed.
        for (const auto& line : body) {
            if (line.head == "t") b.handle(line);
        }
        for (const auto& line : body) {
            if (line.head == "t") continue;
            if (!b.handle(line)) fail_at(line, "unexpected '" + line.head + "' in a local plan");
        }
        if (plan.vars.empty()) fail_at(last, "local plan needs at least one variable");
        plan.local = b.finish(last);
        break;
    }
    case PlanKind::Scattered: {
        bool have_t = false, have_s = false, have_psi = false;
        for (const auto& line : body) {
            if (line.head == "t") {
                plan.scattered.t = number_of(line, line.rest);
                have_t = true;
            } else if (line.head == "s") {
                plan.scattered.s = number_of(line, line.rest);
                if (plan.scattered.s == 0) fail_at(line, "s must be at least 1");
                have_s = true;
            } else if (line.head == "psi") {
                auto [var, text_part] = split_colon(line);
                if (words(var).size() != 1) fail_at(line, "psi needs exactly one variable");
                plan.scattered.psi = make_formula(line, formula_of(line, text_part), {var}, plan.sets);
                have_psi = true;
            } else {
                fail_at(line, "unexpected '" + line.head + "' in a scattered plan");
            }
        }
        if (!have_t || !have_s || !have_psi) fail_at(last, "scattered plan needs 't', 's' and 'psi' lines");
        if (!plan.vars.empty()) fail_at(last, "scattered plans are sentences and take no variables");
        plan.scattered.name = "S";
        break;
    }
    case PlanKind::General: {
        std::vector<std::string> names;
        for (std::size_t i = 0; i < body.size(); ++i) {
            const Line& line = body[i];
            if (line.head == "local") {
                std::string name = line.rest;
                if (words(name).size() != 1) fail_at(line, "local block needs a single name");
                LocalBuilder b;
                b.plan.vars = plan.vars;
                b.plan.sets = plan.sets;
                std::size_t j = i + 1;
                for (; j < body.size() && body[j].head != "end"; ++j) {
                    if (body[j].head == "t") b.handle(body[j]);
                }
                if (j == body.size()) fail_at(line, "local block without 'end'");
                for (std::size_t k = i + 1; k < j; ++k) {
                    if (body[k].head == "t") continue;
                    if (!b.handle(body[k])) fail_at(body[k], "unexpected '" + body[k].head + "' in a local block");
                }
                plan.general.locals.emplace_back(name, b.finish(body[j]));
                names.push_back(name);
                i = j;
            } else if (line.head == "sentence") {
                plan.general.sentences.push_back(parse_sentence(line, plan.sets));
                names.push_back(plan.general.sentences.back().name);
            } else if (line.head == "combine") {
                plan.general.combine = parse_bool_expr(line.rest);
            } else {
                fail_at(line, "unexpected '" + line.head + "' in a general plan");
            }
        }
        std::set<std::string> unique(names.begin(), names.end());
        if (unique.size() != names.size()) fail_at(last, "duplicate part names in general plan");
        if (!plan.general.combine) plan.general.combine = bool_and_of(names);
        std::vector<std::string> used;
        plan.general.combine->names(used);
        for (const auto& n : used) {
            if (!unique.count(n)) fail_at(last, "combine refers to unknown part " + n);
        }
        break;
    }
    }

    if (query_line) {
        plan.query = make_formula(*query_line, formula_of(*query_line, query_line->rest), plan.vars, plan.sets);
    }
    return plan;
}

QueryPlan read_plan_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open plan file " + path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_plan(buffer.str());
}

std::string conjunctive_plan_text(Distance t, const std::vector<std::string>& vars, const std::vector<std::string>& sets,
                                  const std::vector<std::pair<std::vector<std::string>, std::string>>& blocks) {
    std::ostringstream out;
    out << "kind local\nvars";
    for (const auto& v : vars) out << ' ' << v;
    out << "\n";
    if (!sets.empty()) {
        out << "sets";
        for (const auto& s : sets) out << ' ' << s;
        out << "\n";
    }
    out << "t " << t << "\nform conjunctive\n";
    for (const auto& [bvars, formula] : blocks) {
        out << "block ";
        for (std::size_t i = 0; i < bvars.size(); ++i) out << (i ? "," : "") << bvars[i];
        out << " : " << formula << "\n";
    }
    return out.str();
}

NodePtr local_plan_node(const LocalPlan& local) {
    std::vector<NodePtr> cases;
    for (const auto& [mask, c] : local.cases) {
        DistanceType d = c.delta;
        d.t = local.t;
        NodePtr body = c.combine->to_node([&](const std::string& name) {
            for (const auto& comp : c.comps) {
                if (comp.name == name) return comp.formula.root();
            }
            throw InputError("unknown component " + name);
        });
        cases.push_back(f_and({rho_node(d, local.vars), body}));
    }
    return f_or(std::move(cases));
}

NodePtr sentence_node(const BasicSentence& sentence, const std::string& prefix) {
    std::vector<std::string> w;
    for (std::size_t i = 0; i < sentence.s; ++i) w.push_back(prefix + std::to_string(i + 1));
    std::vector<NodePtr> parts;
    for (std::size_t i = 0; i < w.size(); ++i) {
        for (std::size_t j = i + 1; j < w.size(); ++j) parts.push_back(f_dist_gt(w[i], w[j], 2 * sentence.t));
    }
    const std::string& var = sentence.psi.fo_params()[0];
    for (const auto& wi : w) parts.push_back(rename_free(sentence.psi.root(), {{var, wi}}));
    NodePtr body = f_and(std::move(parts));
    for (auto it = w.rbegin(); it != w.rend(); ++it) body = f_exists(*it, body);
    return body;
}

Formula plan_formula(const QueryPlan& plan) {
    switch (plan.kind) {
    case PlanKind::QuantifierFree:
    case PlanKind::Connected: return plan.formula;
    case PlanKind::Bounded: {
        NodePtr node = plan.bounded.combine->to_node([&](const std::string& name) {
            for (const auto& [n, f] : plan.bounded.basics) {
                if (n == name) return f.root();
            }
            throw InputError("unknown basic formula " + name);
        });
        return Formula(node, plan.vars, plan.sets);
    }
    case PlanKind::Local: return Formula(local_plan_node(plan.local), plan.vars, plan.sets);
    case PlanKind::Scattered: return Formula(sentence_node(plan.scattered, "sw"), {}, plan.sets);
    case PlanKind::General: {
        NodePtr node = plan.general.combine->to_node([&](const std::string& name) -> NodePtr {
            for (const auto& [n, local] : plan.general.locals) {
                if (n == name) return local_plan_node(local);
            }
            for (const auto& s : plan.general.sentences) {
                if (s.name == name) return sentence_node(s, "sw");
            }
            throw InputError("unknown part " + name);
        });
        return Formula(node, plan.vars, plan.sets);
    }
    }
    return Formula();
}

bool evaluate_local_plan(Evaluator& ev, const LocalPlan& local, std::span<const Vertex> args,
                         std::span<const VertexSet> sets) {
    DistanceType d = distance_type(ev.distances(), args, local.t);
    const LocalCase* c = local.find(d);
    if (!c) return false;
    return c->combine->eval([&](const std::string& name) {
        for (const auto& comp : c->comps) {
            if (comp.name != name) continue;
            std::vector<Vertex> sub;
            for (std::size_t p : comp.positions) sub.push_back(args[p]);
            return ev.holds(comp.formula, sub, sets);
        }
        throw InputError("unknown component " + name);
    });
}

namespace {

bool scattered_search(DistanceOracle& dist, const std::vector<Vertex>& pool, std::size_t from, std::size_t need,
                      Distance gap, std::vector<Vertex>& chosen) {
    if (need == 0) return true;
    for (std::size_t i = from; i + need <= pool.size(); ++i) {
        bool far = std::all_of(chosen.begin(), chosen.end(), [&](Vertex c) { return !dist.within(c, pool[i], gap); });
        if (!far) continue;
        chosen.push_back(pool[i]);
        if (scattered_search(dist, pool, i + 1, need - 1, gap, chosen)) return true;
        chosen.pop_back();
    }
    return false;
}

}  // namespace

bool evaluate_sentence(Evaluator& ev, const BasicSentence& sentence, std::span<const VertexSet> sets) {
    std::vector<Vertex> pool;
    for (Vertex v = 0; v < ev.graph().size(); ++v) {
        Vertex arg[1] = {v};
        if (ev.holds(sentence.psi, arg, sets)) pool.push_back(v);
    }
    std::vector<Vertex> chosen;
    return scattered_search(ev.distances(), pool, 0, sentence.s, 2 * sentence.t, chosen);
}

bool evaluate_plan(const ColoredGraph& g, const QueryPlan& plan, std::span<const Vertex> args,
                   std::span<const VertexSet> sets) {
    if (args.size() != plan.arity() || sets.size() != plan.set_arity()) {
        throw InputError("argument count does not match the plan signature");
    }
    Evaluator ev(g);
    switch (plan.kind) {
    case PlanKind::QuantifierFree:
    case PlanKind::Connected: return ev.holds(plan.formula, args, sets);
    case PlanKind::Bounded:
        return plan.bounded.combine->eval([&](const std::string& name) {
            for (const auto& [n, f] : plan.bounded.basics) {
                if (n == name) return ev.holds(f, args, sets);
            }
            throw InputError("unknown basic formula " + name);
        });
    case PlanKind::Local: return evaluate_local_plan(ev, plan.local, args, sets);
    case PlanKind::Scattered: return evaluate_sentence(ev, plan.scattered, sets);
    case PlanKind::General:
        return plan.general.combine->eval([&](const std::string& name) {
            for (const auto& [n, local] : plan.general.locals) {
                if (n == name) return evaluate_local_plan(ev, local, args, sets);
            }
            for (const auto& s : plan.general.sentences) {
                if (s.name == name) return evaluate_sentence(ev, s, sets);
            }
            throw InputError("unknown part " + name);
        });
    }
    return false;
}

}  // namespace clk
