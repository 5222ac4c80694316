#include "clk/cwd.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <set>

#include "clk/errors.hpp"

namespace clk {

namespace {

TermPtr make(CwdTerm t) { return std::make_shared<const CwdTerm>(std::move(t)); }

struct Builder {
    std::vector<Edge> edges;
    std::vector<std::vector<Color>> colors;
    std::vector<std::uint32_t> labels;
};

// Evaluates into `b`, returning the range of vertex ids the subterm created.
std::pair<Vertex, Vertex> eval_into(const TermPtr& t, Builder& b) {
    if (!t) throw StructuralError("term node is missing a child");
    switch (t->kind) {
    case CwdTerm::Kind::Const: {
        if (t->label == 0) throw StructuralError("labels are 1-based");
        Vertex v = static_cast<Vertex>(b.labels.size());
        b.labels.push_back(t->label);
        b.colors.push_back(t->vertex_colors);
        for (Color c : t->loop_colors) b.edges.push_back({v, v, c});
        return {v, v + 1};
    }
    case CwdTerm::Kind::Union: {
        auto l = eval_into(t->left, b);
        auto r = eval_into(t->right, b);
        if (l.second != r.first) throw StructuralError("union children are not contiguous");
        return {l.first, r.second};
    }
    case CwdTerm::Kind::Eta: {
        if (t->i == t->j || t->i == 0 || t->j == 0) throw StructuralError("eta needs two distinct labels");
        auto range = eval_into(t->left, b);
        std::vector<Vertex> from, to;
        for (Vertex v = range.first; v < range.second; ++v) {
            if (b.labels[v] == t->i) from.push_back(v);
            if (b.labels[v] == t->j) to.push_back(v);
        }
        for (Vertex u : from) {
            for (Vertex w : to) {
                if (u != w) b.edges.push_back({u, w, t->color});
            }
        }
        return range;
    }
    case CwdTerm::Kind::Rho: {
        if (t->i == t->j || t->i == 0 || t->j == 0) throw StructuralError("rho needs two distinct labels");
        auto range = eval_into(t->left, b);
        for (Vertex v = range.first; v < range.second; ++v) {
            if (b.labels[v] == t->i) b.labels[v] = t->j;
        }
        return range;
    }
    }
    throw StructuralError("unknown term kind");
}

class TermParser {
public:
    explicit TermParser(std::string_view text) : text_(text) {}

    TermPtr parse() {
        TermPtr t = term();
        skip();
        if (pos_ != text_.size()) fail("unexpected trailing input");
        return t;
    }

private:
    std::string_view text_;
    std::size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& msg) const {
        throw StructuralError("term, column " + std::to_string(pos_ + 1) + ": " + msg);
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
    void expect(std::string_view tok) {
        if (!accept(tok)) fail("expected '" + std::string(tok) + "'");
    }
    std::uint32_t number() {
        skip();
        std::uint32_t v = 0;
        auto [ptr, ec] = std::from_chars(text_.data() + pos_, text_.data() + text_.size(), v);
        if (ec != std::errc()) fail("expected a number");
        pos_ = static_cast<std::size_t>(ptr - text_.data());
        return v;
    }

    TermPtr term() {
        if (accept("oplus")) {
            expect("(");
            TermPtr a = term();
            expect(",");
            TermPtr b = term();
            expect(")");
            return term_union(a, b);
        }
        if (accept("eta")) {
            expect("[");
            Color c = number();
            expect(",");
            std::uint32_t i = number();
            expect(",");
            std::uint32_t j = number();
            expect("]");
            expect("(");
            TermPtr t = term();
            expect(")");
            if (i == j || i == 0 || j == 0) fail("eta needs two distinct positive labels");
            return term_eta(c, i, j, t);
        }
        if (accept("rho")) {
            expect("[");
            std::uint32_t i = number();
            expect(",");
            std::uint32_t j = number();
            expect("]");
            expect("(");
            TermPtr t = term();
            expect(")");
            if (i == j || i == 0 || j == 0) fail("rho needs two distinct positive labels");
            return term_rho(i, j, t);
        }
        if (accept("const")) {
            expect("[");
            std::uint32_t label = number();
            expect("]");
            if (label == 0) fail("labels are 1-based");
            expect("{");
            std::vector<Color> vc, lc;
            if (!accept("}")) {
                do {
                    skip();
                    if (accept("p")) {
                        vc.push_back(number());
                    } else if (accept("e")) {
                        lc.push_back(number());
                    } else {
                        fail("color must be p<k> or e<k>");
                    }
                } while (accept(","));
                expect("}");
            }
            return term_const(label, vc, lc);
        }
        fail("expected oplus, eta, rho or const");
    }
};

void print_into(const TermPtr& t, std::string& out) {
    switch (t->kind) {
    case CwdTerm::Kind::Const: {
        out += "const[" + std::to_string(t->label) + "]{";
        bool first = true;
        for (Color c : t->vertex_colors) {
            out += (first ? "p" : ",p") + std::to_string(c);
            first = false;
        }
        for (Color c : t->loop_colors) {
            out += (first ? "e" : ",e") + std::to_string(c);
            first = false;
        }
        out += "}";
        return;
    }
    case CwdTerm::Kind::Union:
        out += "oplus(";
        print_into(t->left, out);
        out += ",";
        print_into(t->right, out);
        out += ")";
        return;
    case CwdTerm::Kind::Eta:
        out += "eta[" + std::to_string(t->color) + "," + std::to_string(t->i) + "," + std::to_string(t->j) + "](";
        print_into(t->left, out);
        out += ")";
        return;
    case CwdTerm::Kind::Rho:
        out += "rho[" + std::to_string(t->i) + "," + std::to_string(t->j) + "](";
        print_into(t->left, out);
        out += ")";
        return;
    }
}

}  // namespace

TermPtr term_const(std::uint32_t label, std::vector<Color> vertex_colors, std::vector<Color> loop_colors) {
    CwdTerm t;
    t.kind = CwdTerm::Kind::Const;
    t.label = label;
    t.vertex_colors = std::move(vertex_colors);
    t.loop_colors = std::move(loop_colors);
    return make(std::move(t));
}

TermPtr term_union(TermPtr a, TermPtr b) {
    CwdTerm t;
    t.kind = CwdTerm::Kind::Union;
    t.left = std::move(a);
    t.right = std::move(b);
    return make(std::move(t));
}

TermPtr term_eta(Color c, std::uint32_t i, std::uint32_t j, TermPtr child) {
    CwdTerm t;
    t.kind = CwdTerm::Kind::Eta;
    t.color = c;
    t.i = i;
    t.j = j;
    t.left = std::move(child);
    return make(std::move(t));
}

TermPtr term_rho(std::uint32_t i, std::uint32_t j, TermPtr child) {
    CwdTerm t;
    t.kind = CwdTerm::Kind::Rho;
    t.i = i;
    t.j = j;
    t.left = std::move(child);
    return make(std::move(t));
}

TermValue eval_term(const TermPtr& t) {
    Builder b;
    eval_into(t, b);
    TermValue out;
    out.graph = ColoredGraph(b.labels.size(), std::move(b.edges), std::move(b.colors));
    out.labels = std::move(b.labels);
    return out;
}

std::size_t term_leaves(const TermPtr& t) {
    if (!t) return 0;
    if (t->kind == CwdTerm::Kind::Const) return 1;
    return term_leaves(t->left) + term_leaves(t->right);
}

std::uint32_t term_width(const TermPtr& t) {
    if (!t) return 0;
    switch (t->kind) {
    case CwdTerm::Kind::Const: return t->label;
    case CwdTerm::Kind::Union: return std::max(term_width(t->left), term_width(t->right));
    default: return std::max({t->i, t->j, term_width(t->left)});
    }
}

bool term_equal(const TermPtr& a, const TermPtr& b) {
    if (!a || !b) return a == b;
    if (a->kind != b->kind) return false;
    switch (a->kind) {
    case CwdTerm::Kind::Const:
        return a->label == b->label && a->vertex_colors == b->vertex_colors && a->loop_colors == b->loop_colors;
    case CwdTerm::Kind::Union: return term_equal(a->left, b->left) && term_equal(a->right, b->right);
    case CwdTerm::Kind::Eta:
        return a->color == b->color && a->i == b->i && a->j == b->j && term_equal(a->left, b->left);
    case CwdTerm::Kind::Rho: return a->i == b->i && a->j == b->j && term_equal(a->left, b->left);
    }
    return false;
}

TermPtr parse_term(std::string_view text) { return TermParser(text).parse(); }

std::string print_term(const TermPtr& t) {
    std::string out;
    print_into(t, out);
    return out;
}

TermPtr clique_term(std::size_t n) {
    if (n == 0) throw InputError("clique_term needs n >= 1");
    TermPtr t = term_const(1);
    for (std::size_t i = 1; i < n; ++i) {
        // Join a fresh label-2 vertex to all label-1 vertices in both directions, then merge labels.
        TermPtr joined = term_union(t, term_const(2));
        joined = term_eta(0, 1, 2, joined);
        joined = term_eta(0, 2, 1, joined);
        t = term_rho(2, 1, joined);
    }
    return t;
}

TermPtr random_term(std::mt19937_64& rng, std::size_t leaves, std::uint32_t k, std::size_t vertex_palette,
                    std::size_t edge_palette) {
    if (leaves == 0 || k == 0) throw InputError("random_term needs leaves >= 1 and k >= 1");
    std::uniform_int_distribution<std::uint32_t> label(1, k);
    auto pick_colors = [&](std::size_t palette) {
        std::vector<Color> out;
        for (Color c = 0; c < palette; ++c) {
            if (std::bernoulli_distribution(0.25)(rng)) out.push_back(c);
        }
        return out;
    };
    TermPtr t;
    if (leaves == 1) {
        t = term_const(label(rng), pick_colors(vertex_palette), pick_colors(edge_palette));
    } else {
        std::uniform_int_distribution<std::size_t> split(1, leaves - 1);
        std::size_t left = split(rng);
        t = term_union(random_term(rng, left, k, vertex_palette, edge_palette),
                       random_term(rng, leaves - left, k, vertex_palette, edge_palette));
    }
    if (k >= 2) {
        std::uniform_int_distribution<int> ops(0, 2);
        int count = ops(rng);
        for (int o = 0; o < count; ++o) {
            std::uint32_t i = label(rng), j = label(rng);
            while (j == i) j = label(rng);
            if (std::bernoulli_distribution(0.7)(rng)) {
                std::uniform_int_distribution<Color> c(0, static_cast<Color>(std::max<std::size_t>(edge_palette, 1) - 1));
                t = term_eta(c(rng), i, j, t);
            } else {
                t = term_rho(i, j, t);
            }
        }
    }
    return t;
}

ColoredGraph hnm_graph(std::size_t n, std::size_t m, E2Mode mode) {
    if (n == 0 || m == 0) throw InputError("hnm_graph needs n, m >= 1");
    auto id = [m](std::size_t i, std::size_t j) { return static_cast<Vertex>((i - 1) * m + (j - 1)); };
    std::vector<std::pair<Vertex, Vertex>> pairs;
    for (std::size_t i = 1; i <= n; ++i) {
        for (std::size_t j = 1; j <= m; ++j) {
            for (std::size_t l = j + 1; l <= m; ++l) pairs.emplace_back(id(i, j), id(i, l));
        }
    }
    for (std::size_t i = 1; i + 1 <= n; ++i) {
        std::size_t last = mode == E2Mode::Consecutive ? i + 1 : std::min(m, n);
        for (std::size_t j = 1; j <= m; ++j) {
            for (std::size_t l = i + 1; l <= last; ++l) pairs.emplace_back(id(i, j), id(l, j));
        }
    }
    return make_undirected(n * m, pairs);
}

}  // namespace clk
