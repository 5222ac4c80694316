#include <cctype>
#include <charconv>

#include "clk/errors.hpp"
#include "clk/formula.hpp"

namespace clk {

namespace {

class Parser {
public:
    explicit Parser(std::string_view text) : text_(text) {}

    Formula formula() {
        skip_ws();
        bool has_signature = peek() == '[';
        std::vector<std::string> fo, sets;
        if (has_signature) {
            ++pos_;
            bool in_sets = false;
            while (true) {
                skip_ws();
                if (peek() == ']') {
                    ++pos_;
                    break;
                }
                if (peek() == '|') {
                    if (in_sets) fail("second '|' in signature");
                    in_sets = true;
                    ++pos_;
                    continue;
                }
                if (peek() == ',') {
                    ++pos_;
                    continue;
                }
                std::string name = ident();
                if (in_sets) {
                    if (!is_set_name(name)) fail("set parameter must start uppercase: " + name);
                    sets.push_back(name);
                } else {
                    if (!is_fo_name(name)) fail("FO parameter must start lowercase: " + name);
                    fo.push_back(name);
                }
            }
        }
        NodePtr root = node();
        if (has_signature) return Formula(root, std::move(fo), std::move(sets));
        return Formula(root);
    }

    NodePtr node() {
        NodePtr out = phi();
        skip_ws();
        if (pos_ != text_.size()) fail("unexpected trailing input");
        return out;
    }

private:
    std::string_view text_;
    std::size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& msg) const {
        throw InputError("formula, column " + std::to_string(pos_ + 1) + ": " + msg);
    }

    static bool is_fo_name(const std::string& s) { return !s.empty() && std::islower(static_cast<unsigned char>(s[0])); }
    static bool is_set_name(const std::string& s) { return !s.empty() && std::isupper(static_cast<unsigned char>(s[0])); }

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    char peek() {
        skip_ws();
        return pos_ < text_.size() ? text_[pos_] : '\0';
    }

    bool accept(std::string_view tok) {
        skip_ws();
        if (text_.substr(pos_, tok.size()) == tok) {
            pos_ += tok.size();
            return true;
        }
        return false;
    }

    void expect(std::string_view tok) {
        if (!accept(tok)) fail("expected '" + std::string(tok) + "'");
    }

    std::string peek_ident() {
        skip_ws();
        std::size_t end = pos_;
        while (end < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[end])) || text_[end] == '_')) {
            ++end;
        }
        return std::string(text_.substr(pos_, end - pos_));
    }

    std::string ident() {
        std::string s = peek_ident();
        if (s.empty() || std::isdigit(static_cast<unsigned char>(s[0]))) fail("expected identifier");
        pos_ += s.size();
        return s;
    }

    std::string fo_var() {
        std::string s = ident();
        if (!is_fo_name(s) || is_keyword(s)) fail("expected FO variable, got '" + s + "'");
        return s;
    }

    static bool is_keyword(const std::string& s) {
        return s == "edge" || s == "col" || s == "dist" || s == "in" || s == "true" || s == "false" ||
               s == "exists" || s == "forall";
    }

    std::uint32_t number() {
        skip_ws();
        std::uint32_t value = 0;
        auto [ptr, ec] = std::from_chars(text_.data() + pos_, text_.data() + text_.size(), value);
        if (ec != std::errc()) fail("expected number");
        pos_ = static_cast<std::size_t>(ptr - text_.data());
        return value;
    }

    bool at_quantifier(Op& op) {
        std::string s = peek_ident();
        if (s == "E" || s == "exists") {
            op = Op::Exists;
        } else if (s == "A" || s == "forall") {
            op = Op::Forall;
        } else {
            return false;
        }
        // A quantifier keyword is followed by a lowercase variable and a dot.
        std::size_t save = pos_;
        pos_ += s.size();
        skip_ws();
        std::string v = peek_ident();
        pos_ = save;
        return is_fo_name(v);
    }

    NodePtr phi() {
        Op q;
        if (at_quantifier(q)) {
            pos_ += peek_ident().size();
            std::string v = fo_var();
            expect(".");
            NodePtr body = phi();
            return q == Op::Exists ? f_exists(v, body) : f_forall(v, body);
        }
        NodePtr lhs = disj();
        if (accept("->")) return f_implies(lhs, phi());
        return lhs;
    }

    NodePtr disj() {
        std::vector<NodePtr> kids{conj()};
        while (peek() == '|') {
            ++pos_;
            kids.push_back(conj());
        }
        return kids.size() == 1 ? kids[0] : f_or(std::move(kids));
    }

    NodePtr conj() {
        std::vector<NodePtr> kids{unary()};
        while (peek() == '&') {
            ++pos_;
            kids.push_back(unary());
        }
        return kids.size() == 1 ? kids[0] : f_and(std::move(kids));
    }

    NodePtr unary() {
        Op q;
        if (at_quantifier(q)) return phi();
        char c = peek();
        if (c == '!' && text_.substr(pos_, 2) != "!=") {
            ++pos_;
            return f_not(unary());
        }
        if (c == '(') {
            ++pos_;
            NodePtr inner = phi();
            expect(")");
            return inner;
        }
        return atom();
    }

    NodePtr atom() {
        std::string s = peek_ident();
        if (s == "true") {
            pos_ += s.size();
            return f_true();
        }
        if (s == "false") {
            pos_ += s.size();
            return f_false();
        }
        if (s == "edge") {
            pos_ += s.size();
            Color c = 0;
            if (accept("[")) {
                c = number();
                expect("]");
            }
            expect("(");
            std::string x = fo_var();
            expect(",");
            std::string y = fo_var();
            expect(")");
            return f_edge(c, x, y);
        }
        if (s == "col") {
            pos_ += s.size();
            expect("[");
            Color c = number();
            expect("]");
            expect("(");
            std::string x = fo_var();
            expect(")");
            return f_col(c, x);
        }
        if (s == "dist") {
            pos_ += s.size();
            expect("(");
            std::string x = fo_var();
            expect(",");
            std::string y = fo_var();
            expect(")");
            if (accept("<=")) return f_dist_le(x, y, number());
            if (accept(">")) return f_dist_gt(x, y, number());
            fail("expected '<=' or '>' after dist(..)");
        }
        std::string x = fo_var();
        if (accept("!=")) return f_neq(x, fo_var());
        if (accept("=")) return f_eq(x, fo_var());
        if (peek_ident() == "in") {
            pos_ += 2;
            std::string set = ident();
            if (!is_set_name(set)) fail("set variable must start uppercase: " + set);
            return f_in(x, set);
        }
        fail("expected '=', '!=' or 'in' after variable " + x);
    }
};

}  // namespace

Formula parse_formula(std::string_view text) { return Parser(text).formula(); }

NodePtr parse_node(std::string_view text) { return Parser(text).node(); }

}  // namespace clk
