#pragma once

#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "clk/graph.hpp"

namespace clk {

enum class Op : std::uint8_t {
    True,
    False,
    Eq,
    Edge,
    Col,
    In,
    DistLe,
    DistGt,
    Not,
    And,
    Or,
    Implies,
    Exists,
    Forall,
};

struct Node;
using NodePtr = std::shared_ptr<const Node>;

struct Node {
    Op op = Op::True;
    std::string x;    // first FO variable, or the bound variable of a quantifier
    std::string y;    // second FO variable
    std::string set;  // set variable of an In atom
    Color color = 0;
    Distance k = 0;
    std::vector<NodePtr> kids;
};

bool is_atom(Op op);
bool is_quantifier(Op op);

NodePtr f_true();
NodePtr f_false();
NodePtr f_eq(std::string x, std::string y);
NodePtr f_neq(std::string x, std::string y);
NodePtr f_edge(Color c, std::string x, std::string y);
NodePtr f_col(Color c, std::string x);
NodePtr f_in(std::string x, std::string set);
NodePtr f_dist_le(std::string x, std::string y, Distance k);
NodePtr f_dist_gt(std::string x, std::string y, Distance k);
NodePtr f_not(NodePtr a);
// Single-element lists return the element; empty And is true, empty Or is false.
NodePtr f_and(std::vector<NodePtr> kids);
NodePtr f_or(std::vector<NodePtr> kids);
NodePtr f_implies(NodePtr a, NodePtr b);
NodePtr f_exists(std::string var, NodePtr body);
NodePtr f_forall(std::string var, NodePtr body);

bool node_equal(const NodePtr& a, const NodePtr& b);

// Free variables in order of first appearance.
std::vector<std::string> free_fo_vars(const NodePtr& node);
std::vector<std::string> free_set_vars(const NodePtr& node);
bool node_is_quantifier_free(const NodePtr& node);
std::size_t quantifier_depth(const NodePtr& node);
// Renames free FO variables; bound occurrences are untouched.
NodePtr rename_free(const NodePtr& node, const std::map<std::string, std::string>& renaming);

/*
 * A formula with an ordered signature: FO parameters x1..xm and set
 * parameters Y1..Yq. Construction normalizes bound variables so that no
 * binder reuses a parameter name or the name of an enclosing binder.
 */
class Formula {
public:
    Formula();
    Formula(NodePtr root, std::vector<std::string> fo_params, std::vector<std::string> set_params);
    // Signature taken from free variables in order of first appearance.
    explicit Formula(NodePtr root);

    const NodePtr& root() const noexcept { return root_; }
    const std::vector<std::string>& fo_params() const noexcept { return fo_; }
    const std::vector<std::string>& set_params() const noexcept { return sets_; }
    std::size_t arity() const noexcept { return fo_.size(); }
    std::size_t set_arity() const noexcept { return sets_.size(); }

    bool operator==(const Formula& other) const;

private:
    NodePtr root_;
    std::vector<std::string> fo_;
    std::vector<std::string> sets_;
};

/*
 * Grammar, loosest first:
 *   phi  := E x. phi | A x. phi | imp
 *   imp  := or ['->' imp]
 *   or   := and ('|' and)*
 *   and  := un ('&' un)*
 *   un   := '!' un | '(' phi ')' | atom
 *   atom := x=y | x!=y | x in Y | edge[c](x,y) | edge(x,y) | col[c](x)
 *         | dist(x,y)<=k | dist(x,y)>k | true | false
 * An optional leading signature `[x,y|Y1,Y2]` fixes parameter order.
 * FO variables start lowercase, set variables uppercase.
 */
Formula parse_formula(std::string_view text);
NodePtr parse_node(std::string_view text);
std::string print_node(const NodePtr& node);
// Always includes the signature prefix.
std::string print_formula(const Formula& f);

bool is_quantifier_free(const Formula& f);

}  // namespace clk
