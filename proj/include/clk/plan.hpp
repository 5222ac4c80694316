#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "clk/distance_type.hpp"
#include "clk/formula.hpp"

namespace clk {

// Boolean combination over named parts: names, !, &, |, ->, parentheses, true, false.
struct BoolExpr {
    enum class Kind : std::uint8_t { Const, Name, Not, And, Or, Implies };
    Kind kind = Kind::Const;
    bool value = true;
    std::string name;
    std::vector<std::shared_ptr<const BoolExpr>> kids;

    bool eval(const std::function<bool(const std::string&)>& part) const;
    void names(std::vector<std::string>& out) const;
    // Substitutes a formula for every name.
    NodePtr to_node(const std::function<NodePtr(const std::string&)>& part) const;
};

using BoolExprPtr = std::shared_ptr<const BoolExpr>;
BoolExprPtr parse_bool_expr(std::string_view text);
BoolExprPtr bool_and_of(const std::vector<std::string>& names);

enum class PlanKind : std::uint8_t { QuantifierFree, Bounded, Local, Scattered, General, Connected };

const char* plan_kind_name(PlanKind kind);

// One t-local formula tied to one component of a distance type.
struct LocalComponent {
    std::string name;
    std::vector<std::size_t> positions;  // argument positions of the component, ascending
    Formula formula;                     // parameters: the component's variables, then all plan sets
};

struct LocalCase {
    DistanceType delta;
    std::vector<LocalComponent> comps;
    BoolExprPtr combine;
};

/*
 * For each distance type a Boolean combination of component formulas.
 * Types without a case evaluate to false.
 */
struct LocalPlan {
    Distance t = 0;
    std::vector<std::string> vars;
    std::vector<std::string> sets;
    std::map<std::uint64_t, LocalCase> cases;  // keyed by DistanceType::mask

    const LocalCase* find(const DistanceType& delta) const;
    // Every case's combine is a conjunction with at most one formula per component.
    bool is_conjunctive() const;
};

// Exists x1..xs pairwise at distance > 2t, each satisfying psi (t-local around its variable).
struct BasicSentence {
    std::string name;
    Distance t = 0;
    std::size_t s = 1;
    Formula psi;  // one FO parameter, then the plan's set parameters
};

struct BoundedPlan {
    std::size_t p = 1;
    std::vector<std::pair<std::string, Formula>> basics;  // over the plan's vars and sets
    BoolExprPtr combine;
};

struct GeneralPlan {
    std::vector<std::pair<std::string, LocalPlan>> locals;
    std::vector<BasicSentence> sentences;
    BoolExprPtr combine;
};

/*
 * A query together with its declared decomposition. Built only by
 * parse_plan, which keeps the source text so plans can travel in catalogs.
 */
struct QueryPlan {
    PlanKind kind = PlanKind::QuantifierFree;
    std::vector<std::string> vars;
    std::vector<std::string> sets;
    std::optional<Formula> query;
    std::string source;

    Formula formula;  // QuantifierFree and Connected: the formula itself
    Distance t = 0;   // Connected: the connectivity radius
    BoundedPlan bounded;
    LocalPlan local;
    BasicSentence scattered;
    GeneralPlan general;

    std::size_t arity() const noexcept { return vars.size(); }
    std::size_t set_arity() const noexcept { return sets.size(); }
};

/*
 * Line format, `#` comments:
 *   kind qf|bounded|local|scattered|general|connected
 *   vars x y          sets Y Z          query <formula>
 *   qf, connected:  [t <n>]  phi : <formula>
 *   bounded:        p <n>  basic <name> : <formula>  combine <expr>
 *   local:          t <n>  case <edges>|none  comp <name> : <formula>  combine <expr>
 *                   or: form conjunctive  block <v,...> : <formula>
 *   scattered:      t <n>  s <n>  psi <var> : <formula>
 *   general:        local <name> ... end  sentence <name> t <n> s <n> <var> : <formula>  combine <expr>
 */
QueryPlan parse_plan(std::string_view text);
QueryPlan read_plan_file(const std::string& path);

// Plan text for a formula already in conjunctive scattered form: blocks of
// variables, one formula per block, blocks pairwise farther than 2t+1.
std::string conjunctive_plan_text(Distance t, const std::vector<std::string>& vars,
                                  const std::vector<std::string>& sets,
                                  const std::vector<std::pair<std::vector<std::string>, std::string>>& blocks);

// The single formula a plan stands for, over the plan's vars and sets.
Formula plan_formula(const QueryPlan& plan);
NodePtr local_plan_node(const LocalPlan& local);
NodePtr sentence_node(const BasicSentence& sentence, const std::string& prefix = "w");

// Reference evaluation on the whole graph: components by eval_oracle,
// sentences by their definition.
bool evaluate_plan(const ColoredGraph& g, const QueryPlan& plan, std::span<const Vertex> args,
                   std::span<const VertexSet> sets);
bool evaluate_local_plan(Evaluator& ev, const LocalPlan& local, std::span<const Vertex> args,
                         std::span<const VertexSet> sets);
bool evaluate_sentence(Evaluator& ev, const BasicSentence& sentence, std::span<const VertexSet> sets);

// Draws random graphs and random arguments for empirical validators.
struct Sampler {
    std::function<ColoredGraph(std::mt19937_64&)> graph;
    std::size_t graphs = 10;
    std::size_t per_graph = 20;
    double set_density = 0.2;
    std::uint64_t seed = 1;
};

struct ValidationReport {
    bool ok = true;
    std::size_t checked = 0;
    std::size_t failures = 0;
    std::string witness;  // first failure, human readable
    std::vector<std::string> notes;
};

std::vector<Vertex> random_args(std::mt19937_64& rng, std::size_t n, std::size_t m);
std::vector<VertexSet> random_sets(std::mt19937_64& rng, std::size_t n, std::size_t q, double density);
std::string describe_instance(std::span<const Vertex> args, std::span<const VertexSet> sets);

ValidationReport validate_plan(const QueryPlan& plan, const Formula& phi, const Sampler& sampler);
// G |= phi(a, W) iff G[N^t(a)] |= phi(a, W ∩ N^t(a)).
ValidationReport validate_locality(const Formula& phi, Distance t, const Sampler& sampler);
// Truth is witnessed by some X with a ⊆ X, |X| <= p, and persists to every Y ⊇ X.
ValidationReport validate_boundedness(const Formula& phi, std::size_t p, const Sampler& sampler);
// Definition of t-connected formulas: truth iff pairwise distance <= t and truth on G[N^t(a)].
ValidationReport validate_t_connected(const Formula& phi, Distance t, const Sampler& sampler);

}  // namespace clk
