#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <unordered_map>
#include <vector>

#include "clk/formula.hpp"
#include "clk/graph.hpp"

namespace clk {

// Undirected distances with lazily computed, cached BFS rows.
class DistanceOracle {
public:
    explicit DistanceOracle(const ColoredGraph& g) : g_(&g) {}

    Distance distance(Vertex u, Vertex v);
    bool within(Vertex u, Vertex v, Distance k);
    const std::vector<Distance>& row(Vertex u);
    // N^k(u), ascending.
    const std::vector<Vertex>& ball(Vertex u, Distance k);

private:
    const ColoredGraph* g_;
    std::unordered_map<Vertex, std::vector<Distance>> rows_;
    std::map<std::pair<Vertex, Distance>, std::vector<Vertex>> balls_;
    std::size_t cached_entries_ = 0;

    void trim();
};

struct EvalOptions {
    // Restrict quantifier ranges using guard atoms and stage counting by conjuncts.
    // Off means plain enumeration over all vertices.
    bool guarded = true;
};

/*
 * Exhaustive first-order evaluation on one graph. Holds caches, so one
 * instance must not be shared between threads without a lock.
 */
class Evaluator {
public:
    explicit Evaluator(const ColoredGraph& g, EvalOptions options = {});
    ~Evaluator();
    Evaluator(const Evaluator&) = delete;
    Evaluator& operator=(const Evaluator&) = delete;

    bool holds(const Formula& f, std::span<const Vertex> args, std::span<const VertexSet> sets = {});
    // |{a in V^m : G |= f(a, sets)}|; for m = 0 the truth value as 0 or 1.
    std::uint64_t count(const Formula& f, std::span<const VertexSet> sets = {});

    const ColoredGraph& graph() const noexcept { return *g_; }
    DistanceOracle& distances() noexcept { return dist_; }

private:
    struct Program;
    struct Run;

    const ColoredGraph* g_;
    EvalOptions options_;
    DistanceOracle dist_;
    std::map<const Node*, std::pair<NodePtr, std::unique_ptr<Program>>> programs_;

    Program& program(const Formula& f);
};

bool eval_oracle(const ColoredGraph& g, const Formula& f, std::span<const Vertex> args,
                 std::span<const VertexSet> sets = {});
std::uint64_t count_oracle(const ColoredGraph& g, const Formula& f, std::span<const VertexSet> sets = {});

}  // namespace clk
