#pragma once

#include <memory>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "clk/graph.hpp"

namespace clk {

struct CwdTerm;
using TermPtr = std::shared_ptr<const CwdTerm>;

/*
 * Clique-width expression. Constants create one vertex with a label and a
 * color set (vertex colors, loop edge colors); oplus is disjoint union,
 * eta[c,i,j] adds c-colored edges from every label-i vertex to every other
 * label-j vertex, rho[i,j] relabels i to j. Labels are 1-based.
 */
struct CwdTerm {
    enum class Kind : std::uint8_t { Const, Union, Eta, Rho };
    Kind kind = Kind::Const;
    std::uint32_t label = 1;          // Const
    std::vector<Color> vertex_colors;  // Const
    std::vector<Color> loop_colors;    // Const
    std::uint32_t i = 1, j = 2;        // Eta, Rho
    Color color = 0;                   // Eta
    TermPtr left, right;               // Union uses both, Eta/Rho use left
};

TermPtr term_const(std::uint32_t label, std::vector<Color> vertex_colors = {}, std::vector<Color> loop_colors = {});
TermPtr term_union(TermPtr a, TermPtr b);
TermPtr term_eta(Color c, std::uint32_t i, std::uint32_t j, TermPtr t);
TermPtr term_rho(std::uint32_t i, std::uint32_t j, TermPtr t);

struct TermValue {
    ColoredGraph graph;
    std::vector<std::uint32_t> labels;  // per vertex, vertices numbered by leaf order
};

// Throws StructuralError on malformed terms (missing children, i == j, label 0).
TermValue eval_term(const TermPtr& t);
std::size_t term_leaves(const TermPtr& t);
// Largest label used anywhere in the term.
std::uint32_t term_width(const TermPtr& t);
bool term_equal(const TermPtr& a, const TermPtr& b);

// Syntax: oplus(a,b)  eta[c,i,j](t)  rho[i,j](t)  const[i]{p1,e0}
// where p<k> is a vertex color and e<k> a loop color.
TermPtr parse_term(std::string_view text);
std::string print_term(const TermPtr& t);

// Two-label term whose value is K_n with symmetric edges of color 0.
TermPtr clique_term(std::size_t n);

// Random well-formed term with the given number of leaves and labels 1..k.
TermPtr random_term(std::mt19937_64& rng, std::size_t leaves, std::uint32_t k, std::size_t vertex_palette = 2,
                    std::size_t edge_palette = 2);

enum class E2Mode : std::uint8_t {
    Strict,       // cross edges v(i,j) v(l,j) for l = i+1 .. min(m, n)
    Consecutive,  // only l = i+1
};

// Columns V_1..V_n of m vertices each, every column a clique; vertex
// v(i,j) has id (i-1)*m + (j-1).
ColoredGraph hnm_graph(std::size_t n, std::size_t m, E2Mode mode);

}  // namespace clk
