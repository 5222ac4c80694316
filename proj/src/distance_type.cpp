#include "clk/distance_type.hpp"

#include <algorithm>
#include <charconv>
#include <numeric>

#include "clk/errors.hpp"

namespace clk {

std::size_t pair_count(std::size_t m) { return m < 2 ? 0 : m * (m - 1) / 2; }

std::size_t pair_index(std::size_t i, std::size_t j, std::size_t m) {
    if (i > j) std::swap(i, j);
    if (i == j || j >= m) throw InputError("invalid argument pair");
    // Pairs (0,1),(0,2),...,(0,m-1),(1,2),...
    return i * m - i * (i + 1) / 2 + (j - i - 1);
}

bool DistanceType::edge(std::size_t i, std::size_t j) const {
    if (i == j) return true;
    return (mask >> pair_index(i, j, m)) & 1u;
}

void DistanceType::set_edge(std::size_t i, std::size_t j) { mask |= std::uint64_t{1} << pair_index(i, j, m); }

std::vector<std::vector<std::size_t>> DistanceType::components() const {
    std::vector<std::size_t> parent(m);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = i + 1; j < m; ++j) {
            if (edge(i, j)) parent[find(j)] = find(i);
        }
    }
    std::vector<std::vector<std::size_t>> out;
    std::vector<std::size_t> slot(m, m);
    for (std::size_t i = 0; i < m; ++i) {
        std::size_t r = find(i);
        if (slot[r] == m) {
            slot[r] = out.size();
            out.emplace_back();
        }
        out[slot[r]].push_back(i);
    }
    return out;
}

std::string DistanceType::to_text() const {
    std::string out;
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = i + 1; j < m; ++j) {
            if (!edge(i, j)) continue;
            if (!out.empty()) out += ' ';
            out += std::to_string(i + 1) + "-" + std::to_string(j + 1);
        }
    }
    return out.empty() ? "none" : out;
}

DistanceType parse_distance_type(std::string_view text, std::size_t m, Distance t) {
    DistanceType d{m, t, 0};
    if (m > 11) throw InputError("distance types support at most 11 arguments");
    std::size_t pos = 0;
    bool any = false;
    while (pos < text.size()) {
        while (pos < text.size() && (text[pos] == ' ' || text[pos] == '\t' || text[pos] == ',')) ++pos;
        if (pos >= text.size()) break;
        if (text.substr(pos, 4) == "none") {
            pos += 4;
            any = true;
            continue;
        }
        std::size_t a = 0, b = 0;
        auto r1 = std::from_chars(text.data() + pos, text.data() + text.size(), a);
        if (r1.ec != std::errc() || r1.ptr == text.data() + text.size() || *r1.ptr != '-') {
            throw InputError("bad distance type edge in '" + std::string(text) + "'");
        }
        auto r2 = std::from_chars(r1.ptr + 1, text.data() + text.size(), b);
        if (r2.ec != std::errc()) throw InputError("bad distance type edge in '" + std::string(text) + "'");
        if (a < 1 || b < 1 || a > m || b > m || a == b) {
            throw InputError("distance type edge out of range in '" + std::string(text) + "'");
        }
        d.set_edge(a - 1, b - 1);
        pos = static_cast<std::size_t>(r2.ptr - text.data());
        any = true;
    }
    if (!any) throw InputError("empty distance type; write 'none' for no edges");
    return d;
}

DistanceType distance_type(DistanceOracle& dist, std::span<const Vertex> args, Distance t) {
    DistanceType d{args.size(), t, 0};
    if (args.size() > 11) throw InputError("distance types support at most 11 arguments");
    for (std::size_t i = 0; i < args.size(); ++i) {
        for (std::size_t j = i + 1; j < args.size(); ++j) {
            if (dist.within(args[i], args[j], 2 * t + 1)) d.set_edge(i, j);
        }
    }
    return d;
}

DistanceType distance_type(const ColoredGraph& g, std::span<const Vertex> args, Distance t) {
    for (Vertex v : args) check_vertex(g, v);
    DistanceOracle dist(g);
    return distance_type(dist, args, t);
}

std::vector<DistanceType> all_distance_types(std::size_t m, Distance t) {
    std::size_t pairs = pair_count(m);
    if (pairs > 20) throw InputError("too many distance types to enumerate");
    std::vector<DistanceType> out;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << pairs); ++mask) out.push_back({m, t, mask});
    return out;
}

NodePtr rho_node(const DistanceType& delta, const std::vector<std::string>& vars) {
    if (vars.size() != delta.m) throw InputError("variable count does not match distance type arity");
    std::vector<NodePtr> parts;
    for (std::size_t i = 0; i < delta.m; ++i) {
        for (std::size_t j = i + 1; j < delta.m; ++j) {
            Distance bound = 2 * delta.t + 1;
            parts.push_back(delta.edge(i, j) ? f_dist_le(vars[i], vars[j], bound)
                                             : f_dist_gt(vars[i], vars[j], bound));
        }
    }
    if (parts.empty()) return f_true();
    return f_and(std::move(parts));
}

Formula rho_formula(Distance t, const DistanceType& delta) {
    std::vector<std::string> vars;
    for (std::size_t i = 0; i < delta.m; ++i) vars.push_back("x" + std::to_string(i + 1));
    DistanceType d = delta;
    d.t = t;
    return Formula(rho_node(d, vars), vars, {});
}

}  // namespace clk
