#include <charconv>
#include <fstream>
#include <sstream>

#include "clk/errors.hpp"
#include "clk/graph.hpp"

namespace clk {

namespace {

std::uint64_t parse_number(std::string_view token, std::size_t line) {
    std::uint64_t value = 0;
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc() || ptr != token.data() + token.size()) {
        throw InputError("line " + std::to_string(line) + ": expected a number, got '" +
                         std::string(token) + "'");
    }
    return value;
}

std::vector<std::string_view> split_ws(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
        std::size_t j = i;
        while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
        if (j > i) out.push_back(line.substr(i, j - i));
        i = j;
    }
    return out;
}

}  // namespace

ColoredGraph parse_graph(std::string_view text) {
    std::size_t n = 0;
    bool have_header = false;
    std::vector<Edge> edges;
    std::vector<std::vector<Color>> colors;
    std::size_t line_no = 0;
    while (!text.empty()) {
        auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        auto tok = split_ws(line);
        if (tok.empty()) continue;
        if (tok[0] == "n") {
            if (have_header || tok.size() != 2) {
                throw InputError("line " + std::to_string(line_no) + ": malformed header");
            }
            n = parse_number(tok[1], line_no);
            colors.assign(n, {});
            have_header = true;
            continue;
        }
        if (!have_header) {
            throw InputError("line " + std::to_string(line_no) + ": missing 'n <count>' header");
        }
        if (tok[0] == "vc") {
            if (tok.size() < 2) throw InputError("line " + std::to_string(line_no) + ": bad vc line");
            auto v = parse_number(tok[1], line_no);
            if (v >= n) throw InputError("line " + std::to_string(line_no) + ": vertex out of range");
            for (std::size_t i = 2; i < tok.size(); ++i) {
                colors[v].push_back(static_cast<Color>(parse_number(tok[i], line_no)));
            }
        } else if (tok[0] == "e") {
            if (tok.size() != 4) throw InputError("line " + std::to_string(line_no) + ": bad edge line");
            Edge e{static_cast<Vertex>(parse_number(tok[1], line_no)),
                   static_cast<Vertex>(parse_number(tok[2], line_no)),
                   static_cast<Color>(parse_number(tok[3], line_no))};
            if (e.from >= n || e.to >= n) {
                throw InputError("line " + std::to_string(line_no) + ": edge endpoint out of range");
            }
            edges.push_back(e);
        } else {
            throw InputError("line " + std::to_string(line_no) + ": unknown record '" +
                             std::string(tok[0]) + "'");
        }
    }
    if (!have_header) throw InputError("missing 'n <count>' header");
    return ColoredGraph(n, std::move(edges), std::move(colors));
}

std::string format_graph(const ColoredGraph& g) {
    std::ostringstream out;
    out << "n " << g.size() << '\n';
    for (Vertex v = 0; v < g.size(); ++v) {
        auto cs = g.colors(v);
        if (cs.empty()) continue;
        out << "vc " << v;
        for (Color c : cs) out << ' ' << c;
        out << '\n';
    }
    for (const Edge& e : g.edges()) out << "e " << e.from << ' ' << e.to << ' ' << e.color << '\n';
    return out.str();
}

ColoredGraph read_graph_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open graph file " + path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_graph(buffer.str());
}

void write_graph_file(const ColoredGraph& g, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write graph file " + path);
    out << format_graph(g);
}

}  // namespace clk
