#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "clk/clk.h"

using nlohmann::json;

namespace {

// Exit codes: 0 ok, 1 mismatch, 2 input error, 3 unsupported query.
int exit_code(int status) {
    if (status == CLK_OK) return 0;
    if (status == CLK_MISMATCH) return 1;
    if (status == CLK_UNSUPPORTED) return 3;
    return 2;
}

struct Failure {
    int status;
};

void check(int status) {
    if (status == CLK_OK) return;
    std::cerr << "error (" << clk_status_name(status) << "): " << clk_last_error() << "\n";
    throw Failure{status};
}

std::string read_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        std::cerr << "error (input error): cannot read " << path << "\n";
        throw Failure{CLK_INPUT_ERROR};
    }
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

void write_text(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        if (!text.empty() && text.back() != '\n') std::cout << "\n";
        return;
    }
    std::ofstream out(path, std::ios::binary);
    out << text;
    if (!out) {
        std::cerr << "error (input error): cannot write " << path << "\n";
        throw Failure{CLK_INPUT_ERROR};
    }
}

struct Str {
    char* p = nullptr;
    ~Str() { clk_string_free(p); }
    std::string get() const { return p ? p : ""; }
};

using GraphPtr = std::unique_ptr<clk_graph, decltype(&clk_graph_free)>;
using LabelsPtr = std::unique_ptr<clk_labels, decltype(&clk_labels_free)>;

GraphPtr load_graph(const std::string& path) {
    clk_graph* g = nullptr;
    check(clk_graph_load(path.c_str(), &g));
    return GraphPtr(g, clk_graph_free);
}

std::vector<uint32_t> parse_ids(const std::string& text) {
    std::vector<uint32_t> out;
    std::string item;
    std::istringstream in(text);
    while (std::getline(in, item, ',')) {
        if (item.find_first_not_of(" \t") == std::string::npos) continue;
        try {
            std::size_t used = 0;
            unsigned long v = std::stoul(item, &used);
            if (item.find_first_not_of(" \t", used) != std::string::npos || v > UINT32_MAX) throw std::exception();
            out.push_back(static_cast<uint32_t>(v));
        } catch (const std::exception&) {
            std::cerr << "error (input error): bad vertex id '" << item << "'\n";
            throw Failure{CLK_INPUT_ERROR};
        }
    }
    return out;
}

std::vector<std::string> split_words(const std::string& s) {
    std::istringstream in(s);
    std::vector<std::string> out;
    std::string w;
    while (in >> w) out.push_back(w);
    return out;
}

// "--set Y1=1,2" options ordered by the expected set names.
std::vector<std::vector<uint32_t>> order_sets(const std::vector<std::string>& given, const std::vector<std::string>& names) {
    std::map<std::string, std::vector<uint32_t>> by_name;
    for (const auto& s : given) {
        auto eq = s.find('=');
        if (eq == std::string::npos) {
            std::cerr << "error (input error): --set expects NAME=v,v,...\n";
            throw Failure{CLK_INPUT_ERROR};
        }
        by_name[s.substr(0, eq)] = parse_ids(s.substr(eq + 1));
    }
    std::vector<std::vector<uint32_t>> out;
    for (const auto& n : names) {
        out.push_back(by_name.count(n) ? by_name[n] : std::vector<uint32_t>{});
        by_name.erase(n);
    }
    if (!by_name.empty()) {
        std::cerr << "error (input error): unknown set " << by_name.begin()->first << "\n";
        throw Failure{CLK_INPUT_ERROR};
    }
    return out;
}

struct SetArgs {
    std::vector<std::vector<uint32_t>> sets;
    std::vector<const uint32_t*> ptrs;
    std::vector<size_t> sizes;

    explicit SetArgs(std::vector<std::vector<uint32_t>> s) : sets(std::move(s)) {
        for (const auto& v : sets) {
            ptrs.push_back(v.data());
            sizes.push_back(v.size());
        }
    }
};

int run_json(const std::string& command, const json& req, const std::string& out_path) {
    Str rep;
    int status = clk_run(command.c_str(), req.dump().c_str(), &rep.p);
    if (rep.p) write_text(out_path, rep.get());
    if (status != CLK_OK && status != CLK_MISMATCH) check(status);
    if (status == CLK_MISMATCH) std::cerr << "mismatch: " << command << " reported failures\n";
    return exit_code(status);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Labeling schemes for logical queries on colored graphs"};
    app.require_subcommand(1);

    // gen
    auto* gen = app.add_subcommand("gen", "Generate a graph");
    std::string gen_kind = "forest_union", gen_out, gen_order_out, gen_e2 = "strict";
    std::size_t gen_n = 100, gen_k = 1, gen_degree = 3, gen_w = 10, gen_h = 10, gen_m = 4, gen_vc = 0, gen_ec = 1;
    double gen_density = 1.0, gen_p = 0.1;
    std::uint64_t gen_seed = 1;
    bool gen_directed = false;
    gen->add_option("--kind", gen_kind, "forest_union|unit_interval|bounded_degree|grid|subdivided_clique|hnm|gnp");
    gen->add_option("--n", gen_n, "Vertex count (columns for hnm)");
    gen->add_option("--k", gen_k, "Forests in the union");
    gen->add_option("--density", gen_density, "Unit-interval density");
    gen->add_option("--degree", gen_degree, "Maximum degree");
    gen->add_option("--width", gen_w, "Grid width");
    gen->add_option("--height", gen_h, "Grid height");
    gen->add_option("--m", gen_m, "Column size for hnm");
    gen->add_option("--e2", gen_e2, "Cross edges for hnm: strict|consecutive");
    gen->add_option("--p", gen_p, "Edge probability for gnp");
    gen->add_option("--seed", gen_seed, "Random seed");
    gen->add_option("--vertex-colors", gen_vc, "Vertex palette size");
    gen->add_option("--edge-colors", gen_ec, "Edge palette size");
    gen->add_flag("--directed", gen_directed, "Random edge orientations");
    gen->add_option("--out", gen_out, "Graph file (stdout if omitted)");
    gen->add_option("--order-out", gen_order_out, "Unit-interval order file");

    // build
    auto* build = app.add_subcommand("build", "Build labels and catalog");
    std::string b_scheme = "arboricity", b_graph, b_plan, b_cover, b_cover_kind = "ball", b_order, b_partition,
                b_strategy = "auto", b_labeler = "catalog", b_out, b_catalog, b_report;
    std::uint64_t b_mod = 0, b_seed = 1;
    std::size_t b_budget = 50000;
    bool b_force = false;
    build->add_option("--scheme", b_scheme, "arboricity|expansion|local|general|scattered|counting or 0x01..0x06");
    build->add_option("--graph", b_graph, "Graph file")->required();
    build->add_option("--plan", b_plan, "Plan file");
    build->add_option("--cover", b_cover, "Cover file");
    build->add_option("--cover-kind", b_cover_kind, "ball|interval");
    build->add_option("--order", b_order, "Unit-interval order file (ids separated by spaces)");
    build->add_option("--partition", b_partition, "Partition file");
    build->add_option("--partition-strategy", b_strategy, "auto|greedy|isolation");
    build->add_option("--labeler", b_labeler, "catalog|centroid");
    build->add_option("--mod", b_mod, "Counting modulus s >= 2");
    build->add_flag("--force", b_force, "Skip the t-connectedness check");
    build->add_option("--alpha-budget", b_budget, "Largest number of part sets for the expansion scheme");
    build->add_option("--seed", b_seed, "Seed for empirical checks");
    build->add_option("--out", b_out, "Label bundle file")->required();
    build->add_option("--catalog", b_catalog, "Catalog file");
    build->add_option("--report", b_report, "Build report (JSON)");

    // ask
    auto* ask = app.add_subcommand("ask", "Answer a query from labels");
    std::string a_labels, a_catalog, a_query, a_args;
    std::vector<std::string> a_sets;
    ask->add_option("--labels", a_labels, "Label bundle")->required();
    ask->add_option("--catalog", a_catalog, "Catalog");
    ask->add_option("--query", a_query, "Formula (arboricity labels only)");
    ask->add_option("--args", a_args, "Vertex arguments, comma separated");
    ask->add_option("--set", a_sets, "Set argument NAME=v,v,...");

    // count
    auto* count = app.add_subcommand("count", "Answer a counting query from labels");
    std::string c_labels, c_catalog;
    std::vector<std::string> c_sets;
    std::uint64_t c_mod = 0;
    count->add_option("--labels", c_labels, "Label bundle")->required();
    count->add_option("--catalog", c_catalog, "Catalog")->required();
    count->add_option("--set", c_sets, "Set argument NAME=v,v,...");
    count->add_option("--mod", c_mod, "Report the count modulo s");

    // oracle
    auto* oracle = app.add_subcommand("oracle", "Brute-force evaluation on the graph");
    std::string o_graph, o_query, o_args;
    std::vector<std::string> o_sets;
    bool o_count = false;
    oracle->add_option("--graph", o_graph, "Graph file")->required();
    oracle->add_option("--query", o_query, "Formula")->required();
    oracle->add_option("--args", o_args, "Vertex arguments, comma separated");
    oracle->add_option("--set", o_sets, "Set argument NAME=v,v,...");
    oracle->add_flag("--count", o_count, "Count satisfying tuples");

    // validate
    auto* validate = app.add_subcommand("validate", "Validate covers, partitions, plans and formula properties");
    std::string v_what, v_graph, v_cover, v_cover_kind = "ball", v_order, v_partition, v_strategy = "auto", v_plan,
                v_formula, v_generator = R"({"kind":"forest_union","n":30,"k":2})", v_out;
    std::size_t v_r = 1, v_p = 2, v_t = 1, v_graphs = 10, v_per_graph = 20, v_ell = 0;
    std::uint64_t v_seed = 1;
    validate->add_option("what", v_what, "cover|partition|plan|locality|bounded|connected")->required();
    validate->add_option("--graph", v_graph, "Graph file");
    validate->add_option("--cover", v_cover, "Cover file");
    validate->add_option("--cover-kind", v_cover_kind, "ball|interval (when no cover file)");
    validate->add_option("--order", v_order, "Unit-interval order file");
    validate->add_option("--r", v_r, "Cover radius");
    validate->add_option("--ell", v_ell, "Intersection-degree target");
    validate->add_option("--partition", v_partition, "Partition file");
    validate->add_option("--partition-strategy", v_strategy, "auto|greedy|isolation");
    validate->add_option("--p", v_p, "Partition level / boundedness size");
    validate->add_option("--plan", v_plan, "Plan file");
    validate->add_option("--formula", v_formula, "Formula");
    validate->add_option("--t", v_t, "Radius");
    validate->add_option("--generator", v_generator, "Sampler generator spec (JSON)");
    validate->add_option("--graphs", v_graphs, "Sampled graphs");
    validate->add_option("--per-graph", v_per_graph, "Samples per graph");
    validate->add_option("--seed", v_seed, "Seed");
    validate->add_option("--out", v_out, "Report file");

    // bench
    auto* bench = app.add_subcommand("bench", "Label growth benchmarks");
    std::string be_experiment, be_sizes = "256,512,1024", be_out;
    bool be_contrast = false;
    bench->add_option("--experiment", be_experiment, "Experiment file (JSON)");
    bench->add_option("--sizes", be_sizes, "Sizes, comma separated (contrast default 10..60)");
    bench->add_flag("--contrast", be_contrast, "Run the subdivided-clique contrast experiment");
    bench->add_option("--out", be_out, "Report file");

    // crossval
    auto* cross = app.add_subcommand("crossval", "Cross-validate labels against the oracle");
    std::string cv_experiment, cv_out;
    cross->add_option("--experiment", cv_experiment, "Experiment file (JSON)")->required();
    cross->add_option("--out", cv_out, "Report file");

    // eval-term
    auto* term = app.add_subcommand("eval-term", "Evaluate a clique-width term");
    std::string t_term, t_file, t_out;
    term->add_option("--term", t_term, "Term text");
    term->add_option("--term-file", t_file, "Term file");
    term->add_option("--out", t_out, "Graph file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (gen->parsed()) {
            json spec{{"kind", gen_kind}, {"n", gen_n},        {"k", gen_k},           {"density", gen_density},
                      {"degree", gen_degree}, {"w", gen_w},    {"h", gen_h},           {"m", gen_m},
                      {"e2", gen_e2},     {"p", gen_p},        {"seed", gen_seed},     {"vertex_colors", gen_vc},
                      {"edge_colors", gen_ec}, {"directed", gen_directed}};
            clk_graph* g = nullptr;
            check(clk_graph_generate(spec.dump().c_str(), &g));
            GraphPtr holder(g, clk_graph_free);
            Str text;
            check(clk_graph_format(g, &text.p));
            write_text(gen_out, text.get());
            if (!gen_order_out.empty()) {
                Str order;
                check(clk_graph_order(g, &order.p));
                write_text(gen_order_out, order.get() + "\n");
            }
            return 0;
        }
        if (build->parsed()) {
            GraphPtr g = load_graph(b_graph);
            json opt{{"scheme", b_scheme},   {"cover", b_cover_kind}, {"partition", b_strategy},
                     {"labeler", b_labeler}, {"modulus", b_mod},      {"force", b_force},
                     {"alpha_budget", b_budget}, {"seed", b_seed}};
            if (!b_scheme.empty() && b_scheme.rfind("0x", 0) == 0) {
                static const std::map<std::string, std::string> ids{{"0x01", "arboricity"}, {"0x02", "expansion"},
                                                                    {"0x03", "local"},      {"0x04", "general"},
                                                                    {"0x05", "scattered"},  {"0x06", "counting"}};
                auto it = ids.find(b_scheme);
                if (it != ids.end()) opt["scheme"] = it->second;
            }
            if (!b_plan.empty()) opt["plan"] = read_text(b_plan);
            if (!b_cover.empty()) opt["cover_text"] = read_text(b_cover);
            if (!b_partition.empty()) opt["partition_text"] = read_text(b_partition);
            if (!b_order.empty()) {
                std::vector<uint32_t> order;
                for (const auto& w : split_words(read_text(b_order))) {
                    auto ids = parse_ids(w);
                    order.insert(order.end(), ids.begin(), ids.end());
                }
                opt["order"] = order;
            }
            clk_labels* labels = nullptr;
            Str report;
            check(clk_build(g.get(), opt.dump().c_str(), &labels, &report.p));
            LabelsPtr holder(labels, clk_labels_free);
            check(clk_labels_save(labels, b_out.c_str(), b_catalog.empty() ? nullptr : b_catalog.c_str()));
            if (std::string(clk_labels_scheme(labels)) != "arboricity" && b_catalog.empty()) {
                std::cerr << "warning: no --catalog given; these labels cannot be decoded without it\n";
            }
            if (!b_report.empty()) {
                write_text(b_report, report.get());
            } else {
                json r = json::parse(report.get());
                std::cout << "built " << clk_labels_vertex_count(labels) << " labels, max "
                          << r["sizes"]["max_bits"] << " bits, catalog " << r["sizes"]["catalog_bytes"] << " bytes\n";
            }
            return 0;
        }
        if (ask->parsed() || count->parsed()) {
            const bool is_count = count->parsed();
            const std::string& lpath = is_count ? c_labels : a_labels;
            const std::string& cpath = is_count ? c_catalog : a_catalog;
            clk_labels* labels = nullptr;
            check(clk_labels_load(lpath.c_str(), cpath.empty() ? nullptr : cpath.c_str(), &labels));
            LabelsPtr holder(labels, clk_labels_free);
            const char* query = (!is_count && !a_query.empty()) ? a_query.c_str() : nullptr;
            Str names;
            check(clk_labels_set_names(labels, query, &names.p));
            SetArgs sets(order_sets(is_count ? c_sets : a_sets, split_words(names.get())));
            if (is_count) {
                uint64_t value = 0;
                check(clk_count(labels, sets.ptrs.data(), sets.sizes.data(), sets.sets.size(), &value));
                uint64_t built = clk_labels_modulus(labels);
                if (c_mod) {
                    if (c_mod < 2) {
                        std::cerr << "error (input error): --mod needs s >= 2\n";
                        return 2;
                    }
                    if (built && built != c_mod) {
                        std::cerr << "error (input error): labels were built modulo " << built << "\n";
                        return 2;
                    }
                    value %= c_mod;
                }
                std::cout << value << "\n";
            } else {
                auto args = parse_ids(a_args);
                int answer = 0;
                check(clk_ask(labels, query, args.data(), args.size(), sets.ptrs.data(), sets.sizes.data(),
                              sets.sets.size(), &answer));
                std::cout << (answer ? "true" : "false") << "\n";
            }
            return 0;
        }
        if (oracle->parsed()) {
            GraphPtr g = load_graph(o_graph);
            Str sig;
            check(clk_formula_set_names(o_query.c_str(), &sig.p));
            SetArgs sets(order_sets(o_sets, split_words(sig.get())));
            if (o_count) {
                uint64_t value = 0;
                check(clk_oracle_count(g.get(), o_query.c_str(), sets.ptrs.data(), sets.sizes.data(), sets.sets.size(),
                                       &value));
                std::cout << value << "\n";
            } else {
                auto args = parse_ids(o_args);
                int answer = 0;
                check(clk_oracle_ask(g.get(), o_query.c_str(), args.data(), args.size(), sets.ptrs.data(),
                                     sets.sizes.data(), sets.sets.size(), &answer));
                std::cout << (answer ? "true" : "false") << "\n";
            }
            return 0;
        }
        if (validate->parsed()) {
            json req;
            if (!v_graph.empty()) req["graph"] = v_graph;
            if (v_what == "cover") {
                req["r"] = v_r;
                req["kind"] = v_cover_kind;
                if (v_ell) req["ell_target"] = v_ell;
                if (!v_cover.empty()) req["cover_text"] = read_text(v_cover);
                if (!v_order.empty()) {
                    std::vector<uint32_t> order;
                    for (const auto& w : split_words(read_text(v_order))) order.push_back(parse_ids(w).at(0));
                    req["order"] = order;
                }
                return run_json("validate_cover", req, v_out);
            }
            if (v_what == "partition") {
                req["p"] = v_p;
                req["strategy"] = v_strategy;
                if (!v_partition.empty()) req["partition_text"] = read_text(v_partition);
                return run_json("validate_partition", req, v_out);
            }
            json sampler{{"generator", json::parse(v_generator)},
                         {"graphs", v_graphs},
                         {"per_graph", v_per_graph},
                         {"seed", v_seed}};
            if (v_what == "plan") {
                sampler["plan"] = read_text(v_plan);
                return run_json("validate_plan", sampler, v_out);
            }
            sampler["formula"] = v_formula;
            sampler["t"] = v_t;
            sampler["p"] = v_p;
            if (v_what == "locality") return run_json("validate_locality", sampler, v_out);
            if (v_what == "bounded") return run_json("validate_bounded", sampler, v_out);
            if (v_what == "connected") return run_json("validate_connected", sampler, v_out);
            std::cerr << "error (input error): unknown validation target " << v_what << "\n";
            return 2;
        }
        if (bench->parsed()) {
            std::vector<uint32_t> sizes = parse_ids(be_sizes);
            if (be_contrast) {
                json req = json::object();
                if (bench->count("--sizes") && !sizes.empty()) req["sizes"] = sizes;
                return run_json("contrast", req, be_out);
            }
            if (be_experiment.empty() || sizes.empty()) {
                std::cerr << "error (input error): bench needs --experiment or --contrast\n";
                return 2;
            }
            return run_json("bench", {{"experiment", json::parse(read_text(be_experiment))}, {"sizes", sizes}}, be_out);
        }
        if (cross->parsed()) return run_json("crossval", json::parse(read_text(cv_experiment)), cv_out);
        if (term->parsed()) {
            std::string text = !t_file.empty() ? read_text(t_file) : t_term;
            Str rep;
            check(clk_run("eval_term", json{{"term", text}}.dump().c_str(), &rep.p));
            write_text(t_out, json::parse(rep.get())["graph"].get<std::string>());
            return 0;
        }
    } catch (const Failure& f) {
        return exit_code(f.status);
    } catch (const json::exception& e) {
        std::cerr << "error (input error): " << e.what() << "\n";
        return 2;
    }
    return 0;
}
