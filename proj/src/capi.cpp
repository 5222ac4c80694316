#include "clk/clk.h"

#include <cstring>
#include <new>
#include <optional>
#include <sstream>
#include <string>

#include "clk/cover.hpp"
#include "clk/cwd.hpp"
#include "clk/errors.hpp"
#include "clk/eval.hpp"
#include "clk/expansion.hpp"
#include "clk/generators.hpp"
#include "clk/harness.hpp"
#include "clk/membership.hpp"
#include "clk/plan.hpp"
#include "clk/scheme.hpp"

using nlohmann::json;

struct clk_graph {
    clk::ColoredGraph graph;
    std::vector<clk::Vertex> order;
};

struct clk_labels {
    std::optional<clk::Catalog> catalog;
    std::unique_ptr<clk::LabeledGraph> labeled;
    std::vector<std::string> set_names;
};

namespace {

thread_local std::string last_error;

int status_of(clk::ErrorCode code) {
    switch (code) {
    case clk::ErrorCode::Input: return CLK_INPUT_ERROR;
    case clk::ErrorCode::Unsupported: return CLK_UNSUPPORTED;
    case clk::ErrorCode::BadMagic: return CLK_BAD_MAGIC;
    case clk::ErrorCode::Truncated: return CLK_TRUNCATED;
    case clk::ErrorCode::ChecksumMismatch: return CLK_CHECKSUM;
    case clk::ErrorCode::CoverDefect: return CLK_COVER_DEFECT;
    case clk::ErrorCode::WrongPiece: return CLK_WRONG_PIECE;
    case clk::ErrorCode::PartitionTooCoarse: return CLK_PARTITION_TOO_COARSE;
    case clk::ErrorCode::Structural: return CLK_STRUCTURAL;
    }
    return CLK_INTERNAL;
}

template <typename Fn>
int guarded(Fn&& fn) {
    last_error.clear();
    try {
        return fn();
    } catch (const clk::Error& e) {
        last_error = e.what();
        return status_of(e.code());
    } catch (const json::exception& e) {
        last_error = std::string("bad JSON: ") + e.what();
        return CLK_INPUT_ERROR;
    } catch (const std::bad_alloc&) {
        last_error = "out of memory";
        return CLK_INTERNAL;
    } catch (const std::exception& e) {
        last_error = e.what();
        return CLK_INTERNAL;
    }
}

char* dup(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (!out) throw std::bad_alloc();
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

void need(const void* p, const char* what) {
    if (!p) throw clk::InputError(std::string(what) + " must not be null");
}

std::vector<clk::VertexSet> read_sets(const uint32_t* const* sets, const size_t* sizes, size_t nsets) {
    std::vector<clk::VertexSet> out;
    if (nsets) {
        need(sets, "sets");
        need(sizes, "set_sizes");
    }
    for (size_t i = 0; i < nsets; ++i) {
        if (sizes[i]) need(sets[i], "set");
        std::vector<clk::Vertex> s(sets[i], sets[i] + sizes[i]);
        out.push_back(clk::make_vertex_set(std::move(s)));
    }
    return out;
}

std::vector<clk::Vertex> read_args(const uint32_t* args, size_t nargs) {
    if (nargs) need(args, "args");
    return std::vector<clk::Vertex>(args, args + nargs);
}

void check_ids(const clk::ColoredGraph& g, std::span<const clk::Vertex> args, std::span<const clk::VertexSet> sets) {
    for (auto v : args) clk::check_vertex(g, v);
    for (const auto& s : sets) {
        for (auto v : s) clk::check_vertex(g, v);
    }
}

clk_labels* make_labels(clk::LabelBundle bundle, std::optional<clk::Catalog> catalog) {
    auto out = std::make_unique<clk_labels>();
    if (catalog && catalog->has("plan")) {
        out->set_names = clk::parse_plan(clk::get_text_section(*catalog, "plan")).sets;
    }
    out->catalog = catalog;
    if (bundle.scheme == clk::SchemeId::Arboricity && catalog && catalog->empty()) catalog.reset();
    out->labeled = std::make_unique<clk::LabeledGraph>(std::move(bundle), std::move(catalog));
    return out.release();
}

clk::ColoredGraph graph_from_request(const json& req, std::vector<clk::Vertex>* order = nullptr) {
    if (req.contains("graph")) return clk::read_graph_file(req.at("graph").get<std::string>());
    if (req.contains("graph_text")) return clk::parse_graph(req.at("graph_text").get<std::string>());
    if (req.contains("generator")) {
        auto gen = clk::generate(req.at("generator"));
        if (order) *order = gen.order;
        return gen.graph;
    }
    throw clk::InputError("request needs graph, graph_text or generator");
}

clk::Sampler sampler_from_request(const json& req) {
    clk::Sampler s;
    json spec = req.at("generator");
    s.graph = [spec](std::mt19937_64& rng) {
        json one = spec;
        one["seed"] = rng();
        return clk::generate(one).graph;
    };
    s.graphs = req.value("graphs", s.graphs);
    s.per_graph = req.value("per_graph", s.per_graph);
    s.set_density = req.value("set_density", s.set_density);
    s.seed = req.value("seed", s.seed);
    return s;
}

json validation_json(const clk::ValidationReport& r) {
    return {{"ok", r.ok}, {"checked", r.checked}, {"failures", r.failures}, {"witness", r.witness}, {"notes", r.notes}};
}

json run_command(const std::string& cmd, const json& req, int& status) {
    status = CLK_OK;
    if (cmd == "crossval") {
        json rep = clk::crossval(clk::Experiment::from_json(req));
        if (!rep.at("ok").get<bool>()) status = CLK_MISMATCH;
        return rep;
    }
    if (cmd == "bench") {
        return clk::bench_label_growth(clk::Experiment::from_json(req.at("experiment")),
                                       req.at("sizes").get<std::vector<std::size_t>>());
    }
    if (cmd == "contrast") {
        json rep = clk::contrast_experiment(req.value("sizes", std::vector<std::size_t>{10, 20, 30, 40, 50, 60}),
                                            req.value("expansion_limit", std::size_t{30}));
        if (!rep.at("ok").get<bool>()) status = CLK_MISMATCH;
        return rep;
    }
    if (cmd == "corruption") {
        clk::Bytes b = clk::read_file(req.at("bundle").get<std::string>());
        clk::LabelBundle bundle = clk::read_bundle(b);
        clk::Catalog catalog;
        if (req.contains("catalog")) catalog = clk::read_catalog(clk::read_file(req.at("catalog").get<std::string>()));
        json rep = clk::corruption_check(bundle, catalog, req.value("max_positions", std::size_t{0}));
        if (!rep.at("ok").get<bool>()) status = CLK_MISMATCH;
        return rep;
    }
    if (cmd == "validate_cover") {
        std::vector<clk::Vertex> order;
        clk::ColoredGraph g = graph_from_request(req, &order);
        if (req.contains("order")) order = req.at("order").get<std::vector<clk::Vertex>>();
        clk::Cover cover;
        const clk::Distance r = req.value("r", clk::Distance{1});
        const std::string kind = req.value("kind", std::string("ball"));
        if (req.contains("cover_text")) {
            cover = clk::parse_cover(req.at("cover_text").get<std::string>(), g.size());
        } else if (kind == "interval") {
            cover = clk::build_unit_interval_cover(g, order, r);
        } else if (kind == "ball") {
            cover = clk::build_ball_cover(g, r);
        } else {
            throw clk::InputError("unknown cover kind " + kind);
        }
        if (req.contains("r")) cover.r = r;
        std::size_t target = req.value("ell_target", std::size_t{0});
        if (kind == "interval" && !req.contains("ell_target")) target = 2 * r + 2;
        clk::CoverReport rep = clk::validate_cover(g, cover, target);
        json out = rep.to_json();
        out["pieces"] = cover.pieces.size();
        out["notes"] = cover.notes;
        if (!rep.ok) status = CLK_COVER_DEFECT;
        return out;
    }
    if (cmd == "validate_partition") {
        clk::ColoredGraph g = graph_from_request(req);
        clk::ExpansionPartition part;
        const std::string strategy = req.value("strategy", std::string("auto"));
        const std::size_t p = req.value("p", std::size_t{2});
        if (req.contains("partition_text")) {
            part = clk::parse_partition(req.at("partition_text").get<std::string>(), g.size());
        } else if (strategy == "greedy") {
            part = clk::greedy_coloring_partition(g);
        } else if (strategy == "isolation") {
            part = clk::isolation_partition(g, req.value("threshold", std::size_t{2}));
        } else {
            part = clk::tree_depth_mod_partition(g, p);
        }
        json out = clk::validate_partition(g, part, p).to_json();
        if (!out.at("ok").get<bool>()) status = CLK_STRUCTURAL;
        return out;
    }
    if (cmd == "validate_plan") {
        clk::QueryPlan plan = clk::parse_plan(req.at("plan").get<std::string>());
        if (!plan.query) throw clk::InputError("the plan has no 'query' line to validate against");
        json out = validation_json(clk::validate_plan(plan, *plan.query, sampler_from_request(req)));
        if (!out.at("ok").get<bool>()) status = CLK_MISMATCH;
        return out;
    }
    if (cmd == "validate_locality" || cmd == "validate_bounded" || cmd == "validate_connected") {
        clk::Formula f = clk::parse_formula(req.at("formula").get<std::string>());
        clk::Sampler s = sampler_from_request(req);
        clk::ValidationReport r;
        if (cmd == "validate_bounded") {
            r = clk::validate_boundedness(f, req.at("p").get<std::size_t>(), s);
        } else if (cmd == "validate_locality") {
            r = clk::validate_locality(f, req.at("t").get<clk::Distance>(), s);
        } else {
            r = clk::validate_t_connected(f, req.at("t").get<clk::Distance>(), s);
        }
        json out = validation_json(r);
        if (!r.ok) status = CLK_MISMATCH;
        return out;
    }
    if (cmd == "eval_term") {
        clk::TermValue v = clk::eval_term(clk::parse_term(req.at("term").get<std::string>()));
        return {{"graph", clk::format_graph(v.graph)}, {"vertices", v.graph.size()}, {"labels", v.labels}};
    }
    throw clk::InputError("unknown command " + cmd);
}

}  // namespace

extern "C" {

const char* clk_last_error(void) { return last_error.c_str(); }

const char* clk_status_name(int status) {
    switch (status) {
    case CLK_OK: return "ok";
    case CLK_MISMATCH: return "mismatch";
    case CLK_INPUT_ERROR: return "input error";
    case CLK_UNSUPPORTED: return "unsupported query";
    case CLK_BAD_MAGIC: return "bad magic";
    case CLK_TRUNCATED: return "truncated";
    case CLK_CHECKSUM: return "checksum mismatch";
    case CLK_COVER_DEFECT: return "cover defect";
    case CLK_WRONG_PIECE: return "wrong piece";
    case CLK_PARTITION_TOO_COARSE: return "partition too coarse";
    case CLK_STRUCTURAL: return "structural error";
    default: return "internal error";
    }
}

void clk_string_free(char* s) { std::free(s); }

int clk_graph_parse(const char* text, clk_graph** out) {
    return guarded([&] {
        need(text, "text");
        need(out, "out");
        *out = new clk_graph{clk::parse_graph(text), {}};
        return CLK_OK;
    });
}

int clk_graph_load(const char* path, clk_graph** out) {
    return guarded([&] {
        need(path, "path");
        need(out, "out");
        *out = new clk_graph{clk::read_graph_file(path), {}};
        return CLK_OK;
    });
}

int clk_graph_generate(const char* spec_json, clk_graph** out) {
    return guarded([&] {
        need(spec_json, "spec_json");
        need(out, "out");
        auto gen = clk::generate(json::parse(spec_json));
        *out = new clk_graph{std::move(gen.graph), std::move(gen.order)};
        return CLK_OK;
    });
}

int clk_graph_format(const clk_graph* g, char** text) {
    return guarded([&] {
        need(g, "graph");
        need(text, "text");
        *text = dup(clk::format_graph(g->graph));
        return CLK_OK;
    });
}

int clk_graph_order(const clk_graph* g, char** text) {
    return guarded([&] {
        need(g, "graph");
        need(text, "text");
        std::ostringstream s;
        for (std::size_t i = 0; i < g->order.size(); ++i) s << (i ? " " : "") << g->order[i];
        *text = dup(s.str());
        return CLK_OK;
    });
}

size_t clk_graph_vertex_count(const clk_graph* g) { return g ? g->graph.size() : 0; }

void clk_graph_free(clk_graph* g) { delete g; }

int clk_build(const clk_graph* g, const char* options_json, clk_labels** out, char** report_json) {
    return guarded([&] {
        need(g, "graph");
        need(out, "out");
        json opt = options_json ? json::parse(options_json) : json::object();
        clk::BuildOptions o;
        o.scheme = clk::scheme_from_name(opt.value("scheme", std::string("arboricity")));
        if (opt.contains("plan")) o.plan = clk::parse_plan(opt.at("plan").get<std::string>());
        const std::string cover = opt.value("cover", std::string("ball"));
        if (cover == "interval") {
            o.cover_kind = clk::CoverKind::Interval;
        } else if (cover != "ball") {
            throw clk::InputError("unknown cover kind " + cover);
        }
        o.order = opt.contains("order") ? opt.at("order").get<std::vector<clk::Vertex>>() : g->order;
        if (opt.contains("cover_text")) {
            o.cover = std::make_shared<clk::Cover>(clk::parse_cover(opt.at("cover_text").get<std::string>(), g->graph.size()));
        }
        if (opt.contains("partition_text")) {
            o.partition = std::make_shared<clk::ExpansionPartition>(
                clk::parse_partition(opt.at("partition_text").get<std::string>(), g->graph.size()));
        } else {
            const std::string p = opt.value("partition", std::string("auto"));
            if (p == "greedy") {
                o.partition = std::make_shared<clk::ExpansionPartition>(clk::greedy_coloring_partition(g->graph));
            } else if (p == "isolation") {
                o.partition = std::make_shared<clk::ExpansionPartition>(clk::isolation_partition(g->graph, 2));
            } else if (p != "auto") {
                throw clk::InputError("unknown partition strategy " + p);
            }
        }
        o.labeler = clk::labeler_from_name(opt.value("labeler", std::string("catalog")));
        o.modulus = opt.value("modulus", std::uint64_t{0});
        o.force = opt.value("force", false);
        o.alpha_budget = opt.value("alpha_budget", o.alpha_budget);
        o.seed = opt.value("seed", o.seed);
        clk::BuildResult b = clk::build_labels(g->graph, o);
        if (report_json) *report_json = dup(b.report.dump(2));
        *out = make_labels(std::move(b.bundle), std::move(b.catalog));
        return CLK_OK;
    });
}

int clk_labels_load(const char* bundle_path, const char* catalog_path, clk_labels** out) {
    return guarded([&] {
        need(bundle_path, "bundle_path");
        need(out, "out");
        clk::LabelBundle bundle = clk::read_bundle(clk::read_file(bundle_path));
        std::optional<clk::Catalog> catalog;
        if (catalog_path) catalog = clk::read_catalog(clk::read_file(catalog_path));
        *out = make_labels(std::move(bundle), std::move(catalog));
        return CLK_OK;
    });
}

int clk_labels_from_bytes(const uint8_t* bundle, size_t bundle_len, const uint8_t* catalog, size_t catalog_len,
                          clk_labels** out) {
    return guarded([&] {
        need(bundle, "bundle");
        need(out, "out");
        clk::LabelBundle b = clk::read_bundle(clk::ByteView(bundle, bundle_len));
        std::optional<clk::Catalog> c;
        if (catalog) c = clk::read_catalog(clk::ByteView(catalog, catalog_len));
        *out = make_labels(std::move(b), std::move(c));
        return CLK_OK;
    });
}

int clk_labels_save(const clk_labels* labels, const char* bundle_path, const char* catalog_path) {
    return guarded([&] {
        need(labels, "labels");
        need(bundle_path, "bundle_path");
        clk::write_file(bundle_path, clk::write_bundle(labels->labeled->bundle()));
        if (catalog_path) {
            clk::Catalog empty;
            empty.scheme = labels->labeled->bundle().scheme;
            clk::write_file(catalog_path, clk::write_catalog(labels->catalog ? *labels->catalog : empty));
        }
        return CLK_OK;
    });
}

int clk_labels_size_report(const clk_labels* labels, char** out) {
    return guarded([&] {
        need(labels, "labels");
        need(out, "out");
        clk::Catalog empty;
        *out = dup(clk::size_report(labels->labeled->bundle(), labels->catalog ? *labels->catalog : empty).dump(2));
        return CLK_OK;
    });
}

size_t clk_labels_vertex_count(const clk_labels* labels) { return labels ? labels->labeled->bundle().size() : 0; }

const char* clk_labels_scheme(const clk_labels* labels) {
    return labels ? clk::scheme_name(labels->labeled->bundle().scheme) : "";
}

void clk_labels_free(clk_labels* labels) { delete labels; }

int clk_ask(clk_labels* labels, const char* formula, const uint32_t* args, size_t nargs, const uint32_t* const* sets,
            const size_t* set_sizes, size_t nsets, int* answer) {
    return guarded([&] {
        need(labels, "labels");
        need(answer, "answer");
        auto a = read_args(args, nargs);
        auto s = read_sets(sets, set_sizes, nsets);
        std::optional<clk::Formula> f;
        if (formula) f = clk::parse_formula(formula);
        *answer = labels->labeled->ask(f ? &*f : nullptr, a, s) ? 1 : 0;
        return CLK_OK;
    });
}

int clk_count(clk_labels* labels, const uint32_t* const* sets, const size_t* set_sizes, size_t nsets, uint64_t* count) {
    return guarded([&] {
        need(labels, "labels");
        need(count, "count");
        *count = labels->labeled->count(read_sets(sets, set_sizes, nsets));
        return CLK_OK;
    });
}

uint64_t clk_labels_modulus(const clk_labels* labels) {
    if (!labels) return 0;
    return labels->labeled->decoder().modulus().value_or(0);
}

int clk_labels_set_names(const clk_labels* labels, const char* formula, char** names) {
    return guarded([&] {
        need(labels, "labels");
        need(names, "names");
        std::vector<std::string> list = labels->set_names;
        if (formula) list = clk::parse_formula(formula).set_params();
        std::string s;
        for (std::size_t i = 0; i < list.size(); ++i) s += (i ? " " : "") + list[i];
        *names = dup(s);
        return CLK_OK;
    });
}

int clk_formula_set_names(const char* formula, char** names) {
    return guarded([&] {
        need(formula, "formula");
        need(names, "names");
        auto list = clk::parse_formula(formula).set_params();
        std::string s;
        for (std::size_t i = 0; i < list.size(); ++i) s += (i ? " " : "") + list[i];
        *names = dup(s);
        return CLK_OK;
    });
}

uint64_t clk_labels_operations(const clk_labels* labels) {
    return labels ? labels->labeled->decoder().operations() : 0;
}

int clk_oracle_ask(const clk_graph* g, const char* formula, const uint32_t* args, size_t nargs,
                   const uint32_t* const* sets, const size_t* set_sizes, size_t nsets, int* answer) {
    return guarded([&] {
        need(g, "graph");
        need(formula, "formula");
        need(answer, "answer");
        clk::Formula f = clk::parse_formula(formula);
        auto a = read_args(args, nargs);
        auto s = read_sets(sets, set_sizes, nsets);
        if (a.size() != f.arity() || s.size() != f.set_arity()) {
            throw clk::InputError("the formula takes " + std::to_string(f.arity()) + " arguments and " +
                                  std::to_string(f.set_arity()) + " sets");
        }
        check_ids(g->graph, a, s);
        *answer = clk::eval_oracle(g->graph, f, a, s) ? 1 : 0;
        return CLK_OK;
    });
}

int clk_oracle_count(const clk_graph* g, const char* formula, const uint32_t* const* sets, const size_t* set_sizes,
                     size_t nsets, uint64_t* count) {
    return guarded([&] {
        need(g, "graph");
        need(formula, "formula");
        need(count, "count");
        clk::Formula f = clk::parse_formula(formula);
        auto s = read_sets(sets, set_sizes, nsets);
        if (s.size() != f.set_arity()) throw clk::InputError("the formula takes " + std::to_string(f.set_arity()) + " sets");
        check_ids(g->graph, {}, s);
        *count = clk::count_oracle(g->graph, f, s);
        return CLK_OK;
    });
}

int clk_run(const char* command, const char* request_json, char** response_json) {
    return guarded([&] {
        need(command, "command");
        need(response_json, "response_json");
        json req = request_json ? json::parse(request_json) : json::object();
        int status = CLK_OK;
        json rep = run_command(command, req, status);
        *response_json = dup(rep.dump(2));
        return status;
    });
}

}  // extern "C"
