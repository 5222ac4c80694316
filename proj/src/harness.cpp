#include "clk/harness.hpp"

#include <cmath>
#include <optional>
#include <random>

#include "clk/cover.hpp"
#include "clk/errors.hpp"
#include "clk/eval.hpp"
#include "clk/expansion.hpp"
#include "clk/generators.hpp"
#include "clk/plan.hpp"

namespace clk {

namespace {

const char* cover_name(CoverKind k) { return k == CoverKind::Interval ? "interval" : "ball"; }

CoverKind cover_from_name(const std::string& s) {
    if (s == "ball") return CoverKind::Ball;
    if (s == "interval") return CoverKind::Interval;
    throw InputError("unknown cover kind " + s);
}

}  // namespace

Experiment Experiment::from_json(const nlohmann::json& j) {
    try {
        Experiment e;
        e.generator = j.at("generator");
        e.scheme = scheme_from_name(j.at("scheme").get<std::string>());
        e.plan = j.value("plan", std::string());
        e.query = j.value("query", std::string());
        e.qf_vars = j.value("qf_vars", e.qf_vars);
        e.qf_sets = j.value("qf_sets", e.qf_sets);
        e.qf_atoms = j.value("qf_atoms", e.qf_atoms);
        e.cover = cover_from_name(j.value("cover", std::string("ball")));
        e.partition = j.value("partition", e.partition);
        e.labeler = labeler_from_name(j.value("labeler", std::string("catalog")));
        e.modulus = j.value("modulus", e.modulus);
        e.force = j.value("force", e.force);
        e.samples = j.value("samples", e.samples);
        e.set_density = j.value("set_density", e.set_density);
        e.seed = j.value("seed", e.seed);
        return e;
    } catch (const nlohmann::json::exception& ex) {
        throw InputError(std::string("bad experiment: ") + ex.what());
    }
}

nlohmann::json Experiment::to_json() const {
    return {{"generator", generator}, {"scheme", scheme_name(scheme)},   {"plan", plan},
            {"query", query},         {"qf_vars", qf_vars},              {"qf_sets", qf_sets},
            {"qf_atoms", qf_atoms},   {"cover", cover_name(cover)},      {"partition", partition},
            {"labeler", labeler_name(labeler)}, {"modulus", modulus},    {"force", force},
            {"samples", samples},     {"set_density", set_density},      {"seed", seed}};
}

namespace {

BuildOptions options_for(const Experiment& e, const GeneratedGraph& gen) {
    BuildOptions o;
    o.scheme = e.scheme;
    if (!e.plan.empty()) o.plan = parse_plan(e.plan);
    o.cover_kind = e.cover;
    o.order = gen.order;
    if (e.partition == "greedy") {
        o.partition = std::make_shared<ExpansionPartition>(greedy_coloring_partition(gen.graph));
    } else if (e.partition == "isolation") {
        o.partition = std::make_shared<ExpansionPartition>(isolation_partition(gen.graph, 2));
    } else if (e.partition != "auto") {
        throw InputError("unknown partition strategy " + e.partition);
    }
    o.labeler = e.labeler;
    o.modulus = e.modulus;
    o.force = e.force;
    o.seed = e.seed;
    return o;
}

struct Instance {
    std::optional<Formula> formula;  // arboricity only
    std::vector<Vertex> args;
    std::vector<VertexSet> sets;
    std::uint64_t expected = 0;
};

// Arguments after the first are drawn near an earlier argument half of the time.
std::vector<Vertex> sample_args(std::mt19937_64& rng, const ColoredGraph& g, std::size_t m, Distance reach) {
    std::vector<Vertex> args = random_args(rng, g.size(), m);
    for (std::size_t i = 1; i < args.size(); ++i) {
        if (std::uniform_int_distribution<int>(0, 1)(rng) == 0) continue;
        Vertex anchor = args[std::uniform_int_distribution<std::size_t>(0, i - 1)(rng)];
        VertexSet near = ball(g, anchor, reach);
        args[i] = near[std::uniform_int_distribution<std::size_t>(0, near.size() - 1)(rng)];
    }
    return args;
}

Distance reach_of(const QueryPlan& plan) {
    switch (plan.kind) {
    case PlanKind::Local: return 2 * plan.local.t + 2;
    case PlanKind::Connected: return std::max<Distance>(plan.t, 1);
    case PlanKind::Bounded: return 2;
    default: return 3;
    }
}

std::uint64_t reduce(std::uint64_t v, std::uint64_t s) { return s ? v % s : v; }

struct Oracle {
    const Experiment& e;
    const std::optional<QueryPlan>& plan;

    std::uint64_t operator()(const ColoredGraph& g, const Instance& in) const {
        if (e.scheme == SchemeId::Arboricity) return eval_oracle(g, *in.formula, in.args, in.sets);
        if (e.scheme == SchemeId::Counting) {
            const Formula f = plan->query ? *plan->query : plan_formula(*plan);
            return reduce(count_oracle(g, f, in.sets), e.modulus);
        }
        if (plan->query) return eval_oracle(g, *plan->query, in.args, in.sets);
        return evaluate_plan(g, *plan, in.args, in.sets);
    }
};

std::uint64_t answer(LabeledGraph& lg, SchemeId scheme, const Instance& in) {
    if (scheme == SchemeId::Counting) return lg.count(in.sets);
    return lg.ask(in.formula ? &*in.formula : nullptr, in.args, in.sets);
}

}  // namespace

nlohmann::json crossval(const Experiment& e) {
    nlohmann::json report;
    report["experiment"] = e.to_json();
    std::optional<GeneratedGraph> gen = generate(e.generator);
    BuildOptions options = options_for(e, *gen);
    BuildResult built = build_labels(gen->graph, options);
    report["build"] = built.report;

    std::mt19937_64 rng(e.seed ^ 0x9e3779b97f4a7c15ULL);
    const ColoredGraph& g = gen->graph;
    const std::size_t n = g.size();
    Oracle oracle{e, options.plan};
    std::vector<Instance> instances;
    for (std::size_t k = 0; k < e.samples && n > 0; ++k) {
        Instance in;
        if (e.scheme == SchemeId::Arboricity) {
            in.formula = e.query.empty() ? random_qf_formula(rng, e.qf_vars, e.qf_sets, g.vertex_palette_size(),
                                                             g.edge_palette_size(), e.qf_atoms)
                                         : parse_formula(e.query);
            in.args = sample_args(rng, g, in.formula->arity(), 1);
            in.sets = random_sets(rng, n, in.formula->set_arity(), e.set_density);
        } else {
            const QueryPlan& plan = *options.plan;
            if (e.scheme != SchemeId::Counting) in.args = sample_args(rng, g, plan.arity(), reach_of(plan));
            in.sets = random_sets(rng, n, plan.set_arity(), e.set_density);
        }
        in.expected = oracle(g, in);
        instances.push_back(std::move(in));
    }

    // Nothing below may see the graph.
    gen.reset();
    Bytes bundle_bytes = write_bundle(built.bundle);
    Bytes catalog_bytes = write_catalog(built.catalog);
    built = BuildResult{};
    std::optional<Catalog> catalog;
    if (e.scheme != SchemeId::Arboricity) catalog = read_catalog(catalog_bytes);
    LabeledGraph lg(read_bundle(bundle_bytes), std::move(catalog));

    std::size_t mismatches = 0, errors = 0;
    std::optional<std::size_t> first_bad;
    std::string error_text;
    std::vector<std::uint64_t> got(instances.size(), 0);
    for (std::size_t k = 0; k < instances.size(); ++k) {
        try {
            got[k] = answer(lg, e.scheme, instances[k]);
            if (got[k] != instances[k].expected) {
                ++mismatches;
                if (!first_bad) first_bad = k;
            }
        } catch (const Error& ex) {
            ++errors;
            if (!first_bad) {
                first_bad = k;
                error_text = ex.what();
            }
        }
    }
    report["graph_freed_before_queries"] = true;
    report["instances"] = instances.size();
    std::size_t positive = 0;
    for (const auto& in : instances) positive += in.expected != 0;
    report["nonzero_expected"] = positive;
    report["mismatches"] = mismatches;
    report["errors"] = errors;
    report["decoder_operations"] = lg.decoder().operations();
    report["ok"] = mismatches == 0 && errors == 0;

    if (first_bad) {
        // The graph is regenerated only now, to shrink the witness.
        Instance in = instances[*first_bad];
        GeneratedGraph again = generate(e.generator);
        auto still_bad = [&](const Instance& cand) {
            try {
                return answer(lg, e.scheme, cand) != oracle(again.graph, cand);
            } catch (const Error&) {
                return true;
            }
        };
        for (auto& s : in.sets) {
            for (std::size_t i = s.size(); i-- > 0;) {
                Instance cand = in;
                cand.sets[&s - in.sets.data()].erase(cand.sets[&s - in.sets.data()].begin() + i);
                if (still_bad(cand)) in = std::move(cand);
            }
        }
        nlohmann::json w;
        w["instance"] = *first_bad;
        w["arguments"] = describe_instance(in.args, in.sets);
        if (in.formula) w["formula"] = print_formula(*in.formula);
        w["expected"] = oracle(again.graph, in);
        if (error_text.empty()) {
            w["decoded"] = answer(lg, e.scheme, in);
        } else {
            w["error"] = error_text;
        }
        report["witness"] = w;
    }
    return report;
}

nlohmann::json corruption_check(const LabelBundle& bundle, const Catalog& catalog, std::size_t max_positions) {
    auto run = [&](Bytes data, auto&& load) {
        std::size_t step = 1;
        if (max_positions && data.size() > max_positions) step = (data.size() + max_positions - 1) / max_positions;
        std::size_t tried = 0, rejected = 0;
        for (std::size_t pos = 0; pos < data.size(); pos += step) {
            ++tried;
            data[pos] ^= 0x5a;
            try {
                load(data);
            } catch (const FormatError&) {
                ++rejected;
            } catch (const InputError&) {
                ++rejected;
            }
            data[pos] ^= 0x5a;
        }
        return std::pair{tried, rejected};
    };
    auto [bt, br] = run(write_bundle(bundle), [](const Bytes& d) { read_bundle(d); });
    auto [ct, cr] = run(write_catalog(catalog), [](const Bytes& d) { read_catalog(d); });
    return {{"bundle_positions", bt},
            {"bundle_rejected", br},
            {"catalog_positions", ct},
            {"catalog_rejected", cr},
            {"ok", bt == br && ct == cr}};
}

LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
    LinearFit f;
    const std::size_t n = x.size();
    if (n == 0) return f;
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    f.slope = sxx > 0 ? sxy / sxx : 0;
    f.intercept = my - f.slope * mx;
    double ss_res = 0;
    for (std::size_t i = 0; i < n; ++i) {
        double r = y[i] - (f.slope * x[i] + f.intercept);
        ss_res += r * r;
        f.max_residual = std::max(f.max_residual, std::fabs(r));
    }
    f.r2 = syy > 0 ? 1 - ss_res / syy : 1;
    return f;
}

nlohmann::json bench_label_growth(const Experiment& base, const std::vector<std::size_t>& sizes) {
    nlohmann::json rows = nlohmann::json::array();
    std::vector<double> xs, ys;
    for (std::size_t n : sizes) {
        Experiment e = base;
        if (e.generator.value("kind", std::string()) == "grid") {
            e.generator["w"] = n;
            e.generator["h"] = n;
        } else {
            e.generator["n"] = n;
        }
        nlohmann::json row{{"n", n}};
        try {
            GeneratedGraph gen = generate(e.generator);
            BuildResult b = build_labels(gen.graph, options_for(e, gen));
            const auto& sizes_json = b.report.at("sizes");
            row["vertices"] = gen.graph.size();
            row["log2_n"] = std::log2(static_cast<double>(std::max<std::size_t>(gen.graph.size(), 1)));
            row["max_bits"] = sizes_json.at("max_bits");
            row["mean_bits"] = sizes_json.at("mean_bits");
            row["catalog_bytes"] = sizes_json.at("catalog_bytes");
            for (const char* key : {"degeneracy", "budget_bits", "within_budget", "parts", "alphas"}) {
                if (b.report.contains(key)) row[key] = b.report[key];
            }
            xs.push_back(row["log2_n"].get<double>());
            ys.push_back(row["max_bits"].get<double>());
        } catch (const PartitionTooCoarse& ex) {
            row["error"] = ex.what();
            row["parts"] = ex.parts;
        } catch (const Error& ex) {
            row["error"] = ex.what();
        }
        rows.push_back(row);
    }
    LinearFit f = fit_line(xs, ys);
    return {{"experiment", base.to_json()},
            {"rows", rows},
            {"fit", {{"slope", f.slope}, {"intercept", f.intercept}, {"max_residual", f.max_residual}, {"r2", f.r2}}}};
}

std::string common_neighbor_local_plan() {
    return "kind local\n"
           "vars x y\n"
           "query E z. (edge(x,z) & edge(z,y))\n"
           "t 1\n"
           "case 1-2\n"
           "comp c : E z. (edge(x,z) & edge(z,y))\n";
}

std::string common_neighbor_bounded_plan() {
    return "kind bounded\n"
           "vars x y\n"
           "query E z. (edge(x,z) & edge(z,y))\n"
           "p 3\n"
           "basic c : E z. (edge(x,z) & edge(z,y))\n"
           "combine c\n";
}

nlohmann::json contrast_experiment(const std::vector<std::size_t>& sizes, std::size_t expansion_limit) {
    const Formula phi0 = parse_formula("[x,y] E z. (edge(x,z) & edge(z,y))");
    nlohmann::json rows = nlohmann::json::array();
    bool rejects = true, agrees = true, monotone = true;
    double last_ratio = -1;
    std::mt19937_64 rng(7);
    for (std::size_t n : sizes) {
        ColoredGraph g = subdivided_clique(n);
        nlohmann::json row{{"n", n}, {"vertices", g.size()}};

        BuildOptions arb;
        arb.scheme = SchemeId::Arboricity;
        BuildResult a = build_labels(g, arb);
        LabeledGraph alg(std::move(a.bundle), std::nullopt);
        std::vector<Vertex> pair{0, 1};
        try {
            alg.ask(&phi0, pair, {});
            row["arboricity"] = "answered";
            rejects = false;
        } catch (const UnsupportedQuery&) {
            row["arboricity"] = "rejected";
        }

        BuildOptions loc;
        loc.scheme = SchemeId::Local;
        loc.plan = parse_plan(common_neighbor_local_plan());
        BuildResult l = build_labels(g, loc);
        const auto& sz = l.report.at("sizes");
        const std::size_t bits = sz.at("max_bits").get<std::size_t>();
        const std::size_t cat = sz.at("catalog_bytes").get<std::size_t>();
        std::vector<std::pair<Vertex, Vertex>> probes{{0, 1}, {0, static_cast<Vertex>(n)}};
        for (int k = 0; k < 20; ++k) probes.emplace_back(random_args(rng, g.size(), 1)[0], random_args(rng, g.size(), 1)[0]);
        LabeledGraph llg(std::move(l.bundle), std::move(l.catalog));
        std::size_t wrong = 0;
        for (auto [u, v] : probes) {
            std::vector<Vertex> args{u, v};
            if (llg.ask(nullptr, args, {}) != eval_oracle(g, phi0, args)) ++wrong;
        }
        agrees = agrees && wrong == 0;
        const double log_n = std::log2(static_cast<double>(g.size()));
        const double total = static_cast<double>(bits + 8 * cat);
        const double ratio = total / log_n;
        if (ratio <= last_ratio) monotone = false;
        last_ratio = ratio;
        row["local"] = {{"max_bits", bits}, {"catalog_bytes", cat}, {"total_bits", total}, {"ratio_to_log2_n", ratio},
                        {"probes", probes.size()}, {"wrong", wrong}};

        if (n <= expansion_limit) {
            auto part = std::make_shared<ExpansionPartition>(isolation_partition(g, 2));
            BuildOptions ex;
            ex.scheme = SchemeId::Expansion;
            ex.plan = parse_plan(common_neighbor_bounded_plan());
            ex.partition = part;
            nlohmann::json erow{{"parts", part->parts}};
            try {
                BuildResult b = build_labels(g, ex);
                erow["alphas"] = b.report.at("alphas");
                erow["max_bits"] = b.report.at("sizes").at("max_bits");
                erow["catalog_bytes"] = b.report.at("sizes").at("catalog_bytes");
            } catch (const PartitionTooCoarse& ptc) {
                erow["error"] = ptc.what();
            }
            row["expansion"] = erow;
        }
        rows.push_back(row);
    }
    return {{"rows", rows},
            {"arboricity_rejects", rejects},
            {"local_agrees", agrees},
            {"ratio_monotone", monotone},
            {"ok", rejects && agrees && monotone}};
}

}  // namespace clk
