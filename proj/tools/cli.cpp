#include "cli.hpp"

#include <CLI11.hpp>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <optional>
#include <json.hpp>

#include "momentnet/errors.hpp"
#include "momentnet/eval.hpp"
#include "momentnet/graph.hpp"
#include "momentnet/graphon.hpp"
#include "momentnet/inr.hpp"
#include "momentnet/mixup.hpp"
#include "momentnet/motif.hpp"
#include "momentnet/parallel.hpp"
#include "momentnet/rng.hpp"
#include "momentnet/trainer.hpp"

namespace momentnet::cli {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::size_t pos = 0;
    while (true) {
        const auto next = s.find(sep, pos);
        out.push_back(s.substr(pos, next - pos));
        if (next == std::string::npos) break;
        pos = next + 1;
    }
    return out;
}

template <typename T>
T to_number(const std::string& text, const char* what) {
    T value{};
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
        throw UsageError(std::string("invalid ") + what + " '" + text + "'");
    }
    return value;
}

std::string padded(std::size_t value, int width) {
    std::string s = std::to_string(value);
    if (static_cast<int>(s.size()) < width) s.insert(0, width - s.size(), '0');
    return s;
}

void ensure_dir(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw std::runtime_error("cannot create directory " + dir.string() + ": " + ec.message());
}

Json moments_json(const MomentVector& m) { return m.densities; }

TrainConfig load_train_config(const std::string& path, const std::vector<std::string>& overrides, unsigned jobs) {
    TrainConfig cfg;
    cfg.jobs = jobs;
    if (!path.empty()) {
        try {
            cfg = parse_train_config(read_text_file(path), cfg);
        } catch (const ParseError& e) {
            throw ParseError(e.line(), path + ": " + std::string(e.what()));
        }
    }
    for (const auto& kv : overrides) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) throw UsageError("--set expects key=value, got '" + kv + "'");
        set_train_option(cfg, kv.substr(0, eq), kv.substr(eq + 1));
    }
    cfg.validate();
    return cfg;
}

// sample ---------------------------------------------------------------------

struct SampleArgs {
    std::string graphon;
    std::string sizes;
    std::size_t count = 1;
    std::uint64_t seed = 0;
    std::string out;
};

int cmd_sample(const SampleArgs& a, std::ostream& out) {
    const auto w = parse_graphon_spec(a.graphon);
    std::vector<std::size_t> sizes;
    for (const auto& s : split(a.sizes, ',')) sizes.push_back(to_number<std::size_t>(s, "node count"));
    for (auto n : sizes) {
        if (n == 0) throw UsageError("node counts must be positive");
    }
    ensure_dir(a.out);

    Json files = Json::array();
    std::size_t index = 0;
    for (auto n : sizes) {
        for (std::size_t r = 0; r < a.count; ++r, ++index) {
            const auto seed = derive_seed(a.seed, index);
            const auto sampled = sample_graph(w, n, seed);
            const std::string stem = "graph_n" + padded(n, 4) + "_r" + padded(r, 3);
            write_text_file(fs::path(a.out) / (stem + ".edges"), write_edge_list(sampled.graph));
            write_text_file(fs::path(a.out) / (stem + ".latents"), write_latents(sampled.latents));
            files.push_back({{"file", stem + ".edges"}, {"nodes", n}, {"replicate", r}, {"seed", seed},
                             {"edges", sampled.graph.num_edges()}});
        }
    }
    Json manifest;
    manifest["command"] = "sample";
    manifest["graphon"] = w.describe();
    manifest["seed"] = a.seed;
    manifest["graphs"] = files;
    write_text_file(fs::path(a.out) / "manifest.json", manifest.dump(2) + "\n");
    out << "wrote " << index << " graphs to " << a.out << "\n";
    return 0;
}

// census ---------------------------------------------------------------------

struct CensusArgs {
    std::string in;
    std::string out;
    unsigned jobs = 1;
};

int cmd_census(const CensusArgs& a, std::ostream& out) {
    const auto dataset = load_dataset(a.in);
    if (dataset.empty()) throw UsageError("no .edges files in " + a.in);
    std::vector<Graph> graphs;
    std::vector<std::string> names;
    for (const auto& entry : dataset) {
        if (entry.graph.num_vertices() < 4) {
            throw ValidationError(entry.path.filename().string() + ": census needs at least 4 vertices");
        }
        graphs.push_back(entry.graph);
        names.push_back(entry.path.filename().string());
    }
    const auto per_graph = census(graphs, a.jobs);
    const auto average = average_moments(per_graph);
    write_text_file(a.out, census_to_json(per_graph, average, names));
    out << "census of " << graphs.size() << " graphs written to " << a.out << "\n";
    return 0;
}

// estimate -------------------------------------------------------------------

struct EstimateArgs {
    std::string moments;
    std::string config;
    std::vector<std::string> overrides;
    std::string out_model;
    std::string report;
    std::size_t dump_grid = 0;
    std::string grid_out;
    unsigned jobs = 1;
};

int cmd_estimate(const EstimateArgs& a, std::ostream& out, std::ostream& err) {
    const auto target = moments_from_json(read_text_file(a.moments));
    const auto cfg = load_train_config(a.config, a.overrides, a.jobs);
    const std::string report_path = a.report.empty() ? a.out_model + ".report.json" : a.report;

    TrainResult fit{InrParams(1), {}};
    try {
        fit = train(target, cfg);
    } catch (const TrainingAborted& e) {
        write_text_file(report_path, report_to_json(e.report()));
        err << "training aborted: " << e.what() << "\n";
        return 2;
    }
    write_text_file(a.out_model, write_model(fit.params));
    write_text_file(report_path, report_to_json(fit.report));
    if (a.dump_grid > 0) {
        const std::string grid_path = a.grid_out.empty() ? a.out_model + ".grid.csv" : a.grid_out;
        write_text_file(grid_path, write_grid_csv(discretize(model_graphon(fit.params), a.dump_grid)));
    }
    double worst = 0;
    for (double r : fit.report.residuals) worst = std::max(worst, r);
    out << "epochs " << fit.report.epochs_run << " (" << to_string(fit.report.stop_reason) << "), loss "
        << fit.report.final_loss << ", max residual " << worst << "\n";
    return 0;
}

// mixup ----------------------------------------------------------------------

struct MixupArgs {
    std::string class_a;
    std::string class_b;
    double alpha = 0.5;
    std::size_t n_sample = 1;
    std::size_t n_nodes = 100;
    std::size_t n_graphs = 0;
    std::string labels = "0,1";
    std::string config;
    std::vector<std::string> overrides;
    std::uint64_t seed = 0;
    std::string out;
    unsigned jobs = 1;
};

std::vector<Graph> load_graphs(const std::string& dir) {
    std::vector<Graph> graphs;
    for (auto& entry : load_dataset(dir)) {
        if (entry.graph.num_vertices() < 4) {
            throw ValidationError(entry.path.filename().string() + ": census needs at least 4 vertices");
        }
        graphs.push_back(std::move(entry.graph));
    }
    if (graphs.empty()) throw UsageError("no .edges files in " + dir);
    return graphs;
}

int cmd_mixup(const MixupArgs& a, std::ostream& out, std::ostream& err) {
    const auto labels = split(a.labels, ',');
    if (labels.size() != 2) throw UsageError("--labels expects two class indices 'yI,yJ'");

    MixupConfig cfg;
    cfg.alpha = a.alpha;
    cfg.n_sample = a.n_sample;
    cfg.n_nodes = a.n_nodes;
    cfg.n_graphs = a.n_graphs;
    cfg.label_i = to_number<std::size_t>(labels[0], "label");
    cfg.label_j = to_number<std::size_t>(labels[1], "label");
    cfg.trainer = load_train_config(a.config, a.overrides, a.jobs);
    cfg.seed = a.seed;
    cfg.jobs = a.jobs;

    const auto graphs_a = load_graphs(a.class_a);
    const auto graphs_b = load_graphs(a.class_b);
    ensure_dir(a.out);

    std::optional<MixupResult> fitted;
    try {
        fitted = augment(graphs_a, graphs_b, cfg);
    } catch (const TrainingAborted& e) {
        write_text_file(fs::path(a.out) / "report.json", report_to_json(e.report()));
        err << "training aborted: " << e.what() << "\n";
        return 2;
    }
    const MixupResult& result = *fitted;

    std::string tsv;
    for (std::size_t k = 0; k < result.samples.size(); ++k) {
        const std::string name = "mix_" + padded(k, 4) + ".edges";
        write_text_file(fs::path(a.out) / name, write_edge_list(result.samples[k].graph));
        tsv += name;
        for (double p : result.samples[k].soft_label) {
            char buf[32];
            auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, p);
            tsv += '\t';
            tsv.append(buf, ptr);
        }
        tsv += '\n';
    }
    write_text_file(fs::path(a.out) / "labels.tsv", tsv);
    write_text_file(fs::path(a.out) / "model.txt", write_model(result.model));

    Json manifest;
    manifest["command"] = "mixup";
    manifest["alpha"] = a.alpha;
    manifest["seed"] = a.seed;
    manifest["labels"] = {cfg.label_i, cfg.label_j};
    manifest["chosen_a"] = result.chosen_i;
    manifest["chosen_b"] = result.chosen_j;
    manifest["class_a_moments"] = moments_json(result.class_i_moments);
    manifest["class_b_moments"] = moments_json(result.class_j_moments);
    manifest["target"] = moments_json(result.target);
    manifest["residuals"] = result.report.residuals;
    manifest["train"] = Json::parse(report_to_json(result.report));
    manifest["graphs"] = result.samples.size();
    write_text_file(fs::path(a.out) / "manifest.json", manifest.dump(2) + "\n");
    out << "generated " << result.samples.size() << " graphs in " << a.out << "\n";
    return 0;
}

// eval -----------------------------------------------------------------------

struct EvalArgs {
    std::string model;
    std::string grid;
    std::string truth;
    std::size_t resolution = 100;
    std::size_t samples = 20000;
    std::size_t quadrature = 40;
    std::vector<std::string> centrality;
    std::string theory;
    std::uint64_t seed = 0;
    std::string out;
    std::string csv_dir;
};

// Threshold values tabulated for the concentration bound.
constexpr double kLemmaEps[] = {0.05, 0.1, 0.2, 0.3};

// Two-column (x, value) profile for plotting.
std::string centrality_csv(const CentralityProfile& profile) {
    std::string s = "x,value\n";
    char buf[64];
    for (std::size_t i = 0; i < profile.xs.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", profile.xs[i], profile.normalized[i]);
        s += buf;
    }
    return s;
}

int cmd_eval(const EvalArgs& a, std::ostream& out) {
    if (!a.model.empty() && !a.grid.empty()) throw UsageError("--model and --grid are mutually exclusive");
    const bool have_estimate = !a.model.empty() || !a.grid.empty();
    if (!have_estimate && a.theory.empty()) {
        throw UsageError("nothing to evaluate: give --model/--grid or --theory");
    }
    if (have_estimate && a.truth.empty() && a.centrality.empty()) {
        throw UsageError("--truth is required for moment distance and aligned_mse");
    }
    if (a.resolution == 0) throw UsageError("--resolution must be positive");

    Json report;
    std::optional<Graphon> estimate;
    std::optional<InrParams> params;
    if (!a.model.empty()) {
        params = parse_model(read_text_file(a.model));
        estimate = model_graphon(*params);
        report["estimate"] = "model:" + a.model;
    } else if (!a.grid.empty()) {
        estimate = grid_graphon(parse_grid_csv(read_text_file(a.grid)));
        report["estimate"] = "grid:" + a.grid;
    }
    std::optional<Graphon> truth;
    if (!a.truth.empty()) {
        truth = parse_graphon_spec(a.truth);
        report["truth"] = truth->describe();
    }

    if (estimate && truth) {
        const auto truth_m = quadrature_moments(*truth, a.quadrature);
        const auto est_mc = params ? estimate_moments(*params, a.samples, a.seed) : mc_moments(*estimate, a.samples, a.seed);
        const auto est_quad = quadrature_moments(*estimate, a.quadrature);
        const auto d_mc = moment_distance(est_mc, truth_m);
        const auto d_quad = moment_distance(est_quad, truth_m);
        report["truth_moments"] = moments_json(truth_m);
        report["estimate_moments_mc"] = moments_json(est_mc);
        report["estimate_moments_quadrature"] = moments_json(est_quad);
        report["moment_distance_mc"] = {{"l2", d_mc.l2}, {"linf", d_mc.linf}, {"samples", a.samples}};
        report["moment_distance_quadrature"] = {{"l2", d_quad.l2}, {"linf", d_quad.linf}, {"resolution", a.quadrature}};
        report["aligned_mse"] = aligned_mse(discretize(*estimate, a.resolution), discretize(*truth, a.resolution));
        report["resolution"] = a.resolution;
    }

    if (!a.centrality.empty()) {
        if (!estimate) throw UsageError("--centrality needs --model or --grid");
        Json rows = Json::array();
        for (const auto& spec : a.centrality) {
            const auto colon = spec.find(':');
            const auto measure = parse_centrality_measure(spec.substr(0, colon));
            double param = 0;
            if (colon != std::string::npos) param = to_number<double>(spec.substr(colon + 1), "centrality parameter");
            const auto est = numeric_centrality(*estimate, measure, param, a.resolution);
            std::optional<CentralityProfile> ref;
            std::string ref_kind = "none";
            if (truth) {
                const auto* an = std::get_if<Graphon::Analytic>(&truth->kind());
                if (an && (an->id == 1 || an->id == 2)) {
                    ref = analytic_centrality(an->id, measure, param, est.xs);
                    ref_kind = "analytic";
                } else {
                    ref = numeric_centrality(*truth, measure, param, a.resolution);
                    ref_kind = "numeric";
                }
            }
            Json row{{"measure", std::string(to_string(measure))}, {"param", param}, {"reference", ref_kind}};
            if (ref) {
                double direct = 0;
                for (std::size_t i = 0; i < est.normalized.size(); ++i) {
                    direct = std::max(direct, std::abs(est.normalized[i] - ref->normalized[i]));
                }
                row["max_deviation"] = direct;
                row["rearranged_max_deviation"] = rearranged_max_deviation(est.normalized, ref->normalized);
            }
            if (!a.csv_dir.empty()) {
                ensure_dir(a.csv_dir);
                const std::string stem = "centrality_" + std::string(to_string(measure));
                write_text_file(fs::path(a.csv_dir) / (stem + "_estimate.csv"), centrality_csv(est));
                row["csv_estimate"] = (fs::path(a.csv_dir) / (stem + "_estimate.csv")).string();
                if (ref) {
                    write_text_file(fs::path(a.csv_dir) / (stem + "_reference.csv"), centrality_csv(*ref));
                    row["csv_reference"] = (fs::path(a.csv_dir) / (stem + "_reference.csv")).string();
                }
            }
            rows.push_back(row);
        }
        report["centrality"] = rows;
    }

    if (!a.theory.empty()) {
        const auto parts = split(a.theory, ',');
        if (parts.size() != 4) throw UsageError("--theory expects P,n,k,zeta");
        const auto graphs = to_number<std::size_t>(parts[0], "P");
        const auto nodes = to_number<std::size_t>(parts[1], "n");
        const auto k = to_number<int>(parts[2], "k");
        const auto zeta = to_number<double>(parts[3], "zeta");
        const auto t = theorem_condition(graphs, nodes, k, zeta);
        Json lemma = Json::array();
        for (double eps : kLemmaEps) {
            const auto b = lemma1_bound(graphs, nodes, k, eps);
            lemma.push_back({{"eps", eps}, {"applicable", b.applicable}, {"bound", b.value}});
        }
        report["theory"] = {{"P", graphs},
                            {"n", nodes},
                            {"k", k},
                            {"zeta", zeta},
                            {"num_graphs_k", t.num_graphs_k},
                            {"delta_m", t.delta_m},
                            {"eta_cut", t.eta_cut},
                            {"eps_s", t.eps_s},
                            {"failure_probability", t.failure_probability},
                            {"n_threshold", t.n_threshold},
                            {"sample_size_ok", t.sample_size_ok},
                            {"applies", t.applies},
                            {"vacuous", t.vacuous},
                            {"lemma1", lemma}};
    }

    const std::string text = report.dump(2) + "\n";
    if (!a.out.empty()) write_text_file(a.out, text);
    out << text;
    return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Graphon estimation from motif moments"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "momentnet 1.0");
    const unsigned jobs_default = default_jobs();

    SampleArgs sa;
    auto* sample = app.add_subcommand("sample", "draw graphs from a graphon");
    sample->add_option("--graphon", sa.graphon, "id | constant:p | cosine | grid:PATH | model:PATH")->required();
    sample->add_option("--n", sa.sizes, "comma-separated node counts")->required();
    sample->add_option("--count", sa.count, "replicates per node count")->capture_default_str();
    sample->add_option("--seed", sa.seed)->capture_default_str();
    sample->add_option("--out", sa.out, "output directory")->required();

    CensusArgs ca;
    ca.jobs = jobs_default;
    auto* census_cmd = app.add_subcommand("census", "count motifs in a directory of .edges files");
    census_cmd->add_option("--in", ca.in)->required();
    census_cmd->add_option("--out", ca.out)->required();
    census_cmd->add_option("--jobs", ca.jobs)->check(CLI::PositiveNumber)->capture_default_str();

    EstimateArgs ea;
    ea.jobs = jobs_default;
    auto* estimate = app.add_subcommand("estimate", "fit a network graphon to a census file");
    estimate->add_option("--moments", ea.moments, "census JSON or bare 9-element array")->required();
    estimate->add_option("--config", ea.config, "key = value training config");
    estimate->add_option("--set", ea.overrides, "override one config key (key=value)");
    estimate->add_option("--out-model", ea.out_model)->required();
    estimate->add_option("--report", ea.report, "training report JSON (default: <out-model>.report.json)");
    estimate->add_option("--dump-grid", ea.dump_grid, "write an R x R grid CSV of the fit");
    estimate->add_option("--grid-out", ea.grid_out, "grid CSV path (default: <out-model>.grid.csv)");
    estimate->add_option("--jobs", ea.jobs)->check(CLI::PositiveNumber)->capture_default_str();

    MixupArgs ma;
    ma.jobs = jobs_default;
    auto* mixup = app.add_subcommand("mixup", "moment-space mixup between two classes");
    mixup->add_option("--class-a", ma.class_a)->required();
    mixup->add_option("--class-b", ma.class_b)->required();
    mixup->add_option("--alpha", ma.alpha)->capture_default_str();
    mixup->add_option("--n-sample", ma.n_sample, "graphs averaged per class")->capture_default_str();
    mixup->add_option("--n-nodes", ma.n_nodes)->capture_default_str();
    mixup->add_option("--n-graphs", ma.n_graphs)->capture_default_str();
    mixup->add_option("--labels", ma.labels, "class indices yI,yJ")->capture_default_str();
    mixup->add_option("--config", ma.config);
    mixup->add_option("--set", ma.overrides, "override one config key (key=value)");
    mixup->add_option("--seed", ma.seed)->capture_default_str();
    mixup->add_option("--out", ma.out)->required();
    mixup->add_option("--jobs", ma.jobs)->check(CLI::PositiveNumber)->capture_default_str();

    EvalArgs va;
    auto* eval_cmd = app.add_subcommand(
        "eval",
        "compare an estimate with a reference graphon. Distances are moment l2/linf and the "
        "degree-aligned MSE; both are cheap stand-ins for a Gromov-Wasserstein distance.");
    eval_cmd->add_option("--model", va.model);
    eval_cmd->add_option("--grid", va.grid);
    eval_cmd->add_option("--truth", va.truth, "graphon spec of the reference");
    eval_cmd->add_option("--resolution", va.resolution)->capture_default_str();
    eval_cmd->add_option("--samples", va.samples, "Monte-Carlo tuples for model moments")->capture_default_str();
    eval_cmd->add_option("--quadrature", va.quadrature, "midpoint grid for exact moments")->capture_default_str();
    eval_cmd->add_option("--centrality", va.centrality, "MEASURE[:PARAM], repeatable");
    eval_cmd->add_option("--theory", va.theory, "P,n,k,zeta");
    eval_cmd->add_option("--seed", va.seed)->capture_default_str();
    eval_cmd->add_option("--out", va.out, "report JSON path");
    eval_cmd->add_option("--csv-dir", va.csv_dir, "directory for centrality CSVs");

    std::vector<const char*> argv;
    for (const auto& s : args) argv.push_back(s.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err);
    }

    try {
        if (*sample) return cmd_sample(sa, out);
        if (*census_cmd) return cmd_census(ca, out);
        if (*estimate) return cmd_estimate(ea, out, err);
        if (*mixup) return cmd_mixup(ma, out, err);
        if (*eval_cmd) return cmd_eval(va, out);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}

}  // namespace momentnet::cli
