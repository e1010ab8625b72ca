// kdag — simulation and analysis of majority-vote broadcasting on uniform
// random recursive k-DAGs: regime analysis, DAG/urn simulation, exact
// red-count distributions, parameter sweeps and the recursive-tree
// subtree decomposition.

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "kdag/analytic.hpp"
#include "kdag/dag_sim.hpp"
#include "kdag/errors.hpp"
#include "kdag/exact_dist.hpp"
#include "kdag/experiments.hpp"
#include "kdag/io_util.hpp"
#include "kdag/parallel.hpp"
#include "kdag/tree_decomp.hpp"
#include "kdag/urn_sim.hpp"
#include "kdag/version.hpp"

namespace {

using nlohmann::json;

constexpr int EXIT_PARAM = 2;
constexpr int EXIT_RESOURCE = 3;
constexpr int EXIT_IO = 4;

uint64_t seed_fallback() {
    if (const char* env = std::getenv("KDAG_SEED")) {
        try {
            return std::stoull(env);
        } catch (const std::exception&) {
            throw kdag::invalid_parameter(std::string("KDAG_SEED is not an integer: ") + env);
        }
    }
    return 0;
}

void write_manifest(const std::string& out_dir, const std::string& command,
                    const json& config) {
    json manifest;
    manifest["tool"] = "kdag";
    manifest["version"] = kdag::TOOL_VERSION;
    manifest["command"] = command;
    manifest["config"] = config;
    kdag::write_file(out_dir + "/manifest.json", manifest.dump(2) + "\n");
}

json regime_report_json(const kdag::RegimeReport& report) {
    json j;
    j["k"] = report.k;
    j["p"] = report.p;
    j["alpha_k"] = report.alpha_k;
    j["p_low"] = report.p_low;
    j["p_high"] = report.p_high;
    j["regime"] = kdag::regime_name(report.regime);
    if (report.beta1) {
        j["beta1"] = *report.beta1;
        j["beta2"] = *report.beta2;
    }
    return j;
}

struct AnalyzeArgs {
    int k = 3;
    double p = 0.0;
    std::optional<int> ell;
    std::string format = "text";
};

int cmd_analyze(const AnalyzeArgs& args) {
    const kdag::RegimeReport report = kdag::classify_regime(args.k, args.p);
    json j = regime_report_json(report);
    if (const auto bound = kdag::beta1_upper_bound(args.k, args.p))
        j["beta1_upper_bound"] = *bound;
    if (args.ell) {
        const auto lower = kdag::error_lower_bound(args.k, *args.ell);
        j["ell"] = *args.ell;
        j["h_k"] = lower.h_k;
        j["error_lower_bound"] = lower.bound;
    }

    if (args.format == "json") {
        std::cout << j.dump(2) << "\n";
        return 0;
    }
    std::cout << "k = " << args.k << ", p = " << kdag::fmt_double(args.p) << "\n"
              << "alpha_k = " << kdag::fmt_double(report.alpha_k) << "\n"
              << "thresholds: p_low = " << kdag::fmt_double(report.p_low)
              << ", p_high = " << kdag::fmt_double(report.p_high) << "\n"
              << "regime: " << kdag::regime_name(report.regime) << "\n";
    if (report.beta1)
        std::cout << "fixed points: beta1 = " << kdag::fmt_double(*report.beta1)
                  << ", beta2 = " << kdag::fmt_double(*report.beta2) << "\n";
    if (j.contains("beta1_upper_bound"))
        std::cout << "beta1 upper bound: " << kdag::fmt_double(j["beta1_upper_bound"]) << "\n";
    if (args.ell)
        std::cout << "error lower bound (ell = " << *args.ell
                  << "): h_k = " << kdag::fmt_double(j["h_k"])
                  << ", bound = " << kdag::fmt_double(j["error_lower_bound"]) << "\n";
    return 0;
}

struct SimulateArgs {
    kdag::ModelParams params;
    uint64_t horizon = 100;
    uint64_t trials = 1;
    std::string mode = "urn";
    uint64_t seed = 0;
    bool seed_set = false;
    uint64_t stride = 0;
    std::string out_dir = "kdag_simulate";
    unsigned threads = 0;
    std::string export_dag;
    std::string export_format = "json";
};

int cmd_simulate(const SimulateArgs& args) {
    if (args.mode != "urn" && args.mode != "dag")
        throw kdag::invalid_parameter("mode must be urn or dag");
    args.params.validate();
    const uint64_t seed = args.seed_set ? args.seed : seed_fallback();
    const auto k = static_cast<uint64_t>(args.params.k);
    const uint64_t stride = args.stride != 0
                                ? args.stride
                                : std::max<uint64_t>(1, (args.horizon - k) / 1000);

    std::vector<kdag::Trajectory> trajectories(args.trials);
    std::vector<uint8_t> errors(args.trials, 0);

    if (args.mode == "urn") {
        kdag::parallel_for_index(args.trials, args.threads, [&](uint64_t trial) {
            kdag::RandomStream rng(seed, trial);
            trajectories[trial] = kdag::run_urn(args.params, args.horizon, rng,
                                                kdag::RecordMode::thinned(stride));
            const auto& last = trajectories[trial].points.back();
            const uint64_t twice_red = 2 * last.red;
            errors[trial] =
                (twice_red < last.n || (twice_red == last.n && rng.coin())) ? 1 : 0;
        });
    } else {
        kdag::parallel_for_index(args.trials, args.threads, [&](uint64_t trial) {
            kdag::RandomStream rng(seed, trial);
            const kdag::KDag dag = kdag::grow(args.params, args.horizon, rng);
            errors[trial] = kdag::majority_bit(dag, rng) != kdag::Color::Red ? 1 : 0;
            const auto path = dag.red_count_path();
            kdag::Trajectory traj{args.params, seed, trial, {}};
            for (uint64_t m = k; m <= args.horizon; ++m)
                if ((m - k) % stride == 0 || m == args.horizon)
                    traj.points.push_back({m, path[m - k]});
            trajectories[trial] = std::move(traj);
            if (trial == 0 && !args.export_dag.empty())
                kdag::write_file(args.export_dag,
                                 kdag::export_edges(dag, kdag::dag_format_from_name(
                                                             args.export_format)));
        });
    }

    uint64_t n_err = 0;
    for (uint8_t e : errors)
        n_err += e;
    const auto ci = kdag::wilson_interval(n_err, args.trials);
    const double error_hat = static_cast<double>(n_err) / static_cast<double>(args.trials);

    kdag::ensure_directory(args.out_dir);
    std::string summary = "k,p,ell,horizon,trials,mode,error_hat,ci_lo,ci_hi,seed\n";
    summary += std::to_string(args.params.k) + ',' + kdag::fmt_double(args.params.p) + ',' +
               std::to_string(args.params.ell) + ',' + std::to_string(args.horizon) + ',' +
               std::to_string(args.trials) + ',' + args.mode + ',' +
               kdag::fmt_double(error_hat) + ',' + kdag::fmt_double(ci.lo) + ',' +
               kdag::fmt_double(ci.hi) + ',' + std::to_string(seed) + '\n';
    kdag::write_file(args.out_dir + "/summary.csv", summary);
    kdag::write_file(args.out_dir + "/trajectories.csv",
                     kdag::trajectories_csv(trajectories));

    json config;
    config["k"] = args.params.k;
    config["p"] = args.params.p;
    config["ell"] = args.params.ell;
    config["horizon"] = args.horizon;
    config["trials"] = args.trials;
    config["mode"] = args.mode;
    config["seed"] = seed;
    config["stride"] = stride;
    config["threads"] = args.threads;
    write_manifest(args.out_dir, "simulate", config);

    std::cout << "error_hat = " << kdag::fmt_double(error_hat) << " [" << kdag::fmt_double(ci.lo)
              << ", " << kdag::fmt_double(ci.hi) << "]\n"
              << "outputs in " << args.out_dir << "\n";
    return 0;
}

struct ExactArgs {
    kdag::ModelParams params;
    uint64_t n = 100;
    uint64_t max_n = kdag::EXACT_FORWARD_WARN_N;
    std::string out_dir = "kdag_exact";
};

int cmd_exact(const ExactArgs& args) {
    if (args.n > args.max_n)
        throw kdag::resource_limit(
            "n = " + std::to_string(args.n) + " exceeds the guard of " +
            std::to_string(args.max_n) + " (raise with --max-n, hard cap " +
            std::to_string(kdag::EXACT_FORWARD_MAX_N) + ")");
    const kdag::ExactDistribution dist = kdag::forward(args.params, args.n);
    const double error = kdag::exact_majority_error(dist);

    kdag::ensure_directory(args.out_dir);
    kdag::write_file(args.out_dir + "/distribution.csv", dist.to_csv());
    kdag::write_file(args.out_dir + "/distribution.json", dist.to_json());

    json config;
    config["k"] = args.params.k;
    config["p"] = args.params.p;
    config["ell"] = args.params.ell;
    config["n"] = args.n;
    config["max_n"] = args.max_n;
    write_manifest(args.out_dir, "exact", config);

    std::cout << "exact majority error at n = " << args.n << ": " << kdag::fmt_double(error)
              << "\noutputs in " << args.out_dir << "\n";
    return 0;
}

struct SweepArgs {
    std::string config_path;
    std::string out_dir;
    std::optional<uint64_t> seed;
    std::optional<uint64_t> trials;
    std::optional<uint64_t> stride;
    unsigned threads = 0;
    bool emit_json = false;
    bool keep_paths = false;
};

int cmd_sweep(const SweepArgs& args) {
    kdag::SweepSpec spec = kdag::parse_sweep_spec(kdag::read_file(args.config_path));
    if (args.seed)
        spec.seed = *args.seed;
    if (args.trials)
        spec.trials = *args.trials;
    if (args.stride)
        spec.stride = *args.stride;
    if (!args.out_dir.empty())
        spec.out_dir = args.out_dir;
    if (spec.out_dir.empty())
        spec.out_dir = "kdag_sweep";
    spec.validate();

    const kdag::SweepResult result = kdag::run_sweep(spec, args.threads, args.keep_paths);

    kdag::ensure_directory(spec.out_dir);
    kdag::write_file(spec.out_dir + "/sweep.csv", kdag::sweep_csv(result.cells, spec.seed));
    if (args.emit_json || args.keep_paths)
        kdag::write_file(spec.out_dir + "/sweep.json", kdag::sweep_json(result, spec.seed));

    json config;
    config["k"] = spec.ks;
    config["p"] = spec.ps;
    if (spec.ell)
        config["ell"] = *spec.ell;
    else
        config["ell"] = "auto";
    config["horizon"] = spec.horizons;
    config["trials"] = spec.trials;
    config["seed"] = spec.seed;
    config["stride"] = spec.stride;
    config["window_fraction"] = spec.window_fraction;
    config["delta"] = spec.delta;
    config["threads"] = args.threads;
    config["paths"] = args.keep_paths;
    write_manifest(spec.out_dir, "sweep", config);

    std::cout << result.cells.size() << " cells -> " << spec.out_dir << "/sweep.csv\n";
    return 0;
}

struct TreeArgs {
    double p = 0.0;
    uint64_t n = 1000;
    uint64_t trials = 1000;
    uint64_t seed = 0;
    bool seed_set = false;
    unsigned threads = 0;
    std::string out_dir = "kdag_tree";
    bool dump_instance = false;
};

int cmd_tree(const TreeArgs& args) {
    const uint64_t seed = args.seed_set ? args.seed : seed_fallback();
    const kdag::DeltaEstimate est =
        kdag::estimate_delta_positive(args.p, args.n, args.trials, seed, args.threads);

    kdag::ensure_directory(args.out_dir);
    json j;
    j["p"] = args.p;
    j["n"] = args.n;
    j["trials"] = args.trials;
    j["seed"] = seed;
    j["delta_positive_estimate"] = est.estimate;
    j["ci_lo"] = est.ci.lo;
    j["ci_hi"] = est.ci.hi;
    kdag::write_file(args.out_dir + "/tree.json", j.dump(2) + "\n");

    if (args.dump_instance) {
        kdag::RandomStream rng(seed, 0);
        const kdag::MarkedTree tree = kdag::grow_marked_tree(args.p, args.n, rng);
        const kdag::Decomposition d = kdag::decompose(tree);
        json inst = json::parse(tree.to_json());
        inst["subtree_size"] = d.subtree_size;
        inst["delta"] = d.delta;
        inst["remainder"] = d.remainder;
        kdag::write_file(args.out_dir + "/instance.json", inst.dump() + "\n");
    }

    json config;
    config["p"] = args.p;
    config["n"] = args.n;
    config["trials"] = args.trials;
    config["seed"] = seed;
    config["threads"] = args.threads;
    config["dump_instance"] = args.dump_instance;
    write_manifest(args.out_dir, "tree", config);

    std::cout << "P{delta > 0} ~= " << kdag::fmt_double(est.estimate) << " ["
              << kdag::fmt_double(est.ci.lo) << ", " << kdag::fmt_double(est.ci.hi) << "]\n"
              << "outputs in " << args.out_dir << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"broadcasting on uniform random recursive k-DAGs"};
    app.set_version_flag("--version", kdag::TOOL_VERSION);
    app.require_subcommand(1);

    AnalyzeArgs analyze_args;
    auto* analyze = app.add_subcommand("analyze", "regime report for (k, p)");
    analyze->add_option("--k", analyze_args.k, "number of parents (odd)")->required();
    analyze->add_option("--p", analyze_args.p, "mutation probability")->required();
    analyze->add_option("--ell", analyze_args.ell,
                        "initial red count; adds the universal error lower bound");
    analyze->add_option("--format", analyze_args.format, "text or json")
        ->check(CLI::IsMember({"text", "json"}));

    SimulateArgs sim_args;
    auto* simulate = app.add_subcommand("simulate", "Monte Carlo trials of one parameter cell");
    simulate->add_option("--k", sim_args.params.k, "number of parents (odd)")->required();
    simulate->add_option("--p", sim_args.params.p, "mutation probability")->required();
    simulate->add_option("--ell", sim_args.params.ell, "initial red count")->required();
    simulate->add_option("--n", sim_args.horizon, "horizon")->required();
    simulate->add_option("--trials", sim_args.trials, "number of trials");
    simulate->add_option("--mode", sim_args.mode, "urn or dag")
        ->check(CLI::IsMember({"urn", "dag"}));
    simulate->add_option("--seed", sim_args.seed, "master seed (fallback: KDAG_SEED, then 0)")
        ->trigger_on_parse()
        ->each([&sim_args](const std::string&) { sim_args.seed_set = true; });
    simulate->add_option("--stride", sim_args.stride, "trajectory thinning stride (0 = auto)");
    simulate->add_option("--out", sim_args.out_dir, "output directory");
    simulate->add_option("--threads", sim_args.threads, "worker threads (0 = hardware)");
    simulate->add_option("--export-dag", sim_args.export_dag,
                         "write the first trial's DAG to this file (dag mode)");
    simulate->add_option("--export-format", sim_args.export_format, "csv, dot or json");

    ExactArgs exact_args;
    auto* exact = app.add_subcommand("exact", "exact red-count distribution and error");
    exact->add_option("--k", exact_args.params.k, "number of parents (odd)")->required();
    exact->add_option("--p", exact_args.params.p, "mutation probability")->required();
    exact->add_option("--ell", exact_args.params.ell, "initial red count")->required();
    exact->add_option("--n", exact_args.n, "horizon")->required();
    exact->add_option("--max-n", exact_args.max_n,
                      "raise the O(n^2) runtime guard (hard cap 100000)");
    exact->add_option("--out", exact_args.out_dir, "output directory");

    SweepArgs sweep_args;
    auto* sweep = app.add_subcommand("sweep", "grid of cells from a key = value spec file");
    sweep->add_option("--config", sweep_args.config_path, "sweep spec file")->required();
    sweep->add_option("--out", sweep_args.out_dir, "output directory (overrides spec)");
    sweep->add_option("--seed", sweep_args.seed, "master seed (overrides spec)");
    sweep->add_option("--trials", sweep_args.trials, "trials per cell (overrides spec)");
    sweep->add_option("--stride", sweep_args.stride, "thinning stride (overrides spec)");
    sweep->add_option("--threads", sweep_args.threads, "worker threads (0 = hardware)");
    sweep->add_flag("--json", sweep_args.emit_json, "also write sweep.json");
    sweep->add_flag("--paths", sweep_args.keep_paths,
                    "keep thinned trajectories in sweep.json");

    TreeArgs tree_args;
    auto* tree = app.add_subcommand("tree", "subtree decomposition estimate of P{delta > 0}");
    tree->add_option("--p", tree_args.p, "mutation probability")->required();
    tree->add_option("--n", tree_args.n, "tree size (vertices 0..n)")->required();
    tree->add_option("--trials", tree_args.trials, "number of trials");
    tree->add_option("--seed", tree_args.seed, "master seed (fallback: KDAG_SEED, then 0)")
        ->trigger_on_parse()
        ->each([&tree_args](const std::string&) { tree_args.seed_set = true; });
    tree->add_option("--threads", tree_args.threads, "worker threads (0 = hardware)");
    tree->add_option("--out", tree_args.out_dir, "output directory");
    tree->add_flag("--dump-instance", tree_args.dump_instance,
                   "write one decomposed instance as JSON");

    try {
        app.parse(argc, argv);
        if (analyze->parsed())
            return cmd_analyze(analyze_args);
        if (simulate->parsed())
            return cmd_simulate(sim_args);
        if (exact->parsed())
            return cmd_exact(exact_args);
        if (sweep->parsed())
            return cmd_sweep(sweep_args);
        if (tree->parsed())
            return cmd_tree(tree_args);
        return EXIT_PARAM;
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return EXIT_PARAM;
    } catch (const kdag::resource_limit& e) {
        std::cerr << "error: " << e.what() << "\n";
        return EXIT_RESOURCE;
    } catch (const kdag::io_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return EXIT_IO;
    } catch (const kdag::error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return EXIT_PARAM;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 1;
    }
}
