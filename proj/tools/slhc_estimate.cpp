// slhc-estimate: Monte Carlo sweeps, property checks, plots and one-off
// clustering of edge-vector fixture files.

#include <CLI11.hpp>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "slhc/checks.hpp"
#include "slhc/dendrogram.hpp"
#include "slhc/edge_vector.hpp"
#include "slhc/estimate.hpp"
#include "slhc/noise.hpp"
#include "slhc/plot.hpp"
#include "slhc/simharness.hpp"
#include "slhc/slhc.hpp"

namespace {

struct SweepOptions {
    std::string config_path;
    std::string kind = "sigma";
    std::size_t n = 5;
    double box = 100.0;
    std::string model = "lognormal";
    double sigma = 0.3;
    std::size_t trials = slhc::kDeskScaleTrials;
    std::string grid;
    std::uint64_t seed = 1;
    std::string out;
    bool paper_scale = false;
    bool fix_theta = false;
    unsigned threads = 0;
};

// Precedence: built-in defaults, then --config, then explicit flags.
slhc::SweepConfig build_config(const SweepOptions& opt, const CLI::App& cmd) {
    slhc::SweepConfig cfg;
    auto given = [&](const char* name) { return cmd.get_option(name)->count() > 0; };

    std::map<std::string, std::string> kv;
    if (!opt.config_path.empty()) {
        std::ifstream in(opt.config_path);
        if (!in) {
            throw slhc::IoError("cannot open config '" + opt.config_path + "'");
        }
        kv = slhc::parse_key_values(in);
    }
    const bool paper_scale = opt.paper_scale || kv.count("paper-scale") > 0;
    kv.erase("paper-scale");
    slhc::apply_key_values(kv, cfg);

    if (given("--kind")) cfg.kind = slhc::parse_sweep_kind(opt.kind);
    if (given("--n")) cfg.n_points = opt.n;
    if (given("--box")) cfg.metric_box = opt.box;
    if (given("--model")) cfg.model = opt.model;
    if (given("--sigma")) cfg.model_params["sigma"] = opt.sigma;
    if (given("--trials")) cfg.trials = opt.trials;
    if (given("--grid")) cfg.grid = slhc::parse_grid(opt.grid);
    if (given("--seed")) cfg.seed = opt.seed;
    if (given("--out")) cfg.out_path = opt.out;
    if (given("--threads")) cfg.threads = opt.threads;
    if (opt.fix_theta) cfg.fix_theta = true;

    if (paper_scale) {
        if (!given("--trials") && kv.count("trials") == 0) {
            cfg.trials = slhc::kPaperScaleTrials;
        }
    }
    if (cfg.grid.empty()) {
        cfg.grid = slhc::default_grid(cfg.kind, paper_scale);
    }
    cfg.validate();
    return cfg;
}

int run_sweep_command(const SweepOptions& opt, const CLI::App& cmd) {
    const auto cfg = build_config(opt, cmd);
    std::vector<slhc::SweepRow> rows;
    auto on_row = [&](const slhc::SweepRow& row) {
        rows.push_back(row);
        std::cerr << slhc::to_string(row.kind) << '=' << row.grid_value
                  << " incorrect=" << row.incorrect_ratio << " mean_l1=" << row.mean_l1
                  << " mpple_match=" << row.mpple_match_ratio << '\n';
    };
    auto flush = [&] {
        if (rows.empty()) {
            return;
        }
        if (cfg.out_path.empty()) {
            slhc::write_csv(std::cout, rows);
        } else {
            slhc::emit_csv(rows, cfg.out_path);
        }
    };
    try {
        slhc::run_sweep(cfg, on_row);
    } catch (...) {
        flush();
        throw;
    }
    flush();
    return 0;
}

int run_check_command(std::uint64_t seed, const std::vector<int>& only) {
    bool all_passed = true;
    for (const auto& check : slhc::checks::all_checks()) {
        if (!only.empty() && std::find(only.begin(), only.end(), check.id) == only.end()) {
            continue;
        }
        const auto result = check.run(seed);
        std::cout << slhc::checks::format_result(result) << std::endl;
        all_passed = all_passed && result.passed;
    }
    return all_passed ? 0 : 1;
}

int run_plot_command(const std::vector<std::string>& inputs, const std::string& out) {
    std::vector<slhc::PlotSeries> series;
    for (const auto& path : inputs) {
        series.push_back({std::filesystem::path(path).stem().string(), slhc::load_csv(path)});
    }
    slhc::write_svg(series, out);
    return 0;
}

int run_cluster_command(const std::string& in_path, const std::string& model_name, double sigma) {
    std::ifstream in(in_path);
    if (!in) {
        throw slhc::IoError("cannot open '" + in_path + "'");
    }
    const auto x = slhc::read_edge_vector(in);
    const auto u = model_name.empty() ? slhc::slhc_estimator(x)
                                      : slhc::mpple(x, slhc::make_model(model_name, {{"sigma", sigma}}));
    slhc::write_edge_vector(std::cout, u);
    std::cout << slhc::to_newick(slhc::dendrogram_of(u)) << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Single-linkage clustering as an ultrametric estimator"};
    app.require_subcommand(1);

    SweepOptions sweep;
    auto* sweep_cmd = app.add_subcommand("sweep", "Run a sigma or sample-count Monte Carlo sweep");
    sweep_cmd->add_option("--config", sweep.config_path, "key=value settings file");
    sweep_cmd->add_option("--kind", sweep.kind, "sigma | nsamples")
        ->check(CLI::IsMember({"sigma", "nsamples"}));
    sweep_cmd->add_option("--n", sweep.n, "number of points");
    sweep_cmd->add_option("--box", sweep.box, "ground-truth values are uniform on (0, box)");
    sweep_cmd->add_option("--model", sweep.model, "noise model name");
    sweep_cmd->add_option("--sigma", sweep.sigma, "model sigma (fixed sigma for nsamples sweeps)");
    sweep_cmd->add_option("--trials", sweep.trials, "trials per grid point");
    sweep_cmd->add_option("--grid", sweep.grid,
                          "grid: v1,v2,... | exp:<from>:<to>:<step> | pow2:<from>:<to>[:<step>]");
    sweep_cmd->add_option("--seed", sweep.seed, "master seed");
    sweep_cmd->add_option("--out", sweep.out, "CSV output path (stdout if omitted)");
    sweep_cmd->add_option("--threads", sweep.threads, "worker threads (0: all cores)");
    sweep_cmd->add_flag("--paper-scale", sweep.paper_scale, "10000 trials and the full grid");
    sweep_cmd->add_flag("--fix-theta", sweep.fix_theta, "hold one ground truth across all trials");

    std::uint64_t check_seed = 20240501;
    std::vector<int> check_only;
    auto* check_cmd = app.add_subcommand("check", "Run the property suite");
    check_cmd->add_option("--seed", check_seed, "seed for every check");
    check_cmd->add_option("--only", check_only, "run only these criterion ids");

    std::vector<std::string> plot_inputs;
    std::string plot_out;
    auto* plot_cmd = app.add_subcommand("plot", "Render sweep CSVs as an SVG chart");
    plot_cmd->add_option("--in", plot_inputs, "sweep CSV (repeat for several series)")->required();
    plot_cmd->add_option("--out", plot_out, "SVG output path")->required();

    std::string cluster_in, cluster_model;
    double cluster_sigma = 0.3;
    auto* cluster_cmd =
        app.add_subcommand("cluster", "Cluster an edge-vector file and print the ultrametric");
    cluster_cmd->add_option("--in", cluster_in, "edge-vector text file")->required();
    cluster_cmd->add_option("--model", cluster_model, "use MPPLE under this noise model");
    cluster_cmd->add_option("--sigma", cluster_sigma, "model sigma");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*sweep_cmd) {
            return run_sweep_command(sweep, *sweep_cmd);
        }
        if (*check_cmd) {
            return run_check_command(check_seed, check_only);
        }
        if (*plot_cmd) {
            return run_plot_command(plot_inputs, plot_out);
        }
        if (*cluster_cmd) {
            return run_cluster_command(cluster_in, cluster_model, cluster_sigma);
        }
    } catch (const slhc::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
