#pragma once

// Monte Carlo sweeps over noise level (sigma) and per-edge sample count (N).
//
// Each trial draws a ground-truth metric theta uniformly from (0, box)^C(n,2)
// conditioned on the triangle inequality, measures it through the noise
// model, and compares the estimate with u = slhc(theta). Trial t at grid
// index g uses its own generator seeded with derive_seed(master, g, t), so
// results do not depend on scheduling.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <fstream>
#include <functional>
#include <map>
#include <mutex>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "slhc/dendrogram.hpp"
#include "slhc/detail/numeric_text.hpp"
#include "slhc/edge_vector.hpp"
#include "slhc/error.hpp"
#include "slhc/estimate.hpp"
#include "slhc/noise.hpp"
#include "slhc/random.hpp"
#include "slhc/slhc.hpp"

namespace slhc {

enum class SweepKind { sigma, nsamples };

inline std::string to_string(SweepKind kind) { return kind == SweepKind::sigma ? "sigma" : "nsamples"; }

inline SweepKind parse_sweep_kind(const std::string& text) {
    if (text == "sigma") {
        return SweepKind::sigma;
    }
    if (text == "nsamples") {
        return SweepKind::nsamples;
    }
    throw ArgumentError("unknown sweep kind '" + text + "' (expected sigma or nsamples)");
}

/// Grid text forms:
///   "v1,v2,..."              explicit values
///   "exp:<from>:<to>:<step>" e^k for k = from, from+step, ... up to to
///   "pow2:<from>:<to>[:<step>]" 2^k for integer k
inline std::vector<double> parse_grid(const std::string& spec) {
    auto fields = [](const std::string& text, char sep) {
        std::vector<std::string> out;
        std::stringstream in(text);
        std::string item;
        while (std::getline(in, item, sep)) {
            out.push_back(item);
        }
        return out;
    };
    std::vector<double> grid;
    if (spec.rfind("exp:", 0) == 0 || spec.rfind("pow2:", 0) == 0) {
        const bool exp_grid = spec[0] == 'e';
        const auto parts = fields(spec, ':');
        if (parts.size() < 3 || parts.size() > 4 || (exp_grid && parts.size() != 4)) {
            throw ArgumentError("malformed grid '" + spec + "'");
        }
        const double from = detail::parse_double(parts[1]);
        const double to = detail::parse_double(parts[2]);
        const double step = parts.size() == 4 ? detail::parse_double(parts[3]) : 1.0;
        if (step == 0.0 || (to - from) * step < 0.0) {
            throw ArgumentError("grid step does not reach the end point in '" + spec + "'");
        }
        const auto count = static_cast<std::size_t>(std::floor((to - from) / step + 1e-9)) + 1;
        for (std::size_t k = 0; k < count; ++k) {
            const double exponent = from + static_cast<double>(k) * step;
            grid.push_back(exp_grid ? std::exp(exponent) : std::exp2(std::round(exponent)));
        }
    } else {
        for (const auto& item : fields(spec, ',')) {
            if (!detail::trim(item).empty()) {
                grid.push_back(detail::parse_double(item));
            }
        }
    }
    if (grid.empty()) {
        throw ArgumentError("grid '" + spec + "' is empty");
    }
    return grid;
}

struct SweepConfig {
    std::size_t n_points = 5;
    double metric_box = 100.0;
    std::string model = "lognormal";
    std::map<std::string, double> model_params{{"sigma", 0.3}};
    SweepKind kind = SweepKind::sigma;
    std::vector<double> grid;
    std::size_t trials = 1000;
    std::uint64_t seed = 1;
    std::string out_path;
    bool fix_theta = false;
    std::size_t metric_attempts = 1000000;
    unsigned threads = 0;  // 0: hardware concurrency

    void validate() const {
        if (n_points < 3) {
            throw ArgumentError("n_points must be at least 3");
        }
        if (!(metric_box > 0.0) || !std::isfinite(metric_box)) {
            throw ArgumentError("metric box must be positive and finite");
        }
        if (trials < 1) {
            throw ArgumentError("trials must be at least 1");
        }
        if (grid.empty()) {
            throw ArgumentError("grid must be nonempty");
        }
        for (double g : grid) {
            if (!(g > 0.0) || !std::isfinite(g)) {
                throw ArgumentError("grid values must be positive and finite");
            }
            if (kind == SweepKind::nsamples && g != std::floor(g)) {
                throw ArgumentError("sample-count grid values must be integers");
            }
        }
    }
};

/// Default grids. Desk scale takes every other point of the full grids.
///   sigma:    e^0 .. e^-8 in steps of e^-0.2 (paper scale) or e^-0.4
///   nsamples: 2^0 .. 2^16 in powers of 2 (paper scale) or powers of 4
inline std::vector<double> default_grid(SweepKind kind, bool paper_scale) {
    if (kind == SweepKind::sigma) {
        return parse_grid(paper_scale ? "exp:0:-8:-0.2" : "exp:0:-8:-0.4");
    }
    return parse_grid(paper_scale ? "pow2:0:16:1" : "pow2:0:16:2");
}

inline constexpr std::size_t kPaperScaleTrials = 10000;
inline constexpr std::size_t kDeskScaleTrials = 1000;

struct TrialRecord {
    double grid_value = 0.0;
    std::uint64_t seed = 0;
    bool structure_correct = false;
    double l1_err = 0.0;
    bool mpple_equals_slhc = false;
};

struct SweepRow {
    SweepKind kind = SweepKind::sigma;
    double grid_value = 0.0;
    std::size_t trials = 0;
    double incorrect_ratio = 0.0;
    double mean_l1 = 0.0;
    double mpple_match_ratio = 0.0;
    std::uint64_t seed = 0;

    /// Binomial standard error of incorrect_ratio.
    double incorrect_std_error() const {
        return std::sqrt(incorrect_ratio * (1.0 - incorrect_ratio) / static_cast<double>(trials));
    }

    friend bool operator==(const SweepRow&, const SweepRow&) = default;
};

struct MetricDraw {
    MetricVector metric;
    std::size_t attempts;
};

/// Uniform draw from (0, box)^C(n,2) conditioned on the triangle inequality.
inline MetricDraw sample_ground_truth_metric(std::size_t n, double box, Rng& rng,
                                             std::size_t max_attempts = 1000000) {
    if (n < 3) {
        throw ArgumentError("ground-truth metrics need n >= 3");
    }
    std::uniform_real_distribution<double> uniform(0.0, box);
    std::vector<double> values(edge_count(n));
    for (std::size_t attempt = 1; attempt <= max_attempts; ++attempt) {
        for (double& v : values) {
            do {
                v = uniform(rng);
            } while (v == 0.0);
        }
        EdgeVector w(n, values);
        if (is_metric(w)) {
            return {MetricVector::assume_valid(std::move(w)), attempt};
        }
    }
    throw SamplingError("no metric found in " + std::to_string(max_attempts) +
                        " uniform draws (acceptance rate below " +
                        std::to_string(1.0 / static_cast<double>(max_attempts)) + ")");
}

namespace detail {

inline EdgeVector measure(const EdgeVector& theta, const NoiseModel& m, Rng& rng) {
    std::vector<double> x(theta.size());
    for (EdgeId e = 0; e < theta.size(); ++e) {
        x[e] = sample(m, theta[e], rng);
    }
    return EdgeVector(theta.points(), std::move(x));
}

inline NoiseModel model_for(const SweepConfig& cfg, double grid_value) {
    auto params = cfg.model_params;
    if (cfg.kind == SweepKind::sigma) {
        params["sigma"] = grid_value;
    }
    return make_model(cfg.model, params);
}

inline MetricVector trial_theta(const SweepConfig& cfg, Rng& rng) {
    if (cfg.fix_theta) {
        Rng shared(derive_seed(cfg.seed, ~std::uint64_t{0}, 0));
        return sample_ground_truth_metric(cfg.n_points, cfg.metric_box, shared,
                                          cfg.metric_attempts)
            .metric;
    }
    return sample_ground_truth_metric(cfg.n_points, cfg.metric_box, rng, cfg.metric_attempts)
        .metric;
}

}  // namespace detail

/// One trial at grid position grid_index. For a sigma sweep the estimate is
/// slhc of a single measurement (and MPPLE is compared against it); for an
/// N sweep it is the consistent estimator over N measurements, and the MPPLE
/// comparison uses the first of them.
inline TrialRecord run_trial(const SweepConfig& cfg, std::size_t grid_index,
                             std::size_t trial_index) {
    const double grid_value = cfg.grid.at(grid_index);
    const auto seed = derive_seed(cfg.seed, grid_index, trial_index);
    Rng rng(seed);
    const auto model = detail::model_for(cfg, grid_value);
    const auto theta = detail::trial_theta(cfg, rng);
    const auto truth = slhc(theta);

    TrialRecord record;
    record.grid_value = grid_value;
    record.seed = seed;

    if (cfg.kind == SweepKind::sigma) {
        const auto x = detail::measure(theta, model, rng);
        const auto estimate = slhc_estimator(x);
        record.structure_correct = same_structure(estimate, truth);
        record.l1_err = l1_error(estimate, truth);
        record.mpple_equals_slhc = mpple(x, model) == estimate;
    } else {
        const auto count = static_cast<std::size_t>(grid_value);
        std::vector<EdgeVector> samples;
        samples.reserve(count);
        for (std::size_t k = 0; k < count; ++k) {
            samples.push_back(detail::measure(theta, model, rng));
        }
        const auto estimate = consistent_estimator(samples, model);
        record.structure_correct = same_structure(estimate, truth);
        record.l1_err = l1_error(estimate, truth);
        record.mpple_equals_slhc = mpple(samples.front(), model) == slhc(samples.front());
    }
    return record;
}

inline SweepRow aggregate(SweepKind kind, double grid_value, std::uint64_t seed,
                          const std::vector<TrialRecord>& records) {
    SweepRow row;
    row.kind = kind;
    row.grid_value = grid_value;
    row.trials = records.size();
    row.seed = seed;
    std::size_t incorrect = 0, matches = 0;
    double l1 = 0.0;
    for (const auto& r : records) {
        incorrect += r.structure_correct ? 0 : 1;
        matches += r.mpple_equals_slhc ? 1 : 0;
        l1 += r.l1_err;
    }
    const double count = static_cast<double>(records.size());
    row.incorrect_ratio = static_cast<double>(incorrect) / count;
    row.mean_l1 = l1 / count;
    row.mpple_match_ratio = static_cast<double>(matches) / count;
    return row;
}

/// All trials at one grid point, split across worker threads. Records are
/// stored by trial index.
inline std::vector<TrialRecord> run_grid_point(const SweepConfig& cfg, std::size_t grid_index) {
    std::vector<TrialRecord> records(cfg.trials);
    unsigned workers = cfg.threads != 0 ? cfg.threads : std::thread::hardware_concurrency();
    workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(cfg.trials)));

    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto work = [&](unsigned worker) {
        try {
            for (std::size_t t = worker; t < cfg.trials; t += workers) {
                records[t] = run_trial(cfg, grid_index, t);
            }
        } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) {
                failure = std::current_exception();
            }
        }
    };
    if (workers == 1) {
        work(0);
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back(work, w);
        }
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
    return records;
}

using RowCallback = std::function<void(const SweepRow&)>;

/// Runs every grid point in order. on_row sees each row as soon as its grid
/// point completes, so a failure part-way keeps the finished rows.
inline std::vector<SweepRow> run_sweep(const SweepConfig& cfg, const RowCallback& on_row = {}) {
    cfg.validate();
    std::vector<SweepRow> rows;
    for (std::size_t g = 0; g < cfg.grid.size(); ++g) {
        const auto records = run_grid_point(cfg, g);
        rows.push_back(aggregate(cfg.kind, cfg.grid[g], cfg.seed, records));
        if (on_row) {
            on_row(rows.back());
        }
    }
    return rows;
}

inline std::vector<SweepRow> run_sigma_sweep(SweepConfig cfg, const RowCallback& on_row = {}) {
    if (cfg.kind != SweepKind::sigma) {
        throw ArgumentError("run_sigma_sweep needs a sigma sweep config");
    }
    return run_sweep(cfg, on_row);
}

inline std::vector<SweepRow> run_n_sweep(SweepConfig cfg, const RowCallback& on_row = {}) {
    if (cfg.kind != SweepKind::nsamples) {
        throw ArgumentError("run_n_sweep needs an nsamples sweep config");
    }
    return run_sweep(cfg, on_row);
}

inline constexpr const char* kCsvHeader =
    "sweep,grid_value,trials,incorrect_ratio,mean_l1,mpple_match_ratio,seed";

inline void write_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
    if (rows.empty()) {
        throw ArgumentError("no rows to write");
    }
    out << kCsvHeader << '\n';
    for (const auto& r : rows) {
        out << to_string(r.kind) << ',' << detail::format_double(r.grid_value) << ',' << r.trials
            << ',' << detail::format_double(r.incorrect_ratio) << ','
            << detail::format_double(r.mean_l1) << ','
            << detail::format_double(r.mpple_match_ratio) << ',' << r.seed << '\n';
    }
}

inline void emit_csv(const std::vector<SweepRow>& rows, const std::string& path) {
    if (rows.empty()) {
        throw ArgumentError("no rows to write");
    }
    std::ofstream out(path);
    if (!out) {
        throw IoError("cannot open '" + path + "' for writing");
    }
    write_csv(out, rows);
    out.flush();
    if (!out) {
        throw IoError("write to '" + path + "' failed");
    }
}

inline std::vector<SweepRow> read_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || detail::trim(line) != kCsvHeader) {
        throw ArgumentError("missing or unexpected CSV header");
    }
    std::vector<SweepRow> rows;
    while (std::getline(in, line)) {
        if (detail::trim(line).empty()) {
            continue;
        }
        std::vector<std::string> cells;
        std::stringstream fields(line);
        std::string cell;
        while (std::getline(fields, cell, ',')) {
            cells.push_back(cell);
        }
        if (cells.size() != 7) {
            throw ArgumentError("CSV row has " + std::to_string(cells.size()) + " fields");
        }
        SweepRow r;
        r.kind = parse_sweep_kind(std::string(detail::trim(cells[0])));
        r.grid_value = detail::parse_double(cells[1]);
        r.trials = detail::parse_integer<std::size_t>(cells[2]);
        r.incorrect_ratio = detail::parse_double(cells[3]);
        r.mean_l1 = detail::parse_double(cells[4]);
        r.mpple_match_ratio = detail::parse_double(cells[5]);
        r.seed = detail::parse_integer<std::uint64_t>(cells[6]);
        rows.push_back(r);
    }
    return rows;
}

inline std::vector<SweepRow> load_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open '" + path + "'");
    }
    return read_csv(in);
}

/// Key-value settings, from lines or whitespace-separated tokens of the form
/// key=value. '#' starts a comment.
inline std::map<std::string, std::string> parse_key_values(std::istream& in) {
    std::map<std::string, std::string> out;
    std::string line;
    while (std::getline(in, line)) {
        line = line.substr(0, line.find('#'));
        std::istringstream tokens(line);
        std::string token;
        while (tokens >> token) {
            const auto eq = token.find('=');
            if (eq == std::string::npos || eq == 0) {
                throw ArgumentError("expected key=value, got '" + token + "'");
            }
            out[token.substr(0, eq)] = token.substr(eq + 1);
        }
    }
    return out;
}

/// Applies settings to cfg. Recognised keys: n, box, model, sigma, kind,
/// trials, grid, seed, out, fix-theta, threads. Any other numeric key is
/// passed to the model as a parameter.
inline void apply_key_values(const std::map<std::string, std::string>& kv, SweepConfig& cfg) {
    auto flag = [](const std::string& v) {
        if (v == "1" || v == "true" || v == "yes") {
            return true;
        }
        if (v == "0" || v == "false" || v == "no") {
            return false;
        }
        throw ArgumentError("expected a boolean, got '" + v + "'");
    };
    for (const auto& [key, value] : kv) {
        if (key == "n") {
            cfg.n_points = detail::parse_integer<std::size_t>(value);
        } else if (key == "box") {
            cfg.metric_box = detail::parse_double(value);
        } else if (key == "model") {
            cfg.model = value;
        } else if (key == "kind") {
            cfg.kind = parse_sweep_kind(value);
        } else if (key == "trials") {
            cfg.trials = detail::parse_integer<std::size_t>(value);
        } else if (key == "grid") {
            cfg.grid = parse_grid(value);
        } else if (key == "seed") {
            cfg.seed = detail::parse_integer<std::uint64_t>(value);
        } else if (key == "out") {
            cfg.out_path = value;
        } else if (key == "fix-theta" || key == "fix_theta") {
            cfg.fix_theta = flag(value);
        } else if (key == "threads") {
            cfg.threads = detail::parse_integer<unsigned>(value);
        } else {
            cfg.model_params[key] = detail::parse_double(value);
        }
    }
}

}  // namespace slhc
