#pragma once

// End-to-end property suite. Each check runs a randomized experiment at a
// fixed seed and reports pass/fail with a one-line summary. The acceptance
// test binary and `slhc-estimate check` both run these.

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "slhc/dendrogram.hpp"
#include "slhc/edge_vector.hpp"
#include "slhc/estimate.hpp"
#include "slhc/generators.hpp"
#include "slhc/noise.hpp"
#include "slhc/random.hpp"
#include "slhc/simharness.hpp"
#include "slhc/slhc.hpp"
#include "slhc/trees.hpp"

namespace slhc::checks {

struct CheckResult {
    int id = 0;
    std::string name;
    bool passed = false;
    std::string detail;
    double seconds = 0.0;
};

struct Check {
    int id;
    std::string name;
    std::function<CheckResult(std::uint64_t seed)> run;
};

namespace detail {

class Stopwatch {
  public:
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

  private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

inline bool leq(const EdgeVector& a, const EdgeVector& b) {
    for (EdgeId e = 0; e < a.size(); ++e) {
        if (a[e] > b[e]) {
            return false;
        }
    }
    return true;
}

template <typename... Parts>
std::string describe(const Parts&... parts) {
    std::ostringstream out;
    out.precision(6);
    (out << ... << parts);
    return out.str();
}

inline double lognormal_normalization(const NoiseModel& m, double theta) {
    auto density = [&](double x) { return x <= 0.0 ? 0.0 : std::exp(log_density(m, theta, x)); };
    // Split at the median so the peak sits at a panel boundary.
    using Quadrature = boost::math::quadrature::gauss_kronrod<double, 61>;
    const double left = Quadrature::integrate(density, 0.0, theta, 15, 1e-13);
    const double right = Quadrature::integrate(density, theta,
                                               std::numeric_limits<double>::infinity(), 15, 1e-13);
    return left + right;
}

}  // namespace detail

/// slhc agrees with the brute-force minimax path oracle.
inline CheckResult oracle_equivalence(std::uint64_t seed) {
    detail::Stopwatch clock;
    Rng rng(seed);
    std::size_t mismatches = 0, cases = 0;
    for (std::size_t k = 0; k < 1000; ++k) {
        const std::size_t n = 3 + k % 5;
        const EdgeVector d = k < 500 ? random_weight(n, rng) : EdgeVector(random_metric(n, rng));
        mismatches += approx_equal(slhc(d), minimax_path_oracle(d), 1e-12) ? 0 : 1;
        ++cases;
    }
    const double elapsed = clock.seconds();
    return {1, "slhc equals minimax path oracle", mismatches == 0 && elapsed < 10.0,
            detail::describe(cases, " cases, ", mismatches, " mismatches, ", elapsed, " s (< 10 s)"),
            elapsed};
}

/// Idempotence, contraction and monotonicity of slhc.
inline CheckResult axioms(std::uint64_t seed) {
    detail::Stopwatch clock;
    Rng rng(seed);
    std::uniform_real_distribution<double> bump(0.0, 20.0);
    std::size_t violations = 0;
    for (std::size_t k = 0; k < 1000; ++k) {
        const auto d = random_metric(6, rng);
        const auto u = slhc(d);
        violations += slhc(u) == u ? 0 : 1;
        violations += detail::leq(u, d) ? 0 : 1;
        std::vector<double> larger(d.begin(), d.end());
        for (double& v : larger) {
            v += bump(rng);
        }
        violations += detail::leq(u, slhc(EdgeVector(6, larger))) ? 0 : 1;
    }
    return {2, "slhc axioms (idempotent, contracting, monotone)", violations == 0,
            detail::describe("1000 metrics n=6, ", violations, " violations"), clock.seconds()};
}

/// MST sets are unchanged by strictly increasing transforms.
inline CheckResult mst_invariance(std::uint64_t seed) {
    detail::Stopwatch clock;
    Rng rng(seed);
    const std::vector<std::function<double(double)>> transforms{
        [](double x) { return std::exp(x); },
        [](double x) { return x * x * x + x; },
        [](double x) { return 3.0 * x + 1.0; },
    };
    std::size_t failures = 0;
    for (std::size_t k = 0; k < 200; ++k) {
        const std::size_t n = 3 + k % 4;
        // Half tie-heavy, half generic on a range where exp stays moderate.
        const auto w = k % 2 == 0 ? random_tied_weight(n, rng) : random_weight(n, rng, 5.0);
        const auto reference = all_msts(w);
        for (const auto& g : transforms) {
            std::vector<double> mapped;
            for (double v : w) {
                mapped.push_back(g(v));
            }
            failures += all_msts(EdgeVector(n, mapped)) == reference ? 0 : 1;
        }
    }
    return {3, "MST sets invariant under increasing maps", failures == 0,
            detail::describe("200 weights x 3 transforms, ", failures, " set mismatches"),
            clock.seconds()};
}

/// Fiber samples, the lower corner u and the upper corner omega(T^u) all
/// map back to u.
inline CheckResult fiber_correctness(std::uint64_t seed) {
    detail::Stopwatch clock;
    Rng rng(seed);
    std::size_t failures = 0, points = 0, cells = 0;
    for (std::size_t k = 0; k < 50; ++k) {
        const auto u = slhc(sample_ground_truth_metric(5, 100.0, rng).metric);
        for (const auto& t : all_msts(u)) {
            ++cells;
            FiberSampler sampler(u, t);
            failures += in_fiber(u, u) ? 0 : 1;
            failures += in_fiber(sampler.upper(), u) ? 0 : 1;
            points += 2;
            for (int s = 0; s < 100; ++s) {
                const auto d = sampler(rng);
                failures += slhc(d) == u ? 0 : 1;
                ++points;
            }
        }
    }
    return {4, "fiber samples map back to u", failures == 0,
            detail::describe("50 ultrametrics, ", cells, " cells, ", points, " points, ", failures,
                             " failures"),
            clock.seconds()};
}

/// MPPLE and slhc(x) coincide exactly under log-normal noise.
inline CheckResult mpple_equals_slhc(std::uint64_t seed) {
    detail::Stopwatch clock;
    SweepConfig cfg;
    cfg.kind = SweepKind::sigma;
    cfg.grid = {1.0, 0.1};
    cfg.trials = 10000;
    cfg.seed = seed;
    const auto rows = run_sigma_sweep(cfg);
    bool all_match = true;
    std::ostringstream detail;
    for (const auto& r : rows) {
        all_match = all_match && r.mpple_match_ratio == 1.0;
        detail << "sigma=" << r.grid_value << " match=" << r.mpple_match_ratio << "; ";
    }
    detail << cfg.trials << " trials each";
    return {5, "MPPLE identical to slhc under log-normal noise", all_match, detail.str(),
            clock.seconds()};
}

/// Incorrect-structure ratio and error fall with sigma.
inline CheckResult sigma_trend(std::uint64_t seed) {
    detail::Stopwatch clock;
    SweepConfig cfg;
    cfg.kind = SweepKind::sigma;
    cfg.grid = {std::exp(0.0), std::exp(-2.0), std::exp(-4.0), std::exp(-6.0), std::exp(-8.0)};
    cfg.trials = 1000;
    cfg.seed = seed;
    const auto rows = run_sigma_sweep(cfg);
    bool monotone = true;
    for (std::size_t k = 0; k + 1 < rows.size(); ++k) {
        const double se = std::hypot(rows[k].incorrect_std_error(), rows[k + 1].incorrect_std_error());
        monotone = monotone && rows[k + 1].incorrect_ratio <= rows[k].incorrect_ratio + 2.0 * se;
    }
    const auto& last = rows.back();
    const bool small_ratio = last.incorrect_ratio < 0.01;
    const bool small_error = last.mean_l1 < 1e-3 * rows.front().mean_l1;
    const double elapsed = clock.seconds();
    std::ostringstream detail;
    detail.precision(4);
    detail << "ratios";
    for (const auto& r : rows) {
        detail << ' ' << r.incorrect_ratio;
    }
    detail << "; mean l1 e^0=" << rows.front().mean_l1 << " e^-8=" << last.mean_l1 << "; "
           << elapsed << " s (< 120 s)";
    return {6, "sigma sweep trend", monotone && small_ratio && small_error && elapsed < 120.0,
            detail.str(), elapsed};
}

/// Consistency: error of slhc(per-edge MLE) falls as N grows.
inline CheckResult consistency_trend(std::uint64_t seed) {
    detail::Stopwatch clock;
    SweepConfig cfg;
    cfg.kind = SweepKind::nsamples;
    cfg.model_params = {{"sigma", 0.3}};
    cfg.grid = {1, 4, 16, 64, 256, 1024, 4096};
    cfg.trials = 1000;
    cfg.seed = seed;
    const auto rows = run_n_sweep(cfg);
    bool decreasing = true;
    for (std::size_t k = 0; k + 1 < rows.size(); ++k) {
        decreasing = decreasing && rows[k + 1].mean_l1 < rows[k].mean_l1;
    }
    const bool small_error = rows.back().mean_l1 < 0.02 * rows.front().mean_l1;
    const bool small_ratio = rows.back().incorrect_ratio < 0.01;
    const double elapsed = clock.seconds();
    std::ostringstream detail;
    detail.precision(4);
    detail << "mean l1";
    for (const auto& r : rows) {
        detail << ' ' << r.mean_l1;
    }
    detail << (decreasing ? " (strictly decreasing)" : " (NOT strictly decreasing)")
           << "; error N=4096/N=1 " << rows.back().mean_l1 / rows.front().mean_l1
           << (small_error ? " < 0.02" : " >= 0.02") << "; ratio at N=4096 "
           << rows.back().incorrect_ratio << (small_ratio ? " < 0.01" : " >= 0.01") << "; "
           << elapsed << " s (< 180 s)";
    return {7, "consistency trend in N",
            decreasing && small_error && small_ratio && elapsed < 180.0, detail.str(), elapsed};
}

/// Normalization, MLE condition and profile-density slope of the log-normal
/// model.
inline CheckResult exponential_family(std::uint64_t) {
    detail::Stopwatch clock;
    double worst_norm = 0.0, worst_mle = 0.0, worst_slope = 0.0, worst_fd = 0.0;
    for (double sigma : {0.05, 0.3, 1.0}) {
        const auto m = lognormal_model(sigma);
        for (double theta : {0.5, 1.0, 7.0, 60.0}) {
            worst_norm = std::max(worst_norm, std::abs(detail::lognormal_normalization(m, theta) - 1.0));
        }
        for (int k = 0; k < 100; ++k) {
            const double x = std::exp(-4.0 + 9.0 * k / 99.0);  // e^-4 .. e^5
            worst_mle = std::max(worst_mle, std::abs(mean_suff_stat(m, mle_theta(m, x)) - m.suff_stat(x)));
            const double expected = -1.0 / x;
            worst_slope = std::max(worst_slope, std::abs(d_log_g(m, x) - expected) / std::abs(expected));
            const double fd = central_difference([&](double v) { return log_g(m, v); }, x);
            worst_fd = std::max(worst_fd, std::abs(fd - expected) / std::abs(expected));
        }
    }
    const bool ok = worst_norm < 1e-6 && worst_mle < 1e-8 && worst_slope < 1e-6 && worst_fd < 1e-6;
    return {8, "exponential-family machinery (log-normal)", ok,
            detail::describe("normalization err ", worst_norm, ", MLE residual ", worst_mle,
                             ", slope err analytic ", worst_slope, " / finite-diff ", worst_fd),
            clock.seconds()};
}

/// ultrametric_of(dendrogram_of(u)) = u.
inline CheckResult dendrogram_round_trip(std::uint64_t seed) {
    detail::Stopwatch clock;
    Rng rng(seed);
    std::size_t failures = 0;
    for (std::size_t k = 0; k < 1000; ++k) {
        const std::size_t n = 3 + k % 5;
        const auto u = random_ultrametric(n, rng);
        failures += ultrametric_of(dendrogram_of(u)) == u ? 0 : 1;
    }
    return {9, "dendrogram round trip", failures == 0,
            detail::describe("1000 ultrametrics n=3..7, ", failures, " failures"), clock.seconds()};
}

/// On-tree and off-tree likelihoods are uncorrelated over fiber-sampled
/// ground truths (n = 3).
inline CheckResult likelihood_factorization(std::uint64_t seed) {
    detail::Stopwatch clock;
    Rng rng(seed);
    const auto u = slhc(sample_ground_truth_metric(3, 100.0, rng).metric);
    const auto t = mst(u).tree();
    const auto result = onoff_likelihood_correlation(u, t, lognormal_model(0.3), 100000, rng);
    return {10, "on/off-tree likelihood factorization", std::abs(result.correlation) < 0.05,
            detail::describe("r = ", result.correlation, " over ", result.samples,
                             " fiber samples (acceptance ", result.acceptance_rate, ")"),
            clock.seconds()};
}

inline std::vector<Check> all_checks() {
    return {
        {1, "slhc equals minimax path oracle", oracle_equivalence},
        {2, "slhc axioms", axioms},
        {3, "MST invariance under increasing maps", mst_invariance},
        {4, "fiber correctness", fiber_correctness},
        {5, "MPPLE identical to slhc (log-normal)", mpple_equals_slhc},
        {6, "sigma sweep trend", sigma_trend},
        {7, "consistency trend in N", consistency_trend},
        {8, "exponential-family machinery", exponential_family},
        {9, "dendrogram round trip", dendrogram_round_trip},
        {10, "on/off-tree likelihood factorization", likelihood_factorization},
    };
}

inline std::string format_result(const CheckResult& r) {
    std::ostringstream out;
    out << (r.passed ? "[PASS] " : "[FAIL] ") << "criterion " << r.id << ": " << r.name << " -- "
        << r.detail;
    return out.str();
}

}  // namespace slhc::checks
