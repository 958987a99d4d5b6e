#pragma once

// Single-parameter exponential-family measurement models
//
//   G_theta(x) = h(x) exp(C(theta) T(x) - A(theta)),   x > 0,
//
// with the per-measurement MLE theta_hat(x) and the profile density
// g(x) = G_{theta_hat(x)}(x). The log-normal family (median theta, log-scale
// sigma) ships as the reference instance.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <numbers>
#include <numeric>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "slhc/error.hpp"
#include "slhc/random.hpp"

namespace slhc {

struct Interval {
    double lo = 0.0;
    double hi = std::numeric_limits<double>::infinity();

    bool contains_open(double v) const noexcept { return v > lo && v < hi; }
};

using ScalarFn = std::function<double(double)>;

/// An exponential-family noise model given by its hooks. Derivative hooks
/// are analytic; tests cross-check each one against central differences.
struct NoiseModel {
    std::string name;
    std::map<std::string, double> params;

    ScalarFn log_h;
    ScalarFn suff_stat;      // T(x)
    ScalarFn natural_map;    // C(theta)
    ScalarFn log_partition;  // A(theta)

    ScalarFn d_log_h;
    ScalarFn d_suff_stat;
    ScalarFn d_natural_map;
    ScalarFn d_log_partition;

    ScalarFn mle;  // theta_hat(x)

    // Optional. Closed-form multi-sample MLE; when empty a golden-section
    // search on the summed log-likelihood is used.
    std::function<double(std::span<const double>)> mle_multi;

    // Optional. Closed form of log G_theta(x) that avoids cancellation
    // between the C T and A terms; must agree with the hook composition.
    std::function<double(double theta, double x)> log_density_closed;

    std::function<double(double theta, Rng&)> sampler;

    Interval support{};
    Interval theta_domain{};
};

namespace detail {

inline void require_support(const NoiseModel& m, double x) {
    if (!m.support.contains_open(x)) {
        throw DomainError("measurement " + std::to_string(x) + " outside the support of model '" +
                          m.name + "'");
    }
}

inline void require_theta(const NoiseModel& m, double theta) {
    if (!m.theta_domain.contains_open(theta)) {
        throw DomainError("parameter " + std::to_string(theta) + " outside the domain of model '" +
                          m.name + "'");
    }
}

}  // namespace detail

/// log h(x) + C(theta) T(x) - A(theta), straight from the hooks.
inline double log_density_from_hooks(const NoiseModel& m, double theta, double x) {
    detail::require_support(m, x);
    detail::require_theta(m, theta);
    return m.log_h(x) + m.natural_map(theta) * m.suff_stat(x) - m.log_partition(theta);
}

inline double log_density(const NoiseModel& m, double theta, double x) {
    if (!m.log_density_closed) {
        return log_density_from_hooks(m, theta, x);
    }
    detail::require_support(m, x);
    detail::require_theta(m, theta);
    return m.log_density_closed(theta, x);
}

inline double sample(const NoiseModel& m, double theta, Rng& rng) {
    detail::require_theta(m, theta);
    return m.sampler(theta, rng);
}

inline double mle_theta(const NoiseModel& m, double x) {
    detail::require_support(m, x);
    return m.mle(x);
}

/// log g(x) = log G_{theta_hat(x)}(x).
inline double log_g(const NoiseModel& m, double x) { return log_density(m, mle_theta(m, x), x); }

/// d(log g)/dx = d(log h)/dx + C(theta_hat) dT/dx. Uses the MLE condition
/// dC/dtheta T(x) = dA/dtheta at theta_hat to drop the theta_hat' terms.
inline double d_log_g(const NoiseModel& m, double x) {
    detail::require_support(m, x);
    return m.d_log_h(x) + m.natural_map(m.mle(x)) * m.d_suff_stat(x);
}

/// dB/deta at eta = C(theta), via (dA/dtheta) / (dC/dtheta).
inline double mean_suff_stat(const NoiseModel& m, double theta) {
    return m.d_log_partition(theta) / m.d_natural_map(theta);
}

/// Central difference with step 1e-6 * max(1, |x|).
template <typename F>
double central_difference(F&& f, double x) {
    const double h = 1e-6 * std::max(1.0, std::abs(x));
    return (f(x + h) - f(x - h)) / (2.0 * h);
}

inline constexpr double kGoldenSectionTolerance = 1e-10;

/// Maximizer of f on [lo, hi] for unimodal f.
template <typename F>
double golden_section_maximize(F&& f, double lo, double hi,
                               double tol = kGoldenSectionTolerance) {
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = f(c), fd = f(d);
    while (b - a > tol * std::max(1.0, std::abs(a) + std::abs(b))) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    return 0.5 * (a + b);
}

/// MLE of theta from i.i.d. measurements xs.
inline double mle_theta_multi(const NoiseModel& m, std::span<const double> xs) {
    if (xs.empty()) {
        throw ArgumentError("multi-sample MLE needs at least one measurement");
    }
    for (double x : xs) {
        detail::require_support(m, x);
    }
    if (xs.size() == 1) {
        return m.mle(xs.front());
    }
    if (m.mle_multi) {
        return m.mle_multi(xs);
    }
    // The summed score equates dB/deta with the mean of T(x_i), which lies
    // between the per-sample values, so the per-sample MLEs bracket the
    // answer.
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (double x : xs) {
        const double t = m.mle(x);
        lo = std::min(lo, t);
        hi = std::max(hi, t);
    }
    if (lo == hi) {
        return lo;
    }
    auto loglik = [&](double theta) {
        double sum = 0.0;
        for (double x : xs) {
            sum += log_density(m, theta, x);
        }
        return sum;
    };
    return golden_section_maximize(loglik, lo, hi);
}

struct HypothesisReport {
    bool mle_strictly_increasing = false;
    bool log_g_strictly_decreasing = false;
    bool mle_is_identity = false;

    /// Both monotonicity conditions: slhc(x) then has the MPPLE structure.
    bool structure_guaranteed() const noexcept {
        return mle_strictly_increasing && log_g_strictly_decreasing;
    }
    /// Additionally theta_hat(x) = x: MPPLE coincides with slhc(x).
    bool estimate_guaranteed() const noexcept { return structure_guaranteed() && mle_is_identity; }
};

/// Evaluates the monotonicity hypotheses on a sorted grid of measurements.
inline HypothesisReport check_theorem_hypotheses(const NoiseModel& m,
                                                 std::span<const double> grid) {
    if (!std::is_sorted(grid.begin(), grid.end())) {
        throw ArgumentError("hypothesis grid must be sorted");
    }
    HypothesisReport report{true, true, true};
    double prev_theta = 0.0, prev_log_g = 0.0;
    for (std::size_t k = 0; k < grid.size(); ++k) {
        const double x = grid[k];
        const double theta = mle_theta(m, x);
        const double lg = log_g(m, x);
        if (k > 0) {
            report.mle_strictly_increasing = report.mle_strictly_increasing && theta > prev_theta;
            report.log_g_strictly_decreasing = report.log_g_strictly_decreasing && lg < prev_log_g;
        }
        report.mle_is_identity =
            report.mle_is_identity && std::abs(theta - x) <= 1e-12 * std::max(1.0, std::abs(x));
        prev_theta = theta;
        prev_log_g = lg;
    }
    return report;
}

/// Log-normal with median theta and log-scale sigma:
///   G_theta(x) = exp(-(ln x - ln theta)^2 / (2 sigma^2)) / (sigma x sqrt(2 pi)).
/// T = ln x, C = ln(theta)/sigma^2, A = ln^2(theta)/(2 sigma^2), theta_hat(x) = x.
inline NoiseModel lognormal_model(double sigma) {
    if (!(sigma > 0.0) || !std::isfinite(sigma)) {
        throw ArgumentError("log-normal sigma must be positive and finite");
    }
    const double s2 = sigma * sigma;
    const double log_norm = std::log(sigma * std::sqrt(2.0 * std::numbers::pi));
    NoiseModel m;
    m.name = "lognormal";
    m.params = {{"sigma", sigma}};
    m.log_h = [=](double x) {
        const double lx = std::log(x);
        return -lx * lx / (2.0 * s2) - lx - log_norm;
    };
    m.suff_stat = [](double x) { return std::log(x); };
    m.natural_map = [=](double theta) { return std::log(theta) / s2; };
    m.log_partition = [=](double theta) {
        const double lt = std::log(theta);
        return lt * lt / (2.0 * s2);
    };
    m.d_log_h = [=](double x) { return -std::log(x) / (s2 * x) - 1.0 / x; };
    m.d_suff_stat = [](double x) { return 1.0 / x; };
    m.d_natural_map = [=](double theta) { return 1.0 / (s2 * theta); };
    m.d_log_partition = [=](double theta) { return std::log(theta) / (s2 * theta); };
    m.mle = [](double x) { return x; };
    m.mle_multi = [](std::span<const double> xs) {
        double sum = 0.0;
        for (double x : xs) {
            sum += std::log(x);
        }
        return std::exp(sum / static_cast<double>(xs.size()));
    };
    m.log_density_closed = [=](double theta, double x) {
        const double lx = std::log(x);
        const double z = lx - std::log(theta);
        return -z * z / (2.0 * s2) - lx - log_norm;
    };
    m.sampler = [=](double theta, Rng& rng) {
        std::normal_distribution<double> normal(0.0, sigma);
        return theta * std::exp(normal(rng));
    };
    return m;
}

/// Log-normal with median sqrt(theta): ln X ~ N(ln(theta)/2, sigma^2). Here
/// theta_hat(x) = x^2 is strictly increasing but not the identity, while
/// log g(x) = -ln(sigma x sqrt(2 pi)) is still strictly decreasing.
inline NoiseModel lognormal_sqrt_model(double sigma) {
    if (!(sigma > 0.0) || !std::isfinite(sigma)) {
        throw ArgumentError("sigma must be positive and finite");
    }
    NoiseModel m = lognormal_model(sigma);
    const double s2 = sigma * sigma;
    const double log_norm = std::log(sigma * std::sqrt(2.0 * std::numbers::pi));
    m.name = "lognormal_sqrt";
    m.natural_map = [=](double theta) { return std::log(theta) / (2.0 * s2); };
    m.log_partition = [=](double theta) {
        const double lt = std::log(theta);
        return lt * lt / (8.0 * s2);
    };
    m.d_natural_map = [=](double theta) { return 1.0 / (2.0 * s2 * theta); };
    m.d_log_partition = [=](double theta) { return std::log(theta) / (4.0 * s2 * theta); };
    m.mle = [](double x) { return x * x; };
    m.mle_multi = [](std::span<const double> xs) {
        double sum = 0.0;
        for (double x : xs) {
            sum += std::log(x);
        }
        return std::exp(2.0 * sum / static_cast<double>(xs.size()));
    };
    m.log_density_closed = [=](double theta, double x) {
        const double lx = std::log(x);
        const double z = lx - 0.5 * std::log(theta);
        return -z * z / (2.0 * s2) - lx - log_norm;
    };
    m.sampler = [=](double theta, Rng& rng) {
        std::normal_distribution<double> normal(0.0, sigma);
        return std::sqrt(theta) * std::exp(normal(rng));
    };
    return m;
}

inline std::vector<std::string> model_names() { return {"lognormal", "lognormal_sqrt"}; }

/// Builds a registered model by name. Both shipped models take `sigma`.
inline NoiseModel make_model(const std::string& name, const std::map<std::string, double>& params) {
    const auto sigma = params.find("sigma");
    if (name == "lognormal" || name == "lognormal_sqrt") {
        if (sigma == params.end()) {
            throw ArgumentError("model '" + name + "' needs parameter 'sigma'");
        }
        return name == "lognormal" ? lognormal_model(sigma->second)
                                   : lognormal_sqrt_model(sigma->second);
    }
    throw ArgumentError("unknown noise model '" + name + "'");
}

}  // namespace slhc
