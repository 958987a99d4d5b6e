#include <gtest/gtest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "slhc/noise.hpp"

namespace slhc {

namespace {

double integrate_density(const NoiseModel& m, double theta) {
    auto f = [&](double x) { return x <= 0.0 ? 0.0 : std::exp(log_density(m, theta, x)); };
    using Q = boost::math::quadrature::gauss_kronrod<double, 61>;
    const double split = m.name == "lognormal" ? theta : std::sqrt(theta);
    return Q::integrate(f, 0.0, split, 15, 1e-13) +
           Q::integrate(f, split, std::numeric_limits<double>::infinity(), 15, 1e-13);
}

double rel_err(double a, double b) { return std::abs(a - b) / std::max(1e-300, std::abs(b)); }

std::vector<double> log_grid(double lo, double hi, int count) {
    std::vector<double> grid;
    for (int k = 0; k < count; ++k) {
        grid.push_back(std::exp(std::log(lo) + (std::log(hi) - std::log(lo)) * k / (count - 1)));
    }
    return grid;
}

std::vector<NoiseModel> registered_models(double sigma) {
    std::vector<NoiseModel> models;
    for (const auto& name : model_names()) models.push_back(make_model(name, {{"sigma", sigma}}));
    return models;
}

}  // namespace

TEST(LogDensity, LogNormalAtOne) {
    for (double sigma : {0.1, 0.3, 1.0}) {
        const auto m = lognormal_model(sigma);
        EXPECT_NEAR(log_density(m, 1.0, 1.0), -std::log(sigma * std::sqrt(2.0 * std::numbers::pi)),
                    1e-14);
    }
}

TEST(LogDensity, BaseMeasureCancelsInRatios) {
    const auto m = lognormal_model(0.4);
    for (double x : {0.2, 1.0, 7.5}) {
        const double lhs = log_density(m, 2.0, x) - log_density(m, 5.0, x);
        const double rhs = m.natural_map(2.0) * m.suff_stat(x) - m.log_partition(2.0) -
                           (m.natural_map(5.0) * m.suff_stat(x) - m.log_partition(5.0));
        EXPECT_NEAR(lhs, rhs, 1e-12);
    }
}

TEST(LogDensity, ClosedFormMatchesHookComposition) {
    for (const auto& m : registered_models(0.3)) {
        for (double theta : {0.5, 3.0, 40.0}) {
            for (double x : {0.1, 1.0, 4.0, 90.0}) {
                EXPECT_NEAR(log_density(m, theta, x), log_density_from_hooks(m, theta, x), 1e-10)
                    << m.name;
            }
        }
    }
}

TEST(LogDensity, IntegratesToOne) {
    for (double sigma : {0.05, 0.3, 1.0}) {
        for (const auto& m : registered_models(sigma)) {
            for (double theta : {0.5, 2.0, 50.0}) {
                EXPECT_LT(std::abs(integrate_density(m, theta) - 1.0), 1e-6)
                    << m.name << " sigma=" << sigma << " theta=" << theta;
            }
        }
    }
}

TEST(LogDensity, DomainErrors) {
    const auto m = lognormal_model(0.3);
    EXPECT_THROW(log_density(m, 1.0, 0.0), DomainError);
    EXPECT_THROW(log_density(m, 1.0, -2.0), DomainError);
    EXPECT_THROW(log_density(m, 0.0, 1.0), DomainError);
    EXPECT_THROW(mle_theta(m, 0.0), DomainError);
    EXPECT_THROW(log_g(m, -1.0), DomainError);
    EXPECT_THROW(lognormal_model(0.0), ArgumentError);
    EXPECT_THROW(lognormal_model(-1.0), ArgumentError);
}

TEST(Sample, MeanSufficientStatisticMatchesPartitionDerivative) {
    for (const auto& m : registered_models(0.3)) {
        Rng rng(71);
        const double theta = 5.0;
        const int draws = 100000;
        double sum = 0.0;
        for (int k = 0; k < draws; ++k) sum += m.suff_stat(sample(m, theta, rng));
        const double standard_error = 0.3 / std::sqrt(static_cast<double>(draws));
        EXPECT_LT(std::abs(sum / draws - mean_suff_stat(m, theta)), 3.0 * standard_error) << m.name;
    }
}

TEST(Sample, MedianIsTheta) {
    const auto m = lognormal_model(0.1);
    Rng rng(72);
    std::vector<double> xs(100001);
    for (double& x : xs) x = sample(m, 2.0, rng);
    std::nth_element(xs.begin(), xs.begin() + 50000, xs.end());
    EXPECT_NEAR(xs[50000], 2.0, 0.005);
}

TEST(Sample, ConcentratesAsSigmaVanishes) {
    const auto m = lognormal_model(1e-12);
    Rng rng(73);
    for (int k = 0; k < 100; ++k) EXPECT_NEAR(sample(m, 3.0, rng), 3.0, 1e-9);
}

TEST(Sample, ReproducibleFromSeed) {
    const auto m = lognormal_model(0.5);
    Rng a(74), b(74);
    for (int k = 0; k < 100; ++k) EXPECT_EQ(sample(m, 1.5, a), sample(m, 1.5, b));
}

TEST(MleTheta, LogNormalIsIdentity) {
    const auto m = lognormal_model(0.3);
    EXPECT_EQ(mle_theta(m, 3.7), 3.7);
    EXPECT_EQ(mle_theta(m, 1.0), 1.0);
    EXPECT_EQ(mle_theta(lognormal_sqrt_model(0.3), 3.0), 9.0);
}

TEST(MleTheta, MaximizesTheLikelihood) {
    const auto thetas = log_grid(0.01, 200.0, 100);
    for (const auto& m : registered_models(0.5)) {
        for (double x : {0.05, 0.7, 3.0, 40.0}) {
            const double best = log_density(m, mle_theta(m, x), x);
            for (double theta : thetas) EXPECT_GE(best, log_density(m, theta, x)) << m.name;
        }
    }
}

TEST(MleTheta, SatisfiesScoreCondition) {
    for (const auto& m : registered_models(0.2)) {
        for (double x : log_grid(0.02, 150.0, 100)) {
            EXPECT_LT(std::abs(mean_suff_stat(m, mle_theta(m, x)) - m.suff_stat(x)), 1e-8) << m.name;
        }
    }
}

TEST(MleTheta, StrictlyIncreasingOnGrid) {
    const auto m = lognormal_model(0.3);
    const auto grid = log_grid(0.01, 100.0, 500);
    for (std::size_t k = 1; k < grid.size(); ++k) {
        EXPECT_LT(mle_theta(m, grid[k - 1]), mle_theta(m, grid[k]));
    }
}

TEST(LogG, LogNormalClosedFormAndSlope) {
    const double sigma = 0.3;
    const auto m = lognormal_model(sigma);
    for (double x : log_grid(0.05, 80.0, 50)) {
        EXPECT_NEAR(log_g(m, x), -std::log(sigma * x * std::sqrt(2.0 * std::numbers::pi)), 1e-12);
        EXPECT_LT(rel_err(d_log_g(m, x), -1.0 / x), 1e-12);
        const double fd = central_difference([&](double v) { return log_g(m, v); }, x);
        EXPECT_LT(rel_err(fd, -1.0 / x), 1e-6);
    }
}

TEST(LogG, SlopeIdentityMatchesFiniteDifferences) {
    for (const auto& m : registered_models(0.4)) {
        for (double x : log_grid(0.1, 50.0, 40)) {
            const double fd = central_difference([&](double v) { return log_g(m, v); }, x);
            EXPECT_LT(rel_err(fd, d_log_g(m, x)), 1e-6) << m.name << " x=" << x;
        }
    }
}

TEST(Hooks, DerivativesMatchCentralDifferences) {
    for (const auto& m : registered_models(0.3)) {
        for (double v : log_grid(0.05, 60.0, 30)) {
            EXPECT_LT(rel_err(central_difference(m.log_h, v), m.d_log_h(v)), 1e-6) << m.name;
            EXPECT_LT(rel_err(central_difference(m.suff_stat, v), m.d_suff_stat(v)), 1e-6);
            EXPECT_LT(rel_err(central_difference(m.natural_map, v), m.d_natural_map(v)), 1e-6);
            if (std::abs(std::log(v)) > 1e-3) {
                EXPECT_LT(rel_err(central_difference(m.log_partition, v), m.d_log_partition(v)),
                          1e-6);
            }
        }
    }
}

TEST(Hooks, ChainRuleForCanonicalPartition) {
    // Log-normal: C^{-1}(eta) = exp(sigma^2 eta), B = A o C^{-1}.
    const double sigma = 0.3;
    const auto m = lognormal_model(sigma);
    auto b = [&](double eta) { return m.log_partition(std::exp(sigma * sigma * eta)); };
    for (double theta : log_grid(0.1, 50.0, 30)) {
        const double eta = m.natural_map(theta);
        const double db = central_difference(b, eta);
        EXPECT_NEAR(db, mean_suff_stat(m, theta), 1e-6 * std::max(1.0, std::abs(db)));
    }
}

TEST(Hypotheses, LogNormalSatisfiesAll) {
    const auto grid = log_grid(0.01, 100.0, 1000);
    for (double sigma : {0.01, 0.3, 1.0, 3.0}) {
        const auto report = check_theorem_hypotheses(lognormal_model(sigma), grid);
        EXPECT_TRUE(report.mle_strictly_increasing);
        EXPECT_TRUE(report.log_g_strictly_decreasing);
        EXPECT_TRUE(report.mle_is_identity);
        EXPECT_TRUE(report.estimate_guaranteed());
    }
}

TEST(Hypotheses, SquaredMleIsMonotoneButNotIdentity) {
    const auto report = check_theorem_hypotheses(lognormal_sqrt_model(0.3), log_grid(0.01, 100.0, 200));
    EXPECT_TRUE(report.structure_guaranteed());
    EXPECT_FALSE(report.mle_is_identity);
}

TEST(Hypotheses, ConstantMleFails) {
    auto m = lognormal_model(0.3);
    m.name = "constant";
    m.mle = [](double) { return 1.0; };
    const auto report = check_theorem_hypotheses(m, log_grid(0.5, 2.0, 20));
    EXPECT_FALSE(report.mle_strictly_increasing);
    EXPECT_FALSE(report.mle_is_identity);
    EXPECT_FALSE(report.structure_guaranteed());
}

TEST(Hypotheses, RejectsUnsortedGrid) {
    const std::vector<double> grid{2.0, 1.0};
    EXPECT_THROW(check_theorem_hypotheses(lognormal_model(0.3), grid), ArgumentError);
}

TEST(MultiSampleMle, GeometricMeanAndGoldenSection) {
    Rng rng(75);
    for (const auto& closed : registered_models(0.3)) {
        auto generic = closed;
        generic.mle_multi = nullptr;
        generic.log_density_closed = nullptr;
        for (int k = 0; k < 20; ++k) {
            std::vector<double> xs(2 + k);
            for (double& x : xs) x = sample(closed, 7.0, rng);
            const double exact = mle_theta_multi(closed, xs);
            // The log-likelihood is flat to second order at its maximum, so a
            // comparison-based search resolves the argmax to ~sqrt(eps).
            EXPECT_LT(rel_err(mle_theta_multi(generic, xs), exact), 1e-6) << closed.name;
        }
    }
    const auto m = lognormal_model(0.3);
    const std::vector<double> pair{2.0, 8.0};
    EXPECT_NEAR(mle_theta_multi(m, pair), 4.0, 1e-12);
    EXPECT_THROW(mle_theta_multi(m, std::vector<double>{}), ArgumentError);
    EXPECT_THROW(mle_theta_multi(m, std::vector<double>{1.0, -1.0}), DomainError);
}

TEST(Registry, BuildsByName) {
    EXPECT_EQ(make_model("lognormal", {{"sigma", 0.2}}).params.at("sigma"), 0.2);
    EXPECT_EQ(make_model("lognormal_sqrt", {{"sigma", 0.2}}).name, "lognormal_sqrt");
    EXPECT_THROW(make_model("gamma", {{"sigma", 0.2}}), ArgumentError);
    EXPECT_THROW(make_model("lognormal", {}), ArgumentError);
}

}  // namespace slhc
