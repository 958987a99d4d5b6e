#pragma once

// Estimators of the ultrametric u = slhc(theta) from noisy measurements x.

#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include "slhc/edge_vector.hpp"
#include "slhc/error.hpp"
#include "slhc/noise.hpp"
#include "slhc/random.hpp"
#include "slhc/slhc.hpp"
#include "slhc/trees.hpp"

namespace slhc {

/// Naive estimator: single linkage applied to the measurements.
inline UltraMetric slhc_estimator(const EdgeVector& x) { return slhc(x); }

/// The weighted tree behind the MPPLE: a maximum spanning tree of the scores
/// log g(x_e), carrying theta_hat(x_e) on its edges.
inline WeightedSpanningTree mpple_tree(const EdgeVector& x, const NoiseModel& m) {
    const std::size_t n = x.points();
    std::vector<double> negated_scores(x.size());
    for (EdgeId e = 0; e < x.size(); ++e) {
        negated_scores[e] = -log_g(m, x[e]);
    }
    auto tree = kruskal(n, negated_scores);
    std::vector<double> weights;
    weights.reserve(n - 1);
    for (EdgeId e : tree.edges()) {
        weights.push_back(mle_theta(m, x[e]));
    }
    return WeightedSpanningTree(std::move(tree), std::move(weights));
}

/// Maximum partial profile likelihood estimate of u.
inline UltraMetric mpple(const EdgeVector& x, const NoiseModel& m) { return alpha(mpple_tree(x, m)); }

/// slhc of the per-edge multi-sample MLE. Consistent as N grows.
inline UltraMetric consistent_estimator(const std::vector<EdgeVector>& samples,
                                        const NoiseModel& m) {
    if (samples.empty()) {
        throw ArgumentError("consistent estimator needs at least one sample");
    }
    const std::size_t n = samples.front().points();
    for (const auto& s : samples) {
        require_same_points(samples.front(), s);
    }
    std::vector<double> per_edge(samples.size());
    std::vector<double> theta(edge_count(n));
    for (EdgeId e = 0; e < theta.size(); ++e) {
        for (std::size_t k = 0; k < samples.size(); ++k) {
            per_edge[k] = samples[k][e];
        }
        theta[e] = mle_theta_multi(m, per_edge);
    }
    return slhc(EdgeVector(n, std::move(theta)));
}

/// max over T in MST(u) of sum_{e in T} log G_{u_e}(x_e). Enumerates MST(u).
inline double partial_profile_loglik(const UltraMetric& u, const EdgeVector& x,
                                     const NoiseModel& m) {
    require_same_points(u, x);
    detail::require_enumerable(u.points());
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& t : all_msts(u)) {
        double sum = 0.0;
        for (EdgeId e : t.edges()) {
            sum += log_density(m, u[e], x[e]);
        }
        best = std::max(best, sum);
    }
    return best;
}

struct OnOffSplit {
    std::vector<EdgeId> on_edges;
    std::vector<double> on_values;
    std::vector<EdgeId> off_edges;
    std::vector<double> off_values;
};

/// Splits the coordinates of x into tree edges and the rest, each in edge
/// order.
inline OnOffSplit onoff_split(const EdgeVector& x, const SpanningTree& t) {
    if (x.points() != t.points()) {
        throw DimensionError("tree and measurement have different point counts");
    }
    OnOffSplit split;
    for (EdgeId e = 0; e < x.size(); ++e) {
        if (t.contains(e)) {
            split.on_edges.push_back(e);
            split.on_values.push_back(x[e]);
        } else {
            split.off_edges.push_back(e);
            split.off_values.push_back(x[e]);
        }
    }
    return split;
}

inline EdgeVector reassemble(const OnOffSplit& split, std::size_t n) {
    std::vector<double> values(edge_count(n), 0.0);
    if (split.on_edges.size() + split.off_edges.size() != values.size()) {
        throw DimensionError("split does not cover every edge");
    }
    for (std::size_t k = 0; k < split.on_edges.size(); ++k) {
        values[split.on_edges[k]] = split.on_values[k];
    }
    for (std::size_t k = 0; k < split.off_edges.size(); ++k) {
        values[split.off_edges[k]] = split.off_values[k];
    }
    return EdgeVector(n, std::move(values));
}

struct FactorizationCheck {
    double correlation = 0.0;
    double acceptance_rate = 0.0;
    std::size_t samples = 0;
};

/// Monte Carlo check that the on-tree and off-tree measurement likelihoods
/// separate. Draws theta from the fiber cell C(T, u) with the rejection
/// sampler, x ~ G_theta, and returns the Pearson correlation between
/// sum_{e in T} log G_{theta_e}(x_e) and sum_{e not in T} log G_{theta_e}(x_e).
inline FactorizationCheck onoff_likelihood_correlation(const UltraMetric& u, const SpanningTree& t,
                                                       const NoiseModel& m, std::size_t samples,
                                                       Rng& rng) {
    if (samples < 2) {
        throw ArgumentError("correlation needs at least two samples");
    }
    FiberSampler fiber(u, t);
    double s_on = 0, s_off = 0, s_on2 = 0, s_off2 = 0, s_cross = 0;
    for (std::size_t k = 0; k < samples; ++k) {
        const auto theta = fiber(rng);
        double on = 0.0, off = 0.0;
        for (EdgeId e = 0; e < theta.size(); ++e) {
            const double x = sample(m, theta[e], rng);
            const double ll = log_density(m, theta[e], x);
            (t.contains(e) ? on : off) += ll;
        }
        s_on += on;
        s_off += off;
        s_on2 += on * on;
        s_off2 += off * off;
        s_cross += on * off;
    }
    const double count = static_cast<double>(samples);
    const double cov = s_cross / count - (s_on / count) * (s_off / count);
    const double var_on = s_on2 / count - (s_on / count) * (s_on / count);
    const double var_off = s_off2 / count - (s_off / count) * (s_off / count);
    FactorizationCheck result;
    result.correlation = cov / std::sqrt(var_on * var_off);
    result.acceptance_rate = fiber.acceptance_rate();
    result.samples = samples;
    return result;
}

}  // namespace slhc
