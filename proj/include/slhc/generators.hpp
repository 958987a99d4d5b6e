#pragma once

// Random fixtures: weights, metrics, ultrametrics and spanning trees.

#include <algorithm>
#include <cstddef>
#include <random>
#include <vector>

#include "slhc/edge_vector.hpp"
#include "slhc/random.hpp"
#include "slhc/slhc.hpp"
#include "slhc/trees.hpp"

namespace slhc {

/// Uniform weight on (0, box)^C(n,2). Generic with probability one.
inline EdgeVector random_weight(std::size_t n, Rng& rng, double box = 100.0) {
    std::uniform_real_distribution<double> uniform(0.0, box);
    std::vector<double> values(edge_count(n));
    for (double& v : values) {
        do {
            v = uniform(rng);
        } while (v == 0.0);
    }
    return EdgeVector(n, std::move(values));
}

/// Weight with values drawn from {1, ..., levels}; ties are common.
inline EdgeVector random_tied_weight(std::size_t n, Rng& rng, int levels = 4) {
    std::uniform_int_distribution<int> pick(1, levels);
    std::vector<double> values(edge_count(n));
    for (double& v : values) {
        v = pick(rng);
    }
    return EdgeVector(n, std::move(values));
}

/// Shortest-path closure of a uniform random weight. Relaxation repeats
/// until the triangle inequality holds exactly in floating point.
inline MetricVector random_metric(std::size_t n, Rng& rng, double box = 100.0) {
    const auto w = random_weight(n, rng, box);
    std::vector<double> d(w.begin(), w.end());
    detail::close_triangles(d, n);
    return MetricVector(n, std::move(d));
}

inline UltraMetric random_ultrametric(std::size_t n, Rng& rng, double box = 100.0) {
    return slhc(random_metric(n, rng, box));
}

/// Uniform labelled tree via a random Prüfer code.
inline SpanningTree random_tree(std::size_t n, Rng& rng) {
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    std::vector<std::size_t> code(n >= 2 ? n - 2 : 0);
    for (auto& c : code) {
        c = pick(rng);
    }
    return tree_from_prufer(n, code);
}

}  // namespace slhc
