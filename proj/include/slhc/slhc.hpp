#pragma once

// The single-linkage operator and the geometry of its fibers.
//
// slhc(d) is the ultrametric whose value on {x, y} is the largest MST edge
// on the tree path from x to y. For a spanning tree T and ultrametric u with
// T in MST(u), the inputs d with d|_T = u|_T and u <= d <= omega(T^u) form a
// polytope C(T, u); the fiber of u inside the metric cone is the union of
// these polytopes over MST(u).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <random>
#include <vector>

#include "slhc/edge_vector.hpp"
#include "slhc/error.hpp"
#include "slhc/trees.hpp"

namespace slhc {

/// Coordinatewise tolerance for comparing ultrametrics.
inline constexpr double kFiberTolerance = 1e-12;

inline UltraMetric slhc(const EdgeVector& d) { return alpha(mst(d)); }

/// Minimax path cost by brute force: for every pair, the minimum over all
/// simple paths in K_n of the largest edge on the path. Exponential in n.
inline UltraMetric minimax_path_oracle(const EdgeVector& d) {
    const std::size_t n = d.points();
    detail::require_enumerable(n);
    std::vector<double> out(edge_count(n), 0.0);
    std::vector<bool> on_path(n, false);

    // Depth-first walk over simple paths from the source, carrying the
    // largest edge seen so far.
    auto walk = [&](auto&& self, PointId v, PointId target, double bottleneck,
                    double& best) -> void {
        if (v == target) {
            best = std::min(best, bottleneck);
            return;
        }
        for (PointId next = 0; next < n; ++next) {
            if (on_path[next]) {
                continue;
            }
            on_path[next] = true;
            self(self, next, target, std::max(bottleneck, d(v, next)), best);
            on_path[next] = false;
        }
    };

    for (PointId x = 0; x < n; ++x) {
        for (PointId y = x + 1; y < n; ++y) {
            double best = std::numeric_limits<double>::infinity();
            on_path[x] = true;
            walk(walk, x, y, 0.0, best);
            on_path[x] = false;
            out[edge_index(x, y, n)] = best;
        }
    }
    return UltraMetric(EdgeVector(n, std::move(out)));
}

/// True iff w >= alpha(T^w) coordinatewise, i.e. T is an MST of w.
inline bool in_cone(const SpanningTree& t, const EdgeVector& w) {
    if (t.points() != w.points()) {
        throw DimensionError("tree and weight have different point counts");
    }
    const auto bound = alpha(WeightedSpanningTree::restrict(t, w));
    for (EdgeId e = 0; e < w.size(); ++e) {
        if (w[e] < bound[e]) {
            return false;
        }
    }
    return true;
}

inline bool approx_equal(const EdgeVector& a, const EdgeVector& b, double tol) {
    require_same_points(a, b);
    for (EdgeId e = 0; e < a.size(); ++e) {
        if (std::abs(a[e] - b[e]) > tol) {
            return false;
        }
    }
    return true;
}

/// True iff slhc(d) = u within tol.
inline bool in_fiber(const EdgeVector& d, const UltraMetric& u, double tol = kFiberTolerance) {
    return approx_equal(slhc(d), u, tol);
}

/// True iff d lies in the polytope C(T, u): d agrees with u on the tree
/// edges and u <= d <= omega(T^u) elsewhere. T must be an MST of u.
inline bool in_fiber_cell(const EdgeVector& d, const UltraMetric& u, const SpanningTree& t,
                          double tol = kFiberTolerance) {
    require_same_points(d, u);
    const auto upper = omega(WeightedSpanningTree::restrict(t, u));
    for (EdgeId e = 0; e < d.size(); ++e) {
        if (t.contains(e)) {
            if (std::abs(d[e] - u[e]) > tol) {
                return false;
            }
        } else if (d[e] < u[e] - tol || d[e] > upper[e] + tol) {
            return false;
        }
    }
    return true;
}

/// Fiber membership through the polytope decomposition: d is in some C(T, u)
/// with T in MST(u). Enumerates MST(u), so n <= 8.
inline bool in_fiber_by_cells(const EdgeVector& d, const UltraMetric& u,
                              double tol = kFiberTolerance) {
    for (const auto& t : all_msts(u)) {
        if (in_fiber_cell(d, u, t, tol)) {
            return true;
        }
    }
    return false;
}

/// Rejection sampler over C(T, u) intersected with the metric cone. Tree
/// coordinates are copied from u; every other coordinate is drawn uniformly
/// from [u_e, omega_e] and the draw is kept only if it is a metric.
class FiberSampler {
  public:
    static constexpr std::size_t kDefaultMaxAttempts = 100000;

    FiberSampler(UltraMetric u, SpanningTree t, std::size_t max_attempts = kDefaultMaxAttempts)
        : u_{std::move(u)},
          t_{std::move(t)},
          upper_{omega(WeightedSpanningTree::restrict(t_, u_))},
          max_attempts_{max_attempts} {
        if (t_.points() != u_.points()) {
            throw DimensionError("tree and ultrametric have different point counts");
        }
        if (!in_cone(t_, u_)) {
            throw ArgumentError("tree is not a minimum spanning tree of the ultrametric");
        }
    }

    template <typename Rng>
    MetricVector operator()(Rng& rng) {
        std::vector<double> values(u_.begin(), u_.end());
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        for (std::size_t attempt = 0; attempt < max_attempts_; ++attempt) {
            ++attempts_;
            for (EdgeId e = 0; e < values.size(); ++e) {
                if (!t_.contains(e)) {
                    values[e] = u_[e] + (upper_[e] - u_[e]) * unit(rng);
                }
            }
            EdgeVector candidate(u_.points(), values);
            if (is_metric(candidate)) {
                ++accepted_;
                return MetricVector::assume_valid(std::move(candidate));
            }
        }
        throw SamplingError("fiber sampler exhausted " + std::to_string(max_attempts_) +
                            " attempts (acceptance so far " + std::to_string(acceptance_rate()) +
                            ")");
    }

    const UltraMetric& ultrametric() const noexcept { return u_; }
    const SpanningTree& tree() const noexcept { return t_; }
    /// omega(T^u), the coordinatewise upper corner of the cell.
    const MetricVector& upper() const noexcept { return upper_; }

    std::size_t attempts() const noexcept { return attempts_; }
    std::size_t accepted() const noexcept { return accepted_; }
    double acceptance_rate() const noexcept {
        return attempts_ == 0 ? 0.0 : static_cast<double>(accepted_) / static_cast<double>(attempts_);
    }

  private:
    UltraMetric u_;
    SpanningTree t_;
    MetricVector upper_;
    std::size_t max_attempts_;
    std::size_t attempts_ = 0;
    std::size_t accepted_ = 0;
};

template <typename Rng>
MetricVector sample_fiber(const UltraMetric& u, const SpanningTree& t, Rng& rng,
                          std::size_t max_attempts = FiberSampler::kDefaultMaxAttempts) {
    FiberSampler sampler(u, t, max_attempts);
    return sampler(rng);
}

/// Sum of g over the edges of an MST of w. The value does not depend on
/// which MST is used.
template <typename G>
double energy(const EdgeVector& w, G&& g) {
    const auto tree = mst(w);
    double sum = 0.0;
    for (double v : tree.weights()) {
        sum += g(v);
    }
    return sum;
}

}  // namespace slhc
