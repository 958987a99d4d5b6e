#pragma once

// Edge-indexed vectors over the complete graph K_n.
//
// A weight on n points is stored as one value per unordered pair {i, j},
// laid out in lexicographic order of (i, j) with i < j:
//
//   (0,1) (0,2) ... (0,n-1) (1,2) ... (n-2,n-1)
//
// EdgeVector holds any nonnegative weight. MetricVector adds the triangle
// inequality and UltraMetric the ultrametric inequality. The three form an
// is-a chain, so an UltraMetric can be passed wherever a weight is expected.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <istream>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "slhc/detail/numeric_text.hpp"
#include "slhc/error.hpp"

namespace slhc {

using PointId = std::size_t;
using EdgeId = std::size_t;

constexpr std::size_t edge_count(std::size_t n) noexcept { return n * (n - 1) / 2; }

/// Position of the pair {i, j} in the lexicographic edge order of K_n.
inline EdgeId edge_index(PointId i, PointId j, std::size_t n) {
    if (i == j || i >= n || j >= n) {
        throw InvalidPairError("invalid pair (" + std::to_string(i) + ", " + std::to_string(j) +
                               ") for n = " + std::to_string(n));
    }
    if (i > j) {
        std::swap(i, j);
    }
    // Rows 0..i-1 hold (n-1) + (n-2) + ... + (n-i) edges.
    return i * n - i * (i + 1) / 2 + (j - i - 1);
}

/// Inverse of edge_index: the pair (i, j), i < j, stored at position e.
inline std::pair<PointId, PointId> edge_pair(EdgeId e, std::size_t n) {
    if (e >= edge_count(n)) {
        throw InvalidPairError("edge index " + std::to_string(e) + " out of range for n = " +
                               std::to_string(n));
    }
    PointId i = 0;
    std::size_t row = n - 1;
    while (e >= row) {
        e -= row;
        ++i;
        --row;
    }
    return {i, i + 1 + e};
}

class EdgeVector {
  public:
    EdgeVector(std::size_t n, std::vector<double> values) : n_{n}, values_{std::move(values)} {
        if (n_ < 2) {
            throw ArgumentError("an edge vector needs at least 2 points");
        }
        if (values_.size() != edge_count(n_)) {
            throw DimensionError("expected " + std::to_string(edge_count(n_)) + " values for n = " +
                                 std::to_string(n_) + ", got " + std::to_string(values_.size()));
        }
        for (double v : values_) {
            if (!std::isfinite(v) || v < 0.0) {
                throw ArgumentError("edge values must be finite and nonnegative");
            }
        }
    }

    /// Constant weight c on every pair.
    static EdgeVector constant(std::size_t n, double c) {
        return EdgeVector(n, std::vector<double>(edge_count(n), c));
    }

    std::size_t points() const noexcept { return n_; }
    std::size_t size() const noexcept { return values_.size(); }

    double operator[](EdgeId e) const { return values_[e]; }
    double operator()(PointId i, PointId j) const { return values_[edge_index(i, j, n_)]; }

    std::span<const double> values() const noexcept { return values_; }

    auto begin() const noexcept { return values_.begin(); }
    auto end() const noexcept { return values_.end(); }

    friend bool operator==(const EdgeVector& a, const EdgeVector& b) {
        return a.n_ == b.n_ && a.values_ == b.values_;
    }

  private:
    std::size_t n_;
    std::vector<double> values_;
};

inline void require_same_points(const EdgeVector& a, const EdgeVector& b) {
    if (a.points() != b.points()) {
        throw DimensionError("point count mismatch: " + std::to_string(a.points()) + " vs " +
                             std::to_string(b.points()));
    }
}

/// True iff every triangle inequality d_ik <= d_ij + d_jk holds.
inline bool is_metric(const EdgeVector& w) {
    const std::size_t n = w.points();
    for (PointId i = 0; i < n; ++i) {
        for (PointId j = i + 1; j < n; ++j) {
            const double dij = w(i, j);
            for (PointId k = 0; k < n; ++k) {
                if (k == i || k == j) {
                    continue;
                }
                if (dij > w(i, k) + w(k, j)) {
                    return false;
                }
            }
        }
    }
    return true;
}

namespace detail {

/// Lowers d_ij to d_ik + d_kj until no triangle is violated in floating
/// point. Each pass only decreases values, so the loop terminates.
inline void close_triangles(std::vector<double>& d, std::size_t n) {
    auto at = [&](PointId i, PointId j) -> double& { return d[edge_index(i, j, n)]; };
    bool changed = true;
    while (changed) {
        changed = false;
        for (PointId k = 0; k < n; ++k) {
            for (PointId i = 0; i < n; ++i) {
                for (PointId j = i + 1; j < n; ++j) {
                    if (i == k || j == k) {
                        continue;
                    }
                    const double via = at(i, k) + at(k, j);
                    if (via < at(i, j)) {
                        at(i, j) = via;
                        changed = true;
                    }
                }
            }
        }
    }
}

}  // namespace detail

/// True iff d_xz <= max(d_xy, d_yz) + tol for every triple.
inline bool is_ultrametric(const EdgeVector& w, double tol = 0.0) {
    const std::size_t n = w.points();
    for (PointId i = 0; i < n; ++i) {
        for (PointId j = i + 1; j < n; ++j) {
            const double dij = w(i, j);
            for (PointId k = 0; k < n; ++k) {
                if (k == i || k == j) {
                    continue;
                }
                if (dij > std::max(w(i, k), w(k, j)) + tol) {
                    return false;
                }
            }
        }
    }
    return true;
}

/// True iff no two coordinates coincide.
inline bool is_generic(const EdgeVector& w) {
    std::vector<double> sorted(w.begin(), w.end());
    std::sort(sorted.begin(), sorted.end());
    return std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end();
}

/// True iff all off-diagonal values are strictly positive.
inline bool is_strict(const EdgeVector& w) {
    return std::all_of(w.begin(), w.end(), [](double v) { return v > 0.0; });
}

class MetricVector : public EdgeVector {
  public:
    explicit MetricVector(EdgeVector w) : EdgeVector(std::move(w)) {
        if (!is_metric(*this)) {
            throw ArgumentError("weight violates the triangle inequality");
        }
    }
    MetricVector(std::size_t n, std::vector<double> values)
        : MetricVector(EdgeVector(n, std::move(values))) {}

    static MetricVector assume_valid(EdgeVector w) { return MetricVector(std::move(w), Trusted{}); }

  protected:
    struct Trusted {};
    MetricVector(EdgeVector w, Trusted) : EdgeVector(std::move(w)) {}
};

class UltraMetric : public MetricVector {
  public:
    explicit UltraMetric(EdgeVector w) : MetricVector(std::move(w), Trusted{}) {
        if (!is_ultrametric(*this)) {
            throw ArgumentError("weight violates the ultrametric inequality");
        }
    }
    UltraMetric(std::size_t n, std::vector<double> values)
        : UltraMetric(EdgeVector(n, std::move(values))) {}

    /// Wraps w without re-running the O(n^3) check. Caller guarantees the
    /// inequality holds exactly.
    static UltraMetric assume_valid(EdgeVector w) { return UltraMetric(std::move(w), Trusted{}); }

  private:
    UltraMetric(EdgeVector w, Trusted t) : MetricVector(std::move(w), t) {}
};

// Plain-text form:
//   n=<count>
//   i j value      (one line per edge, lexicographic order)

inline void write_edge_vector(std::ostream& out, const EdgeVector& w) {
    const std::size_t n = w.points();
    out << "n=" << n << '\n';
    for (EdgeId e = 0; e < w.size(); ++e) {
        const auto [i, j] = edge_pair(e, n);
        out << i << ' ' << j << ' ' << detail::format_double(w[e]) << '\n';
    }
}

inline std::string to_text(const EdgeVector& w) {
    std::ostringstream out;
    write_edge_vector(out, w);
    return out.str();
}

/// Reads the plain-text form. Edges may appear in any order but each pair
/// must appear exactly once.
inline EdgeVector read_edge_vector(std::istream& in) {
    std::string line;
    std::size_t n = 0;
    while (std::getline(in, line)) {
        const auto text = detail::trim(line);
        if (text.empty() || text.front() == '#') {
            continue;
        }
        if (text.substr(0, 2) != "n=") {
            throw ArgumentError("expected header 'n=<count>', got '" + std::string(text) + "'");
        }
        n = detail::parse_integer<std::size_t>(text.substr(2));
        break;
    }
    if (n < 2) {
        throw ArgumentError("missing or invalid point count header");
    }
    std::vector<double> values(edge_count(n), 0.0);
    std::vector<bool> seen(edge_count(n), false);
    while (std::getline(in, line)) {
        const auto text = detail::trim(line);
        if (text.empty() || text.front() == '#') {
            continue;
        }
        std::istringstream fields{std::string(text)};
        std::string si, sj, sv;
        if (!(fields >> si >> sj >> sv)) {
            throw ArgumentError("malformed edge line '" + std::string(text) + "'");
        }
        const auto e = edge_index(detail::parse_integer<std::size_t>(si),
                                  detail::parse_integer<std::size_t>(sj), n);
        if (seen[e]) {
            throw ArgumentError("duplicate edge in '" + std::string(text) + "'");
        }
        seen[e] = true;
        values[e] = detail::parse_double(sv);
    }
    if (std::find(seen.begin(), seen.end(), false) != seen.end()) {
        throw ArgumentError("edge list is incomplete");
    }
    return EdgeVector(n, std::move(values));
}

inline EdgeVector from_text(const std::string& text) {
    std::istringstream in(text);
    return read_edge_vector(in);
}

}  // namespace slhc
