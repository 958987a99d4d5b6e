#pragma once

// Dendrograms as (structure, heights): a chain of partitions of {0..n-1}
// from the discrete partition up to the single cluster, plus the strictly
// increasing resolution at which each coarsening happens.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "slhc/detail/numeric_text.hpp"
#include "slhc/edge_vector.hpp"
#include "slhc/error.hpp"
#include "slhc/trees.hpp"

namespace slhc {

/// Block label per point. Labels are canonical: blocks are numbered in
/// order of their smallest member, so equal partitions compare equal.
using Partition = std::vector<std::size_t>;

inline Partition canonical_partition(const std::vector<std::size_t>& raw_labels) {
    std::map<std::size_t, std::size_t> relabel;
    Partition out(raw_labels.size());
    for (std::size_t x = 0; x < raw_labels.size(); ++x) {
        auto [it, inserted] = relabel.try_emplace(raw_labels[x], relabel.size());
        out[x] = it->second;
    }
    return out;
}

inline std::size_t block_count(const Partition& p) {
    return p.empty() ? 0 : *std::max_element(p.begin(), p.end()) + 1;
}

/// True iff every block of fine lies inside a block of coarse and the two
/// differ.
inline bool strictly_refines(const Partition& fine, const Partition& coarse) {
    if (fine.size() != coarse.size()) {
        return false;
    }
    std::vector<std::size_t> image(block_count(fine), coarse.size());
    for (std::size_t x = 0; x < fine.size(); ++x) {
        auto& target = image[fine[x]];
        if (target == coarse.size()) {
            target = coarse[x];
        } else if (target != coarse[x]) {
            return false;
        }
    }
    return block_count(coarse) < block_count(fine);
}

class Dendrogram {
  public:
    Dendrogram(std::vector<Partition> structure, std::vector<double> heights)
        : structure_{std::move(structure)}, heights_{std::move(heights)} {
        if (structure_.size() < 2) {
            throw ArgumentError("a dendrogram needs at least two partitions");
        }
        const std::size_t n = structure_.front().size();
        if (n < 2) {
            throw ArgumentError("a dendrogram needs at least 2 points");
        }
        if (heights_.size() + 1 != structure_.size()) {
            throw DimensionError("need one height per non-initial partition");
        }
        for (auto& p : structure_) {
            if (p.size() != n) {
                throw DimensionError("partitions cover different point sets");
            }
            p = canonical_partition(p);
        }
        if (block_count(structure_.front()) != n) {
            throw ArgumentError("first partition must be the discrete partition");
        }
        if (block_count(structure_.back()) != 1) {
            throw ArgumentError("last partition must be the single cluster");
        }
        for (std::size_t k = 0; k + 1 < structure_.size(); ++k) {
            if (!strictly_refines(structure_[k], structure_[k + 1])) {
                throw ArgumentError("each partition must strictly refine its successor");
            }
        }
        for (std::size_t k = 0; k < heights_.size(); ++k) {
            if (!std::isfinite(heights_[k]) || heights_[k] < 0.0 ||
                (k > 0 && heights_[k] <= heights_[k - 1])) {
                throw ArgumentError("heights must be finite, nonnegative and strictly increasing");
            }
        }
    }

    std::size_t points() const noexcept { return structure_.front().size(); }
    const std::vector<Partition>& structure() const noexcept { return structure_; }
    const std::vector<double>& heights() const noexcept { return heights_; }

    friend bool operator==(const Dendrogram&, const Dendrogram&) = default;

  private:
    std::vector<Partition> structure_;
    std::vector<double> heights_;
};

/// Threshold sweep over the distinct values r of u: the partition at r is
/// the set of classes of u_xy <= r. Equal values merge in one step.
inline Dendrogram dendrogram_of(const UltraMetric& u) {
    const std::size_t n = u.points();
    std::vector<double> levels(u.begin(), u.end());
    std::sort(levels.begin(), levels.end());
    levels.erase(std::unique(levels.begin(), levels.end()), levels.end());

    std::vector<EdgeId> order(u.size());
    for (EdgeId e = 0; e < order.size(); ++e) {
        order[e] = e;
    }
    std::stable_sort(order.begin(), order.end(), [&](EdgeId a, EdgeId b) { return u[a] < u[b]; });

    std::vector<Partition> structure;
    Partition discrete(n);
    for (std::size_t x = 0; x < n; ++x) {
        discrete[x] = x;
    }
    structure.push_back(discrete);

    detail::DisjointSets sets(n);
    std::size_t next = 0;
    for (double r : levels) {
        while (next < order.size() && u[order[next]] <= r) {
            const auto [i, j] = edge_pair(order[next], n);
            sets.unite(i, j);
            ++next;
        }
        std::vector<std::size_t> roots(n);
        for (std::size_t x = 0; x < n; ++x) {
            roots[x] = sets.find(x);
        }
        structure.push_back(canonical_partition(roots));
    }
    return Dendrogram(std::move(structure), std::move(levels));
}

/// u_xy = height of the first partition in which x and y share a block.
inline UltraMetric ultrametric_of(const Dendrogram& d) {
    const std::size_t n = d.points();
    const auto& chain = d.structure();
    std::vector<double> values(edge_count(n), 0.0);
    for (PointId x = 0; x < n; ++x) {
        for (PointId y = x + 1; y < n; ++y) {
            std::size_t k = 1;
            while (chain[k][x] != chain[k][y]) {
                ++k;
            }
            values[edge_index(x, y, n)] = d.heights()[k - 1];
        }
    }
    return UltraMetric::assume_valid(EdgeVector(n, std::move(values)));
}

/// True iff the two partition chains agree, heights ignored.
inline bool same_structure(const UltraMetric& u1, const UltraMetric& u2) {
    require_same_points(u1, u2);
    return dendrogram_of(u1).structure() == dendrogram_of(u2).structure();
}

/// Sum over all pairs of |u1_e - u2_e|.
inline double l1_error(const EdgeVector& u1, const EdgeVector& u2) {
    require_same_points(u1, u2);
    double sum = 0.0;
    for (EdgeId e = 0; e < u1.size(); ++e) {
        sum += std::abs(u1[e] - u2[e]);
    }
    return sum;
}

namespace detail {

inline void write_cluster(std::ostringstream& out, const Dendrogram& d, std::size_t level,
                          std::size_t block) {
    if (level == 0) {
        // In the discrete partition each block is a single point.
        const auto& p = d.structure()[0];
        out << static_cast<std::size_t>(std::find(p.begin(), p.end(), block) - p.begin());
        return;
    }
    const auto& here = d.structure()[level];
    const auto& below = d.structure()[level - 1];
    std::set<std::size_t> children;
    for (std::size_t x = 0; x < here.size(); ++x) {
        if (here[x] == block) {
            children.insert(below[x]);
        }
    }
    if (children.size() == 1) {
        // Untouched at this level; descend without emitting a node.
        write_cluster(out, d, level - 1, *children.begin());
        return;
    }
    out << '(';
    bool first = true;
    for (std::size_t child : children) {
        if (!first) {
            out << ',';
        }
        first = false;
        write_cluster(out, d, level - 1, child);
    }
    out << "):" << format_double(d.heights()[level - 1]);
}

}  // namespace detail

/// Newick-like text with merge heights as branch labels, e.g. for
/// u = (1, 2, 2) on three points: "((0,1):1,2):2;". Children are listed in
/// order of their smallest point.
inline std::string to_newick(const Dendrogram& d) {
    std::ostringstream out;
    detail::write_cluster(out, d, d.structure().size() - 1, 0);
    out << ';';
    return out.str();
}

}  // namespace slhc
