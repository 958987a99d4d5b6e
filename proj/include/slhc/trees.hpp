#pragma once

// Spanning trees of K_n: Kruskal MSTs, Prüfer enumeration of all n^(n-2)
// trees, the path-maximum map alpha and the path-sum tree metric omega.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "slhc/edge_vector.hpp"
#include "slhc/error.hpp"

namespace slhc {

/// Largest n for which exhaustive tree enumeration is allowed (8^6 trees).
inline constexpr std::size_t kMaxEnumerationPoints = 8;

/// Absolute tolerance used when comparing total tree weights.
inline constexpr double kTreeWeightTolerance = 1e-12;

namespace detail {

class DisjointSets {
  public:
    explicit DisjointSets(std::size_t n) : parent_(n), rank_(n, 0) {
        std::iota(parent_.begin(), parent_.end(), std::size_t{0});
    }

    std::size_t find(std::size_t x) {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }

    bool unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a == b) {
            return false;
        }
        if (rank_[a] < rank_[b]) {
            std::swap(a, b);
        }
        parent_[b] = a;
        if (rank_[a] == rank_[b]) {
            ++rank_[a];
        }
        return true;
    }

  private:
    std::vector<std::size_t> parent_;
    std::vector<unsigned> rank_;
};

inline void require_enumerable(std::size_t n) {
    if (n < 2 || n > kMaxEnumerationPoints) {
        throw CapacityError("exhaustive enumeration supports 2 <= n <= " +
                            std::to_string(kMaxEnumerationPoints) + ", got n = " + std::to_string(n));
    }
}

}  // namespace detail

/// A spanning tree of K_n, stored as its sorted edge indices.
class SpanningTree {
  public:
    SpanningTree(std::size_t n, std::vector<EdgeId> edges) : n_{n}, edges_{std::move(edges)} {
        if (n_ < 2) {
            throw ArgumentError("a spanning tree needs at least 2 points");
        }
        if (edges_.size() != n_ - 1) {
            throw ArgumentError("a spanning tree on " + std::to_string(n_) + " points has " +
                                std::to_string(n_ - 1) + " edges, got " +
                                std::to_string(edges_.size()));
        }
        std::sort(edges_.begin(), edges_.end());
        detail::DisjointSets sets(n_);
        for (EdgeId e : edges_) {
            const auto [i, j] = edge_pair(e, n_);
            if (!sets.unite(i, j)) {
                throw ArgumentError("edge set contains a cycle");
            }
        }
    }

    std::size_t points() const noexcept { return n_; }
    std::span<const EdgeId> edges() const noexcept { return edges_; }

    bool contains(EdgeId e) const { return std::binary_search(edges_.begin(), edges_.end(), e); }

    /// Neighbour lists as (neighbour, edge index) pairs.
    std::vector<std::vector<std::pair<PointId, EdgeId>>> adjacency() const {
        std::vector<std::vector<std::pair<PointId, EdgeId>>> adj(n_);
        for (EdgeId e : edges_) {
            const auto [i, j] = edge_pair(e, n_);
            adj[i].emplace_back(j, e);
            adj[j].emplace_back(i, e);
        }
        return adj;
    }

    friend bool operator==(const SpanningTree&, const SpanningTree&) = default;
    friend auto operator<=>(const SpanningTree&, const SpanningTree&) = default;

  private:
    std::size_t n_;
    std::vector<EdgeId> edges_;
};

/// A spanning tree with one nonnegative weight per tree edge, aligned with
/// tree.edges().
class WeightedSpanningTree {
  public:
    WeightedSpanningTree(SpanningTree tree, std::vector<double> weights)
        : tree_{std::move(tree)}, weights_{std::move(weights)} {
        if (weights_.size() != tree_.edges().size()) {
            throw DimensionError("weight count must equal the number of tree edges");
        }
        for (double v : weights_) {
            if (!std::isfinite(v) || v < 0.0) {
                throw ArgumentError("tree weights must be finite and nonnegative");
            }
        }
    }

    /// The tree T carrying the weights of w on its edges.
    static WeightedSpanningTree restrict(SpanningTree tree, const EdgeVector& w) {
        if (tree.points() != w.points()) {
            throw DimensionError("tree and weight have different point counts");
        }
        std::vector<double> weights;
        weights.reserve(tree.edges().size());
        for (EdgeId e : tree.edges()) {
            weights.push_back(w[e]);
        }
        return WeightedSpanningTree(std::move(tree), std::move(weights));
    }

    const SpanningTree& tree() const noexcept { return tree_; }
    std::span<const double> weights() const noexcept { return weights_; }
    std::size_t points() const noexcept { return tree_.points(); }

    /// Weight of tree edge e; e must belong to the tree.
    double weight_of(EdgeId e) const {
        const auto edges = tree_.edges();
        const auto it = std::lower_bound(edges.begin(), edges.end(), e);
        if (it == edges.end() || *it != e) {
            throw ArgumentError("edge is not in the tree");
        }
        return weights_[static_cast<std::size_t>(it - edges.begin())];
    }

    double total_weight() const { return std::accumulate(weights_.begin(), weights_.end(), 0.0); }

  private:
    SpanningTree tree_;
    std::vector<double> weights_;
};

inline double total_weight(const SpanningTree& t, const EdgeVector& w) {
    double sum = 0.0;
    for (EdgeId e : t.edges()) {
        sum += w[e];
    }
    return sum;
}

/// Kruskal over arbitrary real keys (negative allowed). Ties are broken by
/// edge index, so the result is deterministic on non-generic input.
inline SpanningTree kruskal(std::size_t n, std::span<const double> keys) {
    if (keys.size() != edge_count(n)) {
        throw DimensionError("key count does not match n");
    }
    std::vector<EdgeId> order(keys.size());
    std::iota(order.begin(), order.end(), EdgeId{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](EdgeId a, EdgeId b) { return keys[a] < keys[b]; });
    detail::DisjointSets sets(n);
    std::vector<EdgeId> chosen;
    chosen.reserve(n - 1);
    for (EdgeId e : order) {
        const auto [i, j] = edge_pair(e, n);
        if (sets.unite(i, j)) {
            chosen.push_back(e);
            if (chosen.size() == n - 1) {
                break;
            }
        }
    }
    return SpanningTree(n, std::move(chosen));
}

inline WeightedSpanningTree mst(const EdgeVector& w) {
    return WeightedSpanningTree::restrict(kruskal(w.points(), w.values()), w);
}

/// Decodes a Prüfer sequence (length n-2, entries in [0, n)) into its tree.
inline SpanningTree tree_from_prufer(std::size_t n, std::span<const std::size_t> code) {
    if (n < 2 || code.size() != n - 2) {
        throw ArgumentError("a Prüfer code for n points has n-2 entries");
    }
    std::vector<std::size_t> degree(n, 1);
    for (std::size_t v : code) {
        if (v >= n) {
            throw ArgumentError("Prüfer entry out of range");
        }
        ++degree[v];
    }
    std::vector<EdgeId> edges;
    edges.reserve(n - 1);
    for (std::size_t v : code) {
        std::size_t leaf = 0;
        while (degree[leaf] != 1) {
            ++leaf;
        }
        edges.push_back(edge_index(leaf, v, n));
        --degree[leaf];
        --degree[v];
    }
    std::size_t first = n;
    for (std::size_t v = 0; v < n; ++v) {
        if (degree[v] == 1) {
            if (first == n) {
                first = v;
            } else {
                edges.push_back(edge_index(first, v, n));
                break;
            }
        }
    }
    return SpanningTree(n, std::move(edges));
}

/// Single-pass enumeration of the n^(n-2) labelled trees on n points,
/// decoding Prüfer sequences in lexicographic order.
class SpanningTreeStream {
  public:
    explicit SpanningTreeStream(std::size_t n) : n_{n}, code_(n >= 2 ? n - 2 : 0, 0) {
        detail::require_enumerable(n);
    }

    std::optional<SpanningTree> next() {
        if (done_) {
            return std::nullopt;
        }
        SpanningTree tree = decode();
        advance();
        return tree;
    }

    std::size_t points() const noexcept { return n_; }

  private:
    SpanningTree decode() const { return tree_from_prufer(n_, code_); }

    void advance() {
        for (std::size_t pos = code_.size(); pos-- > 0;) {
            if (++code_[pos] < n_) {
                return;
            }
            code_[pos] = 0;
        }
        done_ = true;
    }

    std::size_t n_;
    std::vector<std::size_t> code_;
    bool done_ = false;
};

inline std::vector<SpanningTree> all_spanning_trees(std::size_t n) {
    SpanningTreeStream stream(n);
    std::vector<SpanningTree> trees;
    while (auto t = stream.next()) {
        trees.push_back(std::move(*t));
    }
    return trees;
}

/// Every minimum spanning tree of w, in Prüfer enumeration order.
inline std::vector<SpanningTree> all_msts(const EdgeVector& w) {
    const std::size_t n = w.points();
    SpanningTreeStream stream(n);
    std::vector<SpanningTree> best;
    double best_total = std::numeric_limits<double>::infinity();
    while (auto t = stream.next()) {
        const double total = total_weight(*t, w);
        if (total < best_total - kTreeWeightTolerance) {
            best.clear();
            best_total = total;
            best.push_back(std::move(*t));
        } else if (total <= best_total + kTreeWeightTolerance) {
            best.push_back(std::move(*t));
        }
    }
    // The running minimum may have dropped by less than the tolerance after
    // some trees were kept.
    std::erase_if(best, [&](const SpanningTree& t) {
        return total_weight(t, w) > best_total + kTreeWeightTolerance;
    });
    return best;
}

/// Number of edges of t1 missing from t2.
inline std::size_t kruskal_distance(const SpanningTree& t1, const SpanningTree& t2) {
    if (t1.points() != t2.points()) {
        throw DimensionError("trees have different point counts");
    }
    std::vector<EdgeId> diff;
    std::set_difference(t1.edges().begin(), t1.edges().end(), t2.edges().begin(),
                        t2.edges().end(), std::back_inserter(diff));
    return diff.size();
}

/// Edges of the unique tree path from x to y, in walking order.
inline std::vector<EdgeId> path_edges(const SpanningTree& t, PointId x, PointId y) {
    const std::size_t n = t.points();
    if (x == y || x >= n || y >= n) {
        throw InvalidPairError("path endpoints must be distinct points of the tree");
    }
    const auto adj = t.adjacency();
    constexpr auto kNone = std::numeric_limits<std::size_t>::max();
    std::vector<std::size_t> parent(n, kNone);
    std::vector<EdgeId> via(n, 0);
    std::vector<PointId> queue{x};
    parent[x] = x;
    for (std::size_t head = 0; head < queue.size(); ++head) {
        const PointId v = queue[head];
        for (const auto& [next, e] : adj[v]) {
            if (parent[next] == kNone) {
                parent[next] = v;
                via[next] = e;
                queue.push_back(next);
            }
        }
    }
    std::vector<EdgeId> path;
    for (PointId v = y; v != x; v = parent[v]) {
        path.push_back(via[v]);
    }
    std::reverse(path.begin(), path.end());
    return path;
}

namespace detail {

// Fills out[edge(s, v)] with combine-folded tree weights along every path
// leaving each source s.
template <typename Combine>
std::vector<double> fold_tree_paths(const WeightedSpanningTree& tw, Combine combine) {
    const std::size_t n = tw.points();
    const auto adj = tw.tree().adjacency();
    std::vector<double> out(edge_count(n), 0.0);
    std::vector<double> acc(n);
    std::vector<bool> visited(n);
    std::vector<PointId> stack;
    for (PointId s = 0; s < n; ++s) {
        std::fill(visited.begin(), visited.end(), false);
        visited[s] = true;
        acc[s] = 0.0;
        stack.assign(1, s);
        while (!stack.empty()) {
            const PointId v = stack.back();
            stack.pop_back();
            for (const auto& [next, e] : adj[v]) {
                if (visited[next]) {
                    continue;
                }
                visited[next] = true;
                acc[next] = v == s ? tw.weight_of(e) : combine(acc[v], tw.weight_of(e));
                if (s < next) {
                    out[edge_index(s, next, n)] = acc[next];
                }
                stack.push_back(next);
            }
        }
    }
    return out;
}

}  // namespace detail

/// Ultrametric of maximum weight along each tree path. Output values are
/// copies of tree weights, so the ultrametric inequality holds exactly.
inline UltraMetric alpha(const WeightedSpanningTree& tw) {
    auto values = detail::fold_tree_paths(tw, [](double a, double b) { return std::max(a, b); });
    return UltraMetric::assume_valid(EdgeVector(tw.points(), std::move(values)));
}

/// Tree metric of summed weights along each tree path. Sums taken along
/// different paths round differently, so off-tree values are closed under the
/// triangle inequality afterwards; this moves them by at most a few ulps and
/// never changes a tree edge.
inline MetricVector omega(const WeightedSpanningTree& tw) {
    auto values = detail::fold_tree_paths(tw, [](double a, double b) { return a + b; });
    detail::close_triangles(values, tw.points());
    return MetricVector::assume_valid(EdgeVector(tw.points(), std::move(values)));
}

}  // namespace slhc
