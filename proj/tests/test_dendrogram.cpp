#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "slhc/dendrogram.hpp"
#include "slhc/generators.hpp"

namespace slhc {

TEST(DendrogramOf, ConstantUltrametric) {
    const auto d = dendrogram_of(UltraMetric(EdgeVector::constant(3, 4.0)));
    EXPECT_EQ(d.structure(), (std::vector<Partition>{{0, 1, 2}, {0, 0, 0}}));
    EXPECT_EQ(d.heights(), (std::vector<double>{4.0}));
}

TEST(DendrogramOf, TwoLevels) {
    const auto d = dendrogram_of(UltraMetric(3, {1, 2, 2}));
    EXPECT_EQ(d.structure(), (std::vector<Partition>{{0, 1, 2}, {0, 0, 1}, {0, 0, 0}}));
    EXPECT_EQ(d.heights(), (std::vector<double>{1.0, 2.0}));
    EXPECT_EQ(to_newick(d), "((0,1):1,2):2;");
}

TEST(DendrogramOf, SimultaneousMergesAreOneStep) {
    // {0,1} and {2,3} both form at 1, then everything joins at 5.
    const UltraMetric u(4, {1, 5, 5, 5, 5, 1});
    const auto d = dendrogram_of(u);
    EXPECT_EQ(d.heights(), (std::vector<double>{1.0, 5.0}));
    EXPECT_EQ(to_newick(d), "((0,1):1,(2,3):1):5;");
}

TEST(DendrogramOf, ZeroDistancesMergeAtZero) {
    const auto d = dendrogram_of(UltraMetric(3, {0, 2, 2}));
    EXPECT_EQ(d.heights(), (std::vector<double>{0.0, 2.0}));
    EXPECT_EQ(ultrametric_of(d), UltraMetric(3, {0, 2, 2}));
}

TEST(UltrametricOf, InverseOfExamples) {
    const Dendrogram two_level({{0, 1, 2}, {0, 0, 1}, {0, 0, 0}}, {1.0, 2.0});
    EXPECT_EQ(ultrametric_of(two_level), UltraMetric(3, {1, 2, 2}));
    const Dendrogram single({{0, 1}, {0, 0}}, {2.5});
    EXPECT_EQ(ultrametric_of(single)(0, 1), 2.5);
}

TEST(Dendrogram, RoundTripsBothWays) {
    Rng rng(61);
    for (int k = 0; k < 100; ++k) {
        const std::size_t n = 2 + k % 6;
        const auto u = random_ultrametric(std::max<std::size_t>(n, 3), rng);
        const auto d = dendrogram_of(u);
        EXPECT_EQ(ultrametric_of(d), u);
        EXPECT_EQ(dendrogram_of(ultrametric_of(d)), d);
        std::vector<double> distinct(u.begin(), u.end());
        std::sort(distinct.begin(), distinct.end());
        distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
        EXPECT_EQ(d.heights().size(), distinct.size());
    }
}

TEST(Dendrogram, RejectsInvalidChains) {
    EXPECT_THROW(Dendrogram({{0, 1, 2}}, {}), ArgumentError);
    EXPECT_THROW(Dendrogram({{0, 0, 1}, {0, 0, 0}}, {1.0}), ArgumentError);       // not discrete
    EXPECT_THROW(Dendrogram({{0, 1, 2}, {0, 0, 1}}, {1.0}), ArgumentError);       // not single
    EXPECT_THROW(Dendrogram({{0, 1, 2}, {0, 0, 0}}, {1.0, 2.0}), DimensionError); // heights
    EXPECT_THROW(Dendrogram({{0, 1, 2}, {0, 0, 1}, {0, 1, 1}, {0, 0, 0}}, {1, 2, 3}),
                 ArgumentError);  // {0,1} then {1,2}: not a refinement
    EXPECT_THROW(Dendrogram({{0, 1, 2}, {0, 0, 1}, {0, 0, 0}}, {2.0, 2.0}), ArgumentError);
}

TEST(SameStructure, Basics) {
    const UltraMetric u(3, {1, 2, 2});
    EXPECT_TRUE(same_structure(u, u));
    std::vector<double> doubled(u.begin(), u.end());
    for (double& v : doubled) v *= 2.0;
    EXPECT_TRUE(same_structure(u, UltraMetric(3, doubled)));
    // Relabel: 1 and 2 swapped, so {0,2} merges first instead of {0,1}.
    EXPECT_FALSE(same_structure(u, UltraMetric(3, {2, 1, 2})));
    EXPECT_THROW(same_structure(u, UltraMetric(EdgeVector::constant(4, 1.0))), DimensionError);
}

TEST(SameStructure, InvariantUnderIncreasingHeightMaps) {
    Rng rng(62);
    for (int k = 0; k < 100; ++k) {
        const auto u = random_ultrametric(6, rng);
        std::vector<double> mapped;
        for (double v : u) mapped.push_back(std::log1p(v) + v * v);
        EXPECT_TRUE(same_structure(u, UltraMetric(6, mapped)));
    }
}

TEST(SameStructure, IsAnEquivalence) {
    Rng rng(63);
    std::vector<UltraMetric> pool;
    for (int k = 0; k < 30; ++k) pool.push_back(random_ultrametric(4, rng));
    for (const auto& a : pool) {
        EXPECT_TRUE(same_structure(a, a));
        for (const auto& b : pool) {
            EXPECT_EQ(same_structure(a, b), same_structure(b, a));
            for (const auto& c : pool) {
                if (same_structure(a, b) && same_structure(b, c)) {
                    EXPECT_TRUE(same_structure(a, c));
                }
            }
        }
    }
}

TEST(L1Error, Basics) {
    const UltraMetric u(3, {1, 2, 2});
    EXPECT_EQ(l1_error(u, u), 0.0);
    EXPECT_EQ(l1_error(u, UltraMetric(3, {1, 3, 3})), 2.0);
    EXPECT_THROW(l1_error(u, EdgeVector::constant(4, 1.0)), DimensionError);
}

TEST(L1Error, IsAMetric) {
    Rng rng(64);
    for (int k = 0; k < 100; ++k) {
        const auto a = random_ultrametric(5, rng), b = random_ultrametric(5, rng),
                   c = random_ultrametric(5, rng);
        EXPECT_DOUBLE_EQ(l1_error(a, b), l1_error(b, a));
        EXPECT_LE(l1_error(a, c), l1_error(a, b) + l1_error(b, c) + 1e-9);
        EXPECT_GT(l1_error(a, b), 0.0);
    }
}

}  // namespace slhc
