#include <gtest/gtest.h>

#include <cstdint>
#include <iostream>

#include "slhc/checks.hpp"

namespace {

constexpr std::uint64_t kSeed = 20240501;

void run_criterion(int id) {
    for (const auto& check : slhc::checks::all_checks()) {
        if (check.id != id) continue;
        const auto result = check.run(kSeed);
        std::cout << slhc::checks::format_result(result) << std::endl;
        EXPECT_TRUE(result.passed) << result.detail;
        return;
    }
    FAIL() << "no criterion " << id;
}

}  // namespace

TEST(Acceptance, Criterion01OracleEquivalence) { run_criterion(1); }
TEST(Acceptance, Criterion02Axioms) { run_criterion(2); }
TEST(Acceptance, Criterion03MstInvariance) { run_criterion(3); }
TEST(Acceptance, Criterion04FiberCorrectness) { run_criterion(4); }
TEST(Acceptance, Criterion05MppleEqualsSlhc) { run_criterion(5); }
TEST(Acceptance, Criterion06SigmaTrend) { run_criterion(6); }
TEST(Acceptance, Criterion07ConsistencyTrend) { run_criterion(7); }
TEST(Acceptance, Criterion08ExponentialFamily) { run_criterion(8); }
TEST(Acceptance, Criterion09DendrogramRoundTrip) { run_criterion(9); }
TEST(Acceptance, Criterion10LikelihoodFactorization) { run_criterion(10); }
