#include <gtest/gtest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "slhc/plot.hpp"
#include "slhc/simharness.hpp"

namespace slhc {

namespace {

SweepConfig small_config(SweepKind kind, std::vector<double> grid, std::size_t trials) {
    SweepConfig cfg;
    cfg.kind = kind;
    cfg.grid = std::move(grid);
    cfg.trials = trials;
    cfg.seed = 7;
    cfg.threads = 1;
    return cfg;
}

std::string csv_text(const std::vector<SweepRow>& rows) {
    std::ostringstream out;
    write_csv(out, rows);
    return out.str();
}

std::filesystem::path temp_file(const std::string& name) {
    return std::filesystem::temp_directory_path() / name;
}

}  // namespace

TEST(GroundTruthMetric, IsAMetricInsideTheBox) {
    Rng rng(91);
    for (int k = 0; k < 200; ++k) {
        const auto draw = sample_ground_truth_metric(5, 100.0, rng);
        EXPECT_TRUE(is_metric(draw.metric));
        EXPECT_GE(draw.attempts, 1u);
        for (double v : draw.metric) {
            EXPECT_GT(v, 0.0);
            EXPECT_LT(v, 100.0);
        }
    }
}

TEST(GroundTruthMetric, ThreePointAcceptanceIsOneHalf) {
    // Three iid uniforms fail the triangle inequality when the largest exceeds
    // the sum of the other two: probability 3 * 1/6.
    Rng rng(92);
    std::size_t attempts = 0;
    const std::size_t draws = 20000;
    for (std::size_t k = 0; k < draws; ++k) attempts += sample_ground_truth_metric(3, 1.0, rng).attempts;
    const double rate = static_cast<double>(draws) / static_cast<double>(attempts);
    EXPECT_NEAR(rate, 0.5, 0.01);
}

TEST(GroundTruthMetric, DeterministicAndBounded) {
    Rng a(93), b(93);
    EXPECT_EQ(sample_ground_truth_metric(6, 10.0, a).metric, sample_ground_truth_metric(6, 10.0, b).metric);
    EXPECT_THROW(sample_ground_truth_metric(2, 1.0, a), ArgumentError);
    EXPECT_THROW(sample_ground_truth_metric(8, 1.0, a, 1), SamplingError);
}

TEST(ParseGrid, Forms) {
    EXPECT_EQ(parse_grid("1,2.5, 4"), (std::vector<double>{1.0, 2.5, 4.0}));
    EXPECT_EQ(parse_grid("pow2:0:4"), (std::vector<double>{1, 2, 4, 8, 16}));
    EXPECT_EQ(parse_grid("pow2:0:16:2").size(), 9u);
    const auto sigma = parse_grid("exp:0:-8:-0.2");
    ASSERT_EQ(sigma.size(), 41u);
    EXPECT_EQ(sigma.front(), 1.0);
    EXPECT_NEAR(sigma.back(), std::exp(-8.0), 1e-15);
    EXPECT_EQ(default_grid(SweepKind::sigma, true), sigma);
    EXPECT_EQ(default_grid(SweepKind::nsamples, true).back(), 65536.0);
    EXPECT_EQ(default_grid(SweepKind::sigma, false).size(), 21u);
    EXPECT_THROW(parse_grid(""), ArgumentError);
    EXPECT_THROW(parse_grid("exp:0:1"), ArgumentError);
    EXPECT_THROW(parse_grid("exp:0:-8:0.2"), ArgumentError);
    EXPECT_THROW(parse_grid("1,x"), ArgumentError);
}

TEST(SweepConfig, Validation) {
    auto cfg = small_config(SweepKind::sigma, {0.1}, 10);
    EXPECT_NO_THROW(cfg.validate());
    auto bad = cfg;
    bad.n_points = 2;
    EXPECT_THROW(bad.validate(), ArgumentError);
    bad = cfg;
    bad.trials = 0;
    EXPECT_THROW(bad.validate(), ArgumentError);
    bad = cfg;
    bad.grid = {};
    EXPECT_THROW(bad.validate(), ArgumentError);
    bad = cfg;
    bad.grid = {-1.0};
    EXPECT_THROW(bad.validate(), ArgumentError);
    bad = small_config(SweepKind::nsamples, {1.5}, 10);
    EXPECT_THROW(bad.validate(), ArgumentError);
    EXPECT_THROW(run_n_sweep(cfg), ArgumentError);
    EXPECT_THROW(parse_sweep_kind("size"), ArgumentError);
}

TEST(Sweep, SingleSampleRowMatchesSigmaRow) {
    const auto sigma_rows = run_sigma_sweep(small_config(SweepKind::sigma, {0.3}, 200));
    const auto n_rows = run_n_sweep(small_config(SweepKind::nsamples, {1}, 200));
    ASSERT_EQ(sigma_rows.size(), 1u);
    ASSERT_EQ(n_rows.size(), 1u);
    EXPECT_EQ(sigma_rows[0].incorrect_ratio, n_rows[0].incorrect_ratio);
    EXPECT_EQ(sigma_rows[0].mean_l1, n_rows[0].mean_l1);
    EXPECT_EQ(sigma_rows[0].mpple_match_ratio, n_rows[0].mpple_match_ratio);
}

TEST(Sweep, ReproducibleAndThreadIndependent) {
    auto cfg = small_config(SweepKind::sigma, {1.0, 0.1}, 100);
    const auto first = csv_text(run_sweep(cfg));
    EXPECT_EQ(first, csv_text(run_sweep(cfg)));
    cfg.threads = 4;
    EXPECT_EQ(first, csv_text(run_sweep(cfg)));
    cfg.seed = 8;
    EXPECT_NE(first, csv_text(run_sweep(cfg)));
}

TEST(Sweep, CallbackSeesEveryRow) {
    std::vector<SweepRow> seen;
    const auto rows = run_sweep(small_config(SweepKind::sigma, {1.0, 0.5, 0.1}, 20),
                                [&](const SweepRow& r) { seen.push_back(r); });
    EXPECT_EQ(seen, rows);
}

TEST(Sweep, FixedThetaSharesGroundTruth) {
    auto cfg = small_config(SweepKind::sigma, {0.3}, 5);
    cfg.fix_theta = true;
    // With vanishing noise every trial sees the same theta, so all estimates
    // agree with one shared ultrametric.
    cfg.grid = {1e-12};
    const auto row = run_sweep(cfg).front();
    EXPECT_EQ(row.incorrect_ratio, 0.0);
    EXPECT_LT(row.mean_l1, 1e-8);
    Rng a(1), b(2);
    EXPECT_EQ(detail::trial_theta(cfg, a), detail::trial_theta(cfg, b));
    cfg.fix_theta = false;
    EXPECT_NE(detail::trial_theta(cfg, a), detail::trial_theta(cfg, b));
}

TEST(Sweep, TrialRecordInvariants) {
    const auto cfg = small_config(SweepKind::sigma, {1.0, 0.05}, 50);
    for (std::size_t g = 0; g < cfg.grid.size(); ++g) {
        for (const auto& r : run_grid_point(cfg, g)) {
            EXPECT_GE(r.l1_err, 0.0);
            if (r.l1_err == 0.0) {
                EXPECT_TRUE(r.structure_correct);
            }
            EXPECT_TRUE(r.mpple_equals_slhc);
        }
    }
}

TEST(Sweep, StandardErrorAndAggregation) {
    std::vector<TrialRecord> records(4);
    records[0].structure_correct = true;
    records[1].structure_correct = true;
    records[2].l1_err = 2.0;
    records[3].l1_err = 6.0;
    records[3].mpple_equals_slhc = true;
    const auto row = aggregate(SweepKind::sigma, 0.5, 3, records);
    EXPECT_EQ(row.incorrect_ratio, 0.5);
    EXPECT_EQ(row.mean_l1, 2.0);
    EXPECT_EQ(row.mpple_match_ratio, 0.25);
    EXPECT_DOUBLE_EQ(row.incorrect_std_error(), 0.25);
}

TEST(Csv, HeaderAndRoundTrip) {
    const auto rows = run_sweep(small_config(SweepKind::nsamples, {1, 4}, 20));
    const auto text = csv_text(rows);
    EXPECT_EQ(text.substr(0, text.find('\n')),
              "sweep,grid_value,trials,incorrect_ratio,mean_l1,mpple_match_ratio,seed");
    std::istringstream in(text);
    EXPECT_EQ(read_csv(in), rows);

    const auto path = temp_file("slhc_roundtrip.csv");
    emit_csv(rows, path.string());
    EXPECT_EQ(load_csv(path.string()), rows);
    std::filesystem::remove(path);
}

TEST(Csv, Errors) {
    EXPECT_THROW(emit_csv({}, temp_file("slhc_empty.csv").string()), ArgumentError);
    const std::vector<SweepRow> rows(1);
    EXPECT_THROW(emit_csv(rows, "/nonexistent-dir/out.csv"), IoError);
    EXPECT_THROW(load_csv("/nonexistent-dir/in.csv"), IoError);
    std::istringstream wrong_header("a,b\n");
    EXPECT_THROW(read_csv(wrong_header), ArgumentError);
    std::istringstream short_row(std::string(kCsvHeader) + "\nsigma,1,2\n");
    EXPECT_THROW(read_csv(short_row), ArgumentError);
}

TEST(KeyValues, ParsesAndApplies) {
    std::istringstream in("# sweep settings\nkind=nsamples trials=25\nn=4 box=50\n"
                          "grid=pow2:0:3\nseed=11\nsigma=0.2 fix-theta=yes\nthreads=2\n");
    SweepConfig cfg;
    apply_key_values(parse_key_values(in), cfg);
    EXPECT_EQ(cfg.kind, SweepKind::nsamples);
    EXPECT_EQ(cfg.trials, 25u);
    EXPECT_EQ(cfg.n_points, 4u);
    EXPECT_EQ(cfg.metric_box, 50.0);
    EXPECT_EQ(cfg.grid, (std::vector<double>{1, 2, 4, 8}));
    EXPECT_EQ(cfg.seed, 11u);
    EXPECT_EQ(cfg.model_params.at("sigma"), 0.2);
    EXPECT_TRUE(cfg.fix_theta);
    EXPECT_EQ(cfg.threads, 2u);

    std::istringstream malformed("trials\n");
    EXPECT_THROW(parse_key_values(malformed), ArgumentError);
    EXPECT_THROW(apply_key_values({{"trials", "many"}}, cfg), ArgumentError);
    EXPECT_THROW(apply_key_values({{"fix-theta", "maybe"}}, cfg), ArgumentError);
}

TEST(Plot, RendersBothPanels) {
    const auto rows = run_sweep(small_config(SweepKind::sigma, {1.0, 0.1}, 20));
    const auto svg = render_svg({{"sigma sweep", rows}});
    EXPECT_EQ(svg.rfind("<svg", 0), 0u);
    EXPECT_NE(svg.find("Incorrect dendrogram structure ratio"), std::string::npos);
    EXPECT_NE(svg.find("Mean l1 error"), std::string::npos);
    EXPECT_NE(svg.find("ln(sigma)"), std::string::npos);
    EXPECT_NE(svg.find("</svg>"), std::string::npos);
    EXPECT_THROW(render_svg({}), ArgumentError);
    EXPECT_THROW(write_svg({{"x", rows}}, "/nonexistent-dir/p.svg"), IoError);
}

}  // namespace slhc
