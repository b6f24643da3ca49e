#include "oracles.hpp"
#include "pathreg/error.hpp"
#include "pathreg/experiments.hpp"
#include "pathreg/ridge.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace pathreg {
namespace {

// All 8-part weak compositions of n.
std::vector<ContingencyTable222> all_tables(std::uint64_t n) {
  std::vector<ContingencyTable222> out;
  std::array<std::uint64_t, 8> cells{};
  auto rec = [&](auto&& self, std::size_t i, std::uint64_t left) -> void {
    if (i == 7) {
      cells[7] = left;
      out.emplace_back(cells);
      return;
    }
    for (std::uint64_t v = 0; v <= left; ++v) {
      cells[i] = v;
      self(self, i + 1, left - v);
    }
  };
  rec(rec, 0, n);
  return out;
}

// Reversal anywhere on a fine rational grid, judged against the sign of the
// path just above zero. Exact arithmetic throughout.
bool pathological_oracle(const ContingencyTable222& t) {
  const Dataset ds = encode(t);
  const Rational eps(1, 1000000000000LL);
  const auto near_zero = testing::ridge_exact_oracle(ds, eps);
  for (std::size_t k = 0; k < 2; ++k) {
    const int s0 = sign(near_zero[k]);
    // A true trend of exactly zero is approached with |beta| of order eps.
    if (s0 == 0 || abs(near_zero[k]) < Rational(1, 1000000)) continue;
    for (int e = -40; e <= 64; ++e) {
      const Rational c = e >= 0 ? Rational(BigInt(1) << e) : Rational(1, BigInt(1) << -e);
      if (sign(testing::ridge_exact_oracle(ds, c)[k]) == -s0) return true;
    }
  }
  return false;
}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

TEST(Wilson, MatchesFormula) {
  const double z = 1.959963984540054;
  for (auto [h, n] : {std::pair<std::uint64_t, std::uint64_t>{0, 10}, {3, 10}, {10, 10}, {250, 1000}}) {
    const auto r = wilson_interval(h, n);
    const double p = static_cast<double>(h) / static_cast<double>(n);
    const double nn = static_cast<double>(n);
    const double centre = (p + z * z / (2 * nn)) / (1 + z * z / nn);
    const double half = z / (1 + z * z / nn) * std::sqrt(p * (1 - p) / nn + z * z / (4 * nn * nn));
    EXPECT_NEAR(r.lo, centre - half, 1e-12);
    EXPECT_NEAR(r.hi, centre + half, 1e-12);
    EXPECT_DOUBLE_EQ(r.estimate, p);
    EXPECT_LE(r.lo, r.estimate);
    EXPECT_GE(r.hi, r.estimate);
  }
  EXPECT_NEAR(wilson_interval(0, 10).hi, z * z / (10 + z * z), 1e-12);
}

TEST(Wilson, ShrinksLikeInverseRootM) {
  const double w100 = wilson_interval(30, 100).hi - wilson_interval(30, 100).lo;
  const double w400 = wilson_interval(120, 400).hi - wilson_interval(120, 400).lo;
  const double w1600 = wilson_interval(480, 1600).hi - wilson_interval(480, 1600).lo;
  EXPECT_NEAR(w100 / w400, 2.0, 0.05);
  EXPECT_NEAR(w400 / w1600, 2.0, 0.05);
}

TEST(Experiments, ExactCriterionOnAllSmallTables) {
  for (std::uint64_t n = 1; n <= 4; ++n) {
    for (const auto& t : all_tables(n)) {
      bool exact = false;
      for (const auto& r : pathological_regime_exact(encode(t))) exact = exact || !r.regime.empty();
      ASSERT_EQ(exact, pathological_oracle(t)) << format_table_csv(t);
    }
  }
}

TEST(Experiments, SmallNRatioMatchesEnumeration) {
  // Uniform draws over D_4 (330 tables): the estimate should sit near the
  // enumerated fraction.
  const auto tables = all_tables(4);
  ASSERT_EQ(tables.size(), 330u);
  std::size_t bad = 0;
  for (const auto& t : tables) bad += pathological_oracle(t);
  const double p = static_cast<double>(bad) / 330.0;
  ExperimentSpec spec;
  spec.sizes = {4};
  spec.m = 4000;
  spec.seed = 1;
  const auto rows = run_ridge_ratio_experiment(spec);
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_NEAR(rows[0].ratio.estimate, p, 4 * std::sqrt(p * (1 - p) / 4000) + 1e-12);
}

TEST(Experiments, RidgeRatioDeterministicAcrossThreads) {
  ExperimentSpec spec;
  spec.sizes = {100, 300};
  spec.m = 150;
  spec.simpson = true;
  spec.seed = 77;
  const auto a = results_csv(run_experiment(spec));
  spec.threads = 3;
  const auto b = results_csv(run_experiment(spec));
  EXPECT_EQ(a, b);
  spec.seed = 78;
  EXPECT_NE(a, results_csv(run_experiment(spec)));
}

TEST(Experiments, NumericScanGivesIdenticalVerdicts) {
  ExperimentSpec spec;
  spec.sizes = {200};
  spec.m = 500;
  spec.seed = 5;
  spec.simpson = true;
  const auto exact = run_ridge_ratio_experiment(spec);
  spec.numeric = true;
  const auto numeric = run_ridge_ratio_experiment(spec);
  ASSERT_EQ(exact.size(), numeric.size());
  for (std::size_t i = 0; i < exact.size(); ++i) EXPECT_EQ(exact[i].ratio.hits, numeric[i].ratio.hits);
}

TEST(Experiments, BernoulliRatioDecreasesWithN) {
  ExperimentSpec spec;
  spec.sizes = {20, 100};
  spec.m = 3000;
  spec.schemes = {Scheme::bernoulli};
  spec.seed = 3;
  const auto rows = run_ridge_ratio_experiment(spec);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_GT(rows[0].ratio.estimate, rows[1].ratio.estimate);
}

TEST(Experiments, AverageGammaShiftsRight) {
  ExperimentSpec spec;
  spec.kind = ExperimentKind::avg_gamma_vs_n;
  spec.sizes = {50, 200, 800};
  spec.m = 2000;
  spec.seed = 11;
  const auto rows = run_avg_gamma_experiment(spec);
  ASSERT_EQ(rows.size(), 3u);
  for (const auto& r : rows) {
    EXPECT_GE(r.pathological, 30u);
    EXPECT_LE(r.lo, r.mean_gamma);
    EXPECT_GE(r.hi, r.mean_gamma);
  }
  EXPECT_LT(rows[0].mean_gamma, rows[1].mean_gamma);
  EXPECT_LT(rows[1].mean_gamma, rows[2].mean_gamma);
}

TEST(Experiments, AverageGammaNeedsEnoughDraws) {
  ExperimentSpec spec;
  spec.kind = ExperimentKind::avg_gamma_vs_n;
  spec.sizes = {100};
  spec.m = 20;
  try {
    run_avg_gamma_experiment(spec);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InsufficientPathologicalDraws);
  }
}

TEST(Experiments, FixtureAloneHasRatioOne) {
  const Dataset ds = encode(read_table_csv(std::string(PATHREG_FIXTURE_DIR) + "/pathological-default.csv"));
  ExperimentSpec spec;
  spec.kind = ExperimentKind::logistic_ratios;
  spec.strata = Strata::x2;
  const auto row = logistic_ratio_of({ds}, spec);
  EXPECT_EQ(row.ratio.total, 1u);
  EXPECT_DOUBLE_EQ(row.ratio.estimate, 1.0);
}

TEST(Experiments, CvDemoOnFixture) {
  const Dataset ds = encode(read_table_csv(std::string(PATHREG_FIXTURE_DIR) + "/pathological-default.csv"));
  ExperimentSpec spec;
  spec.kind = ExperimentKind::cv_demo;
  spec.seed = 20240601;
  const auto report = run_cv_demo(spec, ds);
  EXPECT_EQ(report.variable, 2u);
  EXPECT_TRUE(report.reversal);
  ASSERT_EQ(report.arms.size(), 2u);
  for (const auto& arm : report.arms) {
    for (int j = 0; j < 2; ++j) {
      EXPECT_LT(arm.baseline[j], 0.0);
      EXPECT_GT(arm.trends[j], 0.0);
      EXPECT_TRUE(arm.reversed[j]);
    }
    EXPECT_TRUE(arm.in_scanned_regime);
  }
}

TEST(Experiments, CvDemoWithoutReversal) {
  ExperimentSpec spec;
  spec.kind = ExperimentKind::cv_demo;
  const auto report = run_cv_demo(spec, encode(ContingencyTable222({9, 9, 9, 9, 9, 9, 9, 9})));
  EXPECT_FALSE(report.reversal);
  for (const auto& arm : report.arms) EXPECT_FALSE(arm.in_scanned_regime);
}

TEST(Experiments, LogisticRatiosSmall) {
  ExperimentSpec spec;
  spec.kind = ExperimentKind::logistic_ratios;
  spec.sizes = {100};
  spec.m = 10;
  spec.seed = 4;
  const auto rows = run_logistic_ratio_experiment(spec);
  ASSERT_EQ(rows.size(), 2u);
  const auto& simpson = rows[0].simpson ? rows[0] : rows[1];
  EXPECT_EQ(simpson.ratio.total, 10u);
  EXPECT_DOUBLE_EQ(simpson.ratio.estimate, 1.0);
  EXPECT_LT(simpson.acceptance_rate, 1.0);
}

TEST(Experiments, SpecValidation) {
  ExperimentSpec spec;
  spec.m = 0;
  EXPECT_THROW(run_experiment(spec), Error);
  spec.m = 5;
  spec.sizes.clear();
  EXPECT_THROW(run_experiment(spec), Error);
  spec.sizes = {10};
  spec.kind = ExperimentKind::cv_demo;
  EXPECT_THROW(run_experiment(spec), Error);
  EXPECT_EQ(parse_experiment_kind("avg-gamma-vs-n"), ExperimentKind::avg_gamma_vs_n);
  EXPECT_THROW(parse_experiment_kind("nope"), Error);
}

TEST(Experiments, OutputLayoutAndByteIdentity) {
  const auto root = std::filesystem::temp_directory_path() / "pathreg_unit_out";
  std::filesystem::remove_all(root);
  ExperimentSpec spec;
  spec.sizes = {60};
  spec.m = 40;
  spec.seed = 9;
  const auto a = write_experiment(run_experiment(spec), root, "a");
  const auto b = write_experiment(run_experiment(spec), root, "b");
  EXPECT_EQ(a, root / "ratio-vs-n" / "a");
  for (const char* f : {"results.csv", "summary.json", "manifest.json"}) EXPECT_TRUE(std::filesystem::exists(a / f));
  EXPECT_EQ(read_file(a / "results.csv"), read_file(b / "results.csv"));
  EXPECT_EQ(read_file(a / "summary.json"), read_file(b / "summary.json"));
  const auto manifest = nlohmann::json::parse(read_file(a / "manifest.json"));
  EXPECT_EQ(manifest["prng_version"], "splitmix64-counter-v1");
  EXPECT_TRUE(manifest.contains("created"));
  const auto summary = nlohmann::json::parse(read_file(a / "summary.json"));
  EXPECT_EQ(summary["seed"], 9);
  EXPECT_FALSE(summary.contains("created"));
  std::filesystem::remove_all(root);
}

}  // namespace
}  // namespace pathreg
