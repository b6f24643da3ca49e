#pragma once

#include "pathreg/logistic.hpp"
#include "pathreg/sampling.hpp"
#include "pathreg/tables.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace pathreg {

enum class ExperimentKind { ratio_vs_n, avg_gamma_vs_n, logistic_ratios, cv_demo };

/// "ratio-vs-n", "avg-gamma-vs-n", "logistic-ratios", "cv-demo".
std::string_view to_string(ExperimentKind kind);
ExperimentKind parse_experiment_kind(std::string_view name);

/// Proportion with a Wilson score interval.
struct RatioEstimate {
  std::uint64_t hits = 0;
  std::uint64_t total = 0;
  double estimate = 0.0;
  double lo = 0.0;
  double hi = 1.0;
};

RatioEstimate wilson_interval(std::uint64_t hits, std::uint64_t total, double z = 1.959963984540054);

struct ExperimentSpec {
  ExperimentKind kind = ExperimentKind::ratio_vs_n;
  std::vector<std::uint64_t> sizes{50, 100, 200, 400, 800, 1600};
  std::uint64_t m = 500;
  /// logistic_ratios: number of non-Simpson datasets (defaults to m).
  std::optional<std::uint64_t> m_control;
  /// Empty means the default for the kind: uniform_composition for the ridge
  /// experiments, dirichlet_rounded for logistic_ratios.
  std::vector<Scheme> schemes;
  /// ratio_vs_n: rows for unconditioned draws and/or Simpson-conditioned draws.
  bool unconditioned = true;
  bool simpson = false;
  bool intercept = false;
  /// ratio_vs_n: grid scan instead of the exact criterion.
  bool numeric = false;
  WeightScheme weights = WeightScheme::uniform;
  /// Regularization grid; empty means the default for the kind.
  std::string grid;
  /// cv_demo: cross-validation grid; empty means the inverse-C default.
  std::string cv_grid;
  std::size_t folds = 5;
  Strata strata = Strata::x1;
  /// cv_demo: trend conditioning; unset means the Simpson strata variable.
  std::optional<std::size_t> variable;
  std::uint64_t seed = 0;
  std::uint64_t max_rejects = 10'000'000;
  unsigned threads = 1;
};

nlohmann::ordered_json spec_to_json(const ExperimentSpec& spec);

struct RatioRow {
  std::uint64_t n = 0;
  Scheme scheme = Scheme::uniform_composition;
  bool simpson = false;
  RatioEstimate ratio;
  std::uint64_t candidates = 0;
  double acceptance_rate = 1.0;
};

struct GammaRow {
  std::uint64_t n = 0;
  Scheme scheme = Scheme::uniform_composition;
  std::uint64_t draws = 0;
  std::uint64_t pathological = 0;
  double mean_gamma = 0.0;
  double lo = 0.0;
  double hi = 0.0;
};

struct LogisticRatioRow {
  std::uint64_t n = 0;
  Scheme scheme = Scheme::dirichlet_rounded;
  bool simpson = false;
  RatioEstimate ratio;      // verdict on the Simpson strata variable
  RatioEstimate ratio_any;  // reversal for any (variable, value)
  std::uint64_t non_converged_points = 0;
  double acceptance_rate = 1.0;
};

struct CvDemoArm {
  WeightScheme weights = WeightScheme::uniform;
  std::array<double, 2> baseline{};  // same weighting, smallest scan c
  double chosen_c = 0.0;
  std::array<double, 2> trends{};    // j = 0, 1 at the chosen c
  std::array<bool, 2> reversed{};
  bool in_scanned_regime = false;
  CvResult cv;
};

struct CvDemoReport {
  std::size_t variable = 2;
  SimpsonVerdict simpson_x1 = SimpsonVerdict::none;
  SimpsonVerdict simpson_x2 = SimpsonVerdict::none;
  double baseline_c = 0.0;
  std::array<double, 2> baseline{};  // uniform weighting
  std::vector<CvDemoArm> arms;       // uniform, then balanced
  bool reversal = false;
};

std::vector<RatioRow> run_ridge_ratio_experiment(const ExperimentSpec& spec);
/// Throws Error(InsufficientPathologicalDraws) below 30 pathological draws at some N.
std::vector<GammaRow> run_avg_gamma_experiment(const ExperimentSpec& spec);
std::vector<LogisticRatioRow> run_logistic_ratio_experiment(const ExperimentSpec& spec);
/// With a single dataset, the ratio is computed on it alone.
LogisticRatioRow logistic_ratio_of(const std::vector<Dataset>& datasets, const ExperimentSpec& spec);
CvDemoReport run_cv_demo(const ExperimentSpec& spec, const Dataset& dataset);

/// Uniform representation used for files and terminal output.
struct ExperimentResult {
  ExperimentSpec spec;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  /// Per-point estimates.
  nlohmann::ordered_json points;
  /// Extra manifest fields (acceptance rates, data source).
  nlohmann::ordered_json manifest_extra = nlohmann::ordered_json::object();
};

/// cv_demo needs `dataset`.
ExperimentResult run_experiment(const ExperimentSpec& spec, const Dataset* dataset = nullptr);

std::string results_csv(const ExperimentResult& result);
nlohmann::ordered_json summary_json(const ExperimentResult& result);

/// Writes <root>/<kind>/<run_id>/{results.csv, summary.json, manifest.json}
/// and returns that directory.
std::filesystem::path write_experiment(const ExperimentResult& result,
                                       const std::filesystem::path& root,
                                       const std::string& run_id);

/// UTC timestamp usable as a run id, e.g. 20260102T030405Z.
std::string timestamp_run_id();

}  // namespace pathreg
