#pragma once

#include "pathreg/grid.hpp"
#include "pathreg/regime.hpp"
#include "pathreg/tables.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace pathreg {

enum class WeightScheme { uniform, balanced };

std::string_view to_string(WeightScheme scheme);
WeightScheme parse_weight_scheme(std::string_view name);

/// Per-row weights: 1, or N / (2 N_y) for rows of class y.
/// Throws Error(DegenerateDataset) for balanced weights with a missing class.
std::vector<double> sample_weights(const Dataset& dataset, WeightScheme scheme);

/// Weighted logistic objective over the distinct (x, y) patterns of a
/// dataset. Parameters are theta = (beta0, beta_1, ..., beta_p):
///   F(theta) = (1/N) sum_r w_r l(y_r, beta0 + x_r^T beta) + c |beta|^2
class LogisticProblem {
 public:
  /// All rows, or only `rows` when given. N is the number of rows used.
  LogisticProblem(const Dataset& dataset, std::span<const double> weights,
                  std::span<const std::size_t> rows = {});

  std::size_t features() const { return static_cast<std::size_t>(x_.cols()) - 1; }
  std::size_t patterns() const { return static_cast<std::size_t>(x_.rows()); }
  double sample_size() const { return n_; }
  bool has_both_classes() const { return has_class_[0] && has_class_[1]; }

  double objective(const Eigen::VectorXd& theta, double c) const;
  Eigen::VectorXd gradient(const Eigen::VectorXd& theta, double c) const;
  Eigen::MatrixXd hessian(const Eigen::VectorXd& theta, double c) const;

 private:
  Eigen::MatrixXd x_;  // leading column of ones
  Eigen::VectorXd y_;
  Eigen::VectorXd w_;  // summed weights per pattern
  double n_ = 0.0;
  bool has_class_[2] = {false, false};
};

struct LogisticOptions {
  double gradient_tolerance = 1e-8;
  int max_iterations = 200;
};

struct LogisticModel {
  double beta0 = 0.0;
  Eigen::VectorXd beta;
  double c = 0.0;
  bool converged = false;
  int iterations = 0;
  double gradient_norm = 0.0;
  double objective = 0.0;
  Encoding encoding;

  Eigen::VectorXd theta() const;
  /// beta0 + x^T beta for a row of bits.
  double linear_predictor(std::span<const std::uint8_t> bits) const;
};

/// Damped Newton from `start` (zeros when absent). A model that misses the
/// tolerance comes back with converged = false.
LogisticModel fit_logistic(const LogisticProblem& problem, double c,
                           const std::optional<Eigen::VectorXd>& start = {},
                           const LogisticOptions& options = {});

/// Throws Error(DegenerateDataset) when only one class is present.
LogisticModel fit_logistic(const Dataset& dataset, double c,
                           WeightScheme weights = WeightScheme::uniform,
                           const LogisticOptions& options = {});

double sigmoid(double t);

/// sigma(eta(x0)) - sigma(eta(x1)) where x_k has X_i = j and the other
/// feature equal to k. Two-feature models only; throws Error(IndexOutOfRange).
double trend_indicator_logistic(const LogisticModel& model, std::size_t variable, int value);

struct LogisticRegime {
  std::size_t variable = 0;
  int value = 0;
  /// Trend at the smallest grid c, standing in for c -> 0.
  double baseline = 0.0;
  /// Grid-resolution intervals; a run reaching the last grid point is open to +inf.
  Regime regime;
  bool reaches_grid_end = false;
  std::optional<double> most_reversed_c;
  double most_reversed_trend = 0.0;
};

struct LogisticScan {
  std::vector<double> c;
  std::vector<LogisticModel> models;
  /// (variable, value) in the order (1,0), (1,1), (2,0), (2,1).
  std::vector<LogisticRegime> regimes;
  /// Reversal for the verdict variable (either value).
  bool pathological = false;
  /// Reversal for any (variable, value).
  bool pathological_any = false;
  std::size_t verdict_variable = 1;
  std::size_t non_converged = 0;
};

struct ScanOptions {
  WeightScheme weights = WeightScheme::uniform;
  /// Trend conditioning that decides the verdict. Subpopulations of the
  /// formal Simpson system are the X1 strata, hence variable 1.
  std::size_t verdict_variable = 1;
  double reversal_threshold = 1e-9;
  LogisticOptions solver;
};

/// Warm-started sweep over the ascending grid.
LogisticScan scan_pathological_logistic(const Dataset& dataset, const RegGrid& grid,
                                        const ScanOptions& options = {});

struct CvResult {
  double chosen_c = 0.0;
  std::size_t chosen_index = 0;
  LogisticModel model;
  std::vector<double> grid;
  std::vector<double> mean_accuracy;
  /// fold_accuracy[f][g]: accuracy of fold f at grid point g.
  std::vector<std::vector<double>> fold_accuracy;
  std::vector<std::size_t> fold_of_row;
};

/// Stratified k-fold assignment: each class is shuffled with its own seeded
/// stream and dealt round-robin. Throws Error(FoldDegenerate) when a class
/// has fewer than k rows.
std::vector<std::size_t> stratified_folds(const Dataset& dataset, std::size_t k, std::uint64_t seed);

/// Mean validation accuracy per grid point; the best c wins, ties going to
/// the larger c, and the returned model is refit on all rows. Weights are
/// computed once on the full data.
CvResult fit_logistic_cv(const Dataset& dataset, const RegGrid& grid, std::size_t k,
                         WeightScheme weights, std::uint64_t seed,
                         const LogisticOptions& options = {});

}  // namespace pathreg
