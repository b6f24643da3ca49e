#pragma once

#include "pathreg/grid.hpp"
#include "pathreg/rational.hpp"
#include "pathreg/regime.hpp"
#include "pathreg/tables.hpp"

#include <Eigen/Dense>

#include <array>
#include <cstddef>
#include <optional>
#include <vector>

namespace pathreg {

// Variables and coefficients are numbered from 1 in this interface, as in
// reports: "variable 2" is the trend with X2 held fixed.

/// Sufficient statistics of a two-feature design. With `centered`, the sums
/// are taken over column-centered inputs.
struct RidgeSummary {
  Rational s12;
  Rational s11;
  Rational s22;
  Rational sy1;
  Rational sy2;
  bool centered = false;

  static RidgeSummary from(const Dataset& dataset, bool with_intercept);
  static RidgeSummary from(const ContingencyTable222& table, bool with_intercept,
                           const Encoding& encoding = {});

  /// D(c) = c^2 + c (s11 + s22) + s11 s22 - s12^2
  Rational denominator(const Rational& c) const;
  Rational gram_determinant() const { return s11 * s22 - s12 * s12; }
};

struct RidgeEstimate {
  Eigen::VectorXd beta;
  /// Mean response; present for fits with intercept (inputs centered).
  std::optional<double> intercept;
  double c = 0.0;
};

/// (X^T X + c I)^{-1} X^T Y via Cholesky; with intercept, X is column-centered
/// and the unpenalized intercept is the mean response.
RidgeEstimate fit_ridge(const Dataset& dataset, double c, bool with_intercept = false);

/// Closed-form two-feature estimate, exact.
std::array<Rational, 2> ridge_beta_exact(const RidgeSummary& summary, const Rational& c);
std::array<double, 2> ridge_beta_closed_form(const RidgeSummary& summary, double c);

/// Index (from 1) of the coefficient whose negative is the trend indicator of
/// `variable`: the other coefficient when p = 2, the same one when p > 2.
std::size_t trend_coefficient(std::size_t features, std::size_t variable);

/// Trend indicator T_i(c) = -beta_k(c), k = trend_coefficient(p, i).
/// Throws Error(IndexOutOfRange).
double trend_indicator(const RidgeEstimate& estimate, std::size_t variable);

struct TrueTrend {
  double value = 0.0;
  /// Two-feature designs only.
  std::optional<Rational> exact;
  /// X^T X singular; the value comes from the minimum-norm least-squares fit.
  bool degenerate_design = false;
};

/// Trend indicator in the limit c -> 0.
TrueTrend true_trend(const Dataset& dataset, std::size_t variable, bool with_intercept = false);

struct RegimeReport {
  std::size_t variable = 0;
  std::size_t coefficient = 0;
  Regime regime;
  TrueTrend true_trend;
  /// Exact left end when the regime is (gamma, inf).
  std::optional<Rational> gamma;
  /// True trend is exactly zero, or the trend's coefficient has no
  /// response correlation (sum x_k y = 0) so its sign never moves.
  bool degenerate_true_trend = false;
  /// Refining the grid changed the set of sign runs.
  bool grid_too_coarse = false;
};

/// Exact two-feature criterion on the sufficient statistics.
/// Reports for variables 1 and 2, in that order. Throws Error(WrongShape) if p != 2.
std::vector<RegimeReport> pathological_regime_exact(const Dataset& dataset,
                                                    bool with_intercept = false);
std::vector<RegimeReport> pathological_regime_exact(const RidgeSummary& summary);

/// Sign scan of the path over `grid` with bisection-refined endpoints, for
/// every variable 1..p.
std::vector<RegimeReport> pathological_regime_numeric(const Dataset& dataset, const RegGrid& grid,
                                                      bool with_intercept = false);

/// Spectral form of the path, beta(c) = Q diag(1 / (lambda + c)) Q^T X^T Y.
/// Cheap to evaluate at many c once constructed.
class RidgePath {
 public:
  RidgePath(const Dataset& dataset, bool with_intercept);
  RidgePath(const Eigen::MatrixXd& gram, const Eigen::VectorXd& xty);

  std::size_t features() const { return static_cast<std::size_t>(lambda_.size()); }
  /// Coefficient k (from 0) at c > 0.
  double coefficient(std::size_t k, double c) const;
  Eigen::VectorXd beta(double c) const;
  /// Minimum-norm least-squares limit c -> 0.
  double limit(std::size_t k) const;
  /// Sum_m |v_km| / (lambda_m + c): magnitude scale for rounding decisions.
  double scale(std::size_t k, double c) const;
  /// A c beyond which coefficient k provably keeps its large-c sign, which
  /// is that of (X^T Y)_k unless that entry vanishes; +inf when the
  /// coefficient is identically zero.
  double asymptotic_bound(std::size_t k) const;
  /// Largest c below which the sign provably equals the sign of the limit;
  /// 0 when the limit is zero.
  double origin_bound(std::size_t k) const;
  double xty(std::size_t k) const { return xty_(static_cast<Eigen::Index>(k)); }
  bool singular() const { return singular_; }

 private:
  void init(const Eigen::MatrixXd& gram, const Eigen::VectorXd& xty);

  Eigen::VectorXd lambda_;
  Eigen::MatrixXd weights_;  // weights_(k, m) = Q_km (Q^T b)_m
  Eigen::VectorXd xty_;
  bool singular_ = false;
};

struct TrendCurve {
  std::size_t variable = 0;
  std::vector<double> c;
  std::vector<double> trend;
  TrueTrend true_trend;
};

TrendCurve trend_curve(const Dataset& dataset, std::size_t variable, const RegGrid& grid,
                       bool with_intercept = false);

}  // namespace pathreg
