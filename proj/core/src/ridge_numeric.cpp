#include "pathreg/ridge.hpp"

#include "pathreg/error.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>

namespace pathreg {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kZeroTol = 1e-12;
constexpr double kCMin = 1e-300;
constexpr double kCMax = 1e300;
constexpr int kRefine = 4;  // interior points per grid cell for the calibration pass

int sgn(double v) { return (v > 0.0) - (v < 0.0); }

// Large-c behaviour of f(c) = sum_m w_m / (lambda_m + c). With moments
// mu_j = sum_m w_m lambda_m^j, c f(c) = sum_j (-1)^j mu_j / c^j, so the first
// moment that is not zero decides the sign.
struct Asymptote {
  int sign = 0;
  double bound = kInf;  // sign is settled for every c above this
};

}  // namespace

RidgePath::RidgePath(const Dataset& dataset, bool with_intercept) {
  Eigen::MatrixXd x = dataset.design_matrix();
  if (with_intercept) x.rowwise() -= x.colwise().mean();
  init(x.transpose() * x, x.transpose() * dataset.response());
}

RidgePath::RidgePath(const Eigen::MatrixXd& gram, const Eigen::VectorXd& xty) { init(gram, xty); }

void RidgePath::init(const Eigen::MatrixXd& gram, const Eigen::VectorXd& xty) {
  if (gram.rows() != gram.cols() || gram.rows() != xty.size() || gram.rows() == 0) {
    throw Error(ErrorCode::WrongShape, "gram matrix and X^T Y disagree in size");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram);
  lambda_ = eig.eigenvalues();
  const Eigen::MatrixXd& q = eig.eigenvectors();
  const Eigen::VectorXd proj = q.transpose() * xty;
  weights_ = q * proj.asDiagonal();
  xty_ = xty;
  const double top = std::max(lambda_.cwiseAbs().maxCoeff(), 1.0);
  for (Eigen::Index m = 0; m < lambda_.size(); ++m) {
    if (lambda_(m) <= kZeroTol * top) {
      // X^T Y lies in the range of X^T X, so null directions carry no weight.
      lambda_(m) = 0.0;
      weights_.col(m).setZero();
      singular_ = true;
    }
  }
}

double RidgePath::coefficient(std::size_t k, double c) const {
  const auto row = weights_.row(static_cast<Eigen::Index>(k));
  double sum = 0.0;
  for (Eigen::Index m = 0; m < lambda_.size(); ++m) sum += row(m) / (lambda_(m) + c);
  return sum;
}

Eigen::VectorXd RidgePath::beta(double c) const {
  Eigen::VectorXd out(lambda_.size());
  for (Eigen::Index k = 0; k < lambda_.size(); ++k) out(k) = coefficient(static_cast<std::size_t>(k), c);
  return out;
}

double RidgePath::limit(std::size_t k) const {
  const auto row = weights_.row(static_cast<Eigen::Index>(k));
  double sum = 0.0;
  for (Eigen::Index m = 0; m < lambda_.size(); ++m) {
    if (lambda_(m) > 0.0) sum += row(m) / lambda_(m);
  }
  return sum;
}

double RidgePath::scale(std::size_t k, double c) const {
  const auto row = weights_.row(static_cast<Eigen::Index>(k));
  double sum = 0.0;
  for (Eigen::Index m = 0; m < lambda_.size(); ++m) {
    if (c > 0.0 || lambda_(m) > 0.0) sum += std::abs(row(m)) / (lambda_(m) + c);
  }
  return sum;
}

namespace {

Asymptote asymptote(const Eigen::VectorXd& lambda, const Eigen::RowVectorXd& w) {
  // (-1)^j c^(j+1) f(c) = mu_j + r with |r| < sum |w| lambda^(j+1) / c.
  Asymptote out;
  for (int j = 0; j < static_cast<int>(lambda.size()) + 1; ++j) {
    double mu = 0.0, mag = 0.0, next = 0.0;
    for (Eigen::Index m = 0; m < lambda.size(); ++m) {
      const double lj = std::pow(lambda(m), j);
      mu += w(m) * lj;
      mag += std::abs(w(m)) * lj;
      next += std::abs(w(m)) * lj * lambda(m);
    }
    if (mag == 0.0) return out;
    if (std::abs(mu) > kZeroTol * mag) {
      out.sign = (j % 2 == 0 ? 1 : -1) * sgn(mu);
      out.bound = next / std::abs(mu);
      return out;
    }
  }
  return out;
}

}  // namespace

double RidgePath::asymptotic_bound(std::size_t k) const {
  return asymptote(lambda_, weights_.row(static_cast<Eigen::Index>(k))).bound;
}

double RidgePath::origin_bound(std::size_t k) const {
  const double f0 = limit(k);
  const auto row = weights_.row(static_cast<Eigen::Index>(k));
  double slope = 0.0;
  for (Eigen::Index m = 0; m < lambda_.size(); ++m) {
    if (lambda_(m) > 0.0) slope += std::abs(row(m)) / (lambda_(m) * lambda_(m));
  }
  if (slope == 0.0) return kInf;
  return std::abs(f0) / slope;
}

namespace {

class SignScan {
 public:
  SignScan(const RidgePath& path, std::size_t k) : path_(path), k_(k) {
    reference_ = sgn(path.limit(k));
  }

  // Trend has the opposite sign of the c -> 0 trend, beyond rounding.
  bool reversed(double c) const {
    const double f = path_.coefficient(k_, c);
    if (std::abs(f) <= kZeroTol * path_.scale(k_, c)) return false;
    return sgn(f) != reference_;
  }

  // Boundary between a and b (either order of reversal), to 1e-13 relative.
  double bisect(double a, double b) const {
    const bool ra = reversed(a);
    for (int it = 0; it < 400 && b / a - 1.0 > 1e-13; ++it) {
      const double mid = std::sqrt(a) * std::sqrt(b);
      if (mid <= a || mid >= b) break;
      if (reversed(mid) == ra) {
        a = mid;
      } else {
        b = mid;
      }
    }
    return std::sqrt(a) * std::sqrt(b);
  }

 private:
  const RidgePath& path_;
  std::size_t k_;
  int reference_ = 0;
};

std::size_t count_switches(const std::vector<bool>& flags) {
  std::size_t n = 0;
  for (std::size_t i = 1; i < flags.size(); ++i) n += flags[i] != flags[i - 1];
  return n;
}

}  // namespace

std::vector<RegimeReport> pathological_regime_numeric(const Dataset& dataset, const RegGrid& grid,
                                                      bool with_intercept) {
  const std::size_t p = dataset.features();
  if (p < 2) throw Error(ErrorCode::WrongShape, "regime scan needs at least two features");
  const RidgePath path(dataset, with_intercept);

  std::vector<RegimeReport> out;
  for (std::size_t variable = 1; variable <= p; ++variable) {
    RegimeReport r;
    r.variable = variable;
    r.coefficient = trend_coefficient(p, variable);
    const std::size_t k = r.coefficient - 1;
    r.true_trend.value = -path.limit(k);
    r.true_trend.degenerate_design = path.singular();
    if (p == 2) r.true_trend = true_trend(dataset, variable, with_intercept);

    const double f0 = path.limit(k);
    const double limit_scale = path.scale(k, 0.0);
    if (std::abs(f0) <= kZeroTol * limit_scale || limit_scale == 0.0) {
      r.degenerate_true_trend = true;
      out.push_back(std::move(r));
      continue;
    }
    const SignScan scan(path, k);

    // Grid points plus interior refinement points; the refinement only
    // serves to detect sign runs the grid alone would miss.
    std::vector<double> points(grid.begin(), grid.end());
    std::vector<bool> grid_flags;
    for (double c : points) grid_flags.push_back(scan.reversed(c));
    std::vector<double> refined;
    for (std::size_t i = 0; i + 1 < points.size(); ++i) {
      refined.push_back(points[i]);
      const double la = std::log(points[i]), lb = std::log(points[i + 1]);
      for (int s = 1; s <= kRefine; ++s) refined.push_back(std::exp(la + (lb - la) * s / (kRefine + 1)));
    }
    refined.push_back(points.back());
    std::vector<bool> refined_flags;
    for (double c : refined) refined_flags.push_back(scan.reversed(c));
    r.grid_too_coarse = count_switches(grid_flags) != count_switches(refined_flags);

    // Extend below the grid until the sign provably matches the limit, and
    // above it until the large-c sign is settled.
    std::vector<double> low;
    const double lo_bound = path.origin_bound(k);
    for (double c = refined.front(); c > lo_bound && c > kCMin;) {
      c /= 10.0;
      low.push_back(c);
    }
    std::reverse(low.begin(), low.end());
    const double hi_bound = path.asymptotic_bound(k);
    std::vector<double> all = low;
    all.insert(all.end(), refined.begin(), refined.end());
    for (double c = refined.back(); c < hi_bound && c < kCMax;) {
      c *= 10.0;
      all.push_back(c);
    }
    std::vector<bool> flags;
    flags.reserve(all.size());
    for (double c : all) flags.push_back(scan.reversed(c));

    std::vector<Interval> intervals;
    for (std::size_t i = 0; i < all.size();) {
      if (!flags[i]) {
        ++i;
        continue;
      }
      std::size_t j = i;
      while (j + 1 < all.size() && flags[j + 1]) ++j;
      Interval iv;
      iv.lo = i == 0 ? 0.0 : scan.bisect(all[i - 1], all[i]);
      iv.hi = j + 1 == all.size() ? kInf : scan.bisect(all[j], all[j + 1]);
      intervals.push_back(iv);
      i = j + 1;
    }
    r.regime = Regime(std::move(intervals));
    out.push_back(std::move(r));
  }
  return out;
}

TrendCurve trend_curve(const Dataset& dataset, std::size_t variable, const RegGrid& grid,
                       bool with_intercept) {
  const std::size_t k = trend_coefficient(dataset.features(), variable) - 1;
  const RidgePath path(dataset, with_intercept);
  TrendCurve curve;
  curve.variable = variable;
  curve.true_trend = true_trend(dataset, variable, with_intercept);
  for (double c : grid) {
    curve.c.push_back(c);
    curve.trend.push_back(-path.coefficient(k, c));
  }
  return curve;
}

}  // namespace pathreg
