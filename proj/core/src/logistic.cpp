#include "pathreg/logistic.hpp"

#include "pathreg/error.hpp"

#include <cmath>
#include <map>

namespace pathreg {

std::string_view to_string(WeightScheme scheme) {
  return scheme == WeightScheme::balanced ? "balanced" : "uniform";
}

WeightScheme parse_weight_scheme(std::string_view name) {
  if (name == "uniform") return WeightScheme::uniform;
  if (name == "balanced") return WeightScheme::balanced;
  throw Error(ErrorCode::InvalidArgument, "unknown weighting '" + std::string(name) + "'");
}

std::vector<double> sample_weights(const Dataset& dataset, WeightScheme scheme) {
  std::vector<double> w(dataset.size(), 1.0);
  if (scheme == WeightScheme::uniform) return w;
  std::size_t ones = 0;
  for (auto b : dataset.y_bits()) ones += b;
  const std::size_t zeros = dataset.size() - ones;
  if (ones == 0 || zeros == 0) {
    throw Error(ErrorCode::DegenerateDataset, "balanced weights need both classes");
  }
  const double n = static_cast<double>(dataset.size());
  const double w0 = n / (2.0 * static_cast<double>(zeros));
  const double w1 = n / (2.0 * static_cast<double>(ones));
  for (std::size_t r = 0; r < dataset.size(); ++r) w[r] = dataset.y_bit(r) ? w1 : w0;
  return w;
}

double sigmoid(double t) {
  if (t >= 0.0) return 1.0 / (1.0 + std::exp(-t));
  const double e = std::exp(t);
  return e / (1.0 + e);
}

namespace {

// log(1 + e^t) without overflow
double softplus(double t) { return std::max(t, 0.0) + std::log1p(std::exp(-std::abs(t))); }

}  // namespace

LogisticProblem::LogisticProblem(const Dataset& dataset, std::span<const double> weights,
                                 std::span<const std::size_t> rows) {
  if (weights.size() != dataset.size()) {
    throw Error(ErrorCode::WrongShape, "one weight per row expected");
  }
  const std::size_t p = dataset.features();
  std::map<std::vector<std::uint8_t>, double> patterns;
  auto add = [&](std::size_t r) {
    if (!(weights[r] > 0.0)) throw Error(ErrorCode::InvalidArgument, "weights must be positive");
    std::vector<std::uint8_t> key(dataset.x_row(r).begin(), dataset.x_row(r).end());
    key.push_back(dataset.y_bit(r));
    patterns[key] += weights[r];
    has_class_[dataset.y_bit(r)] = true;
    n_ += 1.0;
  };
  if (rows.empty()) {
    for (std::size_t r = 0; r < dataset.size(); ++r) add(r);
  } else {
    for (std::size_t r : rows) {
      if (r >= dataset.size()) throw Error(ErrorCode::IndexOutOfRange, "row index out of range");
      add(r);
    }
  }
  if (patterns.empty()) throw Error(ErrorCode::EmptyTable, "no rows to fit");

  const double lo = to_double(dataset.encoding().low);
  const double hi = to_double(dataset.encoding().high);
  x_.resize(static_cast<Eigen::Index>(patterns.size()), static_cast<Eigen::Index>(p + 1));
  y_.resize(x_.rows());
  w_.resize(x_.rows());
  Eigen::Index i = 0;
  for (const auto& [key, weight] : patterns) {
    x_(i, 0) = 1.0;
    for (std::size_t j = 0; j < p; ++j) x_(i, static_cast<Eigen::Index>(j + 1)) = key[j] ? hi : lo;
    y_(i) = key[p];
    w_(i) = weight;
    ++i;
  }
}

double LogisticProblem::objective(const Eigen::VectorXd& theta, double c) const {
  const Eigen::VectorXd eta = x_ * theta;
  double loss = 0.0;
  for (Eigen::Index i = 0; i < eta.size(); ++i) loss += w_(i) * (softplus(eta(i)) - y_(i) * eta(i));
  return loss / n_ + c * theta.tail(theta.size() - 1).squaredNorm();
}

Eigen::VectorXd LogisticProblem::gradient(const Eigen::VectorXd& theta, double c) const {
  const Eigen::VectorXd eta = x_ * theta;
  Eigen::VectorXd r(eta.size());
  for (Eigen::Index i = 0; i < eta.size(); ++i) r(i) = w_(i) * (sigmoid(eta(i)) - y_(i));
  Eigen::VectorXd g = x_.transpose() * r / n_;
  g.tail(g.size() - 1) += 2.0 * c * theta.tail(theta.size() - 1);
  return g;
}

Eigen::MatrixXd LogisticProblem::hessian(const Eigen::VectorXd& theta, double c) const {
  const Eigen::VectorXd eta = x_ * theta;
  Eigen::VectorXd d(eta.size());
  for (Eigen::Index i = 0; i < eta.size(); ++i) {
    const double s = sigmoid(eta(i));
    d(i) = w_(i) * s * (1.0 - s);
  }
  Eigen::MatrixXd h = x_.transpose() * d.asDiagonal() * x_ / n_;
  h.diagonal().tail(h.rows() - 1).array() += 2.0 * c;
  return h;
}

Eigen::VectorXd LogisticModel::theta() const {
  Eigen::VectorXd t(beta.size() + 1);
  t(0) = beta0;
  t.tail(beta.size()) = beta;
  return t;
}

double LogisticModel::linear_predictor(std::span<const std::uint8_t> bits) const {
  const double lo = to_double(encoding.low);
  const double hi = to_double(encoding.high);
  double eta = beta0;
  for (std::size_t j = 0; j < bits.size(); ++j) eta += beta(static_cast<Eigen::Index>(j)) * (bits[j] ? hi : lo);
  return eta;
}

namespace {

constexpr double kMaxStep = 20.0;

// Halves the step until the objective does not increase.
bool backtrack(const LogisticProblem& problem, double c, const Eigen::VectorXd& step, Eigen::VectorXd& theta,
               double& f) {
  for (double t = 1.0; t > 1e-20; t *= 0.5) {
    const Eigen::VectorXd candidate = theta + t * step;
    const double fc = problem.objective(candidate, c);
    if (fc <= f) {
      theta = candidate;
      f = fc;
      return true;
    }
  }
  return false;
}

}  // namespace

LogisticModel fit_logistic(const LogisticProblem& problem, double c,
                           const std::optional<Eigen::VectorXd>& start,
                           const LogisticOptions& options) {
  if (!(c >= 0.0)) throw Error(ErrorCode::InvalidArgument, "logistic fit needs c >= 0");
  if (!problem.has_both_classes()) {
    throw Error(ErrorCode::DegenerateDataset, "logistic fit needs both classes");
  }
  const auto dim = static_cast<Eigen::Index>(problem.features() + 1);
  Eigen::VectorXd theta = start ? *start : Eigen::VectorXd::Zero(dim);
  if (theta.size() != dim) throw Error(ErrorCode::WrongShape, "start vector has the wrong size");

  LogisticModel model;
  model.c = c;
  double f = problem.objective(theta, c);
  Eigen::VectorXd g = problem.gradient(theta, c);
  while (model.iterations < options.max_iterations && g.norm() >= options.gradient_tolerance) {
    Eigen::MatrixXd h = problem.hessian(theta, c);
    Eigen::LLT<Eigen::MatrixXd> llt(h);
    for (double jitter = 1e-12; llt.info() != Eigen::Success && jitter <= 1.0; jitter *= 100.0) {
      Eigen::MatrixXd shifted = h;
      shifted.diagonal().array() += jitter;
      llt.compute(shifted);
    }
    if (llt.info() != Eigen::Success) break;
    Eigen::VectorXd step = llt.solve(-g);
    // Saturated sigmoids make the Hessian nearly singular along some
    // directions; a capped step keeps the iterate where curvature is usable.
    if (const double len = step.norm(); len > kMaxStep) step *= kMaxStep / len;

    bool accepted = backtrack(problem, c, step, theta, f);
    if (!accepted) {
      Eigen::VectorXd descent = -g;
      if (const double len = descent.norm(); len > kMaxStep) descent *= kMaxStep / len;
      accepted = backtrack(problem, c, descent, theta, f);
    }
    if (!accepted) break;
    ++model.iterations;
    g = problem.gradient(theta, c);
  }
  model.beta0 = theta(0);
  model.beta = theta.tail(dim - 1);
  model.objective = f;
  model.gradient_norm = g.norm();
  model.converged = model.gradient_norm < options.gradient_tolerance;
  return model;
}

LogisticModel fit_logistic(const Dataset& dataset, double c, WeightScheme weights,
                           const LogisticOptions& options) {
  const auto w = sample_weights(dataset, weights);
  const LogisticProblem problem(dataset, w);
  auto model = fit_logistic(problem, c, std::nullopt, options);
  model.encoding = dataset.encoding();
  return model;
}

double trend_indicator_logistic(const LogisticModel& model, std::size_t variable, int value) {
  if (model.beta.size() != 2 || variable < 1 || variable > 2 || value < 0 || value > 1) {
    throw Error(ErrorCode::IndexOutOfRange, "logistic trend needs two features, variable 1..2, value 0..1");
  }
  const auto fixed = static_cast<std::uint8_t>(value);
  std::uint8_t x0[2], x1[2];
  const std::size_t i = variable - 1;
  const std::size_t other = 1 - i;
  x0[i] = x1[i] = fixed;
  x0[other] = 0;
  x1[other] = 1;
  return sigmoid(model.linear_predictor(x0)) - sigmoid(model.linear_predictor(x1));
}

LogisticScan scan_pathological_logistic(const Dataset& dataset, const RegGrid& grid,
                                        const ScanOptions& options) {
  if (dataset.features() != 2) {
    throw Error(ErrorCode::WrongShape, "logistic trend scan needs exactly two features");
  }
  if (options.verdict_variable < 1 || options.verdict_variable > 2) {
    throw Error(ErrorCode::IndexOutOfRange, "verdict variable must be 1 or 2");
  }
  const auto w = sample_weights(dataset, options.weights);
  const LogisticProblem problem(dataset, w);
  if (!problem.has_both_classes()) {
    throw Error(ErrorCode::DegenerateDataset, "logistic scan needs both classes");
  }

  LogisticScan scan;
  scan.verdict_variable = options.verdict_variable;
  std::optional<Eigen::VectorXd> start;
  for (double c : grid) {
    auto model = fit_logistic(problem, c, start, options.solver);
    model.encoding = dataset.encoding();
    start = model.theta();
    if (!model.converged) ++scan.non_converged;
    scan.c.push_back(c);
    scan.models.push_back(std::move(model));
  }

  const double thr = options.reversal_threshold;
  for (std::size_t variable = 1; variable <= 2; ++variable) {
    for (int value = 0; value <= 1; ++value) {
      LogisticRegime entry;
      entry.variable = variable;
      entry.value = value;
      entry.baseline = trend_indicator_logistic(scan.models.front(), variable, value);
      const bool usable = std::abs(entry.baseline) > thr;
      const bool base_positive = entry.baseline > 0.0;

      std::vector<Interval> intervals;
      std::optional<std::size_t> run_start;
      std::size_t last_clear = 0;  // most recent usable, non-reversed point
      for (std::size_t g = 1; usable && g < scan.models.size(); ++g) {
        const auto& m = scan.models[g];
        if (!m.converged) continue;
        const double t = trend_indicator_logistic(m, variable, value);
        const bool reversed = std::abs(t) > thr && (t > 0.0) != base_positive;
        if (reversed) {
          if (!run_start) run_start = g;
          if (std::abs(t) > std::abs(entry.most_reversed_trend)) {
            entry.most_reversed_trend = t;
            entry.most_reversed_c = scan.c[g];
          }
        } else {
          if (run_start) {
            intervals.push_back({scan.c[last_clear], scan.c[g], std::nullopt, std::nullopt});
            run_start.reset();
          }
          last_clear = g;
        }
      }
      if (run_start) {
        Interval iv;
        iv.lo = scan.c[last_clear];
        intervals.push_back(iv);
        entry.reaches_grid_end = true;
      }
      entry.regime = Regime(std::move(intervals));
      if (!entry.regime.empty()) {
        scan.pathological_any = true;
        if (variable == options.verdict_variable) scan.pathological = true;
      }
      scan.regimes.push_back(std::move(entry));
    }
  }
  return scan;
}

}  // namespace pathreg
