#include "pathreg/ridge.hpp"

#include "pathreg/error.hpp"

#include <array>

namespace pathreg {

namespace {

void require_two_features(const Dataset& dataset) {
  if (dataset.features() != 2) {
    throw Error(ErrorCode::WrongShape, "closed-form ridge needs exactly two features, got " +
                                           std::to_string(dataset.features()));
  }
}

// Numerator of beta_k(c) is a*c + b.
struct LinearNumerator {
  Rational a;
  Rational b;
};

LinearNumerator numerator(const RidgeSummary& s, std::size_t k) {
  if (k == 0) return {s.sy1, s.s22 * s.sy1 - s.s12 * s.sy2};
  return {s.sy2, s.s11 * s.sy2 - s.s12 * s.sy1};
}

}  // namespace

RidgeSummary RidgeSummary::from(const Dataset& dataset, bool with_intercept) {
  require_two_features(dataset);
  if (dataset.size() == 0) throw Error(ErrorCode::EmptyTable, "empty dataset");
  std::array<ContingencyTable222::Count, 8> counts{};
  for (std::size_t r = 0; r < dataset.size(); ++r) {
    ++counts[ContingencyTable222::index(dataset.y_bit(r), dataset.x_bit(r, 0), dataset.x_bit(r, 1))];
  }
  return from(ContingencyTable222(counts), with_intercept, dataset.encoding());
}

RidgeSummary RidgeSummary::from(const ContingencyTable222& table, bool with_intercept,
                                const Encoding& enc) {
  if (table.sample_size() == 0) throw Error(ErrorCode::EmptyTable, "empty table");
  RidgeSummary s;
  Rational sx1, sx2, sy;
  for (int y = 0; y < 2; ++y) {
    for (int a = 0; a < 2; ++a) {
      for (int b = 0; b < 2; ++b) {
        const Rational n(table.at(y, a, b));
        if (n == 0) continue;
        const Rational vy = enc.value(static_cast<std::uint8_t>(y));
        const Rational v1 = enc.value(static_cast<std::uint8_t>(a));
        const Rational v2 = enc.value(static_cast<std::uint8_t>(b));
        s.s12 += n * v1 * v2;
        s.s11 += n * v1 * v1;
        s.s22 += n * v2 * v2;
        s.sy1 += n * v1 * vy;
        s.sy2 += n * v2 * vy;
        sx1 += n * v1;
        sx2 += n * v2;
        sy += n * vy;
      }
    }
  }
  if (with_intercept) {
    const Rational n(table.sample_size());
    s.s12 -= sx1 * sx2 / n;
    s.s11 -= sx1 * sx1 / n;
    s.s22 -= sx2 * sx2 / n;
    s.sy1 -= sx1 * sy / n;
    s.sy2 -= sx2 * sy / n;
    s.centered = true;
  }
  return s;
}

Rational RidgeSummary::denominator(const Rational& c) const {
  return c * c + c * (s11 + s22) + gram_determinant();
}

RidgeEstimate fit_ridge(const Dataset& dataset, double c, bool with_intercept) {
  if (!(c > 0.0)) throw Error(ErrorCode::InvalidArgument, "ridge fit needs c > 0");
  if (dataset.size() == 0) throw Error(ErrorCode::EmptyTable, "empty dataset");
  Eigen::MatrixXd x = dataset.design_matrix();
  const Eigen::VectorXd y = dataset.response();
  RidgeEstimate est;
  est.c = c;
  if (with_intercept) {
    x.rowwise() -= x.colwise().mean();
    est.intercept = y.mean();
  }
  Eigen::MatrixXd gram = x.transpose() * x;
  gram.diagonal().array() += c;
  est.beta = gram.llt().solve(x.transpose() * y);
  return est;
}

std::array<Rational, 2> ridge_beta_exact(const RidgeSummary& s, const Rational& c) {
  const Rational d = s.denominator(c);
  std::array<Rational, 2> beta;
  for (std::size_t k = 0; k < 2; ++k) {
    const auto num = numerator(s, k);
    beta[k] = (num.a * c + num.b) / d;
  }
  return beta;
}

std::array<double, 2> ridge_beta_closed_form(const RidgeSummary& s, double c) {
  const double s11 = to_double(s.s11), s22 = to_double(s.s22), s12 = to_double(s.s12);
  const double sy1 = to_double(s.sy1), sy2 = to_double(s.sy2);
  const double d = c * c + c * (s11 + s22) + (s11 * s22 - s12 * s12);
  return {(c * sy1 + s22 * sy1 - s12 * sy2) / d, (c * sy2 + s11 * sy2 - s12 * sy1) / d};
}

std::size_t trend_coefficient(std::size_t features, std::size_t variable) {
  if (features < 2 || variable < 1 || variable > features) {
    throw Error(ErrorCode::IndexOutOfRange, "variable " + std::to_string(variable) +
                                                " out of range for " + std::to_string(features) +
                                                " features");
  }
  return features == 2 ? 3 - variable : variable;
}

double trend_indicator(const RidgeEstimate& estimate, std::size_t variable) {
  const auto k = trend_coefficient(static_cast<std::size_t>(estimate.beta.size()), variable);
  return -estimate.beta(static_cast<Eigen::Index>(k - 1));
}

namespace {

TrueTrend exact_true_trend(const RidgeSummary& s, std::size_t k) {
  TrueTrend t;
  const auto num = numerator(s, k);
  const Rational det = s.gram_determinant();
  if (det != 0) {
    t.exact = -num.b / det;
  } else {
    // Collinear columns: the path is a / (c + s11 + s22), whose limit is the
    // minimum-norm least-squares coefficient.
    t.degenerate_design = true;
    const Rational trace = s.s11 + s.s22;
    t.exact = trace == 0 ? Rational(0) : Rational(-num.a / trace);
  }
  t.value = to_double(*t.exact);
  return t;
}

}  // namespace

TrueTrend true_trend(const Dataset& dataset, std::size_t variable, bool with_intercept) {
  const std::size_t k = trend_coefficient(dataset.features(), variable);
  if (dataset.features() == 2) {
    return exact_true_trend(RidgeSummary::from(dataset, with_intercept), k - 1);
  }
  RidgePath path(dataset, with_intercept);
  TrueTrend t;
  t.value = -path.limit(k - 1);
  t.degenerate_design = path.singular();
  return t;
}

std::vector<RegimeReport> pathological_regime_exact(const RidgeSummary& s) {
  std::vector<RegimeReport> out;
  for (std::size_t variable = 1; variable <= 2; ++variable) {
    RegimeReport r;
    r.variable = variable;
    r.coefficient = trend_coefficient(2, variable);
    const std::size_t k = r.coefficient - 1;
    r.true_trend = exact_true_trend(s, k);
    const auto num = numerator(s, k);
    // beta_k(c) = (a c + b) / D(c) with D(c) > 0 for c > 0: the sign at c -> 0
    // is sign(b), for large c it is sign(a), and the only zero is at -b / a.
    r.degenerate_true_trend = *r.true_trend.exact == 0 || num.a == 0;
    if (!r.true_trend.degenerate_design && sign(num.a) * sign(num.b) < 0) {
      r.gamma = -num.b / num.a;
      r.regime = Regime::unbounded_from(*r.gamma);
    }
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<RegimeReport> pathological_regime_exact(const Dataset& dataset, bool with_intercept) {
  return pathological_regime_exact(RidgeSummary::from(dataset, with_intercept));
}

}  // namespace pathreg
