#include "pathreg/tables.hpp"

#include "pathreg/error.hpp"

#include <cmath>
#include <limits>
#include <numeric>

namespace pathreg {

ContingencyTable222::ContingencyTable222(const std::array<Count, 8>& cells, TableLabels labels)
    : cells_(cells), labels_(std::move(labels)) {}

ContingencyTable222 ContingencyTable222::loan_example() {
  ContingencyTable222 t;
  // (X1, X2) = (gender, occupation group); first count Y = 0, second Y = 1.
  t.set(0, 0, 0, 15); t.set(1, 0, 0, 15);  // female, A
  t.set(0, 0, 1, 10); t.set(1, 0, 1, 14);  // female, B
  t.set(0, 1, 0, 16); t.set(1, 1, 0, 5);   // male, A
  t.set(0, 1, 1, 27); t.set(1, 1, 1, 8);   // male, B
  t.set_labels({"default", "male", "occupation_b"});
  return t;
}

ContingencyTable222 ContingencyTable222::death_penalty_example() {
  ContingencyTable222 t;
  t.set(0, 0, 0, 132); t.set(1, 0, 0, 19);  // white victim, white defendant
  t.set(0, 0, 1, 52);  t.set(1, 0, 1, 11);  // white victim, black defendant
  t.set(0, 1, 0, 9);   t.set(1, 1, 0, 0);   // black victim, white defendant
  t.set(0, 1, 1, 97);  t.set(1, 1, 1, 6);   // black victim, black defendant
  t.set_labels({"death_penalty", "black_victim", "black_defendant"});
  return t;
}

ContingencyTable222::Count ContingencyTable222::margin(int y, int x1, int x2) const {
  Count total = 0;
  for (int i = 0; i < 2; ++i) {
    if (y >= 0 && i != y) continue;
    for (int j = 0; j < 2; ++j) {
      if (x1 >= 0 && j != x1) continue;
      for (int k = 0; k < 2; ++k) {
        if (x2 >= 0 && k != x2) continue;
        total += at(i, j, k);
      }
    }
  }
  return total;
}

ContingencyTable222 ContingencyTable222::swap_response() const {
  ContingencyTable222 out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k) out.set(1 - i, j, k, at(i, j, k));
  out.labels_ = labels_;
  return out;
}

ContingencyTable222 ContingencyTable222::swap_features() const {
  ContingencyTable222 out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k) out.set(i, k, j, at(i, j, k));
  out.labels_ = {labels_.y, labels_.x2, labels_.x1};
  return out;
}

ContingencyTable222 ContingencyTable222::scaled(Count factor) const {
  ContingencyTable222 out = *this;
  for (auto& c : out.cells_) c *= factor;
  return out;
}

ProbabilityTable::ProbabilityTable(const std::array<double, 8>& p) : p_(p) {
  double total = 0.0;
  for (double v : p_) {
    if (!(v >= 0.0)) throw Error(ErrorCode::InvalidArgument, "probabilities must be non-negative");
    total += v;
  }
  if (std::abs(total - 1.0) > 1e-12) {
    throw Error(ErrorCode::InvalidArgument, "probabilities must sum to 1");
  }
}

ProbabilityTable ProbabilityTable::from_counts(const ContingencyTable222& table) {
  const auto n = table.sample_size();
  if (n == 0) throw Error(ErrorCode::EmptyTable, "table has no observations");
  std::array<double, 8> p{};
  for (std::size_t c = 0; c < 8; ++c) {
    p[c] = static_cast<double>(table.cells()[c]) / static_cast<double>(n);
  }
  // Absorb the rounding residue so the sum is exactly representable as 1.
  double total = std::accumulate(p.begin(), p.end(), 0.0);
  if (std::abs(total - 1.0) > 1e-12) {
    for (double& v : p) v /= total;
  }
  return ProbabilityTable(p);
}

Dataset::Dataset(std::vector<std::uint8_t> y, std::vector<std::uint8_t> x_rows,
                 std::size_t features, Encoding encoding)
    : y_(std::move(y)), x_(std::move(x_rows)), features_(features), encoding_(std::move(encoding)) {
  if (y_.empty()) throw Error(ErrorCode::WrongShape, "dataset needs at least one row");
  if (features_ == 0) throw Error(ErrorCode::WrongShape, "dataset needs at least one feature");
  if (x_.size() != y_.size() * features_) {
    throw Error(ErrorCode::WrongShape, "design matrix size does not match response length");
  }
  if (encoding_.low == encoding_.high) {
    throw Error(ErrorCode::InvalidArgument, "encoding values must differ");
  }
  if (encoding_.low < 0 || encoding_.high < 0) {
    throw Error(ErrorCode::InvalidArgument, "encoding values must be non-negative");
  }
  for (auto b : y_)
    if (b > 1) throw Error(ErrorCode::InvalidArgument, "response entries must be bits");
  for (auto b : x_)
    if (b > 1) throw Error(ErrorCode::InvalidArgument, "design entries must be bits");
}

Dataset Dataset::from_columns(std::vector<std::uint8_t> y,
                              const std::vector<std::vector<std::uint8_t>>& columns,
                              Encoding encoding) {
  const std::size_t n = y.size();
  const std::size_t p = columns.size();
  std::vector<std::uint8_t> rows(n * p);
  for (std::size_t c = 0; c < p; ++c) {
    if (columns[c].size() != n) throw Error(ErrorCode::WrongShape, "column length mismatch");
    for (std::size_t r = 0; r < n; ++r) rows[r * p + c] = columns[c][r];
  }
  return Dataset(std::move(y), std::move(rows), p, std::move(encoding));
}

Dataset Dataset::with_encoding(Encoding encoding) const {
  return Dataset(y_, x_, features_, std::move(encoding));
}

Dataset Dataset::with_zero_columns(std::size_t count) const {
  const std::size_t p = features_ + count;
  std::vector<std::uint8_t> rows(size() * p, 0);
  for (std::size_t r = 0; r < size(); ++r) {
    for (std::size_t c = 0; c < features_; ++c) rows[r * p + c] = x_bit(r, c);
  }
  return Dataset(y_, std::move(rows), p, encoding_);
}

Eigen::MatrixXd Dataset::design_matrix() const {
  const double lo = to_double(encoding_.low);
  const double hi = to_double(encoding_.high);
  Eigen::MatrixXd x(static_cast<Eigen::Index>(size()), static_cast<Eigen::Index>(features_));
  for (std::size_t r = 0; r < size(); ++r)
    for (std::size_t c = 0; c < features_; ++c)
      x(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = x_bit(r, c) ? hi : lo;
  return x;
}

Eigen::VectorXd Dataset::response() const {
  const double lo = to_double(encoding_.low);
  const double hi = to_double(encoding_.high);
  Eigen::VectorXd y(static_cast<Eigen::Index>(size()));
  for (std::size_t r = 0; r < size(); ++r) y(static_cast<Eigen::Index>(r)) = y_[r] ? hi : lo;
  return y;
}

Dataset encode(const ContingencyTable222& table, const Encoding& encoding) {
  const auto n = table.sample_size();
  if (n == 0) throw Error(ErrorCode::EmptyTable, "cannot encode a table with N = 0");
  std::vector<std::uint8_t> y;
  std::vector<std::uint8_t> x;
  y.reserve(n);
  x.reserve(2 * n);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k)
        for (ContingencyTable222::Count r = 0; r < table.at(i, j, k); ++r) {
          y.push_back(static_cast<std::uint8_t>(i));
          x.push_back(static_cast<std::uint8_t>(j));
          x.push_back(static_cast<std::uint8_t>(k));
        }
  return Dataset(std::move(y), std::move(x), 2, encoding);
}

ContingencyTable222 decode(const Dataset& dataset) {
  if (dataset.features() != 2) {
    throw Error(ErrorCode::WrongShape, "decode needs exactly two features, got " +
                                           std::to_string(dataset.features()));
  }
  ContingencyTable222 t;
  for (std::size_t r = 0; r < dataset.size(); ++r) {
    const int i = dataset.y_bit(r);
    const int j = dataset.x_bit(r, 0);
    const int k = dataset.x_bit(r, 1);
    t.set(i, j, k, t.at(i, j, k) + 1);
  }
  return t;
}

std::string_view to_string(SimpsonVerdict verdict) {
  switch (verdict) {
    case SimpsonVerdict::none: return "none";
    case SimpsonVerdict::type_a: return "type_a";
    case SimpsonVerdict::type_b: return "type_b";
  }
  return "none";
}

std::string_view to_string(Strata strata) { return strata == Strata::x1 ? "x1" : "x2"; }

namespace {

int cmp_products(std::uint64_t a, std::uint64_t b, std::uint64_t c, std::uint64_t d) {
  // sign(a*b - c*d) without overflow; every factor is at most N.
  const BigInt lhs = BigInt(a) * b;
  const BigInt rhs = BigInt(c) * d;
  return lhs < rhs ? -1 : (lhs > rhs ? 1 : 0);
}

int cmp_products_fast(std::uint64_t a, std::uint64_t b, std::uint64_t c, std::uint64_t d) {
  const std::uint64_t lhs = a * b;
  const std::uint64_t rhs = c * d;
  return lhs < rhs ? -1 : (lhs > rhs ? 1 : 0);
}

}  // namespace

SimpsonVerdict is_simpson(const ContingencyTable222& input, Strata strata) {
  const ContingencyTable222 t = strata == Strata::x1 ? input : input.swap_features();
  const auto n = t.sample_size();
  if (n == 0) throw Error(ErrorCode::EmptyTable, "Simpson test on an empty table");

  // Multiplying p_ijk = d_ijk / N through by N^2 keeps every direction.
  const bool small = n < (std::uint64_t{1} << 31);
  auto cmp = small ? cmp_products_fast : cmp_products;
  const int stratum0 = cmp(t.at(1, 0, 1), t.margin(-1, 0, 0), t.at(1, 0, 0), t.margin(-1, 0, 1));
  const int stratum1 = cmp(t.at(1, 1, 1), t.margin(-1, 1, 0), t.at(1, 1, 0), t.margin(-1, 1, 1));
  const int aggregate =
      cmp(t.margin(1, -1, 1), t.margin(-1, -1, 0), t.margin(1, -1, 0), t.margin(-1, -1, 1));

  if (stratum0 < 0 && stratum1 < 0 && aggregate > 0) return SimpsonVerdict::type_a;
  if (stratum0 > 0 && stratum1 > 0 && aggregate < 0) return SimpsonVerdict::type_b;
  return SimpsonVerdict::none;
}

}  // namespace pathreg
