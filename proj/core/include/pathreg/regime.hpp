#pragma once

#include "pathreg/rational.hpp"

#include <limits>
#include <optional>
#include <vector>

namespace pathreg {

/// Open interval (lo, hi) of regularization parameters; hi may be +inf.
struct Interval {
  double lo = 0.0;
  double hi = std::numeric_limits<double>::infinity();
  /// Exact endpoints when they are known in closed form.
  std::optional<Rational> lo_exact;
  std::optional<Rational> hi_exact;

  bool unbounded() const { return hi == std::numeric_limits<double>::infinity(); }
  bool contains(double c) const { return c > lo && c < hi; }
};

/// Set of parameters c > 0 for which a trend indicator is reversed: a finite
/// union of disjoint open intervals, sorted, never touching each other.
class Regime {
 public:
  Regime() = default;
  /// Sorts and merges overlapping or adjacent intervals.
  explicit Regime(std::vector<Interval> intervals);

  static Regime unbounded_from(const Rational& gamma);

  bool empty() const { return intervals_.empty(); }
  bool contains(double c) const;
  /// Every interval has a finite right end and the set is non-empty.
  bool bounded() const;
  const std::vector<Interval>& intervals() const { return intervals_; }

 private:
  std::vector<Interval> intervals_;
};

}  // namespace pathreg
