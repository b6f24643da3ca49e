#include "pathreg/regime.hpp"

#include "pathreg/error.hpp"

#include <algorithm>

namespace pathreg {

Regime::Regime(std::vector<Interval> intervals) {
  for (const auto& iv : intervals) {
    if (!(iv.lo >= 0.0) || !(iv.hi > iv.lo)) {
      throw Error(ErrorCode::InvalidArgument, "regime interval must satisfy 0 <= lo < hi");
    }
  }
  std::sort(intervals.begin(), intervals.end(),
            [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
  for (auto& iv : intervals) {
    if (!intervals_.empty() && iv.lo <= intervals_.back().hi) {
      auto& last = intervals_.back();
      if (iv.hi > last.hi) {
        last.hi = iv.hi;
        last.hi_exact = iv.hi_exact;
      }
      continue;
    }
    intervals_.push_back(std::move(iv));
  }
}

Regime Regime::unbounded_from(const Rational& gamma) {
  Interval iv;
  iv.lo = to_double(gamma);
  iv.lo_exact = gamma;
  return Regime({iv});
}

bool Regime::contains(double c) const {
  return std::any_of(intervals_.begin(), intervals_.end(),
                     [c](const Interval& iv) { return iv.contains(c); });
}

bool Regime::bounded() const {
  return !intervals_.empty() && std::none_of(intervals_.begin(), intervals_.end(),
                                              [](const Interval& iv) { return iv.unbounded(); });
}

}  // namespace pathreg
