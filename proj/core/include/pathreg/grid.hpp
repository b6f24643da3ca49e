#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace pathreg {

/// Strictly increasing list of positive regularization parameters.
class RegGrid {
 public:
  explicit RegGrid(std::vector<double> values);

  /// Comma-separated segments, merged and de-duplicated:
  ///   log:a:b:n   n log-spaced values from a to b (inclusive)
  ///   lin:a:b:n   n evenly spaced values
  ///   inv:a:b:n   c = 1 / (2 C N) for n log-spaced C in [a, b]; the inverse-C
  ///               convention of libraries that penalize 0.5|w|^2 + C sum(loss).
  ///               Needs `sample_size`.
  ///   <number>    a single value
  static RegGrid parse(std::string_view spec, std::optional<std::size_t> sample_size = {});

  /// 10 / 150 / 40 log-spaced points over [1e-8, 1e-1], [1e-1, 1e6], [1e6, 1e8].
  static RegGrid logistic_default();
  static constexpr std::string_view logistic_default_spec =
      "log:1e-8:1e-1:10,log:1e-1:1e6:150,log:1e6:1e8:40";

  /// 200 log-spaced points in [1e-6, 1e8].
  static RegGrid ridge_default();
  static constexpr std::string_view ridge_default_spec = "log:1e-6:1e8:200";

  /// Ten-point cross-validation grid, C in [1e-4, 1e4] under the inverse-C convention.
  static RegGrid cv_default(std::size_t sample_size);

  static RegGrid log_spaced(double lo, double hi, std::size_t count);

  const std::vector<double>& values() const { return values_; }
  std::size_t size() const { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }
  double front() const { return values_.front(); }
  double back() const { return values_.back(); }
  auto begin() const { return values_.begin(); }
  auto end() const { return values_.end(); }

 private:
  std::vector<double> values_;
};

}  // namespace pathreg
