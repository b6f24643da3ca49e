#include "pathreg/grid.hpp"

#include "pathreg/error.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

namespace pathreg {

namespace {

double parse_double(std::string_view s, std::string_view spec) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) {
    throw Error(ErrorCode::InvalidArgument, "bad number '" + std::string(s) + "' in grid '" +
                                                std::string(spec) + "'");
  }
  return v;
}

std::size_t parse_count(std::string_view s, std::string_view spec) {
  std::size_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size() || v == 0) {
    throw Error(ErrorCode::InvalidArgument, "bad point count '" + std::string(s) + "' in grid '" +
                                                std::string(spec) + "'");
  }
  return v;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    auto pos = s.find(sep, start);
    out.push_back(s.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::vector<double> log_points(double lo, double hi, std::size_t n) {
  if (!(lo > 0.0) || !(hi > 0.0)) throw Error(ErrorCode::InvalidArgument, "log grid needs positive bounds");
  std::vector<double> out(n);
  const double a = std::log10(lo);
  const double b = std::log10(hi);
  for (std::size_t k = 0; k < n; ++k) {
    out[k] = n == 1 ? lo : std::pow(10.0, a + (b - a) * static_cast<double>(k) / static_cast<double>(n - 1));
  }
  if (n > 1) {
    out.front() = lo;
    out.back() = hi;
  }
  return out;
}

}  // namespace

RegGrid::RegGrid(std::vector<double> values) : values_(std::move(values)) {
  std::sort(values_.begin(), values_.end());
  std::vector<double> unique;
  for (double v : values_) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw Error(ErrorCode::InvalidArgument, "grid values must be positive and finite");
    }
    if (!unique.empty() && std::abs(v - unique.back()) <= 1e-12 * v) continue;
    unique.push_back(v);
  }
  values_ = std::move(unique);
  if (values_.size() < 2) throw Error(ErrorCode::InvalidArgument, "grid needs at least two points");
}

RegGrid RegGrid::parse(std::string_view spec, std::optional<std::size_t> sample_size) {
  std::vector<double> values;
  for (auto segment : split(spec, ',')) {
    auto parts = split(segment, ':');
    if (parts.size() == 1) {
      values.push_back(parse_double(parts[0], spec));
      continue;
    }
    if (parts.size() != 4) {
      throw Error(ErrorCode::InvalidArgument, "grid segment '" + std::string(segment) +
                                                  "' must look like kind:lo:hi:n");
    }
    const double lo = parse_double(parts[1], spec);
    const double hi = parse_double(parts[2], spec);
    const std::size_t n = parse_count(parts[3], spec);
    if (parts[0] == "log") {
      auto pts = log_points(lo, hi, n);
      values.insert(values.end(), pts.begin(), pts.end());
    } else if (parts[0] == "lin") {
      for (std::size_t k = 0; k < n; ++k) {
        values.push_back(n == 1 ? lo : lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(n - 1));
      }
    } else if (parts[0] == "inv") {
      if (!sample_size || *sample_size == 0) {
        throw Error(ErrorCode::InvalidArgument, "inv: grid segments need the sample size");
      }
      for (double inv_c : log_points(lo, hi, n)) {
        values.push_back(1.0 / (2.0 * inv_c * static_cast<double>(*sample_size)));
      }
    } else {
      throw Error(ErrorCode::InvalidArgument, "unknown grid kind '" + std::string(parts[0]) + "'");
    }
  }
  return RegGrid(std::move(values));
}

RegGrid RegGrid::logistic_default() { return parse(logistic_default_spec); }

RegGrid RegGrid::ridge_default() { return parse(ridge_default_spec); }

RegGrid RegGrid::cv_default(std::size_t sample_size) { return parse("inv:1e-4:1e4:10", sample_size); }

RegGrid RegGrid::log_spaced(double lo, double hi, std::size_t count) {
  return RegGrid(log_points(lo, hi, count));
}

}  // namespace pathreg
