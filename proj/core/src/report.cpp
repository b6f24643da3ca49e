#include "pathreg/report.hpp"

#include "pathreg/error.hpp"
#include "pathreg/random.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

namespace pathreg {

std::string format_number(double value) {
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", value);
  return buf;
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
  out << content;
  if (!out) throw Error(ErrorCode::Io, "write failed for " + path.string());
}

namespace {

Json integer_json(const BigInt& v) {
  if (v >= std::numeric_limits<std::int64_t>::min() && v <= std::numeric_limits<std::int64_t>::max()) {
    return v.convert_to<std::int64_t>();
  }
  return v.str();
}

Json endpoint(double value, const std::optional<Rational>& exact) {
  if (std::isinf(value)) return nullptr;
  if (exact) return rational_json(*exact);
  return value;
}

Json finite_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

}  // namespace

Json rational_json(const Rational& value) {
  return {{"num", integer_json(boost::multiprecision::numerator(value))},
          {"den", integer_json(boost::multiprecision::denominator(value))}};
}

Json interval_json(const Interval& iv) {
  return {{"lo", endpoint(iv.lo, iv.lo_exact)},
          {"hi", endpoint(iv.hi, iv.hi_exact)},
          {"lo_float", iv.lo},
          {"hi_float", finite_or_null(iv.hi)}};
}

Json regime_json(const RegimeReport& r) {
  Json j;
  j["variable"] = r.variable;
  j["coefficient"] = r.coefficient;
  auto intervals = Json::array();
  for (const auto& iv : r.regime.intervals()) intervals.push_back(interval_json(iv));
  j["intervals"] = intervals;
  j["bounded"] = r.regime.bounded();
  j["gamma"] = r.gamma ? rational_json(*r.gamma) : Json(nullptr);
  j["gamma_float"] = r.gamma ? Json(to_double(*r.gamma)) : Json(nullptr);
  j["true_trend"] = r.true_trend.value;
  j["true_trend_exact"] = r.true_trend.exact ? rational_json(*r.true_trend.exact) : Json(nullptr);
  j["degenerate_design"] = r.true_trend.degenerate_design;
  j["degenerate_true_trend"] = r.degenerate_true_trend;
  j["grid_too_coarse"] = r.grid_too_coarse;
  return j;
}

Json model_json(const LogisticModel& m) {
  Json beta = Json::array();
  for (Eigen::Index i = 0; i < m.beta.size(); ++i) beta.push_back(m.beta(i));
  return {{"beta0", m.beta0},
          {"beta", beta},
          {"c", m.c},
          {"converged", m.converged},
          {"iterations", m.iterations},
          {"gradient_norm", m.gradient_norm}};
}

Json logistic_regime_json(const LogisticRegime& r) {
  auto intervals = Json::array();
  for (const auto& iv : r.regime.intervals()) intervals.push_back(interval_json(iv));
  return {{"variable", r.variable},
          {"value", r.value},
          {"baseline", r.baseline},
          {"intervals", intervals},
          {"reaches_grid_end", r.reaches_grid_end},
          {"most_reversed_c", r.most_reversed_c ? Json(*r.most_reversed_c) : Json(nullptr)},
          {"most_reversed_trend", r.most_reversed_trend}};
}

Json logistic_scan_json(const LogisticScan& scan, bool include_models) {
  Json j;
  j["grid_points"] = scan.c.size();
  j["baseline_c"] = scan.c.empty() ? Json(nullptr) : Json(scan.c.front());
  j["verdict_variable"] = scan.verdict_variable;
  j["pathological"] = scan.pathological;
  j["pathological_any"] = scan.pathological_any;
  j["non_converged"] = scan.non_converged;
  auto regimes = Json::array();
  for (const auto& r : scan.regimes) regimes.push_back(logistic_regime_json(r));
  j["regimes"] = regimes;
  if (include_models) {
    auto models = Json::array();
    for (const auto& m : scan.models) models.push_back(model_json(m));
    j["models"] = models;
  }
  return j;
}

Json cv_demo_json(const CvDemoReport& report) {
  Json j;
  j["variable"] = report.variable;
  j["simpson"] = {{"x1", to_string(report.simpson_x1)}, {"x2", to_string(report.simpson_x2)}};
  j["baseline_c"] = report.baseline_c;
  j["baseline"] = report.baseline;
  auto arms = Json::array();
  for (const auto& arm : report.arms) {
    arms.push_back({{"weights", to_string(arm.weights)},
                    {"baseline", arm.baseline},
                    {"chosen_c", arm.chosen_c},
                    {"trends", arm.trends},
                    {"reversed", arm.reversed},
                    {"in_scanned_regime", arm.in_scanned_regime},
                    {"folds", arm.cv.fold_accuracy.size()},
                    {"cv_grid", arm.cv.grid},
                    {"mean_accuracy", arm.cv.mean_accuracy},
                    {"model", model_json(arm.cv.model)}});
  }
  j["arms"] = arms;
  j["reversal"] = report.reversal;
  return j;
}

ModelKind parse_model_kind(std::string_view name) {
  if (name == "ridge") return ModelKind::ridge;
  if (name == "logistic") return ModelKind::logistic;
  throw Error(ErrorCode::InvalidArgument, "unknown model '" + std::string(name) + "'");
}

namespace {

std::string axis_name(const ContingencyTable222& table, std::size_t variable) {
  const auto& labels = table.labels();
  const std::string& label = variable == 1 ? labels.x1 : labels.x2;
  return label.empty() ? "X" + std::to_string(variable) : label;
}

}  // namespace

Analysis analyze_table(const ContingencyTable222& table, const AnalyzeOptions& options) {
  if (table.sample_size() == 0) throw Error(ErrorCode::EmptyTable, "table has no observations");
  Analysis out;
  Json& j = out.report;
  j["model"] = options.model == ModelKind::ridge ? "ridge" : "logistic";
  j["intercept"] = options.model == ModelKind::ridge ? Json(options.intercept) : Json(true);
  j["sample_size"] = table.sample_size();
  j["table"] = Json::parse(table_to_json(table));
  j["simpson"] = {{"x1", to_string(is_simpson(table, Strata::x1))},
                  {"x2", to_string(is_simpson(table, Strata::x2))}};
  auto avoid = Json::array();

  if (options.model == ModelKind::ridge) {
    const auto regimes = pathological_regime_exact(RidgeSummary::from(table, options.intercept));
    auto arr = Json::array();
    for (const auto& r : regimes) {
      arr.push_back(regime_json(r));
      if (r.regime.empty()) continue;
      out.pathological = true;
      auto intervals = Json::array();
      for (const auto& iv : r.regime.intervals()) intervals.push_back(interval_json(iv));
      avoid.push_back({{"variable", r.variable},
                       {"trend", "effect of " + axis_name(table, 3 - r.variable) + " with " +
                                     axis_name(table, r.variable) + " held fixed"},
                       {"intervals", intervals}});
    }
    j["regimes"] = arr;
    if (!options.grid.empty()) {
      auto numeric = Json::array();
      for (const auto& r : pathological_regime_numeric(encode(table), RegGrid::parse(options.grid),
                                                       options.intercept)) {
        numeric.push_back(regime_json(r));
      }
      j["numeric_check"] = numeric;
    }
  } else {
    const RegGrid grid = RegGrid::parse(options.grid.empty() ? RegGrid::logistic_default_spec
                                                             : std::string_view(options.grid));
    ScanOptions scan_options;
    scan_options.weights = options.weights;
    scan_options.verdict_variable = options.strata == Strata::x1 ? 1 : 2;
    const auto scan = scan_pathological_logistic(encode(table), grid, scan_options);
    j["weights"] = to_string(options.weights);
    j["scan"] = logistic_scan_json(scan);
    out.pathological = scan.pathological_any;
    for (const auto& r : scan.regimes) {
      if (r.regime.empty()) continue;
      auto intervals = Json::array();
      for (const auto& iv : r.regime.intervals()) intervals.push_back(interval_json(iv));
      avoid.push_back({{"variable", r.variable},
                       {"value", r.value},
                       {"trend", "effect of " + axis_name(table, 3 - r.variable) + " with " +
                                     axis_name(table, r.variable) + " = " + std::to_string(r.value)},
                       {"intervals", intervals}});
    }
  }
  j["pathological"] = out.pathological;
  if (out.pathological) {
    j["warning"] = {{"message",
                     "regularization parameters in these ranges reverse the sign of a trend "
                     "present in the unregularized fit"},
                    {"avoid", avoid}};
  } else {
    j["warning"] = nullptr;
  }
  return out;
}

CurvePlot ridge_curve_plot(const ContingencyTable222& table, std::size_t variable, const RegGrid& grid,
                           bool intercept) {
  const auto curve = trend_curve(encode(table), variable, grid, intercept);
  CurvePlot plot;
  plot.model = "ridge";
  plot.variable = variable;
  plot.title = "ridge trend, " + axis_name(table, variable) + " held fixed";
  plot.c = curve.c;
  plot.trend = curve.trend;
  plot.true_trend = curve.true_trend.value;
  for (const auto& r : pathological_regime_exact(RidgeSummary::from(table, intercept))) {
    if (r.variable == variable) plot.shaded = r.regime.intervals();
  }
  return plot;
}

CurvePlot logistic_curve_plot(const ContingencyTable222& table, std::size_t variable, int value,
                              const RegGrid& grid, WeightScheme weights) {
  ScanOptions options;
  options.weights = weights;
  options.verdict_variable = variable;
  const auto scan = scan_pathological_logistic(encode(table), grid, options);
  CurvePlot plot;
  plot.model = "logistic";
  plot.variable = variable;
  plot.value = value;
  plot.title = "logistic trend, " + axis_name(table, variable) + " = " + std::to_string(value);
  for (std::size_t g = 0; g < scan.c.size(); ++g) {
    if (g > 0 && !scan.models[g].converged) continue;
    plot.c.push_back(scan.c[g]);
    plot.trend.push_back(trend_indicator_logistic(scan.models[g], variable, value));
  }
  for (const auto& r : scan.regimes) {
    if (r.variable == variable && r.value == value) {
      plot.true_trend = r.baseline;
      plot.shaded = r.regime.intervals();
    }
  }
  return plot;
}

std::string curve_csv(const CurvePlot& plot) {
  std::string out = "c,trend\n";
  for (std::size_t i = 0; i < plot.c.size(); ++i) {
    out += format_number(plot.c[i]) + "," + format_number(plot.trend[i]) + "\n";
  }
  return out;
}

Json curve_sidecar_json(const CurvePlot& plot) {
  auto regime = Json::array();
  for (const auto& iv : plot.shaded) regime.push_back(interval_json(iv));
  return {{"model", plot.model},
          {"variable", plot.variable},
          {"value", plot.value ? Json(*plot.value) : Json(nullptr)},
          {"true_trend", plot.true_trend},
          {"points", plot.c.size()},
          {"regime", regime}};
}

void write_table_batch(const std::filesystem::path& dir, const std::vector<ContingencyTable222>& tables,
                       const SamplerConfig& config, std::uint64_t m, bool simpson,
                       double acceptance_rate) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::Io, "cannot create " + dir.string() + ": " + ec.message());
  auto files = Json::array();
  for (std::size_t i = 0; i < tables.size(); ++i) {
    char name[32];
    std::snprintf(name, sizeof name, "table_%06zu.csv", i);
    write_text_file(dir / name, format_table_csv(tables[i]));
    files.push_back(name);
  }
  Json manifest;
  manifest["scheme"] = to_string(config.scheme);
  manifest["N"] = config.n;
  manifest["M"] = m;
  manifest["seed"] = config.seed;
  manifest["prng_version"] = kPrngVersion;
  manifest["simpson"] = simpson;
  manifest["acceptance_rate"] = acceptance_rate;
  manifest["files"] = files;
  write_text_file(dir / "manifest.json", manifest.dump(2) + "\n");
}

}  // namespace pathreg
