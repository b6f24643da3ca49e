#pragma once

#include "pathreg/experiments.hpp"
#include "pathreg/logistic.hpp"
#include "pathreg/rational.hpp"
#include "pathreg/regime.hpp"
#include "pathreg/ridge.hpp"
#include "pathreg/sampling.hpp"
#include "pathreg/tables.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace pathreg {

using Json = nlohmann::ordered_json;

/// Ten significant digits; "inf" for infinity.
std::string format_number(double value);

/// Throws Error(Io).
void write_text_file(const std::filesystem::path& path, const std::string& content);

/// {"num": 3, "den": 13}; components become strings beyond 64 bits.
Json rational_json(const Rational& value);

/// {"lo": ..., "hi": ...} with exact endpoints as rationals, floats
/// otherwise, and null for an infinite right end.
Json interval_json(const Interval& interval);

Json regime_json(const RegimeReport& report);
Json model_json(const LogisticModel& model);
Json logistic_regime_json(const LogisticRegime& regime);
Json logistic_scan_json(const LogisticScan& scan, bool include_models = false);
Json cv_demo_json(const CvDemoReport& report);

enum class ModelKind { ridge, logistic };
ModelKind parse_model_kind(std::string_view name);

struct AnalyzeOptions {
  ModelKind model = ModelKind::ridge;
  bool intercept = false;
  /// Ridge: optional grid for a numeric cross-check. Logistic: scan grid
  /// (default logistic grid when empty).
  std::string grid;
  WeightScheme weights = WeightScheme::uniform;
  Strata strata = Strata::x1;
};

struct Analysis {
  Json report;
  bool pathological = false;
};

Analysis analyze_table(const ContingencyTable222& table, const AnalyzeOptions& options);

/// A single trend curve with the pieces the plot and sidecar need.
struct CurvePlot {
  std::string title;
  std::string model;
  std::size_t variable = 0;
  std::optional<int> value;
  std::vector<double> c;
  std::vector<double> trend;
  double true_trend = 0.0;
  std::vector<Interval> shaded;
};

CurvePlot ridge_curve_plot(const ContingencyTable222& table, std::size_t variable, const RegGrid& grid,
                           bool intercept);
CurvePlot logistic_curve_plot(const ContingencyTable222& table, std::size_t variable, int value,
                              const RegGrid& grid, WeightScheme weights);

/// "c,trend" rows.
std::string curve_csv(const CurvePlot& plot);
Json curve_sidecar_json(const CurvePlot& plot);
/// Deterministic SVG: log-scaled c axis, shaded reversal regions, and
/// annotated finite regime boundaries.
std::string render_curve_svg(const CurvePlot& plot);

/// Writes table_000000.csv, ... plus manifest.json into `dir`.
void write_table_batch(const std::filesystem::path& dir, const std::vector<ContingencyTable222>& tables,
                       const SamplerConfig& config, std::uint64_t m, bool simpson,
                       double acceptance_rate);

}  // namespace pathreg
