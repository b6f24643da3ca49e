#include "pathreg/experiments.hpp"

#include "pathreg/error.hpp"
#include "pathreg/parallel.hpp"
#include "pathreg/random.hpp"
#include "pathreg/report.hpp"
#include "pathreg/ridge.hpp"
#include "pathreg/version.hpp"

#include <cmath>
#include <ctime>
#include <fstream>
#include <numeric>

namespace pathreg {

std::string_view to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::ratio_vs_n: return "ratio-vs-n";
    case ExperimentKind::avg_gamma_vs_n: return "avg-gamma-vs-n";
    case ExperimentKind::logistic_ratios: return "logistic-ratios";
    case ExperimentKind::cv_demo: return "cv-demo";
  }
  return "unknown";
}

ExperimentKind parse_experiment_kind(std::string_view name) {
  for (auto kind : {ExperimentKind::ratio_vs_n, ExperimentKind::avg_gamma_vs_n,
                    ExperimentKind::logistic_ratios, ExperimentKind::cv_demo}) {
    if (name == to_string(kind)) return kind;
  }
  throw Error(ErrorCode::InvalidArgument, "unknown experiment '" + std::string(name) + "'");
}

RatioEstimate wilson_interval(std::uint64_t hits, std::uint64_t total, double z) {
  RatioEstimate r;
  r.hits = hits;
  r.total = total;
  if (total == 0) return r;
  const double n = static_cast<double>(total);
  const double p = static_cast<double>(hits) / n;
  const double z2 = z * z;
  const double centre = (p + z2 / (2 * n)) / (1 + z2 / n);
  const double half = z / (1 + z2 / n) * std::sqrt(p * (1 - p) / n + z2 / (4 * n * n));
  r.estimate = p;
  r.lo = std::max(0.0, std::min(p, centre - half));
  r.hi = std::min(1.0, std::max(p, centre + half));
  return r;
}

namespace {

void validate(const ExperimentSpec& spec) {
  if (spec.m == 0) throw Error(ErrorCode::InvalidArgument, "M must be at least 1");
  if (spec.m_control && *spec.m_control == 0) {
    throw Error(ErrorCode::InvalidArgument, "control M must be at least 1");
  }
  if (spec.kind != ExperimentKind::cv_demo && spec.sizes.empty()) {
    throw Error(ErrorCode::InvalidArgument, "at least one sample size is required");
  }
  for (auto n : spec.sizes) {
    if (n == 0) throw Error(ErrorCode::InvalidArgument, "sample sizes must be positive");
  }
  if (spec.kind == ExperimentKind::ratio_vs_n && !spec.unconditioned && !spec.simpson) {
    throw Error(ErrorCode::InvalidArgument, "ratio-vs-n needs unconditioned and/or Simpson rows");
  }
}

std::uint64_t point_seed(std::uint64_t seed, std::uint64_t n, std::uint64_t tag) {
  return derive_seed(derive_seed(seed, n), tag);
}

std::vector<Scheme> schemes_or(const ExperimentSpec& spec, Scheme fallback) {
  return spec.schemes.empty() ? std::vector<Scheme>{fallback} : spec.schemes;
}

RegGrid grid_or(const std::string& spec, std::string_view fallback, std::optional<std::size_t> n = {}) {
  return RegGrid::parse(spec.empty() ? fallback : std::string_view(spec), n);
}

std::size_t strata_variable(Strata strata) { return strata == Strata::x1 ? 1 : 2; }

bool ridge_pathological(const ContingencyTable222& table, const ExperimentSpec& spec,
                        const RegGrid* grid) {
  const auto reports = grid ? pathological_regime_numeric(encode(table), *grid, spec.intercept)
                            : pathological_regime_exact(RidgeSummary::from(table, spec.intercept));
  for (const auto& r : reports) {
    if (!r.regime.empty()) return true;
  }
  return false;
}

bool both_classes(const ContingencyTable222& t) {
  return t.margin(0, -1, -1) > 0 && t.margin(1, -1, -1) > 0;
}

}  // namespace

std::vector<RatioRow> run_ridge_ratio_experiment(const ExperimentSpec& spec) {
  validate(spec);
  std::optional<RegGrid> grid;
  if (spec.numeric) grid = grid_or(spec.grid, RegGrid::ridge_default_spec);
  const auto schemes = schemes_or(spec, Scheme::uniform_composition);
  std::vector<RatioRow> rows;
  for (auto n : spec.sizes) {
    for (std::size_t s = 0; s < schemes.size(); ++s) {
      for (int conditioned = 0; conditioned < 2; ++conditioned) {
        if (conditioned ? !spec.simpson : !spec.unconditioned) continue;
        SamplerConfig config{schemes[s], n, point_seed(spec.seed, n, 2 * s + conditioned),
                             spec.max_rejects};
        RatioRow row;
        row.n = n;
        row.scheme = schemes[s];
        row.simpson = conditioned;
        std::vector<ContingencyTable222> tables;
        if (conditioned) {
          auto batch = sample_simpson_tables(spec.m, config, spec.strata, spec.threads);
          row.candidates = batch.candidates;
          row.acceptance_rate = batch.acceptance_rate();
          tables = std::move(batch.tables);
        } else {
          tables.resize(spec.m);
          parallel_for(spec.m, spec.threads, [&](std::size_t j) { tables[j] = sample_table(config, j); });
          row.candidates = spec.m;
        }
        std::vector<char> hit(tables.size());
        parallel_for(tables.size(), spec.threads, [&](std::size_t j) {
          hit[j] = ridge_pathological(tables[j], spec, grid ? &*grid : nullptr);
        });
        row.ratio = wilson_interval(std::accumulate(hit.begin(), hit.end(), std::uint64_t{0}), tables.size());
        rows.push_back(row);
      }
    }
  }
  return rows;
}

std::vector<GammaRow> run_avg_gamma_experiment(const ExperimentSpec& spec) {
  validate(spec);
  const auto schemes = schemes_or(spec, Scheme::uniform_composition);
  std::vector<GammaRow> rows;
  for (auto n : spec.sizes) {
    for (std::size_t s = 0; s < schemes.size(); ++s) {
      const SamplerConfig config{schemes[s], n, point_seed(spec.seed, n, s), spec.max_rejects};
      // Leftmost regime start per pathological draw; NaN marks regime-free draws.
      std::vector<double> gamma(spec.m, std::nan(""));
      parallel_for(spec.m, spec.threads, [&](std::size_t j) {
        const auto table = sample_table(config, j);
        std::optional<Rational> best;
        for (const auto& r : pathological_regime_exact(RidgeSummary::from(table, spec.intercept))) {
          if (r.gamma && (!best || *r.gamma < *best)) best = r.gamma;
        }
        if (best) gamma[j] = to_double(*best);
      });
      GammaRow row;
      row.n = n;
      row.scheme = schemes[s];
      row.draws = spec.m;
      double sum = 0.0;
      for (double g : gamma) {
        if (std::isnan(g)) continue;
        ++row.pathological;
        sum += g;
      }
      if (row.pathological < 30) {
        throw Error(ErrorCode::InsufficientPathologicalDraws,
                    "only " + std::to_string(row.pathological) + " pathological draws at N = " +
                        std::to_string(n) + " (need 30)");
      }
      const double k = static_cast<double>(row.pathological);
      row.mean_gamma = sum / k;
      double ss = 0.0;
      for (double g : gamma) {
        if (!std::isnan(g)) ss += (g - row.mean_gamma) * (g - row.mean_gamma);
      }
      const double half = 1.959963984540054 * std::sqrt(ss / (k - 1.0) / k);
      row.lo = row.mean_gamma - half;
      row.hi = row.mean_gamma + half;
      rows.push_back(row);
    }
  }
  return rows;
}

LogisticRatioRow logistic_ratio_of(const std::vector<Dataset>& datasets, const ExperimentSpec& spec) {
  const RegGrid grid = grid_or(spec.grid, RegGrid::logistic_default_spec);
  ScanOptions options;
  options.weights = spec.weights;
  options.verdict_variable = strata_variable(spec.strata);
  std::vector<char> hit(datasets.size()), hit_any(datasets.size());
  std::vector<std::uint64_t> non_converged(datasets.size());
  parallel_for(datasets.size(), spec.threads, [&](std::size_t j) {
    const auto scan = scan_pathological_logistic(datasets[j], grid, options);
    hit[j] = scan.pathological;
    hit_any[j] = scan.pathological_any;
    non_converged[j] = scan.non_converged;
  });
  LogisticRatioRow row;
  row.ratio = wilson_interval(std::accumulate(hit.begin(), hit.end(), std::uint64_t{0}), datasets.size());
  row.ratio_any =
      wilson_interval(std::accumulate(hit_any.begin(), hit_any.end(), std::uint64_t{0}), datasets.size());
  row.non_converged_points = std::accumulate(non_converged.begin(), non_converged.end(), std::uint64_t{0});
  return row;
}

std::vector<LogisticRatioRow> run_logistic_ratio_experiment(const ExperimentSpec& spec) {
  validate(spec);
  const auto schemes = schemes_or(spec, Scheme::dirichlet_rounded);
  std::vector<LogisticRatioRow> rows;
  for (auto n : spec.sizes) {
    for (std::size_t s = 0; s < schemes.size(); ++s) {
      for (int simpson = 1; simpson >= 0; --simpson) {
        const SamplerConfig config{schemes[s], n, point_seed(spec.seed, n, 2 * s + simpson),
                                   spec.max_rejects};
        const Strata strata = spec.strata;
        // Both classes are needed for a logistic fit.
        auto keep = [strata, simpson](const ContingencyTable222& t) {
          return both_classes(t) && (is_simpson(t, strata) != SimpsonVerdict::none) == (simpson == 1);
        };
        const std::uint64_t m = simpson ? spec.m : spec.m_control.value_or(spec.m);
        const auto batch = sample_tables_where(m, config, keep, spec.threads);
        std::vector<Dataset> datasets;
        datasets.reserve(batch.tables.size());
        for (const auto& t : batch.tables) datasets.push_back(encode(t));
        auto row = logistic_ratio_of(datasets, spec);
        row.n = n;
        row.scheme = schemes[s];
        row.simpson = simpson;
        row.acceptance_rate = batch.acceptance_rate();
        rows.push_back(row);
      }
    }
  }
  return rows;
}

CvDemoReport run_cv_demo(const ExperimentSpec& spec, const Dataset& dataset) {
  if (dataset.features() != 2) throw Error(ErrorCode::WrongShape, "cv demo needs two features");
  CvDemoReport report;
  const auto table = decode(dataset.with_encoding({}));
  report.simpson_x1 = is_simpson(table, Strata::x1);
  report.simpson_x2 = is_simpson(table, Strata::x2);
  if (spec.variable) {
    report.variable = *spec.variable;
  } else {
    report.variable = report.simpson_x1 != SimpsonVerdict::none ? 1 : 2;
  }
  if (report.variable < 1 || report.variable > 2) {
    throw Error(ErrorCode::IndexOutOfRange, "cv demo variable must be 1 or 2");
  }
  const RegGrid grid = grid_or(spec.grid, RegGrid::logistic_default_spec);
  const RegGrid cv_grid = grid_or(spec.cv_grid, "inv:1e-4:1e4:10", dataset.size());
  report.baseline_c = grid.front();

  for (auto weights : {WeightScheme::uniform, WeightScheme::balanced}) {
    CvDemoArm arm;
    arm.weights = weights;
    const auto base = fit_logistic(dataset, grid.front(), weights);
    arm.cv = fit_logistic_cv(dataset, cv_grid, spec.folds, weights, spec.seed);
    arm.chosen_c = arm.cv.chosen_c;
    ScanOptions options;
    options.weights = weights;
    options.verdict_variable = report.variable;
    const auto scan = scan_pathological_logistic(dataset, grid, options);
    for (int j = 0; j < 2; ++j) {
      arm.baseline[j] = trend_indicator_logistic(base, report.variable, j);
      arm.trends[j] = trend_indicator_logistic(arm.cv.model, report.variable, j);
      arm.reversed[j] = std::abs(arm.baseline[j]) > 1e-9 && std::abs(arm.trends[j]) > 1e-9 &&
                        (arm.baseline[j] > 0.0) != (arm.trends[j] > 0.0);
      report.reversal = report.reversal || arm.reversed[j];
      for (const auto& r : scan.regimes) {
        if (r.variable == report.variable && r.value == j && r.regime.contains(arm.chosen_c)) {
          arm.in_scanned_regime = true;
        }
      }
    }
    if (weights == WeightScheme::uniform) report.baseline = arm.baseline;
    report.arms.push_back(std::move(arm));
  }
  return report;
}

nlohmann::ordered_json spec_to_json(const ExperimentSpec& spec) {
  nlohmann::ordered_json j;
  j["kind"] = to_string(spec.kind);
  j["sizes"] = spec.sizes;
  j["m"] = spec.m;
  j["m_control"] = spec.m_control ? nlohmann::ordered_json(*spec.m_control) : nlohmann::ordered_json();
  auto schemes = nlohmann::ordered_json::array();
  for (auto s : spec.schemes) schemes.push_back(to_string(s));
  j["schemes"] = schemes;
  j["unconditioned"] = spec.unconditioned;
  j["simpson"] = spec.simpson;
  j["intercept"] = spec.intercept;
  j["numeric"] = spec.numeric;
  j["weights"] = to_string(spec.weights);
  j["grid"] = spec.grid;
  j["cv_grid"] = spec.cv_grid;
  j["folds"] = spec.folds;
  j["strata"] = to_string(spec.strata);
  j["variable"] = spec.variable ? nlohmann::ordered_json(*spec.variable) : nlohmann::ordered_json();
  j["seed"] = spec.seed;
  j["max_rejects"] = spec.max_rejects;
  return j;
}

namespace {

nlohmann::ordered_json ratio_json(const RatioEstimate& r) {
  return {{"hits", r.hits}, {"m", r.total}, {"estimate", r.estimate}, {"wilson_lo", r.lo}, {"wilson_hi", r.hi}};
}

}  // namespace

ExperimentResult run_experiment(const ExperimentSpec& spec, const Dataset* dataset) {
  ExperimentResult out;
  out.spec = spec;
  out.points = nlohmann::ordered_json::array();
  switch (spec.kind) {
    case ExperimentKind::ratio_vs_n: {
      out.header = {"n", "scheme", "conditioning", "hits", "m", "ratio", "wilson_lo", "wilson_hi",
                    "candidates", "acceptance_rate"};
      for (const auto& r : run_ridge_ratio_experiment(spec)) {
        const std::string cond = r.simpson ? "simpson" : "all";
        out.rows.push_back({std::to_string(r.n), std::string(to_string(r.scheme)), cond,
                            std::to_string(r.ratio.hits), std::to_string(r.ratio.total),
                            format_number(r.ratio.estimate), format_number(r.ratio.lo),
                            format_number(r.ratio.hi), std::to_string(r.candidates),
                            format_number(r.acceptance_rate)});
        auto p = ratio_json(r.ratio);
        p["n"] = r.n;
        p["scheme"] = to_string(r.scheme);
        p["conditioning"] = cond;
        p["acceptance_rate"] = r.acceptance_rate;
        out.points.push_back(p);
      }
      break;
    }
    case ExperimentKind::avg_gamma_vs_n: {
      out.header = {"n", "scheme", "draws", "pathological", "mean_gamma", "ci_lo", "ci_hi"};
      for (const auto& r : run_avg_gamma_experiment(spec)) {
        out.rows.push_back({std::to_string(r.n), std::string(to_string(r.scheme)), std::to_string(r.draws),
                            std::to_string(r.pathological), format_number(r.mean_gamma),
                            format_number(r.lo), format_number(r.hi)});
        out.points.push_back({{"n", r.n}, {"scheme", to_string(r.scheme)}, {"draws", r.draws},
                              {"pathological", r.pathological}, {"mean_gamma", r.mean_gamma},
                              {"ci_lo", r.lo}, {"ci_hi", r.hi}});
      }
      break;
    }
    case ExperimentKind::logistic_ratios: {
      out.header = {"n", "scheme", "group", "hits", "m", "ratio", "wilson_lo", "wilson_hi",
                    "hits_any", "ratio_any", "non_converged_points", "acceptance_rate"};
      std::vector<LogisticRatioRow> rows;
      if (dataset) {
        auto row = logistic_ratio_of({*dataset}, spec);
        row.n = dataset->size();
        row.simpson = is_simpson(decode(dataset->with_encoding({})), spec.strata) != SimpsonVerdict::none;
        rows.push_back(row);
        out.manifest_extra["data"] = "user dataset";
      } else {
        validate(spec);
        rows = run_logistic_ratio_experiment(spec);
      }
      for (const auto& r : rows) {
        const std::string group = r.simpson ? "simpson" : "non_simpson";
        out.rows.push_back({std::to_string(r.n), std::string(to_string(r.scheme)), group,
                            std::to_string(r.ratio.hits), std::to_string(r.ratio.total),
                            format_number(r.ratio.estimate), format_number(r.ratio.lo),
                            format_number(r.ratio.hi), std::to_string(r.ratio_any.hits),
                            format_number(r.ratio_any.estimate), std::to_string(r.non_converged_points),
                            format_number(r.acceptance_rate)});
        auto p = ratio_json(r.ratio);
        p["n"] = r.n;
        p["scheme"] = to_string(r.scheme);
        p["group"] = group;
        p["any"] = ratio_json(r.ratio_any);
        p["non_converged_points"] = r.non_converged_points;
        p["acceptance_rate"] = r.acceptance_rate;
        out.points.push_back(p);
      }
      break;
    }
    case ExperimentKind::cv_demo: {
      if (!dataset) throw Error(ErrorCode::InvalidArgument, "cv-demo needs a dataset");
      const auto report = run_cv_demo(spec, *dataset);
      out.header = {"weights", "variable", "value", "baseline", "chosen_c", "trend", "reversed",
                    "in_scanned_regime"};
      for (const auto& arm : report.arms) {
        for (int j = 0; j < 2; ++j) {
          out.rows.push_back({std::string(to_string(arm.weights)), std::to_string(report.variable),
                              std::to_string(j), format_number(arm.baseline[j]),
                              format_number(arm.chosen_c), format_number(arm.trends[j]),
                              arm.reversed[j] ? "true" : "false", arm.in_scanned_regime ? "true" : "false"});
        }
      }
      out.points.push_back(cv_demo_json(report));
      break;
    }
  }
  return out;
}

std::string results_csv(const ExperimentResult& result) {
  std::string csv;
  auto line = [&csv](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) csv += ',';
      csv += cells[i];
    }
    csv += '\n';
  };
  line(result.header);
  for (const auto& row : result.rows) line(row);
  return csv;
}

nlohmann::ordered_json summary_json(const ExperimentResult& result) {
  nlohmann::ordered_json j;
  j["experiment"] = to_string(result.spec.kind);
  j["spec"] = spec_to_json(result.spec);
  j["seed"] = result.spec.seed;
  j["prng_version"] = kPrngVersion;
  j["points"] = result.points;
  return j;
}

std::string timestamp_run_id() {
  const std::time_t now = std::time(nullptr);
  std::tm utc{};
  gmtime_r(&now, &utc);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y%m%dT%H%M%SZ", &utc);
  return buf;
}

std::filesystem::path write_experiment(const ExperimentResult& result, const std::filesystem::path& root,
                                       const std::string& run_id) {
  const auto dir = root / std::string(to_string(result.spec.kind)) / run_id;
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::Io, "cannot create " + dir.string() + ": " + ec.message());

  nlohmann::ordered_json manifest;
  manifest["experiment"] = to_string(result.spec.kind);
  manifest["run_id"] = run_id;
  manifest["created"] = timestamp_run_id();
  manifest["version"] = kVersion;
  manifest["prng_version"] = kPrngVersion;
  manifest["seed"] = result.spec.seed;
  manifest["sizes"] = result.spec.sizes;
  manifest["m"] = result.spec.m;
  for (const auto& [key, value] : result.manifest_extra.items()) manifest[key] = value;

  write_text_file(dir / "results.csv", results_csv(result));
  write_text_file(dir / "summary.json", summary_json(result).dump(2) + "\n");
  write_text_file(dir / "manifest.json", manifest.dump(2) + "\n");
  return dir;
}

}  // namespace pathreg
