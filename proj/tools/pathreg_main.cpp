// pathreg: find regularization ranges that reverse the trends of a binary dataset.
//
// Exit status: 0 no regime found / success, 1 input could not be parsed,
// 2 degenerate data or failed sampling/spec validation, 3 regime found.

#include <CLI11.hpp>

#include "pathreg/error.hpp"
#include "pathreg/experiments.hpp"
#include "pathreg/report.hpp"
#include "pathreg/sampling.hpp"
#include "pathreg/tables.hpp"
#include "pathreg/version.hpp"

#include <cstdlib>
#include <iostream>
#include <sstream>
#include <thread>

namespace {

using namespace pathreg;

constexpr std::uint64_t kDefaultSeed = 20240601;

constexpr int kExitOk = 0;
constexpr int kExitParse = 1;
constexpr int kExitDegenerate = 2;
constexpr int kExitRegime = 3;

struct Globals {
  std::uint64_t seed = kDefaultSeed;
  bool seed_given = false;
  std::string out;
  std::string format = "json";
  unsigned threads = 1;
};

std::uint64_t effective_seed(const Globals& g) {
  if (g.seed_given) return g.seed;
  if (const char* env = std::getenv("PATHREG_SEED")) {
    try {
      std::size_t used = 0;
      const auto v = std::stoull(env, &used);
      if (used == std::string(env).size()) return v;
    } catch (const std::exception&) {
    }
    throw Error(ErrorCode::ParseError, std::string("PATHREG_SEED is not an unsigned integer: ") + env);
  }
  return kDefaultSeed;
}

unsigned effective_threads(const Globals& g) {
  if (g.threads != 0) return g.threads;
  return std::max(1u, std::thread::hardware_concurrency());
}

Strata parse_strata(const std::string& s) {
  if (s == "x1") return Strata::x1;
  if (s == "x2") return Strata::x2;
  throw Error(ErrorCode::InvalidArgument, "strata must be x1 or x2");
}

std::vector<std::uint64_t> parse_sizes(const std::string& text) {
  std::vector<std::uint64_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      const auto v = std::stoull(item, &used);
      if (used != item.size() || v == 0) throw std::invalid_argument(item);
      out.push_back(v);
    } catch (const std::exception&) {
      throw Error(ErrorCode::InvalidArgument, "bad sample size '" + item + "'");
    }
  }
  return out;
}

std::string interval_end(double v, const std::optional<Rational>& exact) {
  if (std::isinf(v)) return "inf";
  return exact ? to_string(*exact) : format_number(v);
}

void emit(const std::string& text, const Globals& g, const std::string& file) {
  if (g.out.empty()) {
    std::cout << text;
    return;
  }
  std::filesystem::create_directories(g.out);
  write_text_file(std::filesystem::path(g.out) / file, text);
  std::cout << (std::filesystem::path(g.out) / file).string() << "\n";
}

// analyze -----------------------------------------------------------------

struct AnalyzeArgs {
  std::string table;
  std::string model = "ridge";
  bool intercept = false;
  std::string grid;
  std::string weights = "uniform";
  std::string strata = "x1";
};

int run_analyze(const AnalyzeArgs& a, const Globals& g) {
  const auto table = read_table_csv(a.table);
  AnalyzeOptions options;
  options.model = parse_model_kind(a.model);
  options.intercept = a.intercept;
  options.grid = a.grid;
  options.weights = parse_weight_scheme(a.weights);
  options.strata = parse_strata(a.strata);
  const auto analysis = analyze_table(table, options);
  if (g.format == "csv") {
    std::string csv = "variable,value,lo,hi\n";
    const auto& r = analysis.report;
    const Json& regimes = options.model == ModelKind::ridge ? r["regimes"] : r["scan"]["regimes"];
    for (const auto& entry : regimes) {
      for (const auto& iv : entry["intervals"]) {
        const auto end = [](const Json& e) -> std::string {
          if (e.is_null()) return "inf";
          if (e.is_object()) {
            const auto num = e["num"].dump(), den = e["den"].dump();
            return den == "1" ? num : num + "/" + den;
          }
          return format_number(e.get<double>());
        };
        csv += std::to_string(entry["variable"].get<std::size_t>()) + "," +
               (entry.contains("value") ? std::to_string(entry["value"].get<int>()) : std::string()) + "," +
               end(iv["lo"]) + "," + end(iv["hi"]) + "\n";
      }
    }
    emit(csv, g, "analysis.csv");
  } else {
    emit(analysis.report.dump(2) + "\n", g, "analysis.json");
  }
  return analysis.pathological ? kExitRegime : kExitOk;
}

// path --------------------------------------------------------------------

struct PathArgs {
  std::string table;
  std::size_t variable = 2;
  int value = 0;
  std::string model = "ridge";
  bool intercept = false;
  std::string grid;
  std::string weights = "uniform";
  std::string svg;
};

int run_path(const PathArgs& a, const Globals& g) {
  const auto table = read_table_csv(a.table);
  if (table.sample_size() == 0) throw Error(ErrorCode::EmptyTable, "table has no observations");
  const auto model = parse_model_kind(a.model);
  CurvePlot plot;
  if (model == ModelKind::ridge) {
    const RegGrid grid = RegGrid::parse(a.grid.empty() ? "log:1e-3:1e3:121" : a.grid);
    plot = ridge_curve_plot(table, a.variable, grid, a.intercept);
  } else {
    const RegGrid grid = RegGrid::parse(a.grid.empty() ? RegGrid::logistic_default_spec : std::string_view(a.grid));
    plot = logistic_curve_plot(table, a.variable, a.value, grid, parse_weight_scheme(a.weights));
  }
  if (g.format == "json") {
    Json j = curve_sidecar_json(plot);
    j["c"] = plot.c;
    j["trend"] = plot.trend;
    emit(j.dump(2) + "\n", g, "curve.json");
  } else {
    emit(curve_csv(plot), g, "curve.csv");
    if (!g.out.empty()) {
      write_text_file(std::filesystem::path(g.out) / "curve.json", curve_sidecar_json(plot).dump(2) + "\n");
    }
  }
  if (!a.svg.empty()) {
    std::filesystem::path svg_path(a.svg);
    if (!g.out.empty() && svg_path.is_relative()) svg_path = std::filesystem::path(g.out) / svg_path;
    write_text_file(svg_path, render_curve_svg(plot));
  }
  for (const auto& iv : plot.shaded) {
    std::cerr << "reversal regime: (" << interval_end(iv.lo, iv.lo_exact) << ", "
              << interval_end(iv.hi, iv.hi_exact) << ")\n";
  }
  return plot.shaded.empty() ? kExitOk : kExitRegime;
}

// sample ------------------------------------------------------------------

struct SampleArgs {
  std::string scheme = "dirichlet";
  std::uint64_t n = 200;
  std::uint64_t m = 10;
  bool simpson = false;
  std::string strata = "x1";
  std::uint64_t max_rejects = 10'000'000;
  std::string run_id;
};

int run_sample(const SampleArgs& a, const Globals& g) {
  SamplerConfig config{parse_scheme(a.scheme), a.n, effective_seed(g), a.max_rejects};
  if (a.m == 0 || a.n == 0) throw Error(ErrorCode::InvalidArgument, "-n and -m must be positive");
  TableBatch batch;
  if (a.simpson) {
    batch = sample_simpson_tables(a.m, config, parse_strata(a.strata), effective_threads(g));
  } else {
    batch = sample_tables_where(a.m, config, [](const ContingencyTable222&) { return true; },
                                effective_threads(g));
  }
  const std::filesystem::path root = g.out.empty() ? "out" : g.out;
  const auto dir = root / "sample" / (a.run_id.empty() ? timestamp_run_id() : a.run_id);
  write_table_batch(dir, batch.tables, config, a.m, a.simpson, batch.acceptance_rate());
  std::cout << dir.string() << "\n";
  std::cout << "tables: " << batch.tables.size() << "  candidates: " << batch.candidates
            << "  acceptance_rate: " << format_number(batch.acceptance_rate()) << "\n";
  return kExitOk;
}

// experiment --------------------------------------------------------------

struct ExperimentArgs {
  std::string kind;
  std::string sizes;
  std::uint64_t m = 500;
  std::uint64_t m_control = 0;
  std::vector<std::string> schemes;
  bool simpson = false;
  bool simpson_only = false;
  bool intercept = false;
  bool numeric = false;
  std::string weights = "uniform";
  std::string grid;
  std::string cv_grid;
  std::size_t folds = 5;
  std::string strata = "x1";
  std::size_t variable = 0;
  std::string data;
  std::string run_id;
  std::uint64_t max_rejects = 10'000'000;
};

void print_table(const ExperimentResult& result) {
  std::vector<std::size_t> width(result.header.size());
  for (std::size_t i = 0; i < width.size(); ++i) width[i] = result.header[i].size();
  for (const auto& row : result.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) width[i] = std::max(width[i], row[i].size());
  }
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      std::cout << (i ? "  " : "") << cells[i] << std::string(width[i] - cells[i].size(), ' ');
    }
    std::cout << "\n";
  };
  line(result.header);
  for (const auto& row : result.rows) line(row);
}

int run_experiment_cmd(const ExperimentArgs& a, const Globals& g) {
  ExperimentSpec spec;
  spec.kind = parse_experiment_kind(a.kind);
  if (!a.sizes.empty()) spec.sizes = parse_sizes(a.sizes);
  spec.m = a.m;
  if (a.m_control) spec.m_control = a.m_control;
  for (const auto& s : a.schemes) spec.schemes.push_back(parse_scheme(s));
  spec.simpson = a.simpson || a.simpson_only;
  spec.unconditioned = !a.simpson_only;
  spec.intercept = a.intercept;
  spec.numeric = a.numeric;
  spec.weights = parse_weight_scheme(a.weights);
  spec.grid = a.grid;
  spec.cv_grid = a.cv_grid;
  spec.folds = a.folds;
  spec.strata = parse_strata(a.strata);
  if (a.variable) spec.variable = a.variable;
  spec.seed = effective_seed(g);
  spec.max_rejects = a.max_rejects;
  spec.threads = effective_threads(g);

  std::optional<Dataset> dataset;
  if (!a.data.empty()) dataset = encode(read_table_csv(a.data));
  if (spec.kind == ExperimentKind::cv_demo && !dataset) {
    throw Error(ErrorCode::InvalidArgument, "cv-demo needs --data TABLE.csv");
  }
  auto result = run_experiment(spec, dataset ? &*dataset : nullptr);
  if (!a.data.empty()) result.manifest_extra["data"] = a.data;
  const std::filesystem::path root = g.out.empty() ? "out" : g.out;
  const auto dir = write_experiment(result, root, a.run_id.empty() ? timestamp_run_id() : a.run_id);
  if (g.format == "json") {
    std::cout << summary_json(result).dump(2) << "\n";
  } else {
    print_table(result);
  }
  std::cerr << "wrote " << dir.string() << "\n";
  return kExitOk;
}

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::ParseError:
    case ErrorCode::NegativeCount:
    case ErrorCode::Io:
      return kExitParse;
    default:
      return kExitDegenerate;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Detect regularization ranges that reverse the trends of binary datasets"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  app.add_option("--seed", g.seed, "Random seed (default " + std::to_string(kDefaultSeed) +
                                       ", or PATHREG_SEED)")
      ->each([&g](const std::string&) { g.seed_given = true; });
  app.add_option("--out", g.out, "Output directory");
  app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--threads", g.threads, "Worker threads (0 = all cores)");

  AnalyzeArgs analyze;
  auto* cmd_analyze = app.add_subcommand("analyze", "Report regimes, true trends and Simpson verdicts for a table");
  cmd_analyze->add_option("table", analyze.table, "Table CSV (y,x1,x2,count)")->required();
  cmd_analyze->add_option("--model", analyze.model)->check(CLI::IsMember({"ridge", "logistic"}));
  cmd_analyze->add_flag("--intercept", analyze.intercept, "Ridge with unpenalized intercept");
  cmd_analyze->add_option("--grid", analyze.grid, "Grid, e.g. log:1e-8:1e8:200");
  cmd_analyze->add_option("--weights", analyze.weights)->check(CLI::IsMember({"uniform", "balanced"}));
  cmd_analyze->add_option("--strata", analyze.strata, "Logistic verdict conditioning")
      ->check(CLI::IsMember({"x1", "x2"}));

  PathArgs path;
  auto* cmd_path = app.add_subcommand("path", "Emit the trend curve c -> T(c)");
  cmd_path->add_option("table", path.table, "Table CSV")->required();
  cmd_path->add_option("--var", path.variable, "Variable held fixed (1 or 2)")->check(CLI::Range(1, 2));
  cmd_path->add_option("--value", path.value, "Value of the fixed variable (logistic)")->check(CLI::Range(0, 1));
  cmd_path->add_option("--model", path.model)->check(CLI::IsMember({"ridge", "logistic"}));
  cmd_path->add_flag("--intercept", path.intercept);
  cmd_path->add_option("--grid", path.grid);
  cmd_path->add_option("--weights", path.weights)->check(CLI::IsMember({"uniform", "balanced"}));
  cmd_path->add_option("--svg", path.svg, "Also write an SVG plot to this file");

  SampleArgs sample;
  auto* cmd_sample = app.add_subcommand("sample", "Write a batch of sampled tables");
  cmd_sample->add_option("--scheme", sample.scheme)
      ->check(CLI::IsMember({"bernoulli", "dirichlet", "dirichlet_rounded", "uniform", "uniform_composition"}));
  cmd_sample->add_option("-n", sample.n, "Sample size N");
  cmd_sample->add_option("-m", sample.m, "Number of tables");
  cmd_sample->add_flag("--simpson", sample.simpson, "Keep only Simpson tables");
  cmd_sample->add_option("--strata", sample.strata)->check(CLI::IsMember({"x1", "x2"}));
  cmd_sample->add_option("--max-rejects", sample.max_rejects);
  cmd_sample->add_option("--run-id", sample.run_id, "Output subdirectory (default: timestamp)");

  ExperimentArgs exp;
  auto* cmd_exp = app.add_subcommand("experiment", "Run a Monte-Carlo experiment");
  cmd_exp->add_option("kind", exp.kind)
      ->required()
      ->check(CLI::IsMember({"ratio-vs-n", "avg-gamma-vs-n", "logistic-ratios", "cv-demo"}));
  cmd_exp->add_option("--sizes", exp.sizes, "Comma-separated sample sizes");
  cmd_exp->add_option("-m", exp.m, "Datasets per point");
  cmd_exp->add_option("--m-control", exp.m_control, "Non-Simpson datasets per point (logistic-ratios)");
  cmd_exp->add_option("--scheme", exp.schemes)
      ->check(CLI::IsMember({"bernoulli", "dirichlet", "dirichlet_rounded", "uniform", "uniform_composition"}));
  cmd_exp->add_flag("--simpson", exp.simpson, "Add Simpson-conditioned rows");
  cmd_exp->add_flag("--simpson-only", exp.simpson_only, "Only Simpson-conditioned rows");
  cmd_exp->add_flag("--intercept", exp.intercept);
  cmd_exp->add_flag("--numeric", exp.numeric, "Grid scan instead of the exact criterion");
  cmd_exp->add_option("--weights", exp.weights)->check(CLI::IsMember({"uniform", "balanced"}));
  cmd_exp->add_option("--grid", exp.grid);
  cmd_exp->add_option("--cv-grid", exp.cv_grid);
  cmd_exp->add_option("--folds", exp.folds)->check(CLI::Range(2, 1000));
  cmd_exp->add_option("--strata", exp.strata)->check(CLI::IsMember({"x1", "x2"}));
  cmd_exp->add_option("--var", exp.variable)->check(CLI::Range(1, 2));
  cmd_exp->add_option("--data", exp.data, "Table CSV (cv-demo, or a single dataset for logistic-ratios)");
  cmd_exp->add_option("--run-id", exp.run_id, "Output subdirectory (default: timestamp)");
  cmd_exp->add_option("--max-rejects", exp.max_rejects);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitParse;
  }

  try {
    if (*cmd_analyze) return run_analyze(analyze, g);
    if (*cmd_path) return run_path(path, g);
    if (*cmd_sample) return run_sample(sample, g);
    if (*cmd_exp) return run_experiment_cmd(exp, g);
  } catch (const pathreg::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitParse;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitDegenerate;
  }
  return kExitOk;
}
