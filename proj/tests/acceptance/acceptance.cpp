// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// non-zero if any criterion fails.

#include "oracles.hpp"
#include "pathreg/experiments.hpp"
#include "pathreg/logistic.hpp"
#include "pathreg/ridge.hpp"
#include "pathreg/sampling.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace pathreg;
using testing::q;

struct Check {
  std::vector<std::string> failures;
  void require(bool ok, const std::string& what) {
    if (!ok) failures.push_back(what);
  }
};

std::string fmt(const char* pattern, double a, double b = 0, double c = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, pattern, a, b, c);
  return buf;
}

Dataset fixture() {
  return encode(read_table_csv(std::string(PATHREG_FIXTURE_DIR) + "/pathological-default.csv"));
}

// Uniform weak composition of n into 8 parts, drawn with the standard library.
ContingencyTable222 std_uniform_table(std::mt19937_64& rng, std::uint64_t n) {
  std::vector<std::uint64_t> bars;
  std::uniform_int_distribution<std::uint64_t> pos(0, n + 6);
  while (bars.size() < 7) {
    const auto b = pos(rng);
    if (std::find(bars.begin(), bars.end(), b) == bars.end()) bars.push_back(b);
  }
  std::sort(bars.begin(), bars.end());
  std::array<std::uint64_t, 8> cells{};
  std::uint64_t prev = 0;
  for (std::size_t i = 0; i < 7; ++i) {
    cells[i] = bars[i] - prev - (i ? 1 : 0);
    prev = bars[i];
  }
  cells[7] = n + 6 - bars[6];
  return ContingencyTable222(cells);
}

// Two-feature path written out from cell counts, independent of the library's
// sufficient statistics.
struct ClosedFormPath {
  long double s11, s22, s12, sy1, sy2;

  explicit ClosedFormPath(const ContingencyTable222& t) {
    s11 = s22 = s12 = sy1 = sy2 = 0;
    for (int y = 0; y < 2; ++y)
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
          const long double d = static_cast<long double>(t.at(y, a, b));
          s11 += d * a;
          s22 += d * b;
          s12 += d * a * b;
          sy1 += d * a * y;
          sy2 += d * b * y;
        }
  }
  long double beta(int k, long double c) const {
    const long double den = (s11 + c) * (s22 + c) - s12 * s12;
    return k == 0 ? ((s22 + c) * sy1 - s12 * sy2) / den : ((s11 + c) * sy2 - s12 * sy1) / den;
  }
  // Sign of the c -> 0 limit; the collinear case keeps the sign of sy_k.
  int limit_sign(int k) const {
    const long double det = s11 * s22 - s12 * s12;
    const long double num = k == 0 ? s22 * sy1 - s12 * sy2 : s11 * sy2 - s12 * sy1;
    if (det == 0) {
      const long double a = k == 0 ? sy1 : sy2;
      return (a > 0) - (a < 0);
    }
    return (num > 0) - (num < 0);
  }
};

// Grid scan of the closed form on [1e-10, 1e14] with log-space bisection.
// Returns the left ends of runs where the sign opposes the limit.
std::vector<std::pair<double, double>> closed_form_regime(const ClosedFormPath& path, int k) {
  const int s0 = path.limit_sign(k);
  std::vector<std::pair<double, double>> runs;
  if (s0 == 0) return runs;
  auto reversed = [&](long double c) {
    const long double b = path.beta(k, c);
    return (b > 0 && s0 < 0) || (b < 0 && s0 > 0);
  };
  auto refine = [&](long double lo, long double hi, bool want_lo_reversed) {
    for (int it = 0; it < 200 && hi / lo - 1 > 1e-15L; ++it) {
      const long double mid = std::sqrt(lo * hi);
      (reversed(mid) == want_lo_reversed ? lo : hi) = mid;
    }
    return static_cast<double>(std::sqrt(lo * hi));
  };
  const int points = 4000;
  long double prev_c = 1e-10L;
  bool prev = reversed(prev_c);
  double start = prev ? 0.0 : -1.0;
  for (int i = 1; i < points; ++i) {
    const long double c = std::pow(10.0L, -10.0L + 24.0L * i / (points - 1));
    const bool cur = reversed(c);
    if (cur && !prev) start = refine(prev_c, c, false);
    if (!cur && prev) runs.push_back({start, refine(prev_c, c, true)});
    prev = cur;
    prev_c = c;
  }
  if (prev) runs.push_back({start, INFINITY});
  return runs;
}

void criterion1(Check& ck) {
  const auto loan = ContingencyTable222::loan_example();
  const auto s = RidgeSummary::from(loan, false);
  const auto b5 = ridge_beta_exact(s, Rational(5));
  ck.require(b5[0] == q(62, 2679) && b5[1] == q(887, 2679), "loan beta(5) != (62/2679, 887/2679)");
  ck.require(std::round(to_double(b5[0]) * 1000) == 23 && std::round(to_double(b5[1]) * 1000) == 331,
             "loan beta(5) does not round to (0.023, 0.331)");
  const auto b0 = ridge_beta_exact(s, Rational(0));
  ck.require(b0[0] == q(-3, 2079) && b0[1] == q(777, 2079), "loan MLS != (-3/2079, 777/2079)");
  ck.require(std::round(to_double(b0[0]) * 1000) == -1 && std::round(to_double(b0[1]) * 1000) == 374,
             "loan MLS does not round to (-0.001, 0.374)");
  const double t2 = trend_indicator(fit_ridge(encode(loan), 5.0), 2);
  ck.require(std::abs(t2 - to_double(q(-62, 2679))) < 1e-14, "T2(5) != -62/2679");
  ck.require(std::round(t2 * 10000) == -231, "T2(5) is not -2.31%");
  const auto r = pathological_regime_exact(encode(loan));
  ck.require(r.size() == 2 && r[1].gamma && *r[1].gamma == q(3, 13) && r[1].regime.intervals().size() == 1 &&
                 r[1].regime.intervals()[0].unbounded() && r[1].regime.intervals()[0].lo_exact == q(3, 13),
             "loan regime for variable 2 is not (3/13, inf)");

  const auto death = ContingencyTable222::death_penalty_example();
  ck.require(is_simpson(death) != SimpsonVerdict::none, "death-penalty table not Simpson");
  const auto rd = pathological_regime_exact(encode(death));
  ck.require(rd[1].gamma && *rd[1].gamma == q(755, 6) && rd[1].regime.intervals()[0].unbounded(),
             "death-penalty regime for variable 2 is not (755/6, inf)");
}

void criterion2(Check& ck) {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<std::uint64_t> n_dist(1, 500);
  const auto grid = RegGrid::ridge_default();
  int pathological = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const auto t = std_uniform_table(rng, n_dist(rng));
    const auto exact = pathological_regime_exact(encode(t));
    const auto numeric = pathological_regime_numeric(encode(t), grid);
    const ClosedFormPath path(t);
    for (const auto& e : exact) {
      const int k = static_cast<int>(e.coefficient) - 1;
      const auto oracle = closed_form_regime(path, k);
      const auto& n = numeric[e.variable - 1];
      const std::string tag = "table " + std::to_string(trial) + " variable " + std::to_string(e.variable);
      if (e.regime.empty()) {
        ck.require(oracle.empty(), tag + ": closed-form scan finds a regime the criterion misses");
        ck.require(n.regime.empty(), tag + ": library scan finds a regime the criterion misses");
        continue;
      }
      ++pathological;
      const double g = to_double(*e.gamma);
      const bool one = oracle.size() == 1 && std::isinf(oracle[0].second);
      ck.require(one, tag + ": closed-form scan disagrees on the shape of the regime");
      if (one) ck.require(std::abs(oracle[0].first - g) <= 1e-8 * g, tag + ": gamma differs beyond 1e-8");
      const bool lib = n.regime.intervals().size() == 1 && n.regime.intervals()[0].unbounded();
      ck.require(lib && std::abs(n.regime.intervals()[0].lo - g) <= 1e-8 * g,
                 tag + ": library scan disagrees with the criterion");
    }
  }
  ck.require(pathological > 50, "too few pathological tables to be meaningful");
}

void criterion3(Check& ck) {
  std::mt19937_64 rng(77);
  std::uniform_int_distribution<std::uint64_t> n_dist(5, 500);
  int found = 0;
  const int points = 10000;
  std::vector<long double> cs(points);
  for (int i = 0; i < points; ++i) cs[i] = std::pow(10.0L, -8.0L + 20.0L * i / (points - 1));
  for (int trial = 0; trial < 200000 && found < 500; ++trial) {
    const auto t = std_uniform_table(rng, n_dist(rng));
    for (const auto& r : pathological_regime_exact(encode(t))) {
      if (!r.gamma || found >= 500) continue;
      ++found;
      const int k = static_cast<int>(r.coefficient) - 1;
      const ClosedFormPath path(t);
      std::vector<long double> b(points);
      for (int i = 0; i < points; ++i) b[i] = path.beta(k, cs[i]);
      int zeros = 0, zero_at = -1;
      for (int i = 1; i < points; ++i) {
        if ((b[i - 1] > 0) != (b[i] > 0)) {
          ++zeros;
          zero_at = i;
        }
      }
      int crit = 0, crit_at = -1, last = 0;
      for (int i = 1; i < points; ++i) {
        const long double d = b[i] - b[i - 1];
        const int s = (d > 0) - (d < 0);
        if (s == 0) continue;
        if (last != 0 && s != last) {
          ++crit;
          crit_at = i;
        }
        last = s;
      }
      const std::string tag = "table " + std::to_string(trial);
      ck.require(zeros == 1, tag + ": " + std::to_string(zeros) + " sign changes");
      ck.require(crit == 1, tag + ": " + std::to_string(crit) + " critical points");
      ck.require(crit_at > zero_at, tag + ": critical point not right of the zero");
    }
  }
  ck.require(found == 500, "found only " + std::to_string(found) + " tables satisfying the inequality");
}

ExperimentSpec ridge_spec(bool simpson) {
  ExperimentSpec spec;
  spec.sizes = {1000};
  spec.m = 2000;
  spec.schemes = {Scheme::uniform_composition};
  spec.unconditioned = !simpson;
  spec.simpson = simpson;
  spec.seed = 20240601;
  return spec;
}

void criterion4(Check& ck, std::string& note) {
  const auto all = run_ridge_ratio_experiment(ridge_spec(false));
  const auto simpson = run_ridge_ratio_experiment(ridge_spec(true));
  const double a = all.at(0).ratio.estimate, s = simpson.at(0).ratio.estimate;
  note = fmt("uniform %.4f, Simpson %.4f", a, s);
  ck.require(a >= 0.18 && a <= 0.24, fmt("uniform-composition ratio %.4f outside [0.18, 0.24]", a));
  ck.require(s >= 0.28 && s <= 0.36, fmt("Simpson-conditioned ratio %.4f outside [0.28, 0.36]", s));
}

void criterion5(Check& ck, std::string& note) {
  SamplerConfig cfg{Scheme::dirichlet_rounded, 1000, 20240601};
  const auto batch = sample_simpson_tables(200, cfg);
  const double rate = batch.acceptance_rate();
  note = fmt("rate %.4f over %.0f candidates", rate, static_cast<double>(batch.candidates));
  ck.require(batch.tables.size() == 200, "did not collect 200 tables");
  ck.require(rate >= 0.012 && rate <= 0.022, fmt("acceptance rate %.4f outside [0.012, 0.022]", rate));
  ck.require(rate < 1.0 / 12.0, "acceptance rate above 1/12");
}

void criterion6(Check& ck, std::string& note) {
  ExperimentSpec spec;
  spec.kind = ExperimentKind::logistic_ratios;
  spec.sizes = {200};
  spec.m = 100;
  spec.m_control = 200;
  spec.seed = 20240601;
  const auto rows = run_logistic_ratio_experiment(spec);
  double simpson = -1, control = -1;
  for (const auto& r : rows) {
    if (r.simpson) {
      simpson = r.ratio.estimate;
      ck.require(r.ratio.total == 100, "Simpson group size is not 100");
    } else {
      control = r.ratio.estimate;
      ck.require(r.ratio.total == 200, "non-Simpson group size is not 200");
    }
  }
  note = fmt("Simpson %.4f, non-Simpson %.4f", simpson, control);
  ck.require(simpson == 1.0, fmt("Simpson ratio %.4f != 1", simpson));
  ck.require(control >= 0.02 && control <= 0.12, fmt("non-Simpson ratio %.4f outside [0.02, 0.12]", control));
}

void criterion7(Check& ck) {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<std::uint64_t> cell(1, 60);
  std::uniform_real_distribution<double> log_c(-6, 2);
  std::normal_distribution<double> normal(0, 2);
  for (int trial = 0; trial < 100; ++trial) {
    std::array<std::uint64_t, 8> cells{};
    for (auto& v : cells) v = cell(rng);
    const Dataset ds = encode(ContingencyTable222(cells));
    const auto scheme = trial % 2 ? WeightScheme::balanced : WeightScheme::uniform;
    const auto w = sample_weights(ds, scheme);
    const LogisticProblem problem(ds, w);
    const double c = std::pow(10.0, log_c(rng));
    const std::string tag = "instance " + std::to_string(trial);

    Eigen::VectorXd theta(3);
    for (int i = 0; i < 3; ++i) theta(i) = normal(rng);
    const Eigen::VectorXd g = problem.gradient(theta, c);
    Eigen::VectorXd fd(3);
    for (int i = 0; i < 3; ++i) {
      const double h = 1e-5 * std::max(1.0, std::abs(theta(i)));
      Eigen::VectorXd tp = theta, tm = theta;
      tp(i) += h;
      tm(i) -= h;
      fd(i) = (problem.objective(tp, c) - problem.objective(tm, c)) / (2 * h);
    }
    ck.require((g - fd).norm() <= 1e-5 * g.norm(), tag + ": gradient differs from central differences");

    const auto a = fit_logistic(problem, c);
    const auto b = fit_logistic(problem, c, theta);
    ck.require(a.converged && b.converged, tag + ": solver did not converge");
    ck.require(problem.gradient(a.theta(), c).norm() < 1e-8, tag + ": gradient at optimum >= 1e-8");
    ck.require(problem.gradient(b.theta(), c).norm() < 1e-8, tag + ": gradient at optimum >= 1e-8");
    ck.require((a.theta() - b.theta()).cwiseAbs().maxCoeff() < 1e-6, tag + ": initializations disagree");
  }
}

void criterion8(Check& ck, std::string& note) {
  ExperimentSpec spec;
  spec.kind = ExperimentKind::cv_demo;
  spec.seed = 20240601;
  const auto report = run_cv_demo(spec, fixture());
  ck.require(report.arms.size() == 2, "expected uniform and balanced arms");
  if (report.arms.size() != 2) return;
  const auto& u = report.arms[0];
  const auto& bal = report.arms[1];
  ck.require(u.weights == WeightScheme::uniform && bal.weights == WeightScheme::balanced, "arm order");
  for (int j = 0; j < 2; ++j) {
    ck.require(report.baseline[j] < 0, "baseline trend not negative");
    ck.require(u.trends[j] > 0 && bal.trends[j] > 0, "trend at chosen c not positive");
  }
  const double expected_base[2] = {-0.196, -0.234};
  const double expected_uniform[2] = {0.003, 0.003};
  const double expected_balanced[2] = {0.132, 0.117};
  for (int j = 0; j < 2; ++j) {
    ck.require(std::abs(report.baseline[j] - expected_base[j]) <= 0.05, fmt("baseline %.4f vs %.3f", report.baseline[j], expected_base[j]));
    ck.require(std::abs(u.trends[j] - expected_uniform[j]) <= 0.05, fmt("uniform trend %.4f vs %.3f", u.trends[j], expected_uniform[j]));
    ck.require(std::abs(bal.trends[j] - expected_balanced[j]) <= 0.05,
               fmt("balanced trend %.4f vs %.3f", bal.trends[j], expected_balanced[j]));
  }
  note = fmt("baseline %.3f/%.3f", report.baseline[0], report.baseline[1]) +
         fmt(", uniform %.4f/%.4f", u.trends[0], u.trends[1]) +
         fmt(", balanced %.4f/%.4f", bal.trends[0], bal.trends[1]);
}

void criterion9(Check& ck, std::string& note) {
  const auto grid = RegGrid::ridge_default();
  const Dataset loan = encode(ContingencyTable222::loan_example());
  const auto exact = pathological_regime_exact(loan)[1];
  const auto wide = pathological_regime_numeric(loan.with_zero_columns(3), grid);
  // Variable 2 of the two-feature design reads coefficient 1; with p > 2
  // variables and coefficients coincide, so coefficient 1 is variable 1.
  const auto& r = wide.at(0);
  const double g = to_double(*exact.gamma);
  ck.require(r.coefficient == exact.coefficient, "zero columns moved the coefficient");
  ck.require(r.regime.intervals().size() == 1 && r.regime.intervals()[0].unbounded() &&
                 std::abs(r.regime.intervals()[0].lo - g) <= 1e-8 * g,
             "zero-column loan regime differs from (3/13, inf)");

  const auto bounded = pathological_regime_numeric(testing::bounded_regime_instance(), grid);
  bool any = false;
  for (const auto& b : bounded) {
    if (b.regime.bounded()) {
      any = true;
      const auto& iv = b.regime.intervals()[0];
      note = fmt("bounded regime (%.4g, %.4g)", iv.lo, iv.hi) + " for variable " + std::to_string(b.variable);
    }
  }
  ck.require(any, "no bounded regime in the five-feature instance");
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void criterion10(Check& ck) {
  const auto root = std::filesystem::temp_directory_path() / "pathreg_acceptance_determinism";
  std::filesystem::remove_all(root);
  const Dataset data = fixture();

  std::vector<ExperimentSpec> specs(4);
  specs[0].kind = ExperimentKind::ratio_vs_n;
  specs[0].sizes = {100, 400};
  specs[0].m = 300;
  specs[0].simpson = true;
  specs[1].kind = ExperimentKind::avg_gamma_vs_n;
  specs[1].sizes = {50, 100};
  specs[1].m = 800;
  specs[2].kind = ExperimentKind::logistic_ratios;
  specs[2].sizes = {80};
  specs[2].m = 8;
  specs[3].kind = ExperimentKind::cv_demo;
  for (auto& s : specs) s.seed = 31337;

  for (const auto& spec : specs) {
    const Dataset* ds = spec.kind == ExperimentKind::cv_demo ? &data : nullptr;
    const auto a = write_experiment(run_experiment(spec, ds), root, "first");
    auto again = spec;
    again.threads = 2;
    const auto b = write_experiment(run_experiment(again, ds), root, "second");
    const std::string name(to_string(spec.kind));
    ck.require(slurp(a / "results.csv") == slurp(b / "results.csv"), name + ": results.csv differs");
    ck.require(!slurp(a / "results.csv").empty(), name + ": results.csv empty");
  }
  std::filesystem::remove_all(root);
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double limit_s;
    std::function<void(Check&, std::string&)> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "exact worked examples", 1.0, [](Check& c, std::string&) { criterion1(c); }},
      {2, "exact criterion vs closed-form grid scan", 30.0, [](Check& c, std::string&) { criterion2(c); }},
      {3, "single zero and single critical point", 60.0, [](Check& c, std::string&) { criterion3(c); }},
      {4, "ridge Monte-Carlo bands", 300.0, criterion4},
      {5, "Simpson acceptance rate", 180.0, criterion5},
      {6, "logistic pathological ratios", 600.0, criterion6},
      {7, "logistic solver correctness", 30.0, [](Check& c, std::string&) { criterion7(c); }},
      {8, "cross-validation reversal", 120.0, criterion8},
      {9, "five-feature regimes", 60.0, criterion9},
      {10, "experiment determinism", 600.0, [](Check& c, std::string&) { criterion10(c); }},
  };

  int failed = 0;
  for (const auto& crit : criteria) {
    Check ck;
    std::string note;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      crit.run(ck, note);
    } catch (const std::exception& e) {
      ck.failures.push_back(std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (secs > crit.limit_s) ck.failures.push_back(fmt("runtime %.1f s over %.0f s", secs, crit.limit_s));
    const bool ok = ck.failures.empty();
    failed += !ok;
    std::printf("%s %d %s (%.2f s)%s%s\n", ok ? "PASS" : "FAIL", crit.id, crit.name, secs,
                note.empty() ? "" : ": ", note.c_str());
    for (std::size_t i = 0; i < ck.failures.size() && i < 5; ++i) std::printf("  %s\n", ck.failures[i].c_str());
    if (ck.failures.size() > 5) std::printf("  ... %zu more\n", ck.failures.size() - 5);
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
