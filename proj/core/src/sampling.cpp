#include "pathreg/sampling.hpp"

#include "pathreg/error.hpp"
#include "pathreg/parallel.hpp"
#include "pathreg/random.hpp"

#include <algorithm>
#include <cmath>

namespace pathreg {

std::string_view to_string(Scheme scheme) {
  switch (scheme) {
    case Scheme::bernoulli: return "bernoulli";
    case Scheme::dirichlet_rounded: return "dirichlet_rounded";
    case Scheme::uniform_composition: return "uniform_composition";
  }
  return "unknown";
}

Scheme parse_scheme(std::string_view name) {
  if (name == "bernoulli") return Scheme::bernoulli;
  if (name == "dirichlet" || name == "dirichlet_rounded") return Scheme::dirichlet_rounded;
  if (name == "uniform" || name == "uniform_composition") return Scheme::uniform_composition;
  throw Error(ErrorCode::InvalidArgument, "unknown sampling scheme '" + std::string(name) + "'");
}

namespace {

void require_positive(std::uint64_t n) {
  if (n == 0) throw Error(ErrorCode::InvalidArgument, "sample size must be at least 1");
}

}  // namespace

Dataset sample_bernoulli_dataset(std::uint64_t n, std::uint64_t seed, std::uint64_t stream) {
  require_positive(n);
  CounterRng rng(seed, stream);
  std::vector<std::uint8_t> y(n), x(2 * n);
  for (std::uint64_t r = 0; r < n; ++r) {
    const std::uint64_t bits = rng.next();
    y[r] = static_cast<std::uint8_t>(bits >> 63);
    x[2 * r] = static_cast<std::uint8_t>((bits >> 62) & 1);
    x[2 * r + 1] = static_cast<std::uint8_t>((bits >> 61) & 1);
  }
  return Dataset(std::move(y), std::move(x), 2);
}

ContingencyTable222 sample_uniform_table(std::uint64_t n, std::uint64_t seed, std::uint64_t stream) {
  require_positive(n);
  CounterRng rng(seed, stream);
  // Floyd's algorithm: 7 distinct bar positions among n + 7 slots.
  constexpr std::uint64_t kBars = 7;
  const std::uint64_t slots = n + kBars;
  std::array<std::uint64_t, kBars> bars{};
  std::size_t count = 0;
  for (std::uint64_t j = slots - kBars; j < slots; ++j) {
    const std::uint64_t t = rng.uniform_int(j + 1);
    const bool seen = std::find(bars.begin(), bars.begin() + count, t) != bars.begin() + count;
    bars[count++] = seen ? j : t;
  }
  std::sort(bars.begin(), bars.end());
  std::array<ContingencyTable222::Count, 8> cells{};
  std::uint64_t prev = 0;
  for (std::size_t i = 0; i < kBars; ++i) {
    cells[i] = bars[i] - prev;
    prev = bars[i] + 1;
  }
  cells[7] = slots - prev;
  return ContingencyTable222(cells);
}

DirichletDraw sample_dirichlet_draw(std::uint64_t n, std::uint64_t seed, std::uint64_t stream,
                                    std::uint64_t max_rejects) {
  require_positive(n);
  CounterRng rng(seed, stream);
  DirichletDraw draw;
  const double scale = static_cast<double>(n);
  while (true) {
    ++draw.attempts;
    double total = 0.0;
    for (auto& v : draw.p) {
      v = rng.exponential();
      total += v;
    }
    std::array<ContingencyTable222::Count, 8> cells{};
    std::uint64_t sum = 0;
    for (std::size_t i = 0; i < 8; ++i) {
      draw.p[i] /= total;
      // nearbyint follows the default rounding mode: half to even
      cells[i] = static_cast<ContingencyTable222::Count>(std::nearbyint(draw.p[i] * scale));
      sum += cells[i];
    }
    if (sum == n) {
      draw.table = ContingencyTable222(cells);
      return draw;
    }
    if (draw.attempts > max_rejects) {
      throw Error(ErrorCode::RejectionBudgetExceeded,
                  "rounded Dirichlet draws missed N = " + std::to_string(n) + " " +
                      std::to_string(draw.attempts) + " times");
    }
  }
}

ContingencyTable222 sample_dirichlet_table(std::uint64_t n, std::uint64_t seed, std::uint64_t stream,
                                           std::uint64_t max_rejects) {
  return sample_dirichlet_draw(n, seed, stream, max_rejects).table;
}

ContingencyTable222 sample_table(const SamplerConfig& config, std::uint64_t stream) {
  switch (config.scheme) {
    case Scheme::bernoulli:
      return decode(sample_bernoulli_dataset(config.n, config.seed, stream));
    case Scheme::dirichlet_rounded:
      return sample_dirichlet_table(config.n, config.seed, stream, config.max_rejects);
    case Scheme::uniform_composition:
      return sample_uniform_table(config.n, config.seed, stream);
  }
  throw Error(ErrorCode::InvalidArgument, "unknown sampling scheme");
}

TableBatch sample_tables_where(std::uint64_t m, const SamplerConfig& config,
                               const std::function<bool(const ContingencyTable222&)>& keep,
                               unsigned threads) {
  if (m == 0) throw Error(ErrorCode::InvalidArgument, "batch size must be at least 1");
  if (config.max_rejects == 0) throw Error(ErrorCode::InvalidArgument, "max_rejects must be at least 1");
  TableBatch batch;
  std::uint64_t rejected = 0;
  // Candidates are examined in blocks; inside a block they run in parallel,
  // but only the stream-ordered prefix up to the M-th keeper counts.
  const std::size_t block = std::max<std::size_t>(256, 64 * std::max(1u, threads));
  std::vector<ContingencyTable222> tables(block);
  std::vector<char> kept(block);
  for (std::uint64_t base = 0;; base += block) {
    parallel_for(block, threads, [&](std::size_t i) {
      tables[i] = sample_table(config, base + i);
      kept[i] = keep(tables[i]) ? 1 : 0;
    });
    for (std::size_t i = 0; i < block; ++i) {
      ++batch.candidates;
      if (kept[i]) {
        batch.tables.push_back(tables[i]);
        batch.streams.push_back(base + i);
        if (batch.tables.size() == m) return batch;
      } else if (++rejected > config.max_rejects) {
        throw Error(ErrorCode::RejectionBudgetExceeded,
                    "rejection sampling kept " + std::to_string(batch.tables.size()) + " of " +
                        std::to_string(m) + " tables within " + std::to_string(config.max_rejects) +
                        " rejections");
      }
    }
  }
}

TableBatch sample_simpson_tables(std::uint64_t m, const SamplerConfig& config, Strata strata,
                                 unsigned threads) {
  return sample_tables_where(
      m, config, [strata](const ContingencyTable222& t) { return is_simpson(t, strata) != SimpsonVerdict::none; },
      threads);
}

DatasetBatch sample_simpson_datasets(std::uint64_t m, const SamplerConfig& config, Strata strata,
                                     unsigned threads) {
  auto tables = sample_simpson_tables(m, config, strata, threads);
  DatasetBatch out;
  out.acceptance_rate = tables.acceptance_rate();
  out.datasets.reserve(tables.tables.size());
  for (const auto& t : tables.tables) out.datasets.push_back(encode(t));
  return out;
}

}  // namespace pathreg
