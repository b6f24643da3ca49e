#pragma once

#include "pathreg/tables.hpp"

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string_view>
#include <vector>

namespace pathreg {

enum class Scheme { bernoulli, dirichlet_rounded, uniform_composition };

std::string_view to_string(Scheme scheme);
/// Accepts the names above plus "dirichlet" and "uniform". Throws Error(InvalidArgument).
Scheme parse_scheme(std::string_view name);

struct SamplerConfig {
  Scheme scheme = Scheme::uniform_composition;
  std::uint64_t n = 1000;
  std::uint64_t seed = 0;
  std::uint64_t max_rejects = 10'000'000;
};

// Every sampler draws from stream `stream` of `seed`, so candidate j of a
// batch can be produced independently of candidates 0..j-1.

/// N rows of independent fair bits (y, x1, x2).
Dataset sample_bernoulli_dataset(std::uint64_t n, std::uint64_t seed, std::uint64_t stream = 0);

/// Uniform over the weak compositions of N into 8 parts (stars and bars).
ContingencyTable222 sample_uniform_table(std::uint64_t n, std::uint64_t seed,
                                         std::uint64_t stream = 0);

struct DirichletDraw {
  std::array<double, 8> p{};
  ContingencyTable222 table;
  std::uint64_t attempts = 0;
};

/// Dirichlet(1, ..., 1) draw scaled by N and rounded half to even, redrawn
/// until the cells sum to N. Throws Error(RejectionBudgetExceeded).
DirichletDraw sample_dirichlet_draw(std::uint64_t n, std::uint64_t seed, std::uint64_t stream = 0,
                                    std::uint64_t max_rejects = 10'000'000);
ContingencyTable222 sample_dirichlet_table(std::uint64_t n, std::uint64_t seed,
                                           std::uint64_t stream = 0,
                                           std::uint64_t max_rejects = 10'000'000);

/// One table from any scheme; bernoulli datasets are tabulated.
ContingencyTable222 sample_table(const SamplerConfig& config, std::uint64_t stream);

struct TableBatch {
  std::vector<ContingencyTable222> tables;
  /// Candidate streams used for each kept table.
  std::vector<std::uint64_t> streams;
  std::uint64_t candidates = 0;
  double acceptance_rate() const {
    return candidates == 0 ? 0.0 : static_cast<double>(tables.size()) / static_cast<double>(candidates);
  }
};

/// Keeps the first M candidates (in stream order) satisfying `keep`.
/// Throws Error(RejectionBudgetExceeded) after config.max_rejects rejections.
TableBatch sample_tables_where(std::uint64_t m, const SamplerConfig& config,
                               const std::function<bool(const ContingencyTable222&)>& keep,
                               unsigned threads = 1);

/// Tables with a strict Simpson verdict for the given strata.
TableBatch sample_simpson_tables(std::uint64_t m, const SamplerConfig& config,
                                 Strata strata = Strata::x1, unsigned threads = 1);

struct DatasetBatch {
  std::vector<Dataset> datasets;
  double acceptance_rate = 0.0;
};

DatasetBatch sample_simpson_datasets(std::uint64_t m, const SamplerConfig& config,
                                     Strata strata = Strata::x1, unsigned threads = 1);

}  // namespace pathreg
