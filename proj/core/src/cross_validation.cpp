#include "pathreg/logistic.hpp"

#include "pathreg/error.hpp"
#include "pathreg/random.hpp"

#include <algorithm>

namespace pathreg {

std::vector<std::size_t> stratified_folds(const Dataset& dataset, std::size_t k, std::uint64_t seed) {
  if (k < 2) throw Error(ErrorCode::InvalidArgument, "need at least two folds");
  if (dataset.size() < 2 * k) {
    throw Error(ErrorCode::FoldDegenerate, "need at least 2k rows for k-fold validation");
  }
  std::vector<std::size_t> fold(dataset.size());
  for (std::uint8_t cls = 0; cls < 2; ++cls) {
    std::vector<std::size_t> rows;
    for (std::size_t r = 0; r < dataset.size(); ++r) {
      if (dataset.y_bit(r) == cls) rows.push_back(r);
    }
    if (rows.size() < k) {
      throw Error(ErrorCode::FoldDegenerate, "class " + std::to_string(cls) + " has " +
                                                 std::to_string(rows.size()) + " rows, fewer than " +
                                                 std::to_string(k) + " folds");
    }
    CounterRng rng(seed, cls);
    for (std::size_t i = rows.size() - 1; i > 0; --i) {
      std::swap(rows[i], rows[rng.uniform_int(i + 1)]);
    }
    for (std::size_t i = 0; i < rows.size(); ++i) fold[rows[i]] = i % k;
  }
  return fold;
}

CvResult fit_logistic_cv(const Dataset& dataset, const RegGrid& grid, std::size_t k,
                         WeightScheme weights, std::uint64_t seed, const LogisticOptions& options) {
  const auto w = sample_weights(dataset, weights);
  CvResult result;
  result.grid.assign(grid.begin(), grid.end());
  result.fold_of_row = stratified_folds(dataset, k, seed);
  result.fold_accuracy.assign(k, std::vector<double>(grid.size(), 0.0));

  for (std::size_t f = 0; f < k; ++f) {
    std::vector<std::size_t> train, valid;
    for (std::size_t r = 0; r < dataset.size(); ++r) {
      (result.fold_of_row[r] == f ? valid : train).push_back(r);
    }
    const LogisticProblem problem(dataset, w, train);
    std::optional<Eigen::VectorXd> start;
    for (std::size_t g = 0; g < grid.size(); ++g) {
      auto model = fit_logistic(problem, grid[g], start, options);
      model.encoding = dataset.encoding();
      start = model.theta();
      std::size_t correct = 0;
      for (std::size_t r : valid) {
        const int predicted = model.linear_predictor(dataset.x_row(r)) > 0.0 ? 1 : 0;
        correct += predicted == dataset.y_bit(r);
      }
      result.fold_accuracy[f][g] = static_cast<double>(correct) / static_cast<double>(valid.size());
    }
  }

  result.mean_accuracy.assign(grid.size(), 0.0);
  for (std::size_t g = 0; g < grid.size(); ++g) {
    for (std::size_t f = 0; f < k; ++f) result.mean_accuracy[g] += result.fold_accuracy[f][g];
    result.mean_accuracy[g] /= static_cast<double>(k);
  }
  const double best = *std::max_element(result.mean_accuracy.begin(), result.mean_accuracy.end());
  for (std::size_t g = 0; g < grid.size(); ++g) {
    if (result.mean_accuracy[g] >= best - 1e-12) result.chosen_index = g;
  }
  result.chosen_c = grid[result.chosen_index];

  const LogisticProblem full(dataset, w);
  result.model = fit_logistic(full, result.chosen_c, std::nullopt, options);
  result.model.encoding = dataset.encoding();
  return result;
}

}  // namespace pathreg
