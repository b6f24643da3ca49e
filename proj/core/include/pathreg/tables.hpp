#pragma once

#include "pathreg/rational.hpp"

#include <Eigen/Dense>

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace pathreg {

/// Optional axis names carried through to reports.
struct TableLabels {
  std::string y;
  std::string x1;
  std::string x2;

  bool empty() const { return y.empty() && x1.empty() && x2.empty(); }
  bool operator==(const TableLabels&) const = default;
};

/// Counts d_ijk for (Y, X1, X2) = (i, j, k) in {0,1}^3.
class ContingencyTable222 {
 public:
  using Count = std::uint64_t;

  ContingencyTable222() = default;
  /// Cells in canonical order d000, d001, d010, d011, d100, d101, d110, d111.
  explicit ContingencyTable222(const std::array<Count, 8>& cells, TableLabels labels = {});

  /// Loan default example: X1 = 1 male, X2 = 1 occupation group B, Y = 1 default.
  static ContingencyTable222 loan_example();
  /// Florida death-penalty data: X1 = 1 black victim, X2 = 1 black defendant, Y = 1 death penalty.
  static ContingencyTable222 death_penalty_example();

  Count at(int y, int x1, int x2) const { return cells_[index(y, x1, x2)]; }
  void set(int y, int x1, int x2, Count value) { cells_[index(y, x1, x2)] = value; }

  /// Margin with -1 standing for "+" (summation over that axis).
  Count margin(int y, int x1, int x2) const;
  Count sample_size() const { return margin(-1, -1, -1); }

  const std::array<Count, 8>& cells() const { return cells_; }
  const TableLabels& labels() const { return labels_; }
  void set_labels(TableLabels labels) { labels_ = std::move(labels); }

  /// Same table with the Y labels 0 <-> 1 exchanged.
  ContingencyTable222 swap_response() const;
  /// Same table with the roles of X1 and X2 exchanged.
  ContingencyTable222 swap_features() const;
  ContingencyTable222 scaled(Count factor) const;

  /// Counts only; labels are presentation.
  bool operator==(const ContingencyTable222& other) const { return cells_ == other.cells_; }

  static constexpr std::size_t index(int y, int x1, int x2) {
    return static_cast<std::size_t>(4 * y + 2 * x1 + x2);
  }

 private:
  std::array<Count, 8> cells_{};
  TableLabels labels_;
};

/// Joint distribution p_ijk of three binary variables.
class ProbabilityTable {
 public:
  explicit ProbabilityTable(const std::array<double, 8>& p);
  static ProbabilityTable from_counts(const ContingencyTable222& table);

  double at(int y, int x1, int x2) const { return p_[ContingencyTable222::index(y, x1, x2)]; }
  const std::array<double, 8>& values() const { return p_; }

 private:
  std::array<double, 8> p_{};
};

/// The two values binary entries are mapped to; (0, 1) unless re-encoded.
struct Encoding {
  Rational low{0};
  Rational high{1};

  Rational value(std::uint8_t bit) const { return bit ? high : low; }
  bool is_standard() const { return low == 0 && high == 1; }
  bool operator==(const Encoding&) const = default;
};

/// Response vector Y and N x p design matrix X over a binary alphabet.
/// Entries are stored as bits; the encoding maps them to numbers.
class Dataset {
 public:
  Dataset() = default;
  /// `x_rows` is row-major, size() == y.size() * features.
  Dataset(std::vector<std::uint8_t> y, std::vector<std::uint8_t> x_rows, std::size_t features,
          Encoding encoding = {});

  static Dataset from_columns(std::vector<std::uint8_t> y,
                              const std::vector<std::vector<std::uint8_t>>& columns,
                              Encoding encoding = {});

  std::size_t size() const { return y_.size(); }
  std::size_t features() const { return features_; }
  const Encoding& encoding() const { return encoding_; }

  std::uint8_t y_bit(std::size_t row) const { return y_[row]; }
  std::uint8_t x_bit(std::size_t row, std::size_t col) const { return x_[row * features_ + col]; }
  std::span<const std::uint8_t> y_bits() const { return y_; }
  std::span<const std::uint8_t> x_row(std::size_t row) const {
    return std::span<const std::uint8_t>(x_).subspan(row * features_, features_);
  }

  Dataset with_encoding(Encoding encoding) const;
  /// Appends `count` columns whose bits are all zero.
  Dataset with_zero_columns(std::size_t count) const;

  /// Encoded numeric values.
  Eigen::MatrixXd design_matrix() const;
  Eigen::VectorXd response() const;

  bool operator==(const Dataset&) const = default;

 private:
  std::vector<std::uint8_t> y_;
  std::vector<std::uint8_t> x_;
  std::size_t features_ = 0;
  Encoding encoding_;
};

/// d_ijk rows (y = i, x = (j, k)) per cell, in ascending (i, j, k) order.
Dataset encode(const ContingencyTable222& table, const Encoding& encoding = {});

/// Inverse of encode for two-feature datasets.
ContingencyTable222 decode(const Dataset& dataset);

enum class SimpsonVerdict { none, type_a, type_b };

/// Which feature defines the subpopulations. The formal definition stratifies
/// by X1 and compares the X2 trend inside each stratum with the aggregate.
enum class Strata { x1, x2 };

std::string_view to_string(SimpsonVerdict verdict);
std::string_view to_string(Strata strata);

/// Strict Simpson inequalities on the empirical distribution, evaluated
/// exactly on counts. Throws Error(EmptyTable) when N = 0.
SimpsonVerdict is_simpson(const ContingencyTable222& table, Strata strata = Strata::x1);

// CSV with header `y,x1,x2,count`; absent cells are zero.
ContingencyTable222 parse_table_csv(std::string_view text);
ContingencyTable222 read_table_csv(const std::filesystem::path& path);
std::string format_table_csv(const ContingencyTable222& table);
void write_table_csv(const ContingencyTable222& table, const std::filesystem::path& path);

// {"counts": [[[d000,d001],[d010,d011]],[[d100,d101],[d110,d111]]], "labels": {...}}
std::string table_to_json(const ContingencyTable222& table);
ContingencyTable222 table_from_json(std::string_view text);

}  // namespace pathreg
