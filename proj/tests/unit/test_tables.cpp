#include "oracles.hpp"
#include "pathreg/error.hpp"
#include "pathreg/tables.hpp"

#include <gtest/gtest.h>

#include <random>

namespace pathreg {
namespace {

using testing::simpson_oracle;
using testing::SimpsonOracle;

TEST(Tables, LoanMarginsAndSize) {
  const auto t = ContingencyTable222::loan_example();
  EXPECT_EQ(t.sample_size(), 110u);
  EXPECT_EQ(t.margin(1, -1, -1), 42u);
  EXPECT_EQ(t.margin(-1, 0, 1), 24u);
  EXPECT_EQ(t.at(0, 1, 1), 27u);
}

TEST(Tables, EncodeCanonicalRowOrder) {
  const ContingencyTable222 t({2, 0, 1, 0, 0, 0, 0, 1});
  const Dataset ds = encode(t);
  ASSERT_EQ(ds.size(), 4u);
  ASSERT_EQ(ds.features(), 2u);
  const std::uint8_t expected[4][3] = {{0, 0, 0}, {0, 0, 0}, {0, 1, 0}, {1, 1, 1}};
  for (std::size_t r = 0; r < 4; ++r) {
    EXPECT_EQ(ds.y_bit(r), expected[r][0]);
    EXPECT_EQ(ds.x_bit(r, 0), expected[r][1]);
    EXPECT_EQ(ds.x_bit(r, 1), expected[r][2]);
  }
}

TEST(Tables, EncodeDecodeRoundTrip) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const auto t = testing::random_table(rng, 9);
    EXPECT_EQ(decode(encode(t)), t);
    EXPECT_EQ(encode(t), encode(t));
  }
}

TEST(Tables, EncodeEmptyTableFails) {
  try {
    encode(ContingencyTable222{});
    FAIL() << "expected EmptyTable";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::EmptyTable);
  }
}

TEST(Tables, EncodingMapsBits) {
  const Encoding enc{Rational(2), Rational(5)};
  const Dataset ds = encode(ContingencyTable222({0, 0, 0, 0, 0, 0, 0, 1}), enc);
  const Eigen::MatrixXd x = ds.design_matrix();
  EXPECT_DOUBLE_EQ(x(0, 0), 5.0);
  EXPECT_DOUBLE_EQ(x(0, 1), 5.0);
  EXPECT_DOUBLE_EQ(ds.response()(0), 5.0);
  EXPECT_THROW(encode(ContingencyTable222({1, 0, 0, 0, 0, 0, 0, 0}), Encoding{Rational(1), Rational(1)}),
               Error);
}

TEST(Tables, ZeroColumns) {
  const Dataset ds = encode(ContingencyTable222::loan_example()).with_zero_columns(3);
  EXPECT_EQ(ds.features(), 5u);
  for (std::size_t r = 0; r < ds.size(); ++r)
    for (std::size_t c = 2; c < 5; ++c) EXPECT_EQ(ds.x_bit(r, c), 0);
}

TEST(Tables, ProbabilityTable) {
  const auto p = ProbabilityTable::from_counts(ContingencyTable222::loan_example());
  double s = 0;
  for (double v : p.values()) s += v;
  EXPECT_NEAR(s, 1.0, 1e-12);
  EXPECT_DOUBLE_EQ(p.at(0, 1, 1), 27.0 / 110.0);
  EXPECT_THROW(ProbabilityTable({0.5, 0.5, 0.1, 0, 0, 0, 0, 0}), Error);
  EXPECT_THROW(ProbabilityTable({1.5, -0.5, 0, 0, 0, 0, 0, 0}), Error);
}

TEST(Simpson, DeathPenaltyIsSimpson) {
  const auto t = ContingencyTable222::death_penalty_example();
  EXPECT_NE(is_simpson(t), SimpsonVerdict::none);
  EXPECT_EQ(simpson_oracle(t), SimpsonOracle::second_system);
  EXPECT_EQ(is_simpson(t), SimpsonVerdict::type_b);
}

TEST(Simpson, LoanIsNotSimpson) {
  EXPECT_EQ(is_simpson(ContingencyTable222::loan_example()), SimpsonVerdict::none);
}

TEST(Simpson, AgreesWithInequalityOracle) {
  std::mt19937_64 rng(5);
  int hits = 0;
  for (int trial = 0; trial < 4000; ++trial) {
    const auto t = testing::random_table(rng, trial % 2 ? 6 : 40);
    const auto want = simpson_oracle(t);
    const auto got = is_simpson(t);
    const auto expected = want == SimpsonOracle::first_system    ? SimpsonVerdict::type_a
                          : want == SimpsonOracle::second_system ? SimpsonVerdict::type_b
                                                                 : SimpsonVerdict::none;
    ASSERT_EQ(got, expected) << format_table_csv(t);
    hits += got != SimpsonVerdict::none;
    // The X2 strata variant is the same test on the feature-swapped table.
    ASSERT_EQ(is_simpson(t, Strata::x2), is_simpson(t.swap_features(), Strata::x1));
  }
  EXPECT_GT(hits, 20);
}

TEST(Simpson, LargeCountsUseWideArithmetic) {
  const std::uint64_t big = std::uint64_t{1} << 40;
  const auto t = ContingencyTable222::death_penalty_example().scaled(big);
  EXPECT_EQ(is_simpson(t), SimpsonVerdict::type_b);
}

TEST(Simpson, InvariantUnderScalingAndFlipsWithResponse) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 2000; ++trial) {
    const auto t = testing::random_table(rng, 12);
    const auto v = is_simpson(t);
    EXPECT_EQ(is_simpson(t.scaled(7)), v);
    const auto flipped = is_simpson(t.swap_response());
    if (v == SimpsonVerdict::none) EXPECT_EQ(flipped, SimpsonVerdict::none);
    if (v == SimpsonVerdict::type_a) EXPECT_EQ(flipped, SimpsonVerdict::type_b);
    if (v == SimpsonVerdict::type_b) EXPECT_EQ(flipped, SimpsonVerdict::type_a);
  }
}

TEST(Simpson, EmptyTableFails) {
  EXPECT_THROW(is_simpson(ContingencyTable222{}), Error);
}

TEST(TableCsv, RoundTrip) {
  const auto t = ContingencyTable222::loan_example();
  EXPECT_EQ(parse_table_csv(format_table_csv(t)), t);
}

TEST(TableCsv, MissingCellsAreZeroAndWhitespaceIsTolerated) {
  const auto t = parse_table_csv("y,x1,x2,count\r\n 1 , 0 , 1 , 4\r\n\n0,1,1,2\n");
  EXPECT_EQ(t.at(1, 0, 1), 4u);
  EXPECT_EQ(t.at(0, 1, 1), 2u);
  EXPECT_EQ(t.sample_size(), 6u);
}

TEST(TableCsv, Errors) {
  auto code_of = [](std::string_view text) {
    try {
      parse_table_csv(text);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::Io;
  };
  EXPECT_EQ(code_of(""), ErrorCode::ParseError);
  EXPECT_EQ(code_of("a,b,c,d\n"), ErrorCode::ParseError);
  EXPECT_EQ(code_of("y,x1,x2,count\n0,0,2,1\n"), ErrorCode::ParseError);
  EXPECT_EQ(code_of("y,x1,x2,count\n0,0,1,x\n"), ErrorCode::ParseError);
  EXPECT_EQ(code_of("y,x1,x2,count\n0,0,1\n"), ErrorCode::ParseError);
  EXPECT_EQ(code_of("y,x1,x2,count\n0,0,1,1\n0,0,1,2\n"), ErrorCode::ParseError);
  EXPECT_EQ(code_of("y,x1,x2,count\n0,0,1,-3\n"), ErrorCode::NegativeCount);
  try {
    parse_table_csv("y,x1,x2,count\n0,0,0,1\n0,0,1,oops\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
}

TEST(TableJson, RoundTripWithLabels) {
  auto t = ContingencyTable222::death_penalty_example();
  t.set_labels({"death", "victim", "defendant"});
  const auto back = table_from_json(table_to_json(t));
  EXPECT_EQ(back, t);
  EXPECT_EQ(back.labels(), t.labels());
}

}  // namespace
}  // namespace pathreg
