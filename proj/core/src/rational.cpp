#include "pathreg/rational.hpp"

#include "pathreg/error.hpp"

#include <cctype>
#include <charconv>

namespace pathreg {

std::string to_string(const Rational& value) {
  const BigInt num = boost::multiprecision::numerator(value);
  const BigInt den = boost::multiprecision::denominator(value);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

double to_double(const Rational& value) { return value.convert_to<double>(); }

int sign(const Rational& value) { return value.sign(); }

namespace {

[[noreturn]] void bad(std::string_view text) {
  throw Error(ErrorCode::InvalidArgument, "not a rational number: '" + std::string(text) + "'");
}

BigInt parse_int(std::string_view digits, std::string_view whole) {
  if (digits.empty()) bad(whole);
  for (char ch : digits) {
    if (!std::isdigit(static_cast<unsigned char>(ch))) bad(whole);
  }
  return BigInt(std::string(digits));
}

BigInt pow10(long exponent) {
  BigInt out = 1;
  for (long i = 0; i < exponent; ++i) out *= 10;
  return out;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  std::string_view s = text;
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  if (s.empty()) bad(text);

  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    Rational num = parse_rational(s.substr(0, slash));
    Rational den = parse_rational(s.substr(slash + 1));
    if (den == 0) bad(text);
    return num / den;
  }

  bool negative = false;
  if (s.front() == '+' || s.front() == '-') {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }

  long exponent = 0;
  if (auto e = s.find_first_of("eE"); e != std::string_view::npos) {
    std::string_view exp_text = s.substr(e + 1);
    auto [ptr, ec] = std::from_chars(exp_text.data() + (exp_text.starts_with('+') ? 1 : 0),
                                     exp_text.data() + exp_text.size(), exponent);
    if (ec != std::errc() || ptr != exp_text.data() + exp_text.size()) bad(text);
    s = s.substr(0, e);
  }

  std::string_view int_part = s;
  std::string_view frac_part;
  if (auto dot = s.find('.'); dot != std::string_view::npos) {
    int_part = s.substr(0, dot);
    frac_part = s.substr(dot + 1);
  }
  if (int_part.empty() && frac_part.empty()) bad(text);

  BigInt mantissa = int_part.empty() ? BigInt(0) : parse_int(int_part, text);
  if (!frac_part.empty()) {
    mantissa = mantissa * pow10(static_cast<long>(frac_part.size())) + parse_int(frac_part, text);
    exponent -= static_cast<long>(frac_part.size());
  }
  Rational out(mantissa);
  if (exponent > 0) out *= Rational(pow10(exponent));
  if (exponent < 0) out /= Rational(pow10(-exponent));
  return negative ? Rational(-out) : out;
}

}  // namespace pathreg
