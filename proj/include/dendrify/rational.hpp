#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace dendrify {

/// Exact rational scalar used for every coordinate and map entry.
/// Decimal input is converted losslessly (a double is a dyadic rational),
/// so all set-membership and intersection predicates stay exact.
using Rat = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

enum class Errc {
  NonContractive,
  Degenerate,
  EmptyInput,
  NotSharedVertex,
  DepthTooLarge,
  PointOutside,
  InvalidEndpoint,
  CoincidentEndpoints,
  NoSeparatedPairs,
  ParseError,
};

struct Error : std::runtime_error {
  Errc code;
  Error(Errc c, const std::string& msg) : std::runtime_error(msg), code(c) {}
};

inline double to_double(const Rat& r) { return r.convert_to<double>(); }

inline int sgn(const Rat& r) { return r.sign(); }

/// Parses "p/q", "p", or a plain decimal ("-1.25", "3e-2") into an exact
/// rational. Decimal text is interpreted at face value, not via a double.
inline Rat parse_rational(std::string_view text) {
  auto fail = [&] { throw Error(Errc::ParseError, "invalid number literal '" + std::string(text) + "'"); };
  if (text.empty()) fail();

  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    std::string num(text.substr(0, slash));
    std::string den(text.substr(slash + 1));
    if (num.empty() || den.empty()) fail();
    try {
      BigInt p(num), q(den);
      if (q == 0) fail();
      return Rat(p, q);
    } catch (const std::exception&) {
      fail();
    }
  }

  // decimal / scientific
  size_t i = 0;
  bool neg = false;
  if (text[i] == '+' || text[i] == '-') { neg = text[i] == '-'; ++i; }
  BigInt mantissa = 0;
  long frac_digits = 0;
  bool seen_digit = false, seen_dot = false;
  for (; i < text.size(); ++i) {
    char ch = text[i];
    if (ch >= '0' && ch <= '9') {
      mantissa = mantissa * 10 + (ch - '0');
      if (seen_dot) ++frac_digits;
      seen_digit = true;
    } else if (ch == '.') {
      if (seen_dot) fail();
      seen_dot = true;
    } else if (ch == 'e' || ch == 'E') {
      break;
    } else {
      fail();
    }
  }
  if (!seen_digit) fail();
  long exp10 = 0;
  if (i < text.size()) {  // exponent part
    ++i;
    bool eneg = false;
    if (i < text.size() && (text[i] == '+' || text[i] == '-')) { eneg = text[i] == '-'; ++i; }
    if (i >= text.size()) fail();
    for (; i < text.size(); ++i) {
      if (text[i] < '0' || text[i] > '9') fail();
      exp10 = exp10 * 10 + (text[i] - '0');
      if (exp10 > 9999) fail();
    }
    if (eneg) exp10 = -exp10;
  }
  long net = exp10 - frac_digits;
  Rat value(mantissa);
  if (net > 0) value *= Rat(boost::multiprecision::pow(BigInt(10), static_cast<unsigned>(net)));
  if (net < 0) value /= Rat(boost::multiprecision::pow(BigInt(10), static_cast<unsigned>(-net)));
  if (neg) value = -value;
  return value;
}

inline std::string rational_to_string(const Rat& r) {
  return r.str();
}

}  // namespace dendrify
