#pragma once

#include <boost/rational.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

// Boost 1.74's mixed rational/integer equality recurses forever under the
// C++20 rewritten-comparison rules. Exact non-template overloads win
// overload resolution and sidestep it.
namespace boost {
#define COARSEKIT_MIXED_EQ(I)                                                                                   \
  inline bool operator==(const rational<std::int64_t>& a, I b) { return a == rational<std::int64_t>(b); }       \
  inline bool operator==(I b, const rational<std::int64_t>& a) { return a == rational<std::int64_t>(b); }       \
  inline bool operator!=(const rational<std::int64_t>& a, I b) { return !(a == rational<std::int64_t>(b)); }    \
  inline bool operator!=(I b, const rational<std::int64_t>& a) { return !(a == rational<std::int64_t>(b)); }
COARSEKIT_MIXED_EQ(int)
COARSEKIT_MIXED_EQ(std::int64_t)
#undef COARSEKIT_MIXED_EQ
}  // namespace boost

namespace coarsekit {

/// Exact distances, scales and bounds. Every disjointness predicate in the
/// library compares values of this type, never floating point.
using Rational = boost::rational<std::int64_t>;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parses "p", "p/q", "-p/q" or a finite decimal such as "2.25".
inline Rational parse_rational(std::string_view text) {
  auto fail = [&] { return Error("invalid rational: '" + std::string(text) + "'"); };
  if (text.empty()) throw fail();
  auto parse_int = [&](std::string_view s) -> std::int64_t {
    if (s.empty()) throw fail();
    std::size_t i = 0;
    bool neg = false;
    if (s[0] == '-' || s[0] == '+') {
      neg = s[0] == '-';
      i = 1;
    }
    if (i == s.size()) throw fail();
    std::int64_t v = 0;
    for (; i < s.size(); ++i) {
      if (s[i] < '0' || s[i] > '9') throw fail();
      if (v > (INT64_MAX - (s[i] - '0')) / 10) throw fail();
      v = v * 10 + (s[i] - '0');
    }
    return neg ? -v : v;
  };
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    std::int64_t den = parse_int(text.substr(slash + 1));
    if (den == 0) throw fail();
    return Rational(parse_int(text.substr(0, slash)), den);
  }
  if (auto dot = text.find('.'); dot != std::string_view::npos) {
    auto whole = text.substr(0, dot);
    auto frac = text.substr(dot + 1);
    if (frac.empty() || frac.size() > 15) throw fail();
    bool neg = !whole.empty() && whole[0] == '-';
    std::int64_t w = (whole.empty() || whole == "-" || whole == "+") ? 0 : parse_int(whole);
    std::int64_t f = parse_int(frac);
    if (f < 0) throw fail();
    std::int64_t scale = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
    Rational r = Rational(w < 0 ? -w : w) + Rational(f, scale);
    return neg ? -r : r;
  }
  return Rational(parse_int(text));
}

inline std::string to_string(const Rational& r) {
  if (r.denominator() == 1) return std::to_string(r.numerator());
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

inline double to_double(const Rational& r) {
  return static_cast<double>(r.numerator()) / static_cast<double>(r.denominator());
}

inline std::int64_t floor_div(const Rational& a, const Rational& b) {
  Rational q = a / b;
  std::int64_t n = q.numerator(), d = q.denominator();
  std::int64_t f = n / d;
  if ((n % d != 0) && ((n < 0) != (d < 0))) --f;
  return f;
}

/// A strictly positive scale (R, r, R_i).
class Scale {
 public:
  explicit Scale(Rational value) : value_(value) {
    if (value_ <= 0) throw Error("scale must be positive, got " + to_string(value_));
  }
  const Rational& value() const { return value_; }
  operator const Rational&() const { return value_; }
  friend bool operator==(const Scale&, const Scale&) = default;

 private:
  Rational value_;
};

}  // namespace coarsekit
