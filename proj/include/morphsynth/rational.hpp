#pragma once

#include <cstdint>
#include <numeric>
#include <string>
#include <string_view>

#include "morphsynth/errors.hpp"

namespace morphsynth {

/// Exact rational number on 64-bit numerator/denominator.
///
/// Estimates, weights, and resource amounts are kept as rationals so that
/// weighted sums, ratios, and knapsack arithmetic reproduce bit-for-bit
/// across platforms. Intermediate products go through 128-bit integers and
/// overflow raises instead of wrapping.
class Rational {
public:
  constexpr Rational() = default;
  Rational(std::int64_t num, std::int64_t den = 1) : num_(num), den_(den) { normalize(); }

  /// Accepts integers ("12", "-3"), decimals ("3.7", "-0.25") and
  /// fractions ("7/10").
  static Rational parse(std::string_view text) {
    if (text.empty()) throw validation_error("empty rational literal");
    const auto slash = text.find('/');
    if (slash != std::string_view::npos) {
      return Rational(parse_int(text.substr(0, slash)), parse_int(text.substr(slash + 1)));
    }
    bool neg = false;
    std::string_view body = text;
    if (body.front() == '-' || body.front() == '+') {
      neg = body.front() == '-';
      body.remove_prefix(1);
    }
    const auto dot = body.find('.');
    std::string_view whole = body.substr(0, dot == std::string_view::npos ? body.size() : dot);
    std::string_view frac = dot == std::string_view::npos ? std::string_view{} : body.substr(dot + 1);
    if (whole.empty() && frac.empty()) throw validation_error("bad rational literal: " + std::string(text));
    std::int64_t num = whole.empty() ? 0 : parse_digits(whole);
    std::int64_t den = 1;
    for (char c : frac) {
      if (c < '0' || c > '9') throw validation_error("bad rational literal: " + std::string(text));
      num = checked(static_cast<__int128>(num) * 10 + (c - '0'));
      den = checked(static_cast<__int128>(den) * 10);
    }
    return Rational(neg ? -num : num, den);
  }

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }

  double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }

  bool is_integer() const { return den_ == 1; }

  /// Canonical text: integer, terminating decimal when the denominator is
  /// 2^a*5^b, otherwise "num/den".
  std::string str() const {
    if (den_ == 1) return std::to_string(num_);
    std::int64_t d = den_;
    int twos = 0, fives = 0;
    while (d % 2 == 0) { d /= 2; ++twos; }
    while (d % 5 == 0) { d /= 5; ++fives; }
    if (d != 1) return std::to_string(num_) + "/" + std::to_string(den_);
    const int digits = twos > fives ? twos : fives;
    __int128 scaled = static_cast<__int128>(num_);
    for (int i = 0; i < digits; ++i) scaled *= 10;
    scaled /= den_;
    bool neg = scaled < 0;
    if (neg) scaled = -scaled;
    std::string s;
    for (int i = 0; i < digits; ++i) { s.insert(s.begin(), static_cast<char>('0' + static_cast<int>(scaled % 10))); scaled /= 10; }
    std::string whole = scaled == 0 ? "0" : int128_str(scaled);
    return (neg ? "-" : "") + whole + "." + s;
  }

  friend Rational operator+(const Rational& a, const Rational& b) {
    return make(static_cast<__int128>(a.num_) * b.den_ + static_cast<__int128>(b.num_) * a.den_,
                static_cast<__int128>(a.den_) * b.den_);
  }
  friend Rational operator-(const Rational& a, const Rational& b) {
    return make(static_cast<__int128>(a.num_) * b.den_ - static_cast<__int128>(b.num_) * a.den_,
                static_cast<__int128>(a.den_) * b.den_);
  }
  friend Rational operator*(const Rational& a, const Rational& b) {
    return make(static_cast<__int128>(a.num_) * b.num_, static_cast<__int128>(a.den_) * b.den_);
  }
  friend Rational operator/(const Rational& a, const Rational& b) {
    if (b.num_ == 0) throw validation_error("rational division by zero");
    return make(static_cast<__int128>(a.num_) * b.den_, static_cast<__int128>(a.den_) * b.num_);
  }
  Rational operator-() const { return Rational(-num_, den_); }
  Rational& operator+=(const Rational& o) { return *this = *this + o; }
  Rational& operator-=(const Rational& o) { return *this = *this - o; }

  friend bool operator==(const Rational& a, const Rational& b) { return a.num_ == b.num_ && a.den_ == b.den_; }
  friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
  friend bool operator<(const Rational& a, const Rational& b) {
    return static_cast<__int128>(a.num_) * b.den_ < static_cast<__int128>(b.num_) * a.den_;
  }
  friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
  friend bool operator<=(const Rational& a, const Rational& b) { return !(b < a); }
  friend bool operator>=(const Rational& a, const Rational& b) { return !(a < b); }

  Rational abs() const { return num_ < 0 ? Rational(-num_, den_) : *this; }

private:
  static std::int64_t checked(__int128 v) {
    if (v > INT64_MAX || v < INT64_MIN) throw validation_error("rational overflow");
    return static_cast<std::int64_t>(v);
  }
  static Rational make(__int128 num, __int128 den) {
    if (den == 0) throw validation_error("rational with zero denominator");
    if (den < 0) { den = -den; num = -num; }
    __int128 a = num < 0 ? -num : num, b = den;
    while (b != 0) { __int128 t = a % b; a = b; b = t; }
    if (a != 0) { num /= a; den /= a; }
    Rational r;
    r.num_ = checked(num);
    r.den_ = checked(den);
    return r;
  }
  void normalize() { *this = make(num_, den_); }

  static std::int64_t parse_int(std::string_view t) {
    bool neg = false;
    if (!t.empty() && (t.front() == '-' || t.front() == '+')) { neg = t.front() == '-'; t.remove_prefix(1); }
    std::int64_t v = parse_digits(t);
    return neg ? -v : v;
  }
  static std::int64_t parse_digits(std::string_view t) {
    if (t.empty()) throw validation_error("bad integer literal");
    __int128 v = 0;
    for (char c : t) {
      if (c < '0' || c > '9') throw validation_error("bad integer literal: " + std::string(t));
      v = v * 10 + (c - '0');
      if (v > INT64_MAX) throw validation_error("integer literal overflow");
    }
    return static_cast<std::int64_t>(v);
  }
  static std::string int128_str(__int128 v) {
    std::string s;
    while (v > 0) { s.insert(s.begin(), static_cast<char>('0' + static_cast<int>(v % 10))); v /= 10; }
    return s.empty() ? "0" : s;
  }

  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

}  // namespace morphsynth
