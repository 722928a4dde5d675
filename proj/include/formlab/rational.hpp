#pragma once

#include <cstdint>
#include <limits>
#include <numeric>
#include <string>

#include "formlab/error.hpp"

namespace formlab {

/// Exact rational with 64-bit numerator/denominator, always normalized
/// (gcd 1, positive denominator). Comparisons use 128-bit cross products,
/// so boundary cases like 1/theta == 1 + 1/n are decided exactly.
class Rational {
 public:
  Rational() : num_(0), den_(1) {}
  Rational(std::int64_t n) : num_(n), den_(1) {}
  Rational(std::int64_t n, std::int64_t d) : num_(n), den_(d) { normalize(); }

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }

  double toDouble() const { return static_cast<double>(num_) / static_cast<double>(den_); }

  Rational operator-() const { return Rational(-num_, den_); }

  friend Rational operator+(const Rational& a, const Rational& b) {
    return Rational(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
  }
  friend Rational operator-(const Rational& a, const Rational& b) { return a + (-b); }
  friend Rational operator*(const Rational& a, const Rational& b) {
    return Rational(a.num_ * b.num_, a.den_ * b.den_);
  }
  friend Rational operator/(const Rational& a, const Rational& b) {
    require(b.num_ != 0, ErrorCode::InvalidArgument, "rational division by zero");
    return Rational(a.num_ * b.den_, a.den_ * b.num_);
  }

  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
  friend bool operator<(const Rational& a, const Rational& b) {
    return static_cast<__int128>(a.num_) * b.den_ < static_cast<__int128>(b.num_) * a.den_;
  }
  friend bool operator<=(const Rational& a, const Rational& b) { return !(b < a); }
  friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
  friend bool operator>=(const Rational& a, const Rational& b) { return !(a < b); }

  Rational inverse() const {
    require(num_ != 0, ErrorCode::InvalidArgument, "inverse of zero");
    return Rational(den_, num_);
  }

  std::string str() const {
    if (den_ == 1) return std::to_string(num_);
    return std::to_string(num_) + "/" + std::to_string(den_);
  }

 private:
  void normalize() {
    require(den_ != 0, ErrorCode::InvalidArgument, "zero denominator");
    if (den_ < 0) {
      num_ = -num_;
      den_ = -den_;
    }
    const std::int64_t g = std::gcd(num_ < 0 ? -num_ : num_, den_);
    if (g > 1) {
      num_ /= g;
      den_ /= g;
    }
  }

  std::int64_t num_;
  std::int64_t den_;
};

/// A Lebesgue exponent: either an exact rational in (0, inf) or +infinity.
/// The infinite value is a distinguished state, never a float sentinel.
class Exponent {
 public:
  Exponent() : inf_(false), value_(1) {}
  Exponent(Rational v) : inf_(false), value_(v) {}
  Exponent(std::int64_t v) : inf_(false), value_(v) {}

  static Exponent infinity() {
    Exponent e;
    e.inf_ = true;
    return e;
  }

  bool isInf() const { return inf_; }
  const Rational& value() const {
    require(!inf_, ErrorCode::InvalidArgument, "finite value of infinite exponent");
    return value_;
  }

  /// 1/p, with 1/inf = 0. Exact.
  Rational reciprocal() const { return inf_ ? Rational(0) : value_.inverse(); }

  double toDouble() const {
    return inf_ ? std::numeric_limits<double>::infinity() : value_.toDouble();
  }

  std::string str() const { return inf_ ? "inf" : value_.str(); }

  friend bool operator==(const Exponent& a, const Exponent& b) {
    if (a.inf_ != b.inf_) return false;
    return a.inf_ || a.value_ == b.value_;
  }

  /// Accepts "7", "9/2" or "inf".
  static Exponent parse(const std::string& text) {
    if (text == "inf" || text == "Inf" || text == "INF") return infinity();
    const auto slash = text.find('/');
    try {
      if (slash == std::string::npos) return Exponent(Rational(std::stoll(text)));
      return Exponent(Rational(std::stoll(text.substr(0, slash)), std::stoll(text.substr(slash + 1))));
    } catch (const std::exception&) {
      fail(ErrorCode::ParseError, "bad exponent literal '" + text + "'");
    }
  }

 private:
  bool inf_;
  Rational value_;
};

}  // namespace formlab
