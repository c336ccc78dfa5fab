#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <string>

namespace partrank {

using BigInt = boost::multiprecision::cpp_int;

/// Exact rational with arbitrary-size parts, always reduced with den > 0.
class Rational {
 public:
  Rational() = default;
  Rational(BigInt num, BigInt den = 1);

  const BigInt& num() const noexcept { return num_; }
  const BigInt& den() const noexcept { return den_; }

  double to_double() const;
  /// Natural log of a positive value, accurate to ~1e-15 relative even when
  /// num and den are far outside double range.
  double log() const;
  /// Always "num/den", including integers ("3/1").
  std::string to_string() const;
  static Rational parse(const std::string& text);

  friend Rational operator+(const Rational& a, const Rational& b);
  friend Rational operator-(const Rational& a, const Rational& b);
  friend Rational operator*(const Rational& a, const Rational& b);
  friend Rational operator/(const Rational& a, const Rational& b);
  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend bool operator<(const Rational& a, const Rational& b) {
    return a.num_ * b.den_ < b.num_ * a.den_;
  }
  friend bool operator<=(const Rational& a, const Rational& b) { return !(b < a); }
  friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
  friend bool operator>=(const Rational& a, const Rational& b) { return !(a < b); }

 private:
  void reduce();

  BigInt num_ = 0;
  BigInt den_ = 1;
};

BigInt big_pow(std::int64_t base, unsigned exp);

/// q^e as an exact rational, e may be negative.
Rational rational_pow(std::int64_t q, int e);

/// ln of a positive big integer.
double big_log(const BigInt& x);

}  // namespace partrank
