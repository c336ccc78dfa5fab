#include "partrank/rational.hpp"

#include <cmath>

#include "partrank/error.hpp"

namespace partrank {

Rational::Rational(BigInt num, BigInt den) : num_(std::move(num)), den_(std::move(den)) {
  if (den_ == 0) throw DivisionByZero("rational with zero denominator");
  reduce();
}

void Rational::reduce() {
  if (den_ < 0) {
    num_ = -num_;
    den_ = -den_;
  }
  BigInt g = boost::multiprecision::gcd(num_, den_);
  if (g > 1) {
    num_ /= g;
    den_ /= g;
  }
  if (num_ == 0) den_ = 1;
}

double big_log(const BigInt& x) {
  if (x <= 0) throw PreconditionError("logarithm of a non-positive integer");
  const auto bits = boost::multiprecision::msb(x);
  if (bits < 60) return std::log(x.convert_to<double>());
  const unsigned shift = static_cast<unsigned>(bits) - 60;
  BigInt top = x >> shift;
  return std::log(top.convert_to<double>()) + shift * std::log(2.0);
}

double Rational::log() const {
  if (num_ <= 0) throw PreconditionError("logarithm of a non-positive rational");
  return big_log(num_) - big_log(den_);
}

double Rational::to_double() const {
  if (num_ == 0) return 0.0;
  const double sign = num_ < 0 ? -1.0 : 1.0;
  BigInt a = num_ < 0 ? BigInt(-num_) : num_;
  return sign * std::exp(big_log(a) - big_log(den_));
}

std::string Rational::to_string() const { return num_.str() + "/" + den_.str(); }

Rational Rational::parse(const std::string& text) {
  const auto slash = text.find('/');
  try {
    if (slash == std::string::npos) return Rational(BigInt(text));
    return Rational(BigInt(text.substr(0, slash)), BigInt(text.substr(slash + 1)));
  } catch (const std::runtime_error&) {
    throw PreconditionError("malformed rational '" + text + "'");
  }
}

Rational operator+(const Rational& a, const Rational& b) {
  return {a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_};
}

Rational operator-(const Rational& a, const Rational& b) {
  return {a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_};
}

Rational operator*(const Rational& a, const Rational& b) {
  return {a.num_ * b.num_, a.den_ * b.den_};
}

Rational operator/(const Rational& a, const Rational& b) {
  return {a.num_ * b.den_, a.den_ * b.num_};
}

BigInt big_pow(std::int64_t base, unsigned exp) {
  return boost::multiprecision::pow(BigInt(base), exp);
}

Rational rational_pow(std::int64_t q, int e) {
  if (e >= 0) return Rational(big_pow(q, static_cast<unsigned>(e)));
  return Rational(1, big_pow(q, static_cast<unsigned>(-e)));
}

}  // namespace partrank
