#include "partrank/field.hpp"

#include <ostream>

#include "partrank/error.hpp"

namespace partrank {

bool is_prime(std::int64_t p) noexcept {
  if (p < 2) return false;
  for (std::int64_t f = 2; f * f <= p; ++f) {
    if (p % f == 0) return false;
  }
  return true;
}

FieldSpec FieldSpec::prime(std::int64_t p) {
  if (p < 2 || p > kMaxModulus) {
    throw PreconditionError("field modulus out of range [2, 65536]: " + std::to_string(p));
  }
  if (!is_prime(p)) {
    throw PreconditionError("field modulus is not prime: " + std::to_string(p));
  }
  return FieldSpec(p);
}

FieldSpec make_field(std::int64_t p) { return FieldSpec::prime(p); }

FieldSpec parse_field(const std::string& text) {
  if (text == "int" || text == "0") return FieldSpec::integers();
  std::size_t used = 0;
  long long p = 0;
  try {
    p = std::stoll(text, &used);
  } catch (const std::exception&) {
    throw PreconditionError("field must be 'int' or a prime, got '" + text + "'");
  }
  if (used != text.size()) {
    throw PreconditionError("field must be 'int' or a prime, got '" + text + "'");
  }
  return FieldSpec::prime(p);
}

std::int64_t FieldSpec::size() const {
  if (modulus_ == 0) throw PreconditionError("the integer ring has no finite size");
  return modulus_;
}

Value FieldSpec::from_int(std::int64_t v) const noexcept {
  if (modulus_ == 0) return v;
  Value r = v % modulus_;
  return r < 0 ? r + modulus_ : r;
}

bool FieldSpec::is_canonical(Value v) const noexcept {
  return modulus_ == 0 || (v >= 0 && v < modulus_);
}

Value FieldSpec::add(Value a, Value b) const {
  if (modulus_ == 0) {
    Value r;
    if (__builtin_add_overflow(a, b, &r)) throw OverflowError("integer overflow in addition");
    return r;
  }
  Value r = a + b;
  return r >= modulus_ ? r - modulus_ : r;
}

Value FieldSpec::sub(Value a, Value b) const {
  if (modulus_ == 0) {
    Value r;
    if (__builtin_sub_overflow(a, b, &r)) throw OverflowError("integer overflow in subtraction");
    return r;
  }
  Value r = a - b;
  return r < 0 ? r + modulus_ : r;
}

Value FieldSpec::mul(Value a, Value b) const {
  if (modulus_ == 0) {
    Value r;
    if (__builtin_mul_overflow(a, b, &r)) throw OverflowError("integer overflow in multiplication");
    return r;
  }
  return (a * b) % modulus_;
}

Value FieldSpec::neg(Value a) const {
  if (modulus_ == 0) {
    Value r;
    if (__builtin_sub_overflow(Value{0}, a, &r)) throw OverflowError("integer overflow in negation");
    return r;
  }
  return a == 0 ? 0 : modulus_ - a;
}

Value FieldSpec::inv(Value a) const {
  if (a == 0) throw DivisionByZero("inverse of zero");
  if (modulus_ == 0) {
    // Only the units of Z are invertible.
    if (a == 1 || a == -1) return a;
    throw DivisionByZero("inverse of non-unit " + std::to_string(a) + " in the integer ring");
  }
  // Extended Euclid.
  std::int64_t t = 0, new_t = 1, r = modulus_, new_r = a;
  while (new_r != 0) {
    const std::int64_t quotient = r / new_r;
    t -= quotient * new_t;
    std::swap(t, new_t);
    r -= quotient * new_r;
    std::swap(r, new_r);
  }
  return t < 0 ? t + modulus_ : t;
}

Value FieldSpec::pow(Value a, std::uint64_t e) const {
  Value result = from_int(1);
  Value base = a;
  while (e > 0) {
    if (e & 1) result = mul(result, base);
    e >>= 1;
    if (e > 0) base = mul(base, base);
  }
  return result;
}

std::string FieldSpec::to_string(Value v) const { return std::to_string(v); }

std::string FieldSpec::name() const {
  return modulus_ == 0 ? std::string("Z") : "F_" + std::to_string(modulus_);
}

namespace {

void require_same(const Scalar& a, const Scalar& b) {
  if (a.spec() != b.spec()) {
    throw PreconditionError("scalars from different domains: " + a.spec().name() + " vs " +
                            b.spec().name());
  }
}

}  // namespace

Scalar operator+(const Scalar& a, const Scalar& b) {
  require_same(a, b);
  return {a.spec_, Scalar::Raw{}, a.spec_.add(a.value_, b.value_)};
}

Scalar operator-(const Scalar& a, const Scalar& b) {
  require_same(a, b);
  return {a.spec_, Scalar::Raw{}, a.spec_.sub(a.value_, b.value_)};
}

Scalar operator*(const Scalar& a, const Scalar& b) {
  require_same(a, b);
  return {a.spec_, Scalar::Raw{}, a.spec_.mul(a.value_, b.value_)};
}

Scalar arith(const Scalar& a, const Scalar& b, ArithOp op) {
  switch (op) {
    case ArithOp::add: return a + b;
    case ArithOp::sub: return a - b;
    case ArithOp::mul: return a * b;
    case ArithOp::inv: return a.inv();
    case ArithOp::neg: return -a;
  }
  throw PreconditionError("unknown arithmetic operation");
}

std::ostream& operator<<(std::ostream& os, const Scalar& s) {
  return os << s.value() << " in " << s.spec().name();
}

}  // namespace partrank
