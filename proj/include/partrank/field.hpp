#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

namespace partrank {

/// Canonical representative of a field element: 0 <= v < p in a prime field,
/// a plain signed value in the integer ring.
using Value = std::int64_t;

enum class FieldKind { prime, integer };

enum class ArithOp { add, sub, mul, inv, neg };

/// Coefficient domain: a prime field F_p with 2 <= p <= 2^16, or the integers
/// with overflow detection. Cheap to copy.
class FieldSpec {
 public:
  static constexpr std::int64_t kMaxModulus = 1 << 16;

  /// Throws PreconditionError unless p is a prime in [2, 2^16].
  static FieldSpec prime(std::int64_t p);
  static FieldSpec integers() noexcept { return FieldSpec(); }

  FieldKind kind() const noexcept { return modulus_ == 0 ? FieldKind::integer : FieldKind::prime; }
  bool is_prime_field() const noexcept { return modulus_ != 0; }
  /// 0 for the integer ring (this is also its serialized tag).
  std::int64_t modulus() const noexcept { return modulus_; }
  /// Field size q; throws for the integer ring.
  std::int64_t size() const;

  Value from_int(std::int64_t v) const noexcept;
  bool is_canonical(Value v) const noexcept;

  Value add(Value a, Value b) const;
  Value sub(Value a, Value b) const;
  Value mul(Value a, Value b) const;
  Value neg(Value a) const;
  Value inv(Value a) const;
  /// a^e for e >= 0.
  Value pow(Value a, std::uint64_t e) const;

  /// Value written as a signed integer; values above p/2 stay positive so
  /// that the text format is the canonical representative.
  std::string to_string(Value v) const;
  std::string name() const;

  friend bool operator==(const FieldSpec&, const FieldSpec&) = default;

 private:
  FieldSpec() = default;
  explicit FieldSpec(std::int64_t p) : modulus_(p) {}

  std::int64_t modulus_ = 0;
};

/// Convenience constructor; same contract as FieldSpec::prime.
FieldSpec make_field(std::int64_t p);

/// Parses "int" or a prime; used by the text formats and the CLI.
FieldSpec parse_field(const std::string& text);

bool is_prime(std::int64_t p) noexcept;

/// A value paired with its domain. Mixing domains throws PreconditionError.
class Scalar {
 public:
  Scalar(FieldSpec spec, std::int64_t v) : spec_(spec), value_(spec.from_int(v)) {}

  const FieldSpec& spec() const noexcept { return spec_; }
  Value value() const noexcept { return value_; }
  bool is_zero() const noexcept { return value_ == 0; }

  Scalar inv() const { return {spec_, Raw{}, spec_.inv(value_)}; }
  Scalar operator-() const { return {spec_, Raw{}, spec_.neg(value_)}; }
  friend Scalar operator+(const Scalar& a, const Scalar& b);
  friend Scalar operator-(const Scalar& a, const Scalar& b);
  friend Scalar operator*(const Scalar& a, const Scalar& b);
  friend bool operator==(const Scalar&, const Scalar&) = default;

 private:
  struct Raw {};
  Scalar(FieldSpec spec, Raw, Value v) : spec_(spec), value_(v) {}

  FieldSpec spec_;
  Value value_;
};

Scalar arith(const Scalar& a, const Scalar& b, ArithOp op);

std::ostream& operator<<(std::ostream& os, const Scalar& s);

}  // namespace partrank
