#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "partrank/field.hpp"
#include "partrank/linalg.hpp"
#include "partrank/multilinear.hpp"

namespace partrank {

class LineReader;

/// A polynomial in the d*n variables x^(s)_c of (F^n)^d, variable id s*n + c.
/// Holds factors that leave the multilinear world, e.g. cofactors produced
/// by syzygy reductions or forms composed with a map on the matrix space.
class Polynomial {
 public:
  /// Sorted variable ids, repeated for powers.
  using Monomial = std::vector<std::uint16_t>;

  Polynomial(FieldSpec spec, int d, int n);

  /// Embeds a form whose slot j is the ambient slot slots[j].
  static Polynomial from_form(const MultilinearForm& form, std::span<const int> slots, int d);
  /// sum_v coeffs[v] x_v over all d*n variables.
  static Polynomial linear(FieldSpec spec, int d, int n, std::span<const Value> coeffs);

  const FieldSpec& field() const noexcept { return spec_; }
  int slots() const noexcept { return d_; }
  int dim() const noexcept { return n_; }
  int num_vars() const noexcept { return d_ * n_; }
  const std::map<Monomial, Value>& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }

  /// Common degree of all monomials; nullopt for zero or inhomogeneous input.
  std::optional<int> degree() const;

  void add_term(Monomial monomial, Value coeff);

  Polynomial operator+(const Polynomial& other) const;
  Polynomial operator-(const Polynomial& other) const;
  Polynomial operator*(const Polynomial& other) const;
  Polynomial scaled(Value factor) const;

  Value evaluate(std::span<const Value> x) const;

  struct MultilinearView {
    std::vector<int> slots;
    MultilinearForm form;
  };
  /// Nonzero and every monomial uses each slot of one fixed slot set exactly
  /// once: the polynomial as a form on those slots.
  std::optional<MultilinearView> as_multilinear() const;

  /// Coefficient vector of a polynomial of degree <= 1 (the constant is ignored).
  Vector linear_coefficients() const;

  friend bool operator==(const Polynomial&, const Polynomial&) = default;

 private:
  void require_compatible(const Polynomial& other) const;

  FieldSpec spec_;
  int d_;
  int n_;
  std::map<Monomial, Value> terms_;
};

/// p o L, i.e. x -> p(L x), with L a (d*n) x (d*n) matrix.
Polynomial compose_linear(const Polynomial& p, const Matrix& l);

/// "x^(s)_c" products, 1-based, e.g. "x1.2*x3.1".
std::string monomial_to_string(const Polynomial::Monomial& m, int n);

/// Header "poly d n p", then "s.c,s.c,... : value" lines (1-based slot.coord).
std::string to_text(const Polynomial& p);
Polynomial read_polynomial(LineReader& reader);

}  // namespace partrank
