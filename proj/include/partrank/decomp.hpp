#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "partrank/multilinear.hpp"
#include "partrank/polynomial.hpp"

namespace partrank {

/// Q * R with Q on the slots I and R on the complement. Multilinear terms
/// are normalized so that |I| <= d/2 and slot 0 is in I when |I| == d/2.
/// General terms hold arbitrary polynomial factors on all d*n variables;
/// they appear as intermediate results of syzygy and symmetric reductions and
/// collapse back to multilinear terms whenever both factors allow it.
class Term {
 public:
  static Term multilinear(int d, std::vector<int> support, MultilinearForm q, MultilinearForm r);
  static Term general(Polynomial q, Polynomial r);

  bool is_multilinear() const noexcept { return q_.has_value(); }
  int slots() const noexcept { return d_; }
  int dim() const noexcept;
  const FieldSpec& field() const noexcept;

  /// Empty for general terms.
  const std::vector<int>& support() const noexcept { return support_; }
  std::vector<int> complement() const;

  /// Multilinear terms only.
  const MultilinearForm& q() const;
  const MultilinearForm& r() const;
  MultilinearForm product() const;

  Polynomial q_polynomial() const;
  Polynomial r_polynomial() const;
  std::optional<int> q_degree() const;

  Term scaled(Value lambda) const;

 private:
  Term() = default;

  int d_ = 0;
  std::vector<int> support_;
  std::optional<MultilinearForm> q_;
  std::optional<MultilinearForm> r_;
  std::optional<Polynomial> qp_;
  std::optional<Polynomial> rp_;
};

enum class DecompKind { slice, partition };

std::string kind_name(DecompKind kind);
DecompKind parse_kind(std::string_view text);

class Decomposition {
 public:
  /// Slice decompositions require every Q to be a linear form.
  Decomposition(Shape shape, DecompKind kind, std::vector<Term> terms);

  const Shape& shape() const noexcept { return shape_; }
  DecompKind kind() const noexcept { return kind_; }
  const std::vector<Term>& terms() const noexcept { return terms_; }
  std::size_t size() const noexcept { return terms_.size(); }
  bool is_multilinear() const noexcept;

 private:
  Shape shape_;
  DecompKind kind_;
  std::vector<Term> terms_;
};

/// Sum of the term products. Throws PreconditionError when a general
/// decomposition sums to something that is not a d-linear form.
MultilinearForm expand(const Decomposition& dec);
Polynomial expand_polynomial(const Decomposition& dec);

struct VerifyResult {
  bool verified = false;
  /// First differing index tuple (0-based) when both sides are forms.
  std::vector<int> witness;
  /// Human-readable witness: 1-based tuple or monomial.
  std::string witness_text;
  Value expected = 0;
  Value actual = 0;
};

VerifyResult verify(const Decomposition& dec, const MultilinearForm& target);

/// 0-based row. Slice decomposition with n terms.
Decomposition laplace(int n, int row, FieldSpec spec);
/// Generalized Laplace expansion of det_4 along two rows (0-based).
Decomposition two_row_laplace(std::vector<int> rows, FieldSpec spec);
/// Three quadratic terms whose factors are sums of all 2x2 minors.
Decomposition det4_quadratic(FieldSpec spec);

/// alpha_i = sum_j c(i, j) beta_j. When c is absent it is solved for.
struct LinearStep {
  std::vector<Polynomial> beta;
  std::optional<Matrix> c;
};
/// Alternating r x r matrix of forms q(i, j).
struct SyzygyStep {
  std::vector<std::vector<Polynomial>> q;
};
/// A linear map on the d*n coordinates fixing the expanded form.
struct SymmetricStep {
  Matrix l;
};
using ReductionStep = std::variant<LinearStep, SyzygyStep, SymmetricStep>;

std::string step_name(const ReductionStep& step);

/// Rewrites dec by one reduction; the term count is unchanged and the output
/// expands to the same form (checked).
Decomposition apply_reduction(const Decomposition& dec, const ReductionStep& step);

/// Same terms up to order and (lambda Q, lambda^{-1} R) rescaling.
bool structurally_equal(const Decomposition& a, const Decomposition& b);

/// Header "kind d n p r", then per term "I: i1,i2,..." and the two factor
/// forms, or "I: general" and two polynomial blocks.
std::string to_text(const Decomposition& dec);
Decomposition decomposition_from_text(std::string_view text);
Decomposition read_decomposition(LineReader& reader);

}  // namespace partrank
