#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "partrank/field.hpp"
#include "partrank/linalg.hpp"

namespace partrank {

class LineReader;

/// d vector slots, each of dimension n, over one coefficient domain.
/// d == 0 is allowed for fully restricted forms (scalars).
struct Shape {
  int d = 0;
  int n = 1;
  FieldSpec spec = FieldSpec::integers();

  /// n^d; throws PreconditionError if it does not fit in 63 bits.
  std::uint64_t index_count() const;

  friend bool operator==(const Shape&, const Shape&) = default;
};

Shape make_shape(int d, int n, FieldSpec spec);

/// One vector per slot.
using PointTuple = std::vector<Vector>;

/// x^(i) != 0 for every i.
bool is_nontrivial(const PointTuple& x) noexcept;

/// A d-linear form on (F^n)^d stored as a sorted list of nonzero
/// coefficients. Index tuples are packed into a mixed-radix key with slot 0
/// most significant, so key order is lexicographic tuple order and equality
/// of forms is a linear scan.
class MultilinearForm {
 public:
  using Key = std::uint64_t;
  struct Entry {
    Key key;
    Value value;
    friend bool operator==(const Entry&, const Entry&) = default;
  };

  /// The zero form.
  explicit MultilinearForm(Shape shape);

  /// Duplicate keys are summed, values reduced, zeros dropped.
  static MultilinearForm from_entries(Shape shape, std::vector<Entry> entries);
  /// 0-based index tuples.
  static MultilinearForm from_terms(Shape shape,
                                    const std::vector<std::pair<std::vector<int>, std::int64_t>>& terms);
  /// Row-major dense array of length n^d.
  static MultilinearForm from_dense(Shape shape, std::span<const Value> dense);

  const Shape& shape() const noexcept { return shape_; }
  int degree() const noexcept { return shape_.d; }
  int dim() const noexcept { return shape_.n; }
  const FieldSpec& field() const noexcept { return shape_.spec; }

  std::span<const Entry> entries() const noexcept { return entries_; }
  std::size_t size() const noexcept { return entries_.size(); }
  bool is_zero() const noexcept { return entries_.empty(); }

  Key encode(std::span<const int> index) const;
  std::vector<int> decode(Key key) const;
  Value coefficient(std::span<const int> index) const;
  Value coefficient_at(Key key) const;
  std::vector<Value> dense() const;

  MultilinearForm operator+(const MultilinearForm& other) const;
  MultilinearForm operator-(const MultilinearForm& other) const;
  MultilinearForm operator-() const;
  MultilinearForm scaled(Value factor) const;

  friend bool operator==(const MultilinearForm&, const MultilinearForm&) = default;

 private:
  Shape shape_;
  std::vector<Entry> entries_;
};

/// Sign of the index tuple as a permutation of [0, d), 0 when it is not a
/// permutation. For d == 2 any integers are accepted and the symbol is the
/// sign of j - i.
int levi_civita(std::span<const int> indices);

struct IdentityCase {
  std::vector<int> indices;
  int lhs;
  int rhs;
};

struct IdentityReport {
  int total = 0;
  int passed = 0;
  int permutations = 0;
  int permutations_passed = 0;
  int degenerate = 0;
  int degenerate_passed = 0;
  std::vector<IdentityCase> violations;

  bool ok() const noexcept { return passed == total && violations.empty(); }
};

using Symbol4 = std::function<int(int, int, int, int)>;

/// Checks eps_{ijkl} = eps_{ij} eps_{kl} - eps_{ik} eps_{jl} + eps_{il} eps_{jk}
/// on all of [4]^4. `four_symbol` replaces the 4-dimensional symbol (used to
/// inject faults); by default levi_civita is used.
IdentityReport check_4to2_identity(const Symbol4& four_symbol = {});

/// det_n as an n-linear form in the rows: coefficient levi_civita(i_1..i_n).
MultilinearForm det_form(int n, FieldSpec spec);

/// det(A_{R,C}) as an |R|-linear form in |R| row slots of dimension n, where
/// slot j reads the row R_j and `cols` selects the columns.
MultilinearForm minor_form(std::span<const int> cols, int n, FieldSpec spec);

Scalar evaluate(const MultilinearForm& form, const PointTuple& x);

/// Fix the vectors in `slots` (any order, one vector each); the remaining
/// slots keep their relative order. Fixing every slot yields a degree-0 form.
MultilinearForm restrict(const MultilinearForm& form, std::span<const int> slots,
                         const PointTuple& vectors);

/// Component i is T with its last slot fixed to e_i. Requires d >= 2.
std::vector<MultilinearForm> gradient_form(const MultilinearForm& form);

/// x -> T(..., A x^(slot), ...).
MultilinearForm compose_slot(const MultilinearForm& form, int slot, const Matrix& a);
/// A applied in every slot.
MultilinearForm compose_all(const MultilinearForm& form, const Matrix& a);

/// New slot t reads old slot order[t]: U(y) = T(x) with x_{order[t]} = y_t.
MultilinearForm permute_slots(const MultilinearForm& form, std::span<const int> order);

/// Restricts every slot to the coordinate subspace spanned by e_k..e_{n-1}
/// and renumbers coordinates from 0; the result has dimension n - k.
MultilinearForm drop_leading_coordinates(const MultilinearForm& form, int k);

/// Q(x_I) * R(x_{I^c}) as a d-linear form; `support` lists I in ascending order.
MultilinearForm product_form(const MultilinearForm& q, std::span<const int> support,
                             const MultilinearForm& r, int d);

/// The n^2 x n^2 matrix of A -> A^t on M_n with coordinate (s, c) at s*n + c.
Matrix transpose_map(int n, FieldSpec spec);

/// f o L for a form on n row-slots of dimension n, with L acting on the n^2
/// matrix coordinates. Throws PreconditionError if L has the wrong size or
/// the composition is not multilinear in the rows.
MultilinearForm matrix_space_map(const MultilinearForm& form, const Matrix& l);

/// Header "d n p" then one "i1,...,id : value" line per coefficient, 1-based
/// indices, p = 0 for the integer ring.
std::string to_text(const MultilinearForm& form);
MultilinearForm form_from_text(std::string_view text);
MultilinearForm read_form(LineReader& reader);

/// Bit-packed evaluation over F_2 (n <= 64): one mask over the last slot per
/// nonzero prefix tuple. Output-equivalent to evaluate().
class PackedF2Form {
 public:
  explicit PackedF2Form(const MultilinearForm& form);

  int evaluate(std::span<const std::uint64_t> points) const;

  static std::uint64_t pack(std::span<const Value> v);

 private:
  struct Row {
    std::vector<std::uint8_t> prefix;
    std::uint64_t mask;
  };
  int d_;
  int n_;
  std::vector<Row> rows_;
};

}  // namespace partrank
