#include "partrank/multilinear.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <sstream>

#include "partrank/error.hpp"
#include "partrank/polynomial.hpp"
#include "partrank/text_io.hpp"

namespace partrank {

std::uint64_t Shape::index_count() const {
  std::uint64_t count = 1;
  for (int s = 0; s < d; ++s) {
    if (__builtin_mul_overflow(count, static_cast<std::uint64_t>(n), &count) ||
        count > (std::uint64_t{1} << 62)) {
      throw PreconditionError("shape n^d = " + std::to_string(n) + "^" + std::to_string(d) +
                              " is too large to index");
    }
  }
  return count;
}

Shape make_shape(int d, int n, FieldSpec spec) {
  if (d < 0) throw PreconditionError("number of slots must be non-negative");
  if (n < 1) throw PreconditionError("slot dimension must be positive");
  Shape s{d, n, spec};
  s.index_count();
  return s;
}

bool is_nontrivial(const PointTuple& x) noexcept {
  return std::none_of(x.begin(), x.end(), [](const Vector& v) { return is_zero_vector(v); });
}

MultilinearForm::MultilinearForm(Shape shape) : shape_(make_shape(shape.d, shape.n, shape.spec)) {}

MultilinearForm MultilinearForm::from_entries(Shape shape, std::vector<Entry> entries) {
  MultilinearForm form(shape);
  const std::uint64_t limit = form.shape_.index_count();
  const FieldSpec& f = form.shape_.spec;
  std::sort(entries.begin(), entries.end(),
            [](const Entry& a, const Entry& b) { return a.key < b.key; });
  for (std::size_t i = 0; i < entries.size();) {
    const Key key = entries[i].key;
    if (key >= limit) throw PreconditionError("coefficient key out of range");
    Value sum = f.from_int(entries[i].value);
    std::size_t j = i + 1;
    for (; j < entries.size() && entries[j].key == key; ++j) sum = f.add(sum, f.from_int(entries[j].value));
    if (sum != 0) form.entries_.push_back({key, sum});
    i = j;
  }
  return form;
}

MultilinearForm MultilinearForm::from_terms(
    Shape shape, const std::vector<std::pair<std::vector<int>, std::int64_t>>& terms) {
  MultilinearForm probe(shape);
  std::vector<Entry> entries;
  entries.reserve(terms.size());
  for (const auto& [index, value] : terms) entries.push_back({probe.encode(index), value});
  return from_entries(shape, std::move(entries));
}

MultilinearForm MultilinearForm::from_dense(Shape shape, std::span<const Value> dense) {
  MultilinearForm form(shape);
  if (dense.size() != form.shape_.index_count()) {
    throw PreconditionError("dense coefficient array has wrong length");
  }
  for (std::size_t k = 0; k < dense.size(); ++k) {
    const Value v = form.field().from_int(dense[k]);
    if (v != 0) form.entries_.push_back({k, v});
  }
  return form;
}

MultilinearForm::Key MultilinearForm::encode(std::span<const int> index) const {
  if (static_cast<int>(index.size()) != shape_.d) {
    throw PreconditionError("index tuple has " + std::to_string(index.size()) + " entries, expected " +
                            std::to_string(shape_.d));
  }
  Key key = 0;
  for (int i : index) {
    if (i < 0 || i >= shape_.n) {
      throw PreconditionError("index " + std::to_string(i) + " outside [0, " + std::to_string(shape_.n) + ")");
    }
    key = key * static_cast<Key>(shape_.n) + static_cast<Key>(i);
  }
  return key;
}

std::vector<int> MultilinearForm::decode(Key key) const {
  std::vector<int> index(static_cast<std::size_t>(shape_.d));
  for (int s = shape_.d - 1; s >= 0; --s) {
    index[static_cast<std::size_t>(s)] = static_cast<int>(key % static_cast<Key>(shape_.n));
    key /= static_cast<Key>(shape_.n);
  }
  return index;
}

Value MultilinearForm::coefficient_at(Key key) const {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), key,
                             [](const Entry& e, Key k) { return e.key < k; });
  return (it != entries_.end() && it->key == key) ? it->value : 0;
}

Value MultilinearForm::coefficient(std::span<const int> index) const {
  return coefficient_at(encode(index));
}

std::vector<Value> MultilinearForm::dense() const {
  std::vector<Value> out(shape_.index_count(), 0);
  for (const auto& e : entries_) out[e.key] = e.value;
  return out;
}

namespace {

void require_same_shape(const MultilinearForm& a, const MultilinearForm& b) {
  if (a.shape() != b.shape()) throw PreconditionError("forms have different shapes");
}

}  // namespace

MultilinearForm MultilinearForm::operator+(const MultilinearForm& other) const {
  require_same_shape(*this, other);
  std::vector<Entry> all(entries_);
  all.insert(all.end(), other.entries_.begin(), other.entries_.end());
  return from_entries(shape_, std::move(all));
}

MultilinearForm MultilinearForm::operator-(const MultilinearForm& other) const {
  return *this + (-other);
}

MultilinearForm MultilinearForm::operator-() const {
  MultilinearForm out(shape_);
  out.entries_ = entries_;
  for (auto& e : out.entries_) e.value = field().neg(e.value);
  return out;
}

MultilinearForm MultilinearForm::scaled(Value factor) const {
  const Value c = field().from_int(factor);
  std::vector<Entry> out;
  out.reserve(entries_.size());
  for (const auto& e : entries_) out.push_back({e.key, field().mul(e.value, c)});
  return from_entries(shape_, std::move(out));
}

int levi_civita(std::span<const int> indices) {
  const std::size_t d = indices.size();
  if (d == 2) {
    if (indices[0] < indices[1]) return 1;
    if (indices[0] > indices[1]) return -1;
    return 0;
  }
  std::vector<bool> seen(d, false);
  for (int i : indices) {
    if (i < 0 || static_cast<std::size_t>(i) >= d) {
      throw PreconditionError("Levi-Civita index " + std::to_string(i) + " outside [0, " +
                              std::to_string(d) + ")");
    }
    if (seen[static_cast<std::size_t>(i)]) return 0;
    seen[static_cast<std::size_t>(i)] = true;
  }
  int inversions = 0;
  for (std::size_t a = 0; a < d; ++a)
    for (std::size_t b = a + 1; b < d; ++b)
      if (indices[a] > indices[b]) ++inversions;
  return inversions % 2 == 0 ? 1 : -1;
}

IdentityReport check_4to2_identity(const Symbol4& four_symbol) {
  auto eps2 = [](int a, int b) {
    const int idx[2] = {a, b};
    return levi_civita(idx);
  };
  auto eps4 = [&](int i, int j, int k, int l) {
    if (four_symbol) return four_symbol(i, j, k, l);
    const int idx[4] = {i, j, k, l};
    return levi_civita(idx);
  };
  IdentityReport report;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k)
        for (int l = 0; l < 4; ++l) {
          const int lhs = eps4(i, j, k, l);
          const int rhs = eps2(i, j) * eps2(k, l) - eps2(i, k) * eps2(j, l) + eps2(i, l) * eps2(j, k);
          const bool distinct = i != j && i != k && i != l && j != k && j != l && k != l;
          ++report.total;
          (distinct ? report.permutations : report.degenerate) += 1;
          if (lhs == rhs) {
            ++report.passed;
            (distinct ? report.permutations_passed : report.degenerate_passed) += 1;
          } else {
            report.violations.push_back({{i, j, k, l}, lhs, rhs});
          }
        }
  return report;
}

MultilinearForm minor_form(std::span<const int> cols, int n, FieldSpec spec) {
  const int m = static_cast<int>(cols.size());
  const Shape shape = make_shape(m, n, spec);
  std::vector<int> perm(static_cast<std::size_t>(m));
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<MultilinearForm::Entry> entries;
  MultilinearForm probe(shape);
  std::vector<int> index(static_cast<std::size_t>(m));
  do {
    for (int s = 0; s < m; ++s) index[static_cast<std::size_t>(s)] = cols[static_cast<std::size_t>(perm[static_cast<std::size_t>(s)])];
    entries.push_back({probe.encode(index), levi_civita(perm)});
  } while (std::next_permutation(perm.begin(), perm.end()));
  return MultilinearForm::from_entries(shape, std::move(entries));
}

MultilinearForm det_form(int n, FieldSpec spec) {
  if (n < 1) throw PreconditionError("det_form needs n >= 1");
  std::vector<int> cols(static_cast<std::size_t>(n));
  std::iota(cols.begin(), cols.end(), 0);
  return minor_form(cols, n, spec);
}

namespace {

void check_points(const MultilinearForm& form, const PointTuple& x, std::size_t expected) {
  if (x.size() != expected) {
    throw PreconditionError("expected " + std::to_string(expected) + " vectors, got " +
                            std::to_string(x.size()));
  }
  for (const auto& v : x) {
    if (static_cast<int>(v.size()) != form.dim()) {
      throw PreconditionError("vector of length " + std::to_string(v.size()) +
                              " does not match slot dimension " + std::to_string(form.dim()));
    }
  }
}

PointTuple reduced(const FieldSpec& f, const PointTuple& x) {
  PointTuple out = x;
  for (auto& v : out)
    for (auto& c : v) c = f.from_int(c);
  return out;
}

}  // namespace

Scalar evaluate(const MultilinearForm& form, const PointTuple& x) {
  check_points(form, x, static_cast<std::size_t>(form.degree()));
  const FieldSpec& f = form.field();
  const PointTuple pts = reduced(f, x);
  Value total = 0;
  for (const auto& e : form.entries()) {
    const auto index = form.decode(e.key);
    Value term = e.value;
    for (std::size_t s = 0; s < index.size() && term != 0; ++s)
      term = f.mul(term, pts[s][static_cast<std::size_t>(index[s])]);
    total = f.add(total, term);
  }
  return Scalar(f, total);
}

MultilinearForm restrict(const MultilinearForm& form, std::span<const int> slots,
                         const PointTuple& vectors) {
  const int d = form.degree();
  if (slots.size() != vectors.size()) {
    throw PreconditionError("restrict: number of slots and vectors differ");
  }
  check_points(form, vectors, slots.size());
  std::vector<int> fixed_vector(static_cast<std::size_t>(d), -1);
  for (std::size_t i = 0; i < slots.size(); ++i) {
    const int s = slots[i];
    if (s < 0 || s >= d) throw PreconditionError("restrict: slot " + std::to_string(s) + " out of range");
    if (fixed_vector[static_cast<std::size_t>(s)] != -1) throw PreconditionError("restrict: slot repeated");
    fixed_vector[static_cast<std::size_t>(s)] = static_cast<int>(i);
  }
  const FieldSpec& f = form.field();
  const PointTuple pts = reduced(f, vectors);
  const Shape out_shape = make_shape(d - static_cast<int>(slots.size()), form.dim(), f);
  std::vector<MultilinearForm::Entry> entries;
  const auto n = static_cast<MultilinearForm::Key>(form.dim());
  for (const auto& e : form.entries()) {
    const auto index = form.decode(e.key);
    Value value = e.value;
    MultilinearForm::Key key = 0;
    for (int s = 0; s < d && value != 0; ++s) {
      const int which = fixed_vector[static_cast<std::size_t>(s)];
      if (which >= 0) {
        value = f.mul(value, pts[static_cast<std::size_t>(which)][static_cast<std::size_t>(index[static_cast<std::size_t>(s)])]);
      } else {
        key = key * n + static_cast<MultilinearForm::Key>(index[static_cast<std::size_t>(s)]);
      }
    }
    if (value != 0) entries.push_back({key, value});
  }
  return MultilinearForm::from_entries(out_shape, std::move(entries));
}

std::vector<MultilinearForm> gradient_form(const MultilinearForm& form) {
  if (form.degree() < 2) throw PreconditionError("gradient_form needs d >= 2");
  const int n = form.dim();
  const Shape out_shape = make_shape(form.degree() - 1, n, form.field());
  std::vector<std::vector<MultilinearForm::Entry>> parts(static_cast<std::size_t>(n));
  const auto nk = static_cast<MultilinearForm::Key>(n);
  for (const auto& e : form.entries()) parts[e.key % nk].push_back({e.key / nk, e.value});
  std::vector<MultilinearForm> out;
  out.reserve(static_cast<std::size_t>(n));
  for (auto& p : parts) out.push_back(MultilinearForm::from_entries(out_shape, std::move(p)));
  return out;
}

MultilinearForm compose_slot(const MultilinearForm& form, int slot, const Matrix& a) {
  const int n = form.dim();
  if (slot < 0 || slot >= form.degree()) throw PreconditionError("compose_slot: slot out of range");
  if (a.rows() != static_cast<std::size_t>(n) || a.cols() != static_cast<std::size_t>(n)) {
    throw PreconditionError("compose_slot: matrix must be n x n");
  }
  if (a.spec() != form.field()) throw PreconditionError("compose_slot: matrix over a different domain");
  const FieldSpec& f = form.field();
  // Place value of the slot in the packed key.
  MultilinearForm::Key stride = 1;
  for (int s = slot + 1; s < form.degree(); ++s) stride *= static_cast<MultilinearForm::Key>(n);
  std::vector<MultilinearForm::Entry> entries;
  for (const auto& e : form.entries()) {
    const auto i = static_cast<std::size_t>((e.key / stride) % static_cast<MultilinearForm::Key>(n));
    const MultilinearForm::Key base = e.key - i * stride;
    for (std::size_t j = 0; j < static_cast<std::size_t>(n); ++j) {
      const Value aij = a(i, j);
      if (aij != 0) entries.push_back({base + j * stride, f.mul(e.value, aij)});
    }
  }
  return MultilinearForm::from_entries(form.shape(), std::move(entries));
}

MultilinearForm compose_all(const MultilinearForm& form, const Matrix& a) {
  MultilinearForm out = form;
  for (int s = 0; s < form.degree(); ++s) out = compose_slot(out, s, a);
  return out;
}

MultilinearForm permute_slots(const MultilinearForm& form, std::span<const int> order) {
  const int d = form.degree();
  if (static_cast<int>(order.size()) != d) throw PreconditionError("permute_slots: order has wrong length");
  std::vector<bool> seen(static_cast<std::size_t>(d), false);
  for (int s : order) {
    if (s < 0 || s >= d || seen[static_cast<std::size_t>(s)]) {
      throw PreconditionError("permute_slots: order is not a permutation");
    }
    seen[static_cast<std::size_t>(s)] = true;
  }
  std::vector<MultilinearForm::Entry> entries;
  entries.reserve(form.size());
  std::vector<int> index(static_cast<std::size_t>(d));
  for (const auto& e : form.entries()) {
    const auto old = form.decode(e.key);
    for (int t = 0; t < d; ++t) index[static_cast<std::size_t>(t)] = old[static_cast<std::size_t>(order[static_cast<std::size_t>(t)])];
    entries.push_back({form.encode(index), e.value});
  }
  return MultilinearForm::from_entries(form.shape(), std::move(entries));
}

MultilinearForm drop_leading_coordinates(const MultilinearForm& form, int k) {
  if (k < 0 || k >= form.dim()) throw PreconditionError("drop_leading_coordinates: k out of range");
  const Shape out_shape = make_shape(form.degree(), form.dim() - k, form.field());
  MultilinearForm probe(out_shape);
  std::vector<MultilinearForm::Entry> entries;
  for (const auto& e : form.entries()) {
    auto index = form.decode(e.key);
    bool keep = true;
    for (auto& i : index) {
      if (i < k) {
        keep = false;
        break;
      }
      i -= k;
    }
    if (keep) entries.push_back({probe.encode(index), e.value});
  }
  return MultilinearForm::from_entries(out_shape, std::move(entries));
}

MultilinearForm product_form(const MultilinearForm& q, std::span<const int> support,
                             const MultilinearForm& r, int d) {
  if (q.field() != r.field() || q.dim() != r.dim()) {
    throw PreconditionError("product_form: factors over different shapes");
  }
  if (q.degree() != static_cast<int>(support.size()) || q.degree() + r.degree() != d) {
    throw PreconditionError("product_form: factor degrees do not match the support");
  }
  const int n = q.dim();
  const Shape shape = make_shape(d, n, q.field());
  std::vector<bool> in_support(static_cast<std::size_t>(d), false);
  for (int s : support) {
    if (s < 0 || s >= d || in_support[static_cast<std::size_t>(s)]) {
      throw PreconditionError("product_form: invalid support");
    }
    in_support[static_cast<std::size_t>(s)] = true;
  }
  std::vector<MultilinearForm::Key> place(static_cast<std::size_t>(d));
  MultilinearForm::Key p = 1;
  for (int s = d - 1; s >= 0; --s) {
    place[static_cast<std::size_t>(s)] = p;
    p *= static_cast<MultilinearForm::Key>(n);
  }
  std::vector<int> complement;
  for (int s = 0; s < d; ++s)
    if (!in_support[static_cast<std::size_t>(s)]) complement.push_back(s);
  auto spread = [&](const MultilinearForm& form, const std::vector<int>& slots) {
    std::vector<MultilinearForm::Key> keys;
    keys.reserve(form.size());
    for (const auto& e : form.entries()) {
      const auto index = form.decode(e.key);
      MultilinearForm::Key key = 0;
      for (std::size_t j = 0; j < slots.size(); ++j)
        key += static_cast<MultilinearForm::Key>(index[j]) * place[static_cast<std::size_t>(slots[j])];
      keys.push_back(key);
    }
    return keys;
  };
  const auto qkeys = spread(q, std::vector<int>(support.begin(), support.end()));
  const auto rkeys = spread(r, complement);
  const FieldSpec& f = q.field();
  std::vector<MultilinearForm::Entry> entries;
  entries.reserve(q.size() * r.size());
  for (std::size_t a = 0; a < q.size(); ++a)
    for (std::size_t b = 0; b < r.size(); ++b)
      entries.push_back({qkeys[a] + rkeys[b], f.mul(q.entries()[a].value, r.entries()[b].value)});
  return MultilinearForm::from_entries(shape, std::move(entries));
}

Matrix transpose_map(int n, FieldSpec spec) {
  const auto nn = static_cast<std::size_t>(n);
  Matrix l(spec, nn * nn, nn * nn);
  for (std::size_t s = 0; s < nn; ++s)
    for (std::size_t c = 0; c < nn; ++c) l(s * nn + c, c * nn + s) = 1;
  return l;
}

MultilinearForm matrix_space_map(const MultilinearForm& form, const Matrix& l) {
  const int n = form.dim();
  if (form.degree() != n) throw PreconditionError("matrix_space_map: form must have d == n row slots");
  const auto nn = static_cast<std::size_t>(n) * static_cast<std::size_t>(n);
  if (l.rows() != nn || l.cols() != nn) {
    throw PreconditionError("matrix_space_map: L must be " + std::to_string(nn) + " x " + std::to_string(nn));
  }
  std::vector<int> all(static_cast<std::size_t>(n));
  std::iota(all.begin(), all.end(), 0);
  const Polynomial composed = compose_linear(Polynomial::from_form(form, all, n), l);
  if (composed.is_zero()) return MultilinearForm(form.shape());
  auto view = composed.as_multilinear();
  if (!view || static_cast<int>(view->slots.size()) != n) {
    throw PreconditionError("matrix_space_map: f o L is not multilinear in the rows");
  }
  return view->form;
}

std::string to_text(const MultilinearForm& form) {
  std::ostringstream out;
  out << form.degree() << ' ' << form.dim() << ' ' << form.field().modulus() << '\n';
  for (const auto& e : form.entries()) {
    const auto index = form.decode(e.key);
    for (std::size_t s = 0; s < index.size(); ++s) out << (s ? "," : "") << index[s] + 1;
    out << (index.empty() ? ": " : " : ") << form.field().to_string(e.value) << '\n';
  }
  return out.str();
}

MultilinearForm read_form(LineReader& reader) {
  const auto header = split_whitespace(reader.next());
  if (header.size() != 3) reader.fail("form header must be 'd n p'");
  const int d = static_cast<int>(parse_int(header[0]));
  const int n = static_cast<int>(parse_int(header[1]));
  const auto p = parse_int(header[2]);
  const FieldSpec spec = p == 0 ? FieldSpec::integers() : FieldSpec::prime(p);
  const Shape shape = make_shape(d, n, spec);
  MultilinearForm probe(shape);
  std::vector<MultilinearForm::Entry> entries;
  while (!reader.at_end()) {
    const std::string& line = reader.peek();
    const auto colon = line.find(':');
    if (colon == std::string::npos || line.rfind("I:", 0) == 0) break;
    reader.next();
    const std::string lhs = trim(std::string_view(line).substr(0, colon));
    std::vector<int> index;
    if (!lhs.empty()) {
      for (const auto& tok : split(lhs, ',')) index.push_back(static_cast<int>(parse_int(tok)) - 1);
    }
    if (static_cast<int>(index.size()) != d) reader.fail("coefficient line has wrong number of indices");
    for (int i : index)
      if (i < 0 || i >= n) reader.fail("index out of range");
    const Value v = parse_int(trim(std::string_view(line).substr(colon + 1)));
    if (!spec.is_canonical(v)) reader.fail("coefficient is not a canonical representative");
    entries.push_back({probe.encode(index), v});
  }
  for (std::size_t i = 1; i < entries.size(); ++i) {
    if (entries[i - 1].key >= entries[i].key) reader.fail("coefficient lines must be sorted and unique");
  }
  for (const auto& e : entries)
    if (e.value == 0) reader.fail("zero coefficients are not stored");
  return MultilinearForm::from_entries(shape, std::move(entries));
}

MultilinearForm form_from_text(std::string_view text) {
  LineReader reader(text);
  MultilinearForm form = read_form(reader);
  if (!reader.at_end()) reader.fail("trailing content after form");
  return form;
}

PackedF2Form::PackedF2Form(const MultilinearForm& form) : d_(form.degree()), n_(form.dim()) {
  if (form.field().modulus() != 2) throw PreconditionError("PackedF2Form needs F_2");
  if (n_ > 64 || d_ < 1) throw PreconditionError("PackedF2Form needs 1 <= d and n <= 64");
  const auto nk = static_cast<MultilinearForm::Key>(n_);
  for (const auto& e : form.entries()) {
    const auto last = e.key % nk;
    const auto index = form.decode(e.key);
    std::vector<std::uint8_t> prefix(index.begin(), index.end() - 1);
    // Entries are key-sorted, so equal prefixes are adjacent.
    if (!rows_.empty() && rows_.back().prefix == prefix) {
      rows_.back().mask |= std::uint64_t{1} << last;
    } else {
      rows_.push_back({std::move(prefix), std::uint64_t{1} << last});
    }
  }
}

std::uint64_t PackedF2Form::pack(std::span<const Value> v) {
  std::uint64_t mask = 0;
  for (std::size_t i = 0; i < v.size(); ++i)
    if (v[i] & 1) mask |= std::uint64_t{1} << i;
  return mask;
}

int PackedF2Form::evaluate(std::span<const std::uint64_t> points) const {
  if (static_cast<int>(points.size()) != d_) throw PreconditionError("PackedF2Form: wrong number of points");
  int parity = 0;
  for (const auto& row : rows_) {
    bool on = true;
    for (std::size_t s = 0; s < row.prefix.size() && on; ++s) on = (points[s] >> row.prefix[s]) & 1;
    if (on) parity ^= std::popcount(row.mask & points.back()) & 1;
  }
  return parity;
}

}  // namespace partrank
