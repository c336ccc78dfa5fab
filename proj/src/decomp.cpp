#include "partrank/decomp.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "partrank/error.hpp"
#include "partrank/text_io.hpp"

namespace partrank {

namespace {

std::vector<int> complement_of(const std::vector<int>& support, int d) {
  std::vector<int> out;
  for (int s = 0; s < d; ++s)
    if (!std::binary_search(support.begin(), support.end(), s)) out.push_back(s);
  return out;
}

std::string join_one_based(const std::vector<int>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + std::to_string(v[i] + 1);
  return out;
}

}  // namespace

Term Term::multilinear(int d, std::vector<int> support, MultilinearForm q, MultilinearForm r) {
  std::sort(support.begin(), support.end());
  if (support.empty() || static_cast<int>(support.size()) >= d) {
    throw PreconditionError("term support must be a nonempty proper subset of the slots");
  }
  if (std::adjacent_find(support.begin(), support.end()) != support.end() || support.front() < 0 ||
      support.back() >= d) {
    throw PreconditionError("term support has repeated or out-of-range slots");
  }
  if (q.degree() != static_cast<int>(support.size()) || r.degree() != d - q.degree()) {
    throw PreconditionError("term factor degrees do not match the support");
  }
  if (q.field() != r.field() || q.dim() != r.dim()) throw PreconditionError("term factors over different shapes");
  const auto k = static_cast<int>(support.size());
  if (2 * k > d || (2 * k == d && support.front() != 0)) {
    support = complement_of(support, d);
    std::swap(q, r);
  }
  Term t;
  t.d_ = d;
  t.support_ = std::move(support);
  t.q_ = std::move(q);
  t.r_ = std::move(r);
  return t;
}

Term Term::general(Polynomial q, Polynomial r) {
  if (q.field() != r.field() || q.slots() != r.slots() || q.dim() != r.dim()) {
    throw PreconditionError("term factors over different variable spaces");
  }
  const int d = q.slots();
  auto qv = q.as_multilinear();
  auto rv = r.as_multilinear();
  if (qv && rv && qv->slots.size() + rv->slots.size() == static_cast<std::size_t>(d)) {
    std::vector<int> all = qv->slots;
    all.insert(all.end(), rv->slots.begin(), rv->slots.end());
    std::sort(all.begin(), all.end());
    if (std::adjacent_find(all.begin(), all.end()) == all.end()) {
      return multilinear(d, qv->slots, std::move(qv->form), std::move(rv->form));
    }
  }
  Term t;
  t.d_ = d;
  t.qp_ = std::move(q);
  t.rp_ = std::move(r);
  return t;
}

int Term::dim() const noexcept { return q_ ? q_->dim() : qp_->dim(); }

const FieldSpec& Term::field() const noexcept { return q_ ? q_->field() : qp_->field(); }

std::vector<int> Term::complement() const {
  if (!q_) return {};
  return complement_of(support_, d_);
}

const MultilinearForm& Term::q() const {
  if (!q_) throw PreconditionError("general term has no multilinear factor");
  return *q_;
}

const MultilinearForm& Term::r() const {
  if (!r_) throw PreconditionError("general term has no multilinear factor");
  return *r_;
}

MultilinearForm Term::product() const { return product_form(q(), support_, r(), d_); }

Polynomial Term::q_polynomial() const {
  if (qp_) return *qp_;
  return Polynomial::from_form(*q_, support_, d_);
}

Polynomial Term::r_polynomial() const {
  if (rp_) return *rp_;
  return Polynomial::from_form(*r_, complement(), d_);
}

std::optional<int> Term::q_degree() const {
  if (q_) return static_cast<int>(support_.size());
  return qp_->degree();
}

Term Term::scaled(Value lambda) const {
  const FieldSpec& f = field();
  const Value inv = f.inv(f.from_int(lambda));
  if (q_) return multilinear(d_, support_, q_->scaled(lambda), r_->scaled(inv));
  return general(qp_->scaled(lambda), rp_->scaled(inv));
}

std::string kind_name(DecompKind kind) { return kind == DecompKind::slice ? "slice" : "partition"; }

DecompKind parse_kind(std::string_view text) {
  if (text == "slice") return DecompKind::slice;
  if (text == "partition") return DecompKind::partition;
  throw PreconditionError("unknown decomposition kind '" + std::string(text) + "'");
}

Decomposition::Decomposition(Shape shape, DecompKind kind, std::vector<Term> terms)
    : shape_(make_shape(shape.d, shape.n, shape.spec)), kind_(kind), terms_(std::move(terms)) {
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    const Term& t = terms_[i];
    if (t.slots() != shape_.d || t.dim() != shape_.n || t.field() != shape_.spec) {
      throw PreconditionError("term " + std::to_string(i + 1) + " does not match the decomposition shape");
    }
    if (kind_ == DecompKind::slice) {
      const auto deg = t.q_degree();
      if (deg && *deg != 1) {
        throw PreconditionError("slice term " + std::to_string(i + 1) + " has a non-linear first factor");
      }
      if (!deg && !t.q_polynomial().is_zero()) {
        throw PreconditionError("slice term " + std::to_string(i + 1) + " has an inhomogeneous first factor");
      }
    }
  }
}

bool Decomposition::is_multilinear() const noexcept {
  return std::all_of(terms_.begin(), terms_.end(), [](const Term& t) { return t.is_multilinear(); });
}

Polynomial expand_polynomial(const Decomposition& dec) {
  const Shape& s = dec.shape();
  Polynomial total(s.spec, s.d, s.n);
  for (const auto& t : dec.terms()) total = total + t.q_polynomial() * t.r_polynomial();
  return total;
}

MultilinearForm expand(const Decomposition& dec) {
  const Shape& s = dec.shape();
  if (dec.is_multilinear()) {
    std::vector<MultilinearForm::Entry> entries;
    for (const auto& t : dec.terms()) {
      const auto p = t.product();
      entries.insert(entries.end(), p.entries().begin(), p.entries().end());
    }
    return MultilinearForm::from_entries(s, std::move(entries));
  }
  const Polynomial total = expand_polynomial(dec);
  if (total.is_zero()) return MultilinearForm(s);
  auto view = total.as_multilinear();
  if (!view || static_cast<int>(view->slots.size()) != s.d) {
    throw PreconditionError("decomposition does not sum to a d-linear form");
  }
  return view->form;
}

VerifyResult verify(const Decomposition& dec, const MultilinearForm& target) {
  if (!(dec.shape() == target.shape())) throw PreconditionError("verify: decomposition and target shapes differ");
  VerifyResult result;
  if (!dec.is_multilinear()) {
    const Polynomial lhs = expand_polynomial(dec);
    const Polynomial rhs = Polynomial::from_form(target, [&] {
      std::vector<int> all(static_cast<std::size_t>(target.degree()));
      std::iota(all.begin(), all.end(), 0);
      return all;
    }(), target.degree());
    auto a = lhs.terms().begin();
    auto b = rhs.terms().begin();
    while (a != lhs.terms().end() || b != rhs.terms().end()) {
      if (b == rhs.terms().end() || (a != lhs.terms().end() && a->first < b->first)) {
        result.witness_text = monomial_to_string(a->first, target.dim());
        result.actual = a->second;
        return result;
      }
      if (a == lhs.terms().end() || b->first < a->first) {
        result.witness_text = monomial_to_string(b->first, target.dim());
        result.expected = b->second;
        return result;
      }
      if (a->second != b->second) {
        result.witness_text = monomial_to_string(a->first, target.dim());
        result.actual = a->second;
        result.expected = b->second;
        return result;
      }
      ++a;
      ++b;
    }
    result.verified = true;
    return result;
  }
  const MultilinearForm got = expand(dec);
  auto a = got.entries().begin();
  auto b = target.entries().begin();
  const auto a_end = got.entries().end();
  const auto b_end = target.entries().end();
  while (a != a_end || b != b_end) {
    MultilinearForm::Key key;
    if (b == b_end || (a != a_end && a->key < b->key)) {
      key = a->key;
    } else if (a == a_end || b->key < a->key) {
      key = b->key;
    } else if (a->value != b->value) {
      key = a->key;
    } else {
      ++a;
      ++b;
      continue;
    }
    result.witness = got.decode(key);
    result.witness_text = "(" + join_one_based(result.witness) + ")";
    result.actual = got.coefficient_at(key);
    result.expected = target.coefficient_at(key);
    return result;
  }
  result.verified = true;
  return result;
}

Decomposition laplace(int n, int row, FieldSpec spec) {
  if (n < 2) throw PreconditionError("laplace needs n >= 2");
  if (row < 0 || row >= n) throw PreconditionError("laplace: row out of range");
  std::vector<int> rest;
  for (int s = 0; s < n; ++s)
    if (s != row) rest.push_back(s);
  std::vector<Term> terms;
  for (int j = 0; j < n; ++j) {
    std::vector<int> cols;
    for (int c = 0; c < n; ++c)
      if (c != j) cols.push_back(c);
    const int sign = (row + j) % 2 == 0 ? 1 : -1;
    auto alpha = MultilinearForm::from_terms(make_shape(1, n, spec), {{{j}, sign}});
    terms.push_back(Term::multilinear(n, {row}, std::move(alpha), minor_form(cols, n, spec)));
  }
  return Decomposition(make_shape(n, n, spec), DecompKind::slice, std::move(terms));
}

Decomposition two_row_laplace(std::vector<int> rows, FieldSpec spec) {
  std::sort(rows.begin(), rows.end());
  if (rows.size() != 2 || rows[0] == rows[1] || rows[0] < 0 || rows[1] > 3) {
    throw PreconditionError("two_row_laplace needs two distinct rows of a 4x4 matrix");
  }
  std::vector<Term> terms;
  for (int j1 = 0; j1 < 4; ++j1)
    for (int j2 = j1 + 1; j2 < 4; ++j2) {
      std::vector<int> cols{j1, j2};
      std::vector<int> rest_cols;
      for (int c = 0; c < 4; ++c)
        if (c != j1 && c != j2) rest_cols.push_back(c);
      const int sign = (rows[0] + rows[1] + j1 + j2) % 2 == 0 ? 1 : -1;
      terms.push_back(Term::multilinear(4, rows, minor_form(cols, 4, spec).scaled(sign),
                                        minor_form(rest_cols, 4, spec)));
    }
  return Decomposition(make_shape(4, 4, spec), DecompKind::partition, std::move(terms));
}

namespace {

// sum_{i != j} sign(j - i) x_i y_j: the sum of all six 2x2 minors.
MultilinearForm all_minors_form(FieldSpec spec) {
  std::vector<std::pair<std::vector<int>, std::int64_t>> coeffs;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      if (i != j) coeffs.push_back({{i, j}, i < j ? 1 : -1});
  return MultilinearForm::from_terms(make_shape(2, 4, spec), coeffs);
}

}  // namespace

Decomposition det4_quadratic(FieldSpec spec) {
  const MultilinearForm m = all_minors_form(spec);
  std::vector<Term> terms;
  terms.push_back(Term::multilinear(4, {0, 1}, m, m));
  terms.push_back(Term::multilinear(4, {0, 2}, m.scaled(-1), m));
  terms.push_back(Term::multilinear(4, {0, 3}, m, m));
  return Decomposition(make_shape(4, 4, spec), DecompKind::partition, std::move(terms));
}

std::string step_name(const ReductionStep& step) {
  switch (step.index()) {
    case 0: return "linear";
    case 1: return "syzygy";
    default: return "symmetric";
  }
}

namespace {

Decomposition apply_linear(const Decomposition& dec, const LinearStep& step) {
  const Shape& s = dec.shape();
  const std::size_t r = dec.size();
  if (dec.kind() != DecompKind::slice) throw PreconditionError("linear reduction needs a slice decomposition");
  if (step.beta.size() != r) throw PreconditionError("linear reduction needs one beta per term");
  for (std::size_t j = 0; j < r; ++j) {
    const auto deg = step.beta[j].degree();
    if (!deg || *deg != 1) throw PreconditionError("beta_" + std::to_string(j + 1) + " is not a linear form");
  }
  const FieldSpec& f = s.spec;
  Matrix c(f, r, r);
  if (step.c) {
    if (step.c->rows() != r || step.c->cols() != r) throw PreconditionError("coefficient matrix must be r x r");
    c = *step.c;
    for (std::size_t i = 0; i < r; ++i) {
      Polynomial combo(f, s.d, s.n);
      for (std::size_t j = 0; j < r; ++j) combo = combo + step.beta[j].scaled(c(i, j));
      if (!(combo == dec.terms()[i].q_polynomial())) {
        throw PreconditionError("alpha_" + std::to_string(i + 1) + " != sum_j c(" + std::to_string(i + 1) +
                                ",j) beta_j");
      }
    }
  } else {
    if (!f.is_prime_field()) throw PreconditionError("solving for c needs a prime field; supply c explicitly");
    const auto vars = static_cast<std::size_t>(s.d * s.n);
    Matrix b(f, vars, r);
    for (std::size_t j = 0; j < r; ++j) {
      const Vector coeffs = step.beta[j].linear_coefficients();
      for (std::size_t v = 0; v < vars; ++v) b(v, j) = coeffs[v];
    }
    for (std::size_t i = 0; i < r; ++i) {
      const auto x = solve(b, dec.terms()[i].q_polynomial().linear_coefficients());
      if (!x) throw PreconditionError("alpha_" + std::to_string(i + 1) + " is not in the span of beta");
      for (std::size_t j = 0; j < r; ++j) c(i, j) = (*x)[j];
    }
  }
  std::vector<Term> terms;
  for (std::size_t j = 0; j < r; ++j) {
    Polynomial h(f, s.d, s.n);
    for (std::size_t i = 0; i < r; ++i) h = h + dec.terms()[i].r_polynomial().scaled(c(i, j));
    terms.push_back(Term::general(step.beta[j], std::move(h)));
  }
  return Decomposition(s, dec.kind(), std::move(terms));
}

Decomposition apply_syzygy(const Decomposition& dec, const SyzygyStep& step) {
  const Shape& s = dec.shape();
  const std::size_t r = dec.size();
  if (dec.kind() != DecompKind::slice) throw PreconditionError("syzygy reduction needs a slice decomposition");
  if (step.q.size() != r) throw PreconditionError("syzygy matrix must be r x r");
  for (std::size_t i = 0; i < r; ++i) {
    if (step.q[i].size() != r) throw PreconditionError("syzygy matrix must be r x r");
    if (!step.q[i][i].is_zero()) {
      throw PreconditionError("syzygy matrix is not alternating: q(" + std::to_string(i + 1) + "," +
                              std::to_string(i + 1) + ") != 0");
    }
  }
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < r; ++j) {
      const auto& qij = step.q[i][j];
      if (!(qij + step.q[j][i]).is_zero()) {
        throw PreconditionError("syzygy matrix is not alternating: q(" + std::to_string(i + 1) + "," +
                                std::to_string(j + 1) + ") != -q(" + std::to_string(j + 1) + "," +
                                std::to_string(i + 1) + ")");
      }
      if (!qij.is_zero() && qij.degree() != std::optional<int>(s.d - 2)) {
        throw PreconditionError("syzygy entries must be forms of degree d - 2");
      }
    }
  std::vector<Term> terms;
  for (std::size_t i = 0; i < r; ++i) {
    Polynomial h = dec.terms()[i].r_polynomial();
    for (std::size_t j = 0; j < r; ++j)
      if (!step.q[i][j].is_zero()) h = h - step.q[i][j] * dec.terms()[j].q_polynomial();
    terms.push_back(Term::general(dec.terms()[i].q_polynomial(), std::move(h)));
  }
  return Decomposition(s, dec.kind(), std::move(terms));
}

Decomposition apply_symmetric(const Decomposition& dec, const SymmetricStep& step) {
  const Shape& s = dec.shape();
  const Polynomial f = expand_polynomial(dec);
  const Polynomial fl = compose_linear(f, step.l);
  if (!(fl == f)) {
    const Polynomial diff = fl - f;
    const auto& [m, v] = *diff.terms().begin();
    throw PreconditionError("f o L != f: coefficients differ at " + monomial_to_string(m, s.n));
  }
  std::vector<Term> terms;
  for (const auto& t : dec.terms())
    terms.push_back(Term::general(compose_linear(t.q_polynomial(), step.l), compose_linear(t.r_polynomial(), step.l)));
  return Decomposition(s, dec.kind(), std::move(terms));
}

}  // namespace

Decomposition apply_reduction(const Decomposition& dec, const ReductionStep& step) {
  Decomposition out = std::visit(
      [&](const auto& payload) -> Decomposition {
        using T = std::decay_t<decltype(payload)>;
        if constexpr (std::is_same_v<T, LinearStep>) return apply_linear(dec, payload);
        else if constexpr (std::is_same_v<T, SyzygyStep>) return apply_syzygy(dec, payload);
        else return apply_symmetric(dec, payload);
      },
      step);
  if (!(expand_polynomial(out) == expand_polynomial(dec))) {
    throw InternalError(step_name(step) + " reduction changed the expanded form");
  }
  return out;
}

namespace {

std::optional<Value> ratio(const FieldSpec& f, Value from, Value to) {
  if (f.is_prime_field()) return f.mul(to, f.inv(from));
  if (to == from) return 1;
  if (to == -from) return -1;
  return std::nullopt;
}

bool terms_match(const Term& a, const Term& b) {
  if (a.support() != b.support()) return false;
  const Polynomial qa = a.q_polynomial(), qb = b.q_polynomial();
  if (qa.is_zero() || qb.is_zero()) {
    return qa.is_zero() && qb.is_zero() && a.r_polynomial() == b.r_polynomial();
  }
  const auto& [m, ca] = *qa.terms().begin();
  const auto it = qb.terms().find(m);
  if (it == qb.terms().end()) return false;
  const FieldSpec& f = a.field();
  const auto lambda = ratio(f, ca, it->second);
  if (!lambda) return false;
  return qa.scaled(*lambda) == qb && a.r_polynomial().scaled(f.inv(*lambda)) == b.r_polynomial();
}

}  // namespace

bool structurally_equal(const Decomposition& a, const Decomposition& b) {
  if (!(a.shape() == b.shape()) || a.kind() != b.kind() || a.size() != b.size()) return false;
  std::vector<bool> used(b.size(), false);
  for (const auto& ta : a.terms()) {
    bool found = false;
    for (std::size_t j = 0; j < b.size() && !found; ++j) {
      if (!used[j] && terms_match(ta, b.terms()[j])) {
        used[j] = true;
        found = true;
      }
    }
    if (!found) return false;
  }
  return true;
}

std::string to_text(const Decomposition& dec) {
  std::ostringstream out;
  const Shape& s = dec.shape();
  out << kind_name(dec.kind()) << ' ' << s.d << ' ' << s.n << ' ' << s.spec.modulus() << ' ' << dec.size() << '\n';
  for (const auto& t : dec.terms()) {
    if (t.is_multilinear()) {
      out << "I: " << join_one_based(t.support()) << '\n' << to_text(t.q()) << to_text(t.r());
    } else {
      out << "I: general\n" << to_text(t.q_polynomial()) << to_text(t.r_polynomial());
    }
  }
  return out.str();
}

Decomposition read_decomposition(LineReader& reader) {
  const auto header = split_whitespace(reader.next());
  if (header.size() != 5) reader.fail("decomposition header must be 'kind d n p r'");
  const DecompKind kind = parse_kind(header[0]);
  const int d = static_cast<int>(parse_int(header[1]));
  const int n = static_cast<int>(parse_int(header[2]));
  const FieldSpec spec = parse_field(header[3]);
  const auto r = parse_int(header[4]);
  if (r < 0) reader.fail("negative term count");
  const Shape shape = make_shape(d, n, spec);
  std::vector<Term> terms;
  for (std::int64_t i = 0; i < r; ++i) {
    if (reader.at_end()) reader.fail("expected " + std::to_string(r) + " terms");
    const std::string line = reader.next();
    if (line.rfind("I:", 0) != 0) reader.fail("expected a support line 'I: ...'");
    const std::string rest = trim(std::string_view(line).substr(2));
    if (rest == "general") {
      Polynomial q = read_polynomial(reader);
      Polynomial rp = read_polynomial(reader);
      terms.push_back(Term::general(std::move(q), std::move(rp)));
      continue;
    }
    std::vector<int> support;
    for (const auto& tok : split(rest, ',')) support.push_back(static_cast<int>(parse_int(tok)) - 1);
    MultilinearForm q = read_form(reader);
    MultilinearForm rf = read_form(reader);
    if (q.dim() != n || rf.dim() != n || q.field() != spec || rf.field() != spec) {
      reader.fail("factor shape does not match the header");
    }
    terms.push_back(Term::multilinear(d, std::move(support), std::move(q), std::move(rf)));
  }
  return Decomposition(shape, kind, std::move(terms));
}

Decomposition decomposition_from_text(std::string_view text) {
  LineReader reader(text);
  Decomposition dec = read_decomposition(reader);
  if (!reader.at_end()) reader.fail("trailing content after decomposition");
  return dec;
}

}  // namespace partrank
