#include "partrank/polynomial.hpp"

#include <algorithm>
#include <sstream>

#include "partrank/error.hpp"
#include "partrank/text_io.hpp"

namespace partrank {

Polynomial::Polynomial(FieldSpec spec, int d, int n) : spec_(spec), d_(d), n_(n) {
  if (d < 0 || n < 1 || d * n > 65535) throw PreconditionError("polynomial variable space out of range");
}

Polynomial Polynomial::from_form(const MultilinearForm& form, std::span<const int> slots, int d) {
  if (static_cast<int>(slots.size()) != form.degree()) {
    throw PreconditionError("from_form: slot list does not match the form degree");
  }
  for (int s : slots)
    if (s < 0 || s >= d) throw PreconditionError("from_form: slot out of range");
  Polynomial p(form.field(), d, form.dim());
  for (const auto& e : form.entries()) {
    const auto index = form.decode(e.key);
    Monomial m;
    m.reserve(index.size());
    for (std::size_t j = 0; j < index.size(); ++j)
      m.push_back(static_cast<std::uint16_t>(slots[j] * form.dim() + index[j]));
    std::sort(m.begin(), m.end());
    p.add_term(std::move(m), e.value);
  }
  return p;
}

Polynomial Polynomial::linear(FieldSpec spec, int d, int n, std::span<const Value> coeffs) {
  Polynomial p(spec, d, n);
  if (static_cast<int>(coeffs.size()) != p.num_vars()) {
    throw PreconditionError("linear polynomial needs one coefficient per variable");
  }
  for (std::size_t v = 0; v < coeffs.size(); ++v) p.add_term({static_cast<std::uint16_t>(v)}, coeffs[v]);
  return p;
}

std::optional<int> Polynomial::degree() const {
  if (terms_.empty()) return std::nullopt;
  const auto deg = terms_.begin()->first.size();
  for (const auto& [m, c] : terms_)
    if (m.size() != deg) return std::nullopt;
  return static_cast<int>(deg);
}

void Polynomial::add_term(Monomial monomial, Value coeff) {
  for (auto v : monomial)
    if (v >= num_vars()) throw PreconditionError("monomial variable out of range");
  std::sort(monomial.begin(), monomial.end());
  const Value c = spec_.from_int(coeff);
  if (c == 0) return;
  auto [it, inserted] = terms_.try_emplace(std::move(monomial), c);
  if (!inserted) {
    it->second = spec_.add(it->second, c);
    if (it->second == 0) terms_.erase(it);
  }
}

void Polynomial::require_compatible(const Polynomial& other) const {
  if (spec_ != other.spec_ || d_ != other.d_ || n_ != other.n_) {
    throw PreconditionError("polynomials live on different variable spaces");
  }
}

Polynomial Polynomial::operator+(const Polynomial& other) const {
  require_compatible(other);
  Polynomial out = *this;
  for (const auto& [m, c] : other.terms_) out.add_term(m, c);
  return out;
}

Polynomial Polynomial::operator-(const Polynomial& other) const {
  return *this + other.scaled(spec_.neg(spec_.from_int(1)));
}

Polynomial Polynomial::operator*(const Polynomial& other) const {
  require_compatible(other);
  Polynomial out(spec_, d_, n_);
  for (const auto& [ma, ca] : terms_)
    for (const auto& [mb, cb] : other.terms_) {
      Monomial m;
      m.reserve(ma.size() + mb.size());
      std::merge(ma.begin(), ma.end(), mb.begin(), mb.end(), std::back_inserter(m));
      out.add_term(std::move(m), spec_.mul(ca, cb));
    }
  return out;
}

Polynomial Polynomial::scaled(Value factor) const {
  Polynomial out(spec_, d_, n_);
  const Value c = spec_.from_int(factor);
  for (const auto& [m, v] : terms_) out.add_term(m, spec_.mul(v, c));
  return out;
}

Value Polynomial::evaluate(std::span<const Value> x) const {
  if (static_cast<int>(x.size()) != num_vars()) throw PreconditionError("evaluate: wrong number of variables");
  Value total = 0;
  for (const auto& [m, c] : terms_) {
    Value term = c;
    for (auto v : m) term = spec_.mul(term, spec_.from_int(x[v]));
    total = spec_.add(total, term);
  }
  return total;
}

std::optional<Polynomial::MultilinearView> Polynomial::as_multilinear() const {
  if (terms_.empty()) return std::nullopt;
  auto slot_set = [&](const Monomial& m) {
    std::vector<int> slots;
    for (auto v : m) slots.push_back(v / n_);
    return slots;  // sorted because m is sorted
  };
  const auto slots = slot_set(terms_.begin()->first);
  if (std::adjacent_find(slots.begin(), slots.end()) != slots.end()) return std::nullopt;
  MultilinearForm probe(make_shape(static_cast<int>(slots.size()), n_, spec_));
  std::vector<MultilinearForm::Entry> entries;
  for (const auto& [m, c] : terms_) {
    if (slot_set(m) != slots) return std::nullopt;
    std::vector<int> index;
    for (auto v : m) index.push_back(v % n_);
    entries.push_back({probe.encode(index), c});
  }
  return MultilinearView{slots, MultilinearForm::from_entries(probe.shape(), std::move(entries))};
}

Vector Polynomial::linear_coefficients() const {
  Vector out(static_cast<std::size_t>(num_vars()), 0);
  for (const auto& [m, c] : terms_) {
    if (m.size() > 1) throw PreconditionError("linear_coefficients of a polynomial of degree > 1");
    if (m.size() == 1) out[m[0]] = c;
  }
  return out;
}

Polynomial compose_linear(const Polynomial& p, const Matrix& l) {
  const auto vars = static_cast<std::size_t>(p.num_vars());
  if (l.rows() != vars || l.cols() != vars) {
    throw PreconditionError("compose_linear: map must be " + std::to_string(vars) + " x " +
                            std::to_string(vars));
  }
  if (l.spec() != p.field()) throw PreconditionError("compose_linear: map over a different domain");
  // Substitution x_v -> sum_w L(v, w) x_w, one linear polynomial per variable.
  std::vector<Polynomial> image;
  image.reserve(vars);
  for (std::size_t v = 0; v < vars; ++v) image.push_back(Polynomial::linear(p.field(), p.slots(), p.dim(), l.row(v)));
  Polynomial out(p.field(), p.slots(), p.dim());
  for (const auto& [m, c] : p.terms()) {
    Polynomial product(p.field(), p.slots(), p.dim());
    product.add_term({}, c);
    for (auto v : m) product = product * image[v];
    out = out + product;
  }
  return out;
}

std::string monomial_to_string(const Polynomial::Monomial& m, int n) {
  if (m.empty()) return "1";
  std::ostringstream out;
  for (std::size_t i = 0; i < m.size(); ++i)
    out << (i ? "*" : "") << 'x' << m[i] / n + 1 << '.' << m[i] % n + 1;
  return out.str();
}

std::string to_text(const Polynomial& p) {
  std::ostringstream out;
  out << "poly " << p.slots() << ' ' << p.dim() << ' ' << p.field().modulus() << '\n';
  for (const auto& [m, c] : p.terms()) {
    for (std::size_t i = 0; i < m.size(); ++i)
      out << (i ? "," : "") << m[i] / p.dim() + 1 << '.' << m[i] % p.dim() + 1;
    out << (m.empty() ? ": " : " : ") << p.field().to_string(c) << '\n';
  }
  return out.str();
}

Polynomial read_polynomial(LineReader& reader) {
  const auto header = split_whitespace(reader.next());
  if (header.size() != 4 || header[0] != "poly") reader.fail("polynomial header must be 'poly d n p'");
  const int d = static_cast<int>(parse_int(header[1]));
  const int n = static_cast<int>(parse_int(header[2]));
  const auto p = parse_int(header[3]);
  const FieldSpec spec = p == 0 ? FieldSpec::integers() : FieldSpec::prime(p);
  Polynomial poly(spec, d, n);
  while (!reader.at_end()) {
    const std::string& line = reader.peek();
    const auto colon = line.find(':');
    if (colon == std::string::npos || line.rfind("I:", 0) == 0) break;
    reader.next();
    const std::string lhs = trim(std::string_view(line).substr(0, colon));
    Polynomial::Monomial m;
    if (!lhs.empty()) {
      for (const auto& tok : split(lhs, ',')) {
        const auto parts = split(tok, '.');
        if (parts.size() != 2) reader.fail("variable must be written slot.coord");
        const auto s = parse_int(parts[0]) - 1, c = parse_int(parts[1]) - 1;
        if (s < 0 || s >= d || c < 0 || c >= n) reader.fail("variable out of range");
        m.push_back(static_cast<std::uint16_t>(s * n + c));
      }
    }
    const Value v = parse_int(trim(std::string_view(line).substr(colon + 1)));
    if (!spec.is_canonical(v) || v == 0) reader.fail("coefficient must be canonical and nonzero");
    poly.add_term(std::move(m), v);
  }
  return poly;
}

}  // namespace partrank
