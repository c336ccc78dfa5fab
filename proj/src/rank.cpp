#include "partrank/rank.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <random>
#include <thread>

#include "partrank/error.hpp"
#include "partrank/linalg.hpp"

namespace partrank {

std::string method_name(BiasMethod m) {
  switch (m) {
    case BiasMethod::full_enumeration: return "full-enumeration";
    case BiasMethod::gradient_count: return "gradient-count";
    case BiasMethod::closed_form: return "closed-form";
    case BiasMethod::monte_carlo: return "monte-carlo";
  }
  return "unknown";
}

std::optional<std::uint64_t> bounded_power(std::uint64_t base, std::uint64_t exp, std::uint64_t limit) {
  std::uint64_t v = 1;
  for (std::uint64_t i = 0; i < exp; ++i) {
    if (base != 0 && v > limit / base) return std::nullopt;
    v *= base;
  }
  if (v > limit) return std::nullopt;
  return v;
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

int ceil_ark_exact(const Rational& bias, std::int64_t q) {
  if (bias <= Rational(0)) throw PreconditionError("ceil_ark_exact needs a positive bias");
  int k = 0;
  while (bias < rational_pow(q, -k)) ++k;
  return k;
}

namespace {

struct DecodedEntry {
  std::vector<int> index;
  Value value;
};

std::vector<DecodedEntry> decode_all(const MultilinearForm& t) {
  std::vector<DecodedEntry> out;
  out.reserve(t.size());
  for (const auto& e : t.entries()) out.push_back({t.decode(e.key), e.value});
  return out;
}

void require_finite(const MultilinearForm& t, const char* who) {
  if (!t.field().is_prime_field()) throw PreconditionError(std::string(who) + " needs a finite field");
}

std::uint64_t require_budget(std::uint64_t q, std::uint64_t exp, std::uint64_t budget, const char* what,
                             const char* advice) {
  const auto v = bounded_power(q, exp, budget);
  if (!v) {
    const double estimate = std::pow(static_cast<double>(q), static_cast<double>(exp));
    throw BudgetExceeded(std::string(what) + " needs about " + approx_count(estimate) +
                             " points, above the budget of " + std::to_string(budget) + "; " + advice,
                         estimate);
  }
  return *v;
}

/// Advances digits base q as a counter; calls on_change(j) for every digit
/// that moved (each move is +1 mod q). Returns false after the final state.
template <class F>
bool odometer_step(std::vector<Value>& digits, Value q, F&& on_change) {
  for (std::size_t j = 0; j < digits.size(); ++j) {
    digits[j] = digits[j] + 1 == q ? 0 : digits[j] + 1;
    on_change(j);
    if (digits[j] != 0) return true;
  }
  return false;
}

void finish_exact(BiasReport& report, const Rational& bias) {
  report.bias = bias;
  report.estimate = bias.to_double();
  report.ark = -bias.log() / std::log(static_cast<double>(report.q));
  report.ceil_ark = ceil_ark_exact(bias, report.q);
  if (*report.ceil_ark == 0) report.ark = 0.0;
}

}  // namespace

BiasReport bias_exact(const MultilinearForm& t, std::uint64_t budget) {
  require_finite(t, "bias_exact");
  const int d = t.degree(), n = t.dim();
  if (d < 1) throw PreconditionError("bias_exact needs d >= 1");
  const FieldSpec& f = t.field();
  const Value q = f.modulus();
  const std::uint64_t total = require_budget(static_cast<std::uint64_t>(q), static_cast<std::uint64_t>(n) * d,
                                             budget, "full enumeration", "use the gradient or Monte-Carlo method");
  const auto entries = decode_all(t);
  std::vector<std::uint64_t> counts(static_cast<std::size_t>(q), 0);
  const auto un = static_cast<std::size_t>(n);
  std::vector<Value> prefix(un * static_cast<std::size_t>(d - 1), 0);
  Vector g(un);
  std::vector<Value> y(un);
  do {
    std::fill(g.begin(), g.end(), 0);
    for (const auto& e : entries) {
      Value v = e.value;
      for (int s = 0; s + 1 < d && v != 0; ++s)
        v = f.mul(v, prefix[static_cast<std::size_t>(s) * un + static_cast<std::size_t>(e.index[static_cast<std::size_t>(s)])]);
      auto& slot = g[static_cast<std::size_t>(e.index.back())];
      slot = f.add(slot, v);
    }
    std::fill(y.begin(), y.end(), 0);
    Value value = 0;
    do {
      ++counts[static_cast<std::size_t>(value)];
    } while (odometer_step(y, q, [&](std::size_t j) { value = f.add(value, g[j]); }));
  } while (odometer_step(prefix, q, [](std::size_t) {}));
  for (Value v = 2; v < q; ++v) {
    if (counts[static_cast<std::size_t>(v)] != counts[1]) {
      throw InternalError("Pr[T = y] depends on y != 0");
    }
  }
  BiasReport report;
  report.method = BiasMethod::full_enumeration;
  report.q = q;
  report.points = total;
  finish_exact(report, Rational(BigInt(counts[0]) - BigInt(counts[1]), BigInt(total)));
  return report;
}

namespace {

/// Number of x in F^n with sum_j x_j M[j] = 0, where M is n rows of length n.
std::uint64_t kernel_count(const FieldSpec& f, const std::vector<Vector>& m) {
  const std::size_t n = m.size();
  const Value q = f.modulus();
  if (q == 2 && n <= 63) {
    std::vector<std::uint64_t> rows(n, 0);
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k)
        if (m[j][k]) rows[j] |= std::uint64_t{1} << k;
    std::uint64_t g = 0, zero = 1;
    const std::uint64_t end = std::uint64_t{1} << n;
    for (std::uint64_t t = 1; t < end; ++t) {
      g ^= rows[static_cast<std::size_t>(std::countr_zero(t))];
      zero += g == 0;
    }
    return zero;
  }
  Vector g(n, 0);
  std::vector<Value> x(n, 0);
  std::size_t nonzero = 0;
  std::uint64_t zero = 0;
  do {
    zero += nonzero == 0;
  } while (odometer_step(x, q, [&](std::size_t j) {
    for (std::size_t k = 0; k < n; ++k) {
      if (m[j][k] == 0) continue;
      const Value before = g[k];
      g[k] = f.add(g[k], m[j][k]);
      nonzero += (before == 0) - (g[k] == 0);
    }
  }));
  return zero;
}

}  // namespace

BiasReport bias_via_gradient(const MultilinearForm& t, std::uint64_t budget) {
  require_finite(t, "bias_via_gradient");
  const int d = t.degree(), n = t.dim();
  if (d < 2) throw PreconditionError("bias_via_gradient needs d >= 2");
  const FieldSpec& f = t.field();
  const Value q = f.modulus();
  const std::uint64_t total =
      require_budget(static_cast<std::uint64_t>(q), static_cast<std::uint64_t>(n) * (d - 1), budget,
                     "gradient counting", "use the Monte-Carlo method");
  const auto entries = decode_all(t);
  const auto un = static_cast<std::size_t>(n);
  std::vector<Value> prefix(un * static_cast<std::size_t>(d - 2), 0);
  std::vector<Vector> m(un, Vector(un));
  std::uint64_t zero = 0;
  do {
    for (auto& row : m) std::fill(row.begin(), row.end(), 0);
    for (const auto& e : entries) {
      Value v = e.value;
      for (int s = 0; s + 2 < d && v != 0; ++s)
        v = f.mul(v, prefix[static_cast<std::size_t>(s) * un + static_cast<std::size_t>(e.index[static_cast<std::size_t>(s)])]);
      auto& cell = m[static_cast<std::size_t>(e.index[static_cast<std::size_t>(d - 2)])]
                    [static_cast<std::size_t>(e.index[static_cast<std::size_t>(d - 1)])];
      cell = f.add(cell, v);
    }
    zero += kernel_count(f, m);
  } while (odometer_step(prefix, q, [](std::size_t) {}));
  BiasReport report;
  report.method = BiasMethod::gradient_count;
  report.q = q;
  report.points = total;
  finish_exact(report, Rational(BigInt(zero), BigInt(total)));
  return report;
}

BiasReport ark_det_closed_form(int n, std::int64_t q) {
  if (n < 2) throw PreconditionError("ark_det_closed_form needs n >= 2");
  if (q < 2) throw PreconditionError("ark_det_closed_form needs q >= 2");
  const Rational bias = rank_deficient_probability(n - 1, n, q);
  BiasReport report;
  report.method = BiasMethod::closed_form;
  report.q = q;
  finish_exact(report, bias);
  if (!(rational_pow(q, -2) <= bias && bias < rational_pow(q, -1))) {
    throw InternalError("ark(det_n) outside (1, 2]");
  }
  return report;
}

double hoeffding_half_width(std::uint64_t samples, double confidence) {
  return std::sqrt(std::log(2.0 / (1.0 - confidence)) / (2.0 * static_cast<double>(samples)));
}

Value uniform_below(std::mt19937_64& rng, Value q) {
  const auto uq = static_cast<std::uint64_t>(q);
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % uq;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return static_cast<Value>(x % uq);
}

namespace {

constexpr std::uint64_t kBlock = 4096;

}  // namespace

BiasReport bias_monte_carlo(const MultilinearForm& t, std::uint64_t samples, std::uint64_t seed,
                            double confidence, unsigned workers) {
  require_finite(t, "bias_monte_carlo");
  const int d = t.degree(), n = t.dim();
  if (d < 2) throw PreconditionError("bias_monte_carlo needs d >= 2");
  if (samples < 1) throw PreconditionError("bias_monte_carlo needs at least one sample");
  if (!(confidence > 0 && confidence < 1)) throw PreconditionError("confidence must lie in (0, 1)");
  const FieldSpec& f = t.field();
  const Value q = f.modulus();
  const auto entries = decode_all(t);
  const auto un = static_cast<std::size_t>(n);
  const std::uint64_t blocks = (samples + kBlock - 1) / kBlock;
  workers = std::max(1u, workers);
  std::vector<std::uint64_t> hits(workers, 0);
  auto run = [&](unsigned w) {
    std::vector<Value> x(un * static_cast<std::size_t>(d - 1));
    Vector g(un);
    for (std::uint64_t b = w; b < blocks; b += workers) {
      std::mt19937_64 rng(mix_seed(seed, b));
      const std::uint64_t count = std::min(kBlock, samples - b * kBlock);
      for (std::uint64_t i = 0; i < count; ++i) {
        for (auto& c : x) c = uniform_below(rng, q);
        std::fill(g.begin(), g.end(), 0);
        for (const auto& e : entries) {
          Value v = e.value;
          for (int s = 0; s + 1 < d && v != 0; ++s)
            v = f.mul(v, x[static_cast<std::size_t>(s) * un + static_cast<std::size_t>(e.index[static_cast<std::size_t>(s)])]);
          auto& slot = g[static_cast<std::size_t>(e.index.back())];
          slot = f.add(slot, v);
        }
        hits[w] += is_zero_vector(g);
      }
    }
  };
  if (workers == 1) {
    run(0);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(run, w);
  }
  std::uint64_t total = 0;
  for (auto h : hits) total += h;
  BiasReport report;
  report.method = BiasMethod::monte_carlo;
  report.q = q;
  report.samples = samples;
  report.points = samples;
  report.seed = seed;
  report.confidence = confidence;
  report.estimate = static_cast<double>(total) / static_cast<double>(samples);
  report.half_width = hoeffding_half_width(samples, confidence);
  if (total > 0) report.ark = total == samples ? 0.0 : -std::log(report.estimate) / std::log(static_cast<double>(q));
  return report;
}

UniformityReport uniformity_of_random_form(const PointTuple& x, const Shape& shape, std::uint64_t budget) {
  if (!shape.spec.is_prime_field()) throw PreconditionError("uniformity needs a finite field");
  if (static_cast<int>(x.size()) != shape.d) throw PreconditionError("point must have one vector per slot");
  for (const auto& v : x)
    if (static_cast<int>(v.size()) != shape.n) throw PreconditionError("point vector has the wrong dimension");
  const FieldSpec& f = shape.spec;
  PointTuple pts = x;
  for (auto& v : pts)
    for (auto& c : v) c = f.from_int(c);
  if (!is_nontrivial(pts)) throw PreconditionError("point is trivial: some x^(i) = 0");
  const Value q = f.modulus();
  const std::uint64_t cells = shape.index_count();
  const std::uint64_t forms = require_budget(static_cast<std::uint64_t>(q), cells, budget, "form enumeration",
                                             "choose a smaller shape");
  // Weight of coefficient c_idx at x, in row-major index order.
  MultilinearForm probe(shape);
  Vector w(static_cast<std::size_t>(cells));
  for (std::uint64_t key = 0; key < cells; ++key) {
    const auto index = probe.decode(key);
    Value v = 1;
    for (std::size_t s = 0; s < index.size(); ++s) v = f.mul(v, pts[s][static_cast<std::size_t>(index[s])]);
    w[static_cast<std::size_t>(key)] = v;
  }
  UniformityReport report;
  report.counts.assign(static_cast<std::size_t>(q), 0);
  report.forms = forms;
  std::vector<Value> coeffs(static_cast<std::size_t>(cells), 0);
  Value value = 0;
  do {
    ++report.counts[static_cast<std::size_t>(value)];
  } while (odometer_step(coeffs, q, [&](std::size_t j) { value = f.add(value, w[j]); }));
  report.uniform = std::all_of(report.counts.begin(), report.counts.end(),
                               [&](std::uint64_t c) { return c == report.counts[0]; });
  return report;
}

}  // namespace partrank
