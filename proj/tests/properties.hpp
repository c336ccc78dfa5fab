#pragma once
// Property checks shared by the standalone suite and the acceptance run.
// Each returns the number of failing cases.

#include <random>

#include "oracles.hpp"
#include "partrank/decomp.hpp"
#include "partrank/rank.hpp"
#include "partrank/records.hpp"
#include "partrank/reduction_demos.hpp"

namespace props {

using namespace partrank;

inline MultilinearForm random_form(std::mt19937_64& rng, int d, int n, FieldSpec f) {
  Shape s = make_shape(d, n, f);
  std::vector<Value> dense(s.index_count());
  for (auto& c : dense) c = static_cast<Value>(rng() % static_cast<std::uint64_t>(f.modulus()));
  return MultilinearForm::from_dense(s, dense);
}

inline Vector random_vector(std::mt19937_64& rng, int n, FieldSpec f) {
  Vector v(static_cast<std::size_t>(n));
  for (auto& c : v) c = static_cast<Value>(rng() % static_cast<std::uint64_t>(f.modulus()));
  return v;
}

inline int multilinearity(std::uint64_t seed, int trials = 200) {
  std::mt19937_64 rng(seed);
  int failures = 0;
  for (int t = 0; t < trials; ++t) {
    FieldSpec f = FieldSpec::prime(t % 2 ? 5 : 3);
    const int d = 2 + t % 3, n = 2 + t % 2;
    MultilinearForm form = random_form(rng, d, n, f);
    PointTuple x;
    for (int s = 0; s < d; ++s) x.push_back(random_vector(rng, n, f));
    const int slot = static_cast<int>(rng() % static_cast<std::uint64_t>(d));
    Vector u = random_vector(rng, n, f);
    const Value a = static_cast<Value>(rng() % static_cast<std::uint64_t>(f.modulus()));
    const Value b = static_cast<Value>(rng() % static_cast<std::uint64_t>(f.modulus()));
    PointTuple xu = x, xs = x;
    xu[static_cast<std::size_t>(slot)] = u;
    for (int c = 0; c < n; ++c)
      xs[static_cast<std::size_t>(slot)][static_cast<std::size_t>(c)] =
          f.add(f.mul(a, x[static_cast<std::size_t>(slot)][static_cast<std::size_t>(c)]), f.mul(b, u[static_cast<std::size_t>(c)]));
    const Value lhs = evaluate(form, xs).value();
    const Value rhs = f.add(f.mul(a, evaluate(form, x).value()), f.mul(b, evaluate(form, xu).value()));
    failures += lhs != rhs;
  }
  return failures;
}

inline int alternating_det(std::uint64_t seed, int trials = 200) {
  std::mt19937_64 rng(seed);
  int failures = 0;
  FieldSpec f = FieldSpec::prime(7);
  for (int t = 0; t < trials; ++t) {
    const int n = 2 + t % 4;
    MultilinearForm det = det_form(n, f);
    PointTuple x;
    for (int s = 0; s < n; ++s) x.push_back(random_vector(rng, n, f));
    const auto i = static_cast<std::size_t>(rng() % static_cast<std::uint64_t>(n));
    auto j = static_cast<std::size_t>(rng() % static_cast<std::uint64_t>(n - 1));
    if (j >= i) ++j;
    PointTuple swapped = x, equal = x;
    std::swap(swapped[i], swapped[j]);
    equal[j] = equal[i];
    failures += evaluate(det, swapped).value() != f.neg(evaluate(det, x).value());
    failures += !evaluate(det, equal).is_zero();
  }
  return failures;
}

inline int gradient_pairing(std::uint64_t seed, int trials = 100) {
  std::mt19937_64 rng(seed);
  int failures = 0;
  FieldSpec f = FieldSpec::prime(3);
  for (int t = 0; t < trials; ++t) {
    MultilinearForm form = random_form(rng, 3, 3, f);
    PointTuple x{random_vector(rng, 3, f), random_vector(rng, 3, f), random_vector(rng, 3, f)};
    auto grad = gradient_form(form);
    Value rhs = 0;
    for (int i = 0; i < 3; ++i) rhs = f.add(rhs, f.mul(x[2][static_cast<std::size_t>(i)], evaluate(grad[static_cast<std::size_t>(i)], {x[0], x[1]}).value()));
    failures += evaluate(form, x).value() != rhs;
  }
  return failures;
}

// Every one of the 16 forms with d = n = q = 2.
inline int bias_methods_agree() {
  int failures = 0;
  FieldSpec f = FieldSpec::prime(2);
  oracle::for_each_vector(4, 2, [&](const std::vector<std::int64_t>& c) {
    std::vector<Value> dense(c.begin(), c.end());
    MultilinearForm form = MultilinearForm::from_dense(make_shape(2, 2, f), dense);
    auto brute = oracle::brute_bias(c, 2, 2, 2);
    Rational expected(brute.num, brute.den);
    failures += !(*bias_exact(form).bias == expected);
    failures += !(*bias_via_gradient(form).bias == expected);
  });
  return failures;
}

inline int reduction_traces() {
  int failures = 0;
  for (const auto& script : {demo_linear_roundtrip(FieldSpec::prime(5)), demo_linear_roundtrip(FieldSpec::prime(7)),
                             demo_transpose(FieldSpec::integers()), demo_transpose(FieldSpec::prime(3)),
                             demo_syzygy(FieldSpec::prime(5), 1), demo_syzygy(FieldSpec::prime(5), 2)}) {
    ScriptTrace t = run_script(script);
    failures += !t.ok();
    for (const auto& d : t.decompositions) failures += !verify(d, script.target).verified;
  }
  return failures;
}

inline int minor_independence() {
  int failures = 0;
  for (int a = 0; a < 4; ++a)
    for (int b = a + 1; b < 4; ++b) failures += check_minor_independence({a, b}).rank != 6;
  failures += check_minor_independence({0, 1}, true).rank != 5;
  return failures;
}

inline int round_trips(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  int failures = 0;
  for (int t = 0; t < 20; ++t) {
    MultilinearForm form = random_form(rng, 2 + t % 3, 2, FieldSpec::prime(t % 2 ? 2 : 7));
    failures += !(form_from_text(to_text(form)) == form);
  }
  const FieldSpec z = FieldSpec::integers();
  for (const auto& dec : {laplace(5, 3, z), two_row_laplace({0, 3}, z), det4_quadratic(FieldSpec::prime(3))})
    failures += to_text(decomposition_from_text(to_text(dec))) != to_text(dec);
  ScriptTrace t = run_script(demo_syzygy(FieldSpec::prime(5), 9));
  for (const auto& dec : t.decompositions) failures += to_text(decomposition_from_text(to_text(dec))) != to_text(dec);
  for (const auto& s : {demo_linear_roundtrip(FieldSpec::prime(5)), demo_syzygy(FieldSpec::prime(5), 9)})
    failures += to_text(parse_script(to_text(s))) != to_text(s);
  EnsembleParams p;
  p.c_values = {2, 5};
  failures += !(record(params_from_json(record(p))) == record(p));
  return failures;
}

}  // namespace props
