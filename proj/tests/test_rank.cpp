#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "partrank/error.hpp"
#include "partrank/rank.hpp"

using namespace partrank;

namespace {

std::vector<std::int64_t> dense_of(const MultilinearForm& t) {
  auto d = t.dense();
  return {d.begin(), d.end()};
}

MultilinearForm random_form(std::mt19937_64& rng, int d, int n, std::int64_t q) {
  Shape s = make_shape(d, n, FieldSpec::prime(q));
  std::vector<Value> dense(s.index_count());
  for (auto& c : dense) c = static_cast<Value>(rng() % static_cast<std::uint64_t>(q));
  return MultilinearForm::from_dense(s, dense);
}

}  // namespace

TEST_CASE("bias of det_2 over F_2") {
  MultilinearForm det2 = det_form(2, FieldSpec::prime(2));
  int invertible = 0;
  oracle::for_each_vector(4, 2, [&](const std::vector<std::int64_t>& v) {
    invertible += oracle::leibniz_det({{v[0], v[1]}, {v[2], v[3]}}, 2) != 0;
  });
  CHECK(invertible == 6);
  BiasReport r = bias_exact(det2);
  CHECK(*r.bias == Rational(16 - 2 * invertible, 16));
  CHECK(*r.bias == Rational(1, 4));
  CHECK(*r.ark == doctest::Approx(2.0));
  CHECK(*r.ceil_ark == 2);
  CHECK(r.points == 16);
  CHECK(*bias_via_gradient(det2).bias == Rational(1, 4));
}

TEST_CASE("exact and gradient bias agree with brute force") {
  std::mt19937_64 rng(30);
  for (std::int64_t q : {2, 3}) {
    for (int t = 0; t < 50; ++t) {
      MultilinearForm form = random_form(rng, 3, 2, q);
      auto brute = oracle::brute_bias(dense_of(form), 3, 2, q);
      Rational expected(brute.num, brute.den);
      CHECK(*bias_exact(form).bias == expected);
      CHECK(*bias_via_gradient(form).bias == expected);
    }
  }
}

TEST_CASE("closed form for det_n") {
  BiasReport r = ark_det_closed_form(3, 2);
  CHECK(*r.bias == Rational(22, 64));
  CHECK(*r.ark == doctest::Approx(-std::log2(11.0 / 32)));
  CHECK(*r.ceil_ark == 2);
  for (int n = 2; n <= 4; ++n) CHECK(*bias_via_gradient(det_form(n, FieldSpec::prime(2))).bias == *ark_det_closed_form(n, 2).bias);
  CHECK(*bias_via_gradient(det_form(3, FieldSpec::prime(3))).bias == *ark_det_closed_form(3, 3).bias);
  for (int n = 2; n <= 12; ++n)
    for (std::int64_t q : {2, 3, 5, 7}) {
      BiasReport c = ark_det_closed_form(n, q);
      CHECK(*c.ceil_ark == 2);
      // q^{-2} <= bias < q^{-2} * q / (q - 1)
      CHECK(*c.bias >= rational_pow(q, -2));
      CHECK(*c.bias < rational_pow(q, -2) * Rational(q, q - 1));
    }
}

TEST_CASE("ceil_ark_exact") {
  CHECK(ceil_ark_exact(Rational(1), 2) == 0);
  CHECK(ceil_ark_exact(Rational(1, 2), 2) == 1);
  CHECK(ceil_ark_exact(Rational(11, 32), 2) == 2);
  CHECK(ceil_ark_exact(Rational(1, 4), 2) == 2);
  CHECK(ceil_ark_exact(Rational(1, 9) - Rational(1, 1000), 3) == 3);
}

TEST_CASE("Monte Carlo estimate is reproducible and covers the exact value") {
  MultilinearForm det3 = det_form(3, FieldSpec::prime(2));
  BiasReport a = bias_monte_carlo(det3, 100000, 7, 0.99, 1);
  BiasReport b = bias_monte_carlo(det3, 100000, 7, 0.99, 3);
  CHECK(a.estimate == b.estimate);
  CHECK(a.half_width == doctest::Approx(std::sqrt(std::log(2 / 0.01) / (2 * 100000.0))));
  CHECK(std::abs(a.estimate - 22.0 / 64) <= a.half_width);
  CHECK(*a.seed == 7);
  CHECK_FALSE(a.bias);
  CHECK(bias_monte_carlo(det3, 1000, 8).estimate != bias_monte_carlo(det3, 1000, 9).estimate);
}

TEST_CASE("budget") {
  MultilinearForm det4 = det_form(4, FieldSpec::prime(3));
  CHECK_THROWS_AS(bias_exact(det4, 1000), BudgetExceeded);
  try {
    bias_via_gradient(det4, 1000);
  } catch (const BudgetExceeded& e) {
    CHECK(std::string(e.what()).find("Monte-Carlo") != std::string::npos);
  }
}

TEST_CASE("value at a nontrivial point is uniform over all forms") {
  Shape s = make_shape(2, 2, FieldSpec::prime(2));
  UniformityReport r = uniformity_of_random_form({{1, 0}, {0, 1}}, s);
  CHECK(r.forms == 16);
  CHECK(r.counts == std::vector<std::uint64_t>{8, 8});
  CHECK(r.uniform);
  // Oracle: T(e1, e2) is the (1,2) coefficient.
  int zeros = 0;
  oracle::for_each_vector(4, 2, [&](const std::vector<std::int64_t>& c) { zeros += c[1] == 0; });
  CHECK(zeros == 8);

  UniformityReport r3 = uniformity_of_random_form({{1}, {2}}, make_shape(2, 1, FieldSpec::prime(3)));
  CHECK(r3.forms == 3);
  CHECK(r3.counts == std::vector<std::uint64_t>{1, 1, 1});
  CHECK_THROWS_AS(uniformity_of_random_form({{0, 0}, {0, 1}}, s), PreconditionError);
}

TEST_CASE("sampling helpers") {
  std::mt19937_64 rng(1);
  std::vector<int> hist(7, 0);
  for (int i = 0; i < 7000; ++i) ++hist[static_cast<std::size_t>(uniform_below(rng, 7))];
  for (int h : hist) CHECK(h > 800);
  CHECK(mix_seed(1, 2) != mix_seed(2, 1));
  CHECK(bounded_power(2, 10, 1024) == 1024u);
  CHECK_FALSE(bounded_power(2, 11, 1024));
}
