#include <doctest.h>

#include <random>
#include <set>

#include "oracles.hpp"
#include "partrank/error.hpp"
#include "partrank/linalg.hpp"

using namespace partrank;

namespace {

Matrix to_matrix(FieldSpec f, const oracle::Mat& a) {
  std::vector<Vector> rows;
  for (const auto& r : a) rows.emplace_back(r.begin(), r.end());
  return Matrix::from_rows(f, rows);
}

}  // namespace

TEST_CASE("rank agrees with the largest nonzero minor") {
  std::mt19937_64 rng(11);
  FieldSpec f = FieldSpec::prime(3);
  for (int t = 0; t < 40; ++t) {
    auto a = oracle::random_matrix(rng, 4, 5, 3);
    CHECK(rank(to_matrix(f, a)) == static_cast<std::size_t>(oracle::minor_rank(a, 3)));
  }
}

TEST_CASE("rank over the integers is the rank over Q") {
  oracle::Mat a{{2, 4, 6}, {1, 2, 3}, {0, 1, 5}};
  CHECK(rank(to_matrix(FieldSpec::integers(), a)) == 2);
  CHECK(rank(to_matrix(FieldSpec::prime(2), {{2, 0}, {0, 1}})) == 1);
}

TEST_CASE("determinant agrees with the Leibniz sum") {
  std::mt19937_64 rng(5);
  for (std::int64_t p : {2, 5, 7}) {
    for (int n = 1; n <= 5; ++n) {
      auto a = oracle::random_matrix(rng, n, n, p);
      CHECK(determinant(to_matrix(FieldSpec::prime(p), a)) == oracle::leibniz_det(a, p));
    }
  }
  oracle::Mat z{{3, -1, 2}, {0, 5, 1}, {4, 4, -2}};
  CHECK(determinant(to_matrix(FieldSpec::integers(), z)) == oracle::leibniz_det(z, 0));
}

TEST_CASE("kernel over F_2 equals the enumerated null space") {
  std::mt19937_64 rng(3);
  FieldSpec f = FieldSpec::prime(2);
  for (int n = 1; n <= 4; ++n) {
    for (int t = 0; t < 10; ++t) {
      auto a = oracle::random_matrix(rng, 3, n, 2);
      Matrix m = to_matrix(f, a);
      auto basis = kernel_basis(m);
      std::set<std::vector<std::int64_t>> span;
      for (std::uint32_t mask = 0; mask < (1u << basis.size()); ++mask) {
        std::vector<std::int64_t> v(static_cast<std::size_t>(n), 0);
        for (std::size_t b = 0; b < basis.size(); ++b)
          if (mask >> b & 1u)
            for (int i = 0; i < n; ++i) v[i] = (v[i] + basis[b][i]) % 2;
        span.insert(v);
      }
      std::set<std::vector<std::int64_t>> brute;
      oracle::for_each_vector(n, 2, [&](const std::vector<std::int64_t>& v) {
        bool zero = true;
        for (const auto& row : a) {
          std::int64_t s = 0;
          for (int i = 0; i < n; ++i) s += row[i] * v[i];
          zero = zero && s % 2 == 0;
        }
        if (zero) brute.insert(v);
      });
      CHECK(span == brute);
      CHECK(span.size() == (std::size_t{1} << basis.size()));
    }
  }
}

TEST_CASE("solve") {
  FieldSpec f = FieldSpec::prime(5);
  Matrix m = Matrix::from_rows(f, {{1, 2}, {3, 4}});
  Vector b{1, 1};
  auto x = solve(m, b);
  REQUIRE(x);
  CHECK(m.apply(*x) == b);
  Matrix s = Matrix::from_rows(f, {{1, 2}, {2, 4}});
  CHECK_FALSE(solve(s, b));
}

TEST_CASE("complete_to_sl") {
  FieldSpec f = FieldSpec::prime(2);
  Matrix a = complete_to_sl(f, {{1, 1, 0}, {0, 1, 1}}, 3);
  CHECK(a.column(0) == Vector{1, 1, 0});
  CHECK(a.column(1) == Vector{0, 1, 1});
  CHECK(determinant(a) == 1);

  FieldSpec f5 = FieldSpec::prime(5);
  std::mt19937_64 rng(9);
  for (int t = 0; t < 30; ++t) {
    auto v = oracle::random_matrix(rng, 2, 4, 5);
    std::vector<Vector> vs{Vector(v[0].begin(), v[0].end()), Vector(v[1].begin(), v[1].end())};
    if (rank_of(f5, vs, 4) < 2) {
      CHECK_THROWS_AS(complete_to_sl(f5, vs, 4), PreconditionError);
      continue;
    }
    Matrix b = complete_to_sl(f5, vs, 4);
    CHECK(oracle::leibniz_det(
              {{b(0, 0), b(0, 1), b(0, 2), b(0, 3)}, {b(1, 0), b(1, 1), b(1, 2), b(1, 3)},
               {b(2, 0), b(2, 1), b(2, 2), b(2, 3)}, {b(3, 0), b(3, 1), b(3, 2), b(3, 3)}},
              5) == 1);
    CHECK(b.column(0) == vs[0]);
    CHECK(b.column(1) == vs[1]);
  }
}

TEST_CASE("rank-deficient probability") {
  CHECK(rank_deficient_probability(2, 3, 2) == Rational(22, 64));
  // Brute count for 2 x 3 over F_2.
  int deficient = 0;
  oracle::for_each_vector(6, 2, [&](const std::vector<std::int64_t>& v) {
    oracle::Mat a{{v[0], v[1], v[2]}, {v[3], v[4], v[5]}};
    deficient += oracle::rows_dependent(a, 2);
  });
  CHECK(deficient == 22);
  for (int m = 1; m <= 8; ++m)
    for (int n = m; n <= 8; ++n)
      for (std::int64_t q : {2, 3, 5}) {
        Rational ratio = rank_deficient_probability(m, n, q) / rational_pow(q, -(n - m + 1));
        CHECK(ratio >= Rational(1));
        CHECK(ratio < Rational(q, q - 1));
      }
}
