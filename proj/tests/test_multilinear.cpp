#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "oracles.hpp"
#include "partrank/error.hpp"
#include "partrank/linalg.hpp"
#include "partrank/multilinear.hpp"

using namespace partrank;

namespace {

PointTuple rows_of(const oracle::Mat& a) {
  PointTuple x;
  for (const auto& r : a) x.emplace_back(r.begin(), r.end());
  return x;
}

MultilinearForm random_form(std::mt19937_64& rng, int d, int n, std::int64_t q) {
  Shape s = make_shape(d, n, FieldSpec::prime(q));
  std::vector<Value> dense(s.index_count());
  for (auto& c : dense) c = static_cast<Value>(rng() % static_cast<std::uint64_t>(q));
  return MultilinearForm::from_dense(s, dense);
}

Vector random_vector(std::mt19937_64& rng, int n, std::int64_t q) {
  Vector v(static_cast<std::size_t>(n));
  for (auto& c : v) c = static_cast<Value>(rng() % static_cast<std::uint64_t>(q));
  return v;
}

}  // namespace

TEST_CASE("levi_civita matches inversion and transposition counts") {
  std::vector<int> p{0, 1, 2, 3};
  CHECK(levi_civita(p) == 1);
  int count = 0;
  do {
    ++count;
    CHECK(levi_civita(p) == oracle::inversion_sign(p));
    CHECK(levi_civita(p) == oracle::transposition_sign(p));
  } while (std::next_permutation(p.begin(), p.end()));
  CHECK(count == 24);
  std::vector<int> rep{0, 0, 2, 3};
  CHECK(levi_civita(rep) == 0);
  std::vector<int> two{3, 1};
  CHECK(levi_civita(two) == -1);
}

TEST_CASE("4-to-2 identity") {
  IdentityReport r = check_4to2_identity();
  CHECK(r.total == 256);
  CHECK(r.passed == 256);
  CHECK(r.permutations == 24);
  CHECK(r.degenerate == 256 - 24);
  CHECK(r.ok());

  auto flipped = [](int i, int j, int k, int l) {
    std::vector<int> idx{i, j, k, l};
    return i == 0 && j == 1 && k == 2 && l == 3 ? -1 : levi_civita(idx);
  };
  IdentityReport bad = check_4to2_identity(flipped);
  CHECK_FALSE(bad.ok());
  REQUIRE(bad.violations.size() == 1);
  CHECK(bad.violations[0].indices == std::vector<int>{0, 1, 2, 3});
}

TEST_CASE("det_form evaluates to the Leibniz determinant") {
  std::mt19937_64 rng(20);
  FieldSpec f = FieldSpec::prime(5);
  MultilinearForm det3 = det_form(3, f);
  CHECK(det3.size() == 6);
  for (int t = 0; t < 20; ++t) {
    auto a = oracle::random_matrix(rng, 3, 3, 5);
    CHECK(evaluate(det3, rows_of(a)).value() == oracle::leibniz_det(a, 5));
  }
}

TEST_CASE("det_3 over F_2 vanishes on 512 - |GL_3(F_2)| row triples") {
  MultilinearForm det3 = det_form(3, FieldSpec::prime(2));
  int zeros = 0;
  oracle::for_each_vector(9, 2, [&](const std::vector<std::int64_t>& v) {
    oracle::Mat a{{v[0], v[1], v[2]}, {v[3], v[4], v[5]}, {v[6], v[7], v[8]}};
    zeros += evaluate(det3, rows_of(a)).is_zero();
  });
  CHECK(zeros == 512 - (8 - 1) * (8 - 2) * (8 - 4));
}

TEST_CASE("restricting det_3 at e_1 gives det_2 on the last two coordinates") {
  FieldSpec z = FieldSpec::integers();
  std::vector<int> slots{0};
  MultilinearForm r = restrict(det_form(3, z), slots, {{1, 0, 0}});
  MultilinearForm expected = MultilinearForm::from_terms(make_shape(2, 3, z), {{{1, 2}, 1}, {{2, 1}, -1}});
  CHECK(r == expected);
  CHECK(drop_leading_coordinates(r, 1) == det_form(2, z));
}

TEST_CASE("gradient of det_n is the signed column minors") {
  for (int n = 2; n <= 5; ++n) {
    FieldSpec z = FieldSpec::integers();
    auto grad = gradient_form(det_form(n, z));
    REQUIRE(grad.size() == static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
      std::vector<int> cols;
      for (int c = 0; c < n; ++c)
        if (c != j) cols.push_back(c);
      MultilinearForm minor = minor_form(cols, n, z);
      // 1-based sign (-1)^{n + j}.
      CHECK(grad[j] == ((n + j + 1) % 2 ? minor.scaled(-1) : minor));
    }
  }
}

TEST_CASE("gradient pairing") {
  std::mt19937_64 rng(1);
  for (int t = 0; t < 100; ++t) {
    MultilinearForm form = random_form(rng, 3, 3, 3);
    PointTuple x{random_vector(rng, 3, 3), random_vector(rng, 3, 3), random_vector(rng, 3, 3)};
    auto grad = gradient_form(form);
    std::int64_t rhs = 0;
    for (int i = 0; i < 3; ++i) rhs += x[2][i] * evaluate(grad[i], {x[0], x[1]}).value();
    CHECK(evaluate(form, x).value() == rhs % 3);
  }
}

TEST_CASE("compose_all scales det_n by det A") {
  std::mt19937_64 rng(2);
  FieldSpec f = FieldSpec::prime(5);
  for (int t = 0; t < 20; ++t) {
    auto a = oracle::random_matrix(rng, 3, 3, 5);
    Matrix m = Matrix::from_rows(f, {{a[0].begin(), a[0].end()}, {a[1].begin(), a[1].end()}, {a[2].begin(), a[2].end()}});
    CHECK(compose_all(det_form(3, f), m) == det_form(3, f).scaled(determinant(m)));
  }
  FieldSpec f2 = FieldSpec::prime(2);
  int sl = 0;
  oracle::for_each_vector(9, 2, [&](const std::vector<std::int64_t>& v) {
    Matrix m = Matrix::from_rows(f2, {{v[0], v[1], v[2]}, {v[3], v[4], v[5]}, {v[6], v[7], v[8]}});
    bool unimodular = oracle::leibniz_det({{v[0], v[1], v[2]}, {v[3], v[4], v[5]}, {v[6], v[7], v[8]}}, 2) == 1;
    sl += unimodular;
    CHECK((compose_all(det_form(3, f2), m) == det_form(3, f2)) == unimodular);
  });
  CHECK(sl == 168);
}

TEST_CASE("matrix space maps") {
  FieldSpec z = FieldSpec::integers();
  for (int n = 2; n <= 4; ++n) CHECK(matrix_space_map(det_form(n, z), transpose_map(n, z)) == det_form(n, z));

  FieldSpec f = FieldSpec::prime(5);
  Matrix l = Matrix::identity(f, 9);
  for (int c = 0; c < 3; ++c) l(c, c) = 2;
  Matrix scale = Matrix::identity(f, 3);
  for (int c = 0; c < 3; ++c) scale(c, c) = 2;
  MultilinearForm mapped = matrix_space_map(det_form(3, f), l);
  CHECK(mapped == det_form(3, f).scaled(2));
  CHECK(mapped == compose_slot(det_form(3, f), 0, scale));
}

TEST_CASE("permute_slots of det_n multiplies by the sign") {
  FieldSpec z = FieldSpec::integers();
  std::vector<int> order{1, 2, 0, 3};
  do {
    CHECK(permute_slots(det_form(4, z), order) == det_form(4, z).scaled(oracle::inversion_sign(order)));
  } while (std::next_permutation(order.begin(), order.end()));
}

TEST_CASE("form text round trip and errors") {
  std::mt19937_64 rng(4);
  for (int t = 0; t < 10; ++t) {
    MultilinearForm form = random_form(rng, 3, 2, 7);
    CHECK(form_from_text(to_text(form)) == form);
  }
  MultilinearForm det4 = det_form(4, FieldSpec::integers());
  CHECK(form_from_text(to_text(det4)) == det4);
  CHECK_THROWS_AS(form_from_text("2 2 2\n1,3 : 1\n"), PreconditionError);
  CHECK_THROWS_AS(form_from_text("2 2 4\n"), PreconditionError);
  CHECK_THROWS_AS(form_from_text("2 2 2\n1 : 1\n"), PreconditionError);
}

TEST_CASE("bit-packed evaluation over F_2 matches evaluate") {
  std::mt19937_64 rng(8);
  for (int t = 0; t < 10; ++t) {
    MultilinearForm form = random_form(rng, 3, 5, 2);
    PackedF2Form packed(form);
    for (int s = 0; s < 50; ++s) {
      PointTuple x{random_vector(rng, 5, 2), random_vector(rng, 5, 2), random_vector(rng, 5, 2)};
      std::vector<std::uint64_t> bits;
      for (const auto& v : x) bits.push_back(PackedF2Form::pack(v));
      CHECK(packed.evaluate(bits) == evaluate(form, x).value());
    }
  }
}

TEST_CASE("shape checks") {
  CHECK_THROWS_AS(evaluate(det_form(2, FieldSpec::prime(3)), {{1, 0}}), PreconditionError);
  CHECK_THROWS_AS(det_form(2, FieldSpec::prime(3)) + det_form(2, FieldSpec::prime(5)), PreconditionError);
  CHECK_FALSE(is_nontrivial({{1, 0}, {0, 0}}));
}
