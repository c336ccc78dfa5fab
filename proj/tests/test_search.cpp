#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "partrank/error.hpp"
#include "partrank/search.hpp"

using namespace partrank;

namespace {

MultilinearForm random_form(std::mt19937_64& rng, int d, int n, FieldSpec f) {
  Shape s = make_shape(d, n, f);
  std::vector<Value> dense(s.index_count());
  for (auto& c : dense) c = static_cast<Value>(rng() % static_cast<std::uint64_t>(f.modulus()));
  return MultilinearForm::from_dense(s, dense);
}

}  // namespace

TEST_CASE("zeroing vectors for a single bilinear form") {
  FieldSpec f = FieldSpec::prime(2);
  MultilinearForm q = MultilinearForm::from_terms(make_shape(2, 4, f), {{{0, 1}, 1}});
  auto v = zeroing_vectors({q}, 2, 4, f);
  REQUIRE(v.size() == 2);
  CHECK(rank_of(f, v, 4) == 2);
  CHECK(evaluate(q, v).is_zero());
}

TEST_CASE("zeroing vectors on random instances") {
  FieldSpec f = FieldSpec::prime(3);
  std::mt19937_64 rng(41);
  int done = 0;
  while (done < 100) {
    int n = 2 + static_cast<int>(rng() % 5);
    int k = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(n - 1));
    int ell = static_cast<int>(rng() % static_cast<std::uint64_t>(n - k + 1));
    std::vector<MultilinearForm> qs;
    for (int i = 0; i < ell; ++i) qs.push_back(random_form(rng, k, n, f));
    auto v = zeroing_vectors(qs, k, n, f);
    CHECK(rank_of(f, v, static_cast<std::size_t>(n)) == static_cast<std::size_t>(k));
    for (const auto& q : qs) CHECK(evaluate(q, v).is_zero());
    ++done;
  }
  CHECK_THROWS_AS(zeroing_vectors({random_form(rng, 2, 3, f), random_form(rng, 2, 3, f)}, 2, 3, f),
                  PreconditionError);
}

TEST_CASE("restriction certificates") {
  FieldSpec f = FieldSpec::prime(2);
  RestrictionOutcome a = restriction_step(laplace(3, 0, f));
  CHECK(a.branch == RestrictionBranch::certificate);
  CHECK(a.k == 1);
  CHECK(a.r == 3);
  CHECK(a.support == std::vector<int>{0});

  RestrictionOutcome b = restriction_step(det4_quadratic(f));
  CHECK(b.branch == RestrictionBranch::certificate);
  CHECK(b.k == 2);
  CHECK(b.r == 3);
  CHECK(b.support == std::vector<int>{0, 1});
}

TEST_CASE("forced reduction of det4 quadratic") {
  for (std::int64_t p : {2, 5}) {
    FieldSpec f = FieldSpec::prime(p);
    RestrictionOutcome o = restriction_step(det4_quadratic(f), true);
    CHECK(o.branch == RestrictionBranch::reduced);
    CHECK(o.forced);
    REQUIRE(o.new_decomposition);
    CHECK(o.new_decomposition->size() == 2);
    CHECK(*o.new_target == det_form(2, f));
    CHECK(verify(*o.new_decomposition, det_form(2, f)).verified);
    CHECK(determinant(*o.basis_change) == 1);
  }
}

TEST_CASE("restriction rejects an unverified decomposition") {
  FieldSpec f = FieldSpec::prime(3);
  Decomposition wrong = laplace(3, 0, f);
  std::vector<Term> terms(wrong.terms().begin(), wrong.terms().end() - 1);
  CHECK_THROWS_AS(restriction_step(Decomposition(wrong.shape(), wrong.kind(), terms)), PreconditionError);
}

TEST_CASE("general restriction of the synthetic two-term form") {
  auto [target, dec] = synthetic_two_term(FieldSpec::prime(2));
  CHECK(verify(dec, target).verified);
  RestrictionOutcome o = restriction_step_general(target, dec);
  CHECK(o.branch == RestrictionBranch::reduced);
  CHECK(o.support == std::vector<int>{0});
  REQUIRE(o.new_decomposition);
  CHECK(o.new_decomposition->size() == 1);
  CHECK(verify(*o.new_decomposition, *o.new_target).verified);
  // Independent check: the restricted target is T with slot 0 fixed.
  std::vector<int> slot0{0};
  CHECK(*o.new_target == restrict(target, slot0, o.vectors));
}

TEST_CASE("general restriction edge cases") {
  FieldSpec f = FieldSpec::prime(2);
  MultilinearForm lin = MultilinearForm::from_terms(make_shape(1, 2, f), {{{0}, 1}});
  MultilinearForm bil = MultilinearForm::from_terms(make_shape(2, 2, f), {{{0, 1}, 1}, {{1, 1}, 1}});
  Decomposition one(make_shape(3, 2, f), DecompKind::slice, {Term::multilinear(3, {0}, lin, bil)});
  RestrictionOutcome o = restriction_step_general(expand(one), one);
  CHECK(o.new_decomposition->size() == 0);
  CHECK(o.new_target->is_zero());

  MultilinearForm lin2 = MultilinearForm::from_terms(make_shape(1, 2, f), {{{1}, 1}});
  Decomposition same(make_shape(3, 2, f), DecompKind::slice,
                     {Term::multilinear(3, {0}, lin, bil), Term::multilinear(3, {0}, lin2, bil)});
  CHECK_THROWS_AS(restriction_step_general(expand(same), same), PreconditionError);
}

TEST_CASE("lower bound values") {
  CHECK(prk_lower_bound_value(2).integer_bound == 2);
  CHECK(prk_lower_bound_value(3).integer_bound == 3);
  CHECK(prk_lower_bound_value(4).integer_bound == 3);
  CHECK(prk_lower_bound_value(4).value == doctest::Approx(3.0));
  CHECK(prk_lower_bound_value(5).integer_bound == 4);
}

TEST_CASE("det_2 over F_2 is not a product of two linear forms") {
  // Oracle: all 4 x 4 products l1(x) l2(y).
  int hits = 0;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) {
      std::vector<std::int64_t> dense{(a & 1) * (b & 1), (a & 1) * (b >> 1), (a >> 1) * (b & 1), (a >> 1) * (b >> 1)};
      hits += dense == std::vector<std::int64_t>{0, 1, 1, 0};
    }
  CHECK(hits == 0);
  SearchCertificate c = exhaustive_prk_at_most(det_form(2, FieldSpec::prime(2)), 1);
  CHECK(c.verdict == SearchVerdict::exhausted_none);
  CHECK(c.term_count == 9);
  CHECK(c.enumeration_size == 10);
}

TEST_CASE("search finds a two-term decomposition of det_2") {
  for (std::int64_t p : {2, 3}) {
    FieldSpec f = FieldSpec::prime(p);
    SearchCertificate c = exhaustive_prk_at_most(det_form(2, f), 2);
    CHECK(c.verdict == SearchVerdict::found);
    REQUIRE(c.decomposition);
    CHECK(c.decomposition->size() == 2);
    // Check the witness by evaluation at every point.
    oracle::for_each_vector(4, p, [&](const std::vector<std::int64_t>& v) {
      PointTuple x{{v[0], v[1]}, {v[2], v[3]}};
      CHECK(evaluate(expand(*c.decomposition), x).value() ==
            oracle::leibniz_det({{v[0], v[1]}, {v[2], v[3]}}, p));
    });
  }
  SearchCertificate c = exhaustive_prk_at_most(det_form(2, FieldSpec::prime(2)), 2);
  CHECK(c.enumeration_size == 1 + 9 + 36);
  CHECK(exhaustive_prk_at_most(det_form(2, FieldSpec::prime(3)), 1).verdict == SearchVerdict::exhausted_none);
}

TEST_CASE("det_3 over F_2 has partition rank above 2") {
  SearchCertificate c = exhaustive_prk_at_most(det_form(3, FieldSpec::prime(2)), 2, kDefaultSearchBudget, 1, "det3");
  CHECK(c.verdict == SearchVerdict::exhausted_none);
  CHECK(c.bit_packed);
  CHECK(c.candidates_examined == c.enumeration_size);
  CHECK(c.term_count == 10731);
}

TEST_CASE("search results do not depend on the worker count") {
  FieldSpec f = FieldSpec::prime(3);
  SearchCertificate a = exhaustive_prk_at_most(det_form(2, f), 2, kDefaultSearchBudget, 1);
  SearchCertificate b = exhaustive_prk_at_most(det_form(2, f), 2, kDefaultSearchBudget, 4);
  CHECK(a.candidates_examined == b.candidates_examined);
  CHECK(to_text(*a.decomposition) == to_text(*b.decomposition));
}

TEST_CASE("search budget") {
  CHECK_THROWS_AS(exhaustive_prk_at_most(det_form(3, FieldSpec::prime(2)), 2, 1000), BudgetExceeded);
  CHECK_FALSE(search_size(3, 3, 2, 2, 1000));
  auto s = search_size(2, 2, 2, 2, 1000);
  REQUIRE(s);
  CHECK(s->terms == 9);
  CHECK(s->candidates == 46);
}
