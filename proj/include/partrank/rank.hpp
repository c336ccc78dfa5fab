#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "partrank/multilinear.hpp"
#include "partrank/rational.hpp"

namespace partrank {

inline constexpr std::uint64_t kDefaultBudget = std::uint64_t{1} << 24;

enum class BiasMethod { full_enumeration, gradient_count, closed_form, monte_carlo };

std::string method_name(BiasMethod m);

struct BiasReport {
  BiasMethod method = BiasMethod::full_enumeration;
  std::int64_t q = 0;
  /// Present for the exact methods.
  std::optional<Rational> bias;
  double estimate = 0;
  /// Monte-Carlo only.
  double half_width = 0;
  double confidence = 0;
  std::uint64_t samples = 0;
  std::optional<std::uint64_t> seed;
  /// -log_q(bias); nullopt when a sampled estimate is 0.
  std::optional<double> ark;
  /// Decided from the exact rational.
  std::optional<int> ceil_ark;
  /// Evaluation points visited.
  std::uint64_t points = 0;
};

/// Smallest integer k >= 0 with bias >= q^{-k}, i.e. ceil(ark) decided exactly.
int ceil_ark_exact(const Rational& bias, std::int64_t q);

/// Pr[T = 0] - Pr[T = y] by enumerating all of (F_q^n)^d. Also checks that
/// Pr[T = y] is the same for every y != 0.
BiasReport bias_exact(const MultilinearForm& t, std::uint64_t budget = kDefaultBudget);

/// Pr[grad T = 0] over (F_q^n)^{d-1}. Requires d >= 2.
BiasReport bias_via_gradient(const MultilinearForm& t, std::uint64_t budget = kDefaultBudget);

/// bias(det_n) = Pr[rk < n-1] for a uniform (n-1) x n matrix; asserts
/// 1 < ark <= 2 by exact comparison.
BiasReport ark_det_closed_form(int n, std::int64_t q);

/// Estimates Pr[grad T = 0] from N uniform points with a two-sided
/// Hoeffding half-width. Points are drawn in fixed blocks with per-block
/// seeds, so the result does not depend on the worker count.
BiasReport bias_monte_carlo(const MultilinearForm& t, std::uint64_t samples, std::uint64_t seed,
                            double confidence = 0.99, unsigned workers = 1);

double hoeffding_half_width(std::uint64_t samples, double confidence);

struct UniformityReport {
  /// counts[y] = #{T : T(x) = y} over all coefficient maps.
  std::vector<std::uint64_t> counts;
  std::uint64_t forms = 0;
  bool uniform = false;
};

/// Exhausts all q^{n^d} forms of the given shape at the nontrivial point x.
UniformityReport uniformity_of_random_form(const PointTuple& x, const Shape& shape,
                                           std::uint64_t budget = kDefaultBudget);

/// base^exp if it is at most `limit`, else nullopt.
std::optional<std::uint64_t> bounded_power(std::uint64_t base, std::uint64_t exp, std::uint64_t limit);

/// Uniform in [0, q) by rejection; portable across standard libraries.
Value uniform_below(std::mt19937_64& rng, Value q);

/// splitmix64 finalizer, used to derive independent stream seeds.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace partrank
