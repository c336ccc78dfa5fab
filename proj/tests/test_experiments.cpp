#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "partrank/error.hpp"
#include "partrank/experiments.hpp"

using namespace partrank;

TEST_CASE("parameter validation names the field") {
  auto message = [](EnsembleParams p) {
    try {
      validate(p);
    } catch (const PreconditionError& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  EnsembleParams p;
  p.q = 4;
  CHECK(message(p).rfind("q:", 0) == 0);
  p = {};
  p.d = 1;
  CHECK(message(p).rfind("d:", 0) == 0);
  p = {};
  p.epsilon = 0;
  CHECK(message(p).rfind("epsilon:", 0) == 0);
  p = {};
  p.samples = 0;
  CHECK(message(p).rfind("samples:", 0) == 0);
  CHECK(message(EnsembleParams{}).empty());
}

TEST_CASE("samples are deterministic in (seed, index)") {
  EnsembleParams p;
  p.n = 3;
  auto a = sample_decomposable(p, 5);
  auto b = sample_decomposable(p, 5);
  CHECK(a.first == b.first);
  CHECK(a.second.size() == 2);
  CHECK(!(sample_decomposable(p, 6).first == a.first));
  for (const auto& t : a.second.terms()) CHECK(t.support() == std::vector<int>{2});
  p.split = SplitPolicy::uniform_random_split;
  CHECK(verify(sample_decomposable(p, 1).second, sample_decomposable(p, 1).first).verified);
}

TEST_CASE("r = 0 gives bias exactly 1") {
  EnsembleParams p;
  p.n = 3;
  p.r = 0;
  p.samples = 5;
  ExperimentReport r = run_bias_experiment(p);
  REQUIRE(r.mean_bias_exact);
  CHECK(*r.mean_bias_exact == Rational(1));
  CHECK(r.ratio == 1.0);
}

TEST_CASE("empirical mean matches the sampler's exact distribution") {
  // One term Q(x, y) R(z) with Q in F_2^{2x2} and R in F_2^2, all 64 pairs
  // equally likely.
  std::vector<double> values;
  for (int qz = 0; qz < 16; ++qz)
    for (int rz = 0; rz < 4; ++rz) {
      std::vector<std::int64_t> dense(8);
      for (int c = 0; c < 8; ++c) dense[c] = ((qz >> (c / 2)) & 1) * ((rz >> (c % 2)) & 1);
      auto b = oracle::brute_bias(dense, 3, 2, 2);
      values.push_back(static_cast<double>(b.num) / static_cast<double>(b.den));
    }
  double mean = 0, var = 0;
  for (double v : values) mean += v / 64;
  for (double v : values) var += (v - mean) * (v - mean) / 64;

  EnsembleParams p;
  p.d = 3;
  p.n = 2;
  p.q = 2;
  p.r = 1;
  p.samples = 200;
  ExperimentReport r = run_bias_experiment(p);
  CHECK(std::abs(r.mean_bias - mean) <= 3 * std::sqrt(var / 200));
}

TEST_CASE("small ensemble invariants") {
  EnsembleParams p;
  p.n = 6;
  p.samples = 40;
  p.workers = 3;
  ExperimentReport a = run_bias_experiment(p);
  p.workers = 1;
  ExperimentReport b = run_bias_experiment(p);
  CHECK(experiment_table(a) == experiment_table(b));
  CHECK(*a.mean_bias_exact == *b.mean_bias_exact);
  for (const auto& s : a.samples) {
    REQUIRE(s.report.bias);
    // ark <= r, i.e. bias >= q^{-r}.
    CHECK(*s.report.bias >= rational_pow(2, -2));
  }
  CHECK(a.subadditivity_violations == 0);
  CHECK_FALSE(a.hypothesis_violated);
  CHECK(a.c_fractions.size() == 3);
  CHECK(a.deviation_bound == doctest::Approx(3 * std::pow(2.0, -(6 - 4 + 1)) + std::pow(2.0, -12)));
  CHECK(experiment_table(a).rfind("index\tbias\tark\tmethod\n", 0) == 0);
}

TEST_CASE("Monte-Carlo fallback when exact counting is off") {
  EnsembleParams p;
  p.n = 4;
  p.samples = 3;
  p.exact = false;
  p.mc_samples = 2000;
  ExperimentReport r = run_bias_experiment(p);
  CHECK_FALSE(r.mean_bias_exact);
  for (const auto& s : r.samples) CHECK(s.report.method == BiasMethod::monte_carlo);
}

TEST_CASE("separation report for d = 4") {
  SeparationReport s = separation_report(4, 2);
  CHECK(s.ceil_ark == 2);
  CHECK(s.integer_lower_bound == 3);
  CHECK(s.best_upper_bound == 3);
  REQUIRE(s.prk);
  CHECK(*s.prk == 3);
  CHECK(s.witnessed_ratio == Rational(3, 2));
  CHECK(s.ratio_lower_bound == doctest::Approx(1.5));
  CHECK(s.bias == Rational(197, 512));
}
