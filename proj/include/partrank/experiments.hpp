#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "partrank/decomp.hpp"
#include "partrank/rank.hpp"

namespace partrank {

enum class SplitPolicy { fixed_last_slot, uniform_random_split };

std::string split_name(SplitPolicy p);
SplitPolicy parse_split(const std::string& text);

struct EnsembleParams {
  int n = 10;
  int d = 3;
  int r = 2;
  std::int64_t q = 2;
  double epsilon = 0.1;
  SplitPolicy split = SplitPolicy::fixed_last_slot;
  int samples = 200;
  /// Monte-Carlo points per sample when exact counting is off or too large.
  std::uint64_t mc_samples = 100000;
  bool exact = true;
  std::uint64_t seed = 1;
  std::vector<int> c_values{1, 2, 3};
  unsigned workers = 1;
  std::uint64_t budget = kDefaultBudget;
  double confidence = 0.99;
};

/// Throws PreconditionError naming the offending field.
void validate(const EnsembleParams& p);

/// r terms with independent uniform factor coefficients; deterministic in
/// (seed, index). Returns the summed form and its decomposition.
std::pair<MultilinearForm, Decomposition> sample_decomposable(const EnsembleParams& p, std::uint64_t index);

struct SampleResult {
  std::uint64_t index = 0;
  BiasReport report;
};

struct CFraction {
  int c;
  double fraction;
  /// 1 - q^{-c}
  double bound;
};

struct ExperimentReport {
  EnsembleParams params;
  std::vector<SampleResult> samples;
  /// Exact when every sample is exact.
  std::optional<Rational> mean_bias_exact;
  double mean_bias = 0;
  double target = 0;
  double ratio = 0;
  double standard_error = 0;
  /// 3 q^{-(n-2r+1)} + q^{-(d-1)n}
  double deviation_bound = 0;
  bool within_compound_bound = false;
  std::vector<CFraction> c_fractions;
  int subadditivity_violations = 0;
  bool hypothesis_violated = false;
  std::vector<std::string> notes;
};

ExperimentReport run_bias_experiment(const EnsembleParams& p);

/// Tab-separated table: index, bias, ark, method.
std::string experiment_table(const ExperimentReport& report);

struct SeparationReport {
  int d = 0;
  std::int64_t q = 0;
  Rational bias;
  double ark = 0;
  int ceil_ark = 0;
  /// lg d + 1 and ceil(lg d) + 1.
  double lower_bound = 0;
  int integer_lower_bound = 0;
  /// (lg d + 1) / 2
  double ratio_lower_bound = 0;
  /// integer lower bound / ceil(ark)
  Rational witnessed_ratio;
  int best_upper_bound = 0;
  std::string upper_bound_source;
  /// Present when the bounds meet.
  std::optional<int> prk;
};

SeparationReport separation_report(int d, std::int64_t q);

}  // namespace partrank
