#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "partrank/decomp.hpp"

namespace partrank {

enum class Expectation {
  verifies,
  structurally_equal_initial,
  linear_factors_unchanged,
  linear_span_first_column,
  linear_span_first_row,
};

std::string expectation_name(Expectation e);
Expectation parse_expectation(std::string_view text);

/// A chain of reductions applied to an initial decomposition. `initial_ref`
/// is either "file <path>" or a generator call such as "laplace 3 1 5".
struct ReductionScript {
  std::string initial_ref;
  Decomposition initial;
  /// "det <n>", "file <path>", or empty for expand(initial).
  std::string target_ref;
  MultilinearForm target;
  std::vector<ReductionStep> steps;
  std::vector<Expectation> expectations;
};

struct ExpectationResult {
  Expectation expectation;
  bool holds;
};

struct ScriptTrace {
  /// Initial decomposition followed by the result of every step.
  std::vector<Decomposition> decompositions;
  std::vector<std::string> step_names;
  std::vector<ExpectationResult> expectations;
  bool ok() const;
};

/// Text format, one directive per line:
///   initial file <path> | initial laplace <n> <row> <field> |
///   initial two-row <row>,<row> <field> | initial det4-quadratic <field>
///   target det <n> | target file <path>           (default: expand(initial))
///   step linear      then "beta <j>" + polynomial blocks, optional "c" + r rows, "end"
///   step syzygy      then "q <i> <j>" + polynomial blocks, "end"
///   step symmetric transpose | step symmetric + "L" + rows, "end"
///   expect <property>
/// Rows, slots and term numbers are 1-based; paths are relative to base_dir.
ReductionScript parse_script(std::string_view text, const std::string& base_dir = ".");
std::string to_text(const ReductionScript& script);

/// Applies every step, checking verification after each; a failed
/// precondition is rethrown prefixed with the 1-based step number.
ScriptTrace run_script(const ReductionScript& script);

/// laplace(3,1) -> rescaled, permuted basis of the first row -> back.
ReductionScript demo_linear_roundtrip(FieldSpec spec);
/// laplace(4,1) -> transpose.
ReductionScript demo_transpose(FieldSpec spec);
/// laplace(3,1) -> random alternating matrix of linear forms.
ReductionScript demo_syzygy(FieldSpec spec, std::uint64_t seed);

struct MinorIndependenceReport {
  std::vector<int> rows;
  std::size_t count = 0;
  std::size_t rank = 0;
};

/// Coefficient vectors of the six 2x2 minors on the given rows of a 4x4
/// matrix, ranked over the integers. With `replace_one_with_sum` the first
/// minor is replaced by the sum of the next two.
MinorIndependenceReport check_minor_independence(std::vector<int> rows, bool replace_one_with_sum = false);

}  // namespace partrank
