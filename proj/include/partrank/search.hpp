#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "partrank/decomp.hpp"
#include "partrank/linalg.hpp"

namespace partrank {

/// k linearly independent vectors on which every k-linear form in qs
/// vanishes: e_1..e_{k-1}, then a kernel vector of x -> (Q_i(e_1..e_{k-1}, x))_i
/// outside their span. Requires k + |qs| <= n.
std::vector<Vector> zeroing_vectors(const std::vector<MultilinearForm>& qs, int k, int n, FieldSpec spec);

enum class RestrictionBranch { reduced, certificate };

struct RestrictionOutcome {
  RestrictionBranch branch = RestrictionBranch::certificate;
  int k = 0;
  int r = 0;
  int ell = 0;
  /// Chosen support, 0-based.
  std::vector<int> support;
  std::optional<MultilinearForm> new_target;
  std::optional<Decomposition> new_decomposition;
  std::vector<Vector> vectors;
  /// det targets only.
  std::optional<Matrix> basis_change;
  /// New slot t reads old slot slot_order[t]; det targets only.
  std::vector<int> slot_order;
  int sign = 1;
  bool forced = false;
};

/// The chosen support: smallest cardinality, then lexicographically least.
std::vector<int> choose_support(const Decomposition& dec);

/// One step of the lower-bound induction on a decomposition of det_n. With
/// `force`, the reduction is carried out whenever k + ell <= n even if
/// k + r > n would already give the certificate.
RestrictionOutcome restriction_step(const Decomposition& dec, bool force = false);

/// Restricts the chosen slots of target and decomposition directly to
/// zeroing vectors, without a basis change.
RestrictionOutcome restriction_step_general(const MultilinearForm& target, const Decomposition& dec);

/// T = Q1 R1 + Q2 R2 on (F^6)^6 with supports {0} and {0,1}: Q1 = x1_1,
/// Q2 the inner product of slots 0 and 1. One general restriction step
/// leaves a single term.
std::pair<MultilinearForm, Decomposition> synthetic_two_term(FieldSpec spec);

struct LowerBound {
  double value;
  int integer_bound;
};

/// lg(n) + 1, and ceil(lg n) + 1.
LowerBound prk_lower_bound_value(int n);

enum class SearchVerdict { found, exhausted_none };

struct SearchCertificate {
  std::string target_id;
  std::int64_t q = 0;
  int r = 0;
  SearchVerdict verdict = SearchVerdict::exhausted_none;
  std::optional<Decomposition> decomposition;
  std::uint64_t term_count = 0;
  std::uint64_t enumeration_size = 0;
  /// Position of the solution in (size, lexicographic) order, or the full
  /// enumeration size when nothing was found.
  std::uint64_t candidates_examined = 0;
  bool bit_packed = false;
  unsigned workers = 1;
  std::vector<std::string> rules;
  std::string plan;
};

inline constexpr std::uint64_t kDefaultSearchBudget = std::uint64_t{1} << 32;

/// Decides whether target is a sum of at most r canonical partition-rank
/// terms over F_q. Throws BudgetExceeded before enumerating when the
/// candidate count exceeds the budget.
SearchCertificate exhaustive_prk_at_most(const MultilinearForm& target, int r,
                                         std::uint64_t budget = kDefaultSearchBudget, unsigned workers = 1,
                                         std::string target_id = "");

/// Number of canonical terms and candidate combinations of size <= r;
/// nullopt when above the budget.
struct SearchSize {
  std::uint64_t terms;
  std::uint64_t candidates;
};
std::optional<SearchSize> search_size(int d, int n, std::int64_t q, int r, std::uint64_t budget);

std::string verdict_name(SearchVerdict v);
std::string branch_name(RestrictionBranch b);

}  // namespace partrank
