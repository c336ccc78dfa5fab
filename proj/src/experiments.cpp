#include "partrank/experiments.hpp"

#include <cmath>
#include <sstream>
#include <thread>

#include "partrank/error.hpp"
#include "partrank/search.hpp"

namespace partrank {

std::string split_name(SplitPolicy p) {
  return p == SplitPolicy::fixed_last_slot ? "fixed-last-slot" : "uniform-random-split";
}

SplitPolicy parse_split(const std::string& text) {
  if (text == "fixed-last-slot") return SplitPolicy::fixed_last_slot;
  if (text == "uniform-random-split") return SplitPolicy::uniform_random_split;
  throw PreconditionError("split: unknown policy '" + text + "'");
}

void validate(const EnsembleParams& p) {
  if (p.d < 2) throw PreconditionError("d: must be at least 2");
  if (p.d > 16) throw PreconditionError("d: must be at most 16");
  if (p.n < 1) throw PreconditionError("n: must be at least 1");
  if (p.r < 0) throw PreconditionError("r: must be nonnegative");
  if (!is_prime(p.q) || p.q > FieldSpec::kMaxModulus) throw PreconditionError("q: must be a prime <= 65536");
  if (!(p.epsilon > 0 && p.epsilon < 1)) throw PreconditionError("epsilon: must lie in (0, 1)");
  if (p.samples < 1) throw PreconditionError("samples: must be at least 1");
  if (p.mc_samples < 1) throw PreconditionError("mc_samples: must be at least 1");
  if (!(p.confidence > 0 && p.confidence < 1)) throw PreconditionError("confidence: must lie in (0, 1)");
  for (int c : p.c_values)
    if (c < 0) throw PreconditionError("c_values: entries must be nonnegative");
  // Factor tables are dense.
  if (!bounded_power(static_cast<std::uint64_t>(p.n), static_cast<std::uint64_t>(p.d), std::uint64_t{1} << 26)) {
    throw PreconditionError("n: n^d above 2^26 coefficients");
  }
}

std::pair<MultilinearForm, Decomposition> sample_decomposable(const EnsembleParams& p, std::uint64_t index) {
  validate(p);
  const FieldSpec f = FieldSpec::prime(p.q);
  const Shape shape = make_shape(p.d, p.n, f);
  std::mt19937_64 rng(mix_seed(p.seed, index));
  auto random_form = [&](int degree) {
    const Shape s = make_shape(degree, p.n, f);
    std::vector<Value> dense(static_cast<std::size_t>(s.index_count()));
    for (auto& c : dense) c = uniform_below(rng, p.q);
    return MultilinearForm::from_dense(s, dense);
  };
  std::vector<Term> terms;
  for (int i = 0; i < p.r; ++i) {
    std::vector<int> support;
    if (p.split == SplitPolicy::fixed_last_slot) {
      for (int s = 0; s + 1 < p.d; ++s) support.push_back(s);
    } else {
      const auto mask = 1 + static_cast<std::uint32_t>(uniform_below(rng, (Value{1} << p.d) - 2));
      for (int s = 0; s < p.d; ++s)
        if (mask >> s & 1u) support.push_back(s);
    }
    MultilinearForm q = random_form(static_cast<int>(support.size()));
    MultilinearForm r = random_form(p.d - static_cast<int>(support.size()));
    terms.push_back(Term::multilinear(p.d, std::move(support), std::move(q), std::move(r)));
  }
  Decomposition dec(shape, DecompKind::partition, std::move(terms));
  MultilinearForm form = expand(dec);
  if (!verify(dec, form).verified) throw InternalError("sampled decomposition does not verify");
  return {std::move(form), std::move(dec)};
}

ExperimentReport run_bias_experiment(const EnsembleParams& p) {
  validate(p);
  ExperimentReport report;
  report.params = p;
  const auto count = static_cast<std::size_t>(p.samples);
  report.samples.resize(count);
  const bool exact =
      p.exact && bounded_power(static_cast<std::uint64_t>(p.q), static_cast<std::uint64_t>(p.n) * (p.d - 1), p.budget);
  const unsigned workers = std::max(1u, p.workers);
  auto run = [&](unsigned w) {
    for (std::size_t i = w; i < count; i += workers) {
      const auto form = sample_decomposable(p, i).first;
      report.samples[i].index = i;
      report.samples[i].report = exact ? bias_via_gradient(form, p.budget)
                                       : bias_monte_carlo(form, p.mc_samples, mix_seed(p.seed ^ 0x5a5a5a5aULL, i),
                                                          p.confidence, 1);
    }
  };
  if (workers == 1) {
    run(0);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(run, w);
  }

  const Rational target_exact = rational_pow(p.q, -p.r);
  const double q = static_cast<double>(p.q);
  double sum = 0;
  Rational exact_sum;
  for (const auto& s : report.samples) {
    sum += s.report.estimate;
    if (exact) exact_sum = exact_sum + *s.report.bias;
    const bool violates = exact ? *s.report.bias < target_exact
                                : (s.report.ark && *s.report.ark > p.r + 1e-9) || !s.report.ark;
    if (violates) {
      if (exact) throw InternalError("exact bias below q^{-r}: subadditivity violated");
      ++report.subadditivity_violations;
    }
  }
  const double n_samples = static_cast<double>(count);
  report.mean_bias = sum / n_samples;
  if (exact) {
    report.mean_bias_exact = exact_sum * Rational(1, static_cast<std::int64_t>(count));
    report.mean_bias = report.mean_bias_exact->to_double();
  }
  report.target = std::pow(q, -p.r);
  report.ratio = report.mean_bias / report.target;
  double var = 0;
  for (const auto& s : report.samples) var += (s.report.estimate - report.mean_bias) * (s.report.estimate - report.mean_bias);
  report.standard_error = count > 1 ? std::sqrt(var / (n_samples - 1) / n_samples) : 0.0;
  report.deviation_bound = 3.0 * std::pow(q, -(p.n - 2 * p.r + 1)) + std::pow(q, -static_cast<double>((p.d - 1) * p.n));
  report.within_compound_bound =
      std::abs(report.mean_bias - report.target) <= report.deviation_bound + 4.0 * report.standard_error;
  for (int c : p.c_values) {
    std::size_t inside = 0;
    for (const auto& s : report.samples) {
      if (exact) {
        const Rational& b = *s.report.bias;
        inside += b <= rational_pow(p.q, c - p.r) && b >= target_exact;
      } else if (s.report.ark) {
        inside += *s.report.ark >= p.r - c - 1e-9 && *s.report.ark <= p.r + 1e-9;
      }
    }
    report.c_fractions.push_back({c, static_cast<double>(inside) / n_samples, 1.0 - std::pow(q, -c)});
  }
  report.hypothesis_violated = p.r > (1.0 - p.epsilon) * p.n / 2.0;
  report.notes = {
      "each factor has independent uniform coefficients; this is not the uniform distribution on reducible forms",
      "finite-n tolerance taken as 3 q^{-(n-2r+1)} + q^{-(d-1)n} plus 4 standard errors",
  };
  if (p.split == SplitPolicy::fixed_last_slot) {
    report.notes.push_back("fixed-last-slot: slot d alone carries a linear factor in every term");
  }
  if (report.hypothesis_violated) report.notes.push_back("r > (1 - epsilon) n / 2: outside the regime where bias ~ q^-r is expected");
  if (!exact) report.notes.push_back("per-sample bias estimated by Monte-Carlo");
  return report;
}

std::string experiment_table(const ExperimentReport& report) {
  std::ostringstream out;
  out << "index\tbias\tark\tmethod\n";
  out.precision(17);
  for (const auto& s : report.samples) {
    out << s.index << '\t';
    if (s.report.bias) out << s.report.bias->to_string();
    else out << s.report.estimate;
    out << '\t';
    if (s.report.ark) out << *s.report.ark;
    else out << "inf";
    out << '\t' << method_name(s.report.method) << '\n';
  }
  return out.str();
}

SeparationReport separation_report(int d, std::int64_t q) {
  if (d < 2) throw PreconditionError("separation_report needs d >= 2");
  const BiasReport closed = ark_det_closed_form(d, q);
  const LowerBound lb = prk_lower_bound_value(d);
  SeparationReport rep;
  rep.d = d;
  rep.q = q;
  rep.bias = *closed.bias;
  rep.ark = *closed.ark;
  rep.ceil_ark = *closed.ceil_ark;
  rep.lower_bound = lb.value;
  rep.integer_lower_bound = lb.integer_bound;
  rep.ratio_lower_bound = lb.value / 2.0;
  rep.witnessed_ratio = Rational(lb.integer_bound, rep.ceil_ark);
  if (d == 4) {
    const auto check = verify(det4_quadratic(FieldSpec::integers()), det_form(4, FieldSpec::integers()));
    if (!check.verified) throw InternalError("det4 quadratic expansion failed to verify");
    rep.best_upper_bound = 3;
    rep.upper_bound_source = "det4-quadratic (verified over the integers)";
  } else {
    rep.best_upper_bound = d;
    rep.upper_bound_source = "laplace";
  }
  if (rep.best_upper_bound == rep.integer_lower_bound) rep.prk = rep.best_upper_bound;
  return rep;
}

}  // namespace partrank
