#include "partrank/records.hpp"

#include <cstdio>
#include <set>

#include "partrank/error.hpp"

namespace partrank {

std::string decimal(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  return buf;
}

namespace {

Json one_based(const std::vector<int>& v) {
  Json out = Json::array();
  for (int x : v) out.push_back(x + 1);
  return out;
}

Json rows_of(const Matrix& m) {
  Json out = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) out.push_back(m.row(i));
  return out;
}

std::string field_tag(const FieldSpec& f) { return f.is_prime_field() ? std::to_string(f.modulus()) : "int"; }

}  // namespace

Json record(const IdentityReport& r) {
  Json cases = Json::array();
  for (const auto& v : r.violations) cases.push_back({{"indices", one_based(v.indices)}, {"lhs", v.lhs}, {"rhs", v.rhs}});
  return {{"total", r.total},
          {"passed", r.passed},
          {"permutations", r.permutations},
          {"permutations_passed", r.permutations_passed},
          {"degenerate", r.degenerate},
          {"degenerate_passed", r.degenerate_passed},
          {"violations", cases}};
}

Json record(const Decomposition& dec) {
  Json supports = Json::array();
  for (const auto& t : dec.terms()) {
    if (t.is_multilinear()) supports.push_back(one_based(t.support()));
    else supports.push_back("general");
  }
  return {{"kind", kind_name(dec.kind())},
          {"d", dec.shape().d},
          {"n", dec.shape().n},
          {"field", field_tag(dec.shape().spec)},
          {"terms", dec.size()},
          {"supports", supports}};
}

Json record(const VerifyResult& r) {
  Json out = {{"verified", r.verified}};
  if (!r.verified) {
    out["witness"] = r.witness_text;
    out["expected"] = r.expected;
    out["actual"] = r.actual;
  }
  return out;
}

Json record(const BiasReport& r) {
  Json out = {{"method", method_name(r.method)}, {"q", r.q}};
  out["bias"] = r.bias ? Json(r.bias->to_string()) : Json(nullptr);
  out["estimate"] = decimal(r.estimate);
  out["ark"] = r.ark ? Json(decimal(*r.ark)) : Json(nullptr);
  out["ceil_ark"] = r.ceil_ark ? Json(*r.ceil_ark) : Json(nullptr);
  out["points"] = r.points;
  if (r.method == BiasMethod::monte_carlo) {
    out["samples"] = r.samples;
    out["seed"] = *r.seed;
    out["confidence"] = r.confidence;
    out["half_width"] = decimal(r.half_width);
  }
  return out;
}

Json record(const UniformityReport& r) {
  return {{"counts", r.counts}, {"forms", r.forms}, {"uniform", r.uniform}};
}

Json record(const RestrictionOutcome& r) {
  Json out = {{"branch", branch_name(r.branch)}, {"k", r.k},          {"r", r.r},
              {"ell", r.ell},                    {"support", one_based(r.support)}};
  if (r.branch == RestrictionBranch::certificate) {
    out["k_plus_r"] = r.k + r.r;
    return out;
  }
  out["forced"] = r.forced;
  out["vectors"] = r.vectors;
  if (r.basis_change) {
    out["basis_change"] = rows_of(*r.basis_change);
    out["slot_order"] = one_based(r.slot_order);
    out["sign"] = r.sign;
  }
  out["new_terms"] = r.new_decomposition->size();
  out["new_target"] = to_text(*r.new_target);
  out["new_decomposition"] = to_text(*r.new_decomposition);
  return out;
}

Json record(const SearchCertificate& c) {
  Json out = {{"target", c.target_id},
              {"q", c.q},
              {"r", c.r},
              {"verdict", verdict_name(c.verdict)},
              {"term_count", c.term_count},
              {"enumeration_size", c.enumeration_size},
              {"candidates_examined", c.candidates_examined},
              {"bit_packed", c.bit_packed},
              {"workers", c.workers},
              {"plan", c.plan},
              {"rules", c.rules}};
  if (c.decomposition) {
    out["terms"] = c.decomposition->size();
    out["decomposition"] = to_text(*c.decomposition);
  }
  return out;
}

Json record(const EnsembleParams& p) {
  return {{"n", p.n},
          {"d", p.d},
          {"r", p.r},
          {"q", p.q},
          {"epsilon", p.epsilon},
          {"split", split_name(p.split)},
          {"samples", p.samples},
          {"mc_samples", p.mc_samples},
          {"exact", p.exact},
          {"seed", p.seed},
          {"c_values", p.c_values},
          {"workers", p.workers},
          {"budget", p.budget},
          {"confidence", p.confidence}};
}

Json record(const ExperimentReport& r) {
  Json fractions = Json::array();
  for (const auto& c : r.c_fractions)
    fractions.push_back({{"c", c.c}, {"fraction", c.fraction}, {"bound", decimal(c.bound)}});
  Json samples = Json::array();
  for (const auto& s : r.samples) {
    samples.push_back({{"index", s.index},
                       {"bias", s.report.bias ? Json(s.report.bias->to_string()) : Json(decimal(s.report.estimate))},
                       {"ark", s.report.ark ? Json(decimal(*s.report.ark)) : Json(nullptr)},
                       {"method", method_name(s.report.method)}});
  }
  Json out = {{"params", record(r.params)}};
  out["mean_bias"] = decimal(r.mean_bias);
  out["mean_bias_exact"] = r.mean_bias_exact ? Json(r.mean_bias_exact->to_string()) : Json(nullptr);
  out["target"] = decimal(r.target);
  out["ratio"] = decimal(r.ratio);
  out["standard_error"] = decimal(r.standard_error);
  out["deviation_bound"] = decimal(r.deviation_bound);
  out["within_compound_bound"] = r.within_compound_bound;
  out["c_fractions"] = fractions;
  out["subadditivity_violations"] = r.subadditivity_violations;
  out["hypothesis_violated"] = r.hypothesis_violated;
  out["notes"] = r.notes;
  out["samples"] = samples;
  return out;
}

Json record(const SeparationReport& r) {
  Json out = {{"d", r.d},
              {"q", r.q},
              {"bias", r.bias.to_string()},
              {"ark", decimal(r.ark)},
              {"ceil_ark", r.ceil_ark},
              {"lower_bound", decimal(r.lower_bound)},
              {"integer_lower_bound", r.integer_lower_bound},
              {"ratio_lower_bound", decimal(r.ratio_lower_bound)},
              {"witnessed_ratio", r.witnessed_ratio.to_string()},
              {"best_upper_bound", r.best_upper_bound},
              {"upper_bound_source", r.upper_bound_source}};
  out["prk"] = r.prk ? Json(*r.prk) : Json(nullptr);
  return out;
}

Json record(const ScriptTrace& t) {
  Json expectations = Json::array();
  for (const auto& e : t.expectations)
    expectations.push_back({{"property", expectation_name(e.expectation)}, {"holds", e.holds}});
  Json steps = Json::array();
  for (std::size_t i = 0; i < t.step_names.size(); ++i)
    steps.push_back({{"step", i + 1}, {"kind", t.step_names[i]}, {"decomposition", record(t.decompositions[i + 1])}});
  return {{"initial", record(t.decompositions.front())}, {"steps", steps}, {"expectations", expectations},
          {"ok", t.ok()}};
}

Json record(const MinorIndependenceReport& r) {
  return {{"rows", one_based(r.rows)}, {"minors", r.count}, {"rank", r.rank}};
}

namespace {

template <class T>
T field_as(const Json& j, const char* key) {
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw PreconditionError(std::string(key) + ": wrong type");
  }
}

}  // namespace

EnsembleParams params_from_json(const Json& j) {
  if (!j.is_object()) throw PreconditionError("config: expected a JSON object");
  static const std::set<std::string> known = {"n",     "d",          "r",         "q",       "epsilon",
                                              "split", "samples",    "mc_samples", "exact",  "seed",
                                              "c_values", "workers", "budget",    "confidence"};
  for (const auto& [key, value] : j.items())
    if (!known.count(key)) throw PreconditionError(key + ": unknown field");
  EnsembleParams p;
  if (j.contains("n")) p.n = field_as<int>(j, "n");
  if (j.contains("d")) p.d = field_as<int>(j, "d");
  if (j.contains("r")) p.r = field_as<int>(j, "r");
  if (j.contains("q")) p.q = field_as<std::int64_t>(j, "q");
  if (j.contains("epsilon")) p.epsilon = field_as<double>(j, "epsilon");
  if (j.contains("split")) p.split = parse_split(field_as<std::string>(j, "split"));
  if (j.contains("samples")) p.samples = field_as<int>(j, "samples");
  if (j.contains("mc_samples")) p.mc_samples = field_as<std::uint64_t>(j, "mc_samples");
  if (j.contains("exact")) p.exact = field_as<bool>(j, "exact");
  if (j.contains("seed")) p.seed = field_as<std::uint64_t>(j, "seed");
  if (j.contains("c_values")) p.c_values = field_as<std::vector<int>>(j, "c_values");
  if (j.contains("workers")) p.workers = field_as<unsigned>(j, "workers");
  if (j.contains("budget")) p.budget = field_as<std::uint64_t>(j, "budget");
  if (j.contains("confidence")) p.confidence = field_as<double>(j, "confidence");
  validate(p);
  return p;
}

}  // namespace partrank
