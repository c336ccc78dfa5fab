#include "partrank/cli.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <ostream>

#include "partrank/error.hpp"
#include "partrank/records.hpp"
#include "partrank/text_io.hpp"

namespace partrank {

std::uint64_t budget_from_env(std::uint64_t fallback) {
  const char* v = std::getenv("PARTRANK_BUDGET");
  if (v == nullptr || *v == '\0') return fallback;
  std::int64_t b = 0;
  try {
    b = parse_int(v);
  } catch (const std::exception&) {
    throw PreconditionError(std::string("PARTRANK_BUDGET: not an integer: ") + v);
  }
  if (b <= 0) throw PreconditionError("PARTRANK_BUDGET: must be positive");
  return static_cast<std::uint64_t>(b);
}

namespace {

struct Outcome {
  ExitCode code = exit_ok;
  Json result;
  std::string summary;
};

const char* status_name(ExitCode c) {
  switch (c) {
    case exit_ok: return "ok";
    case exit_violation: return "violation";
    default: return "rejected";
  }
}

std::vector<int> parse_rows(const std::string& text) {
  std::vector<int> rows;
  for (const auto& part : split(text, ',')) rows.push_back(static_cast<int>(parse_int(trim(part))) - 1);
  return rows;
}

Decomposition load_decomposition(const std::string& path) { return decomposition_from_text(read_file(path)); }

void check_field(const std::string& flag, const FieldSpec& actual) {
  if (flag.empty()) return;
  FieldSpec want = parse_field(flag);
  if (!(want == actual))
    throw PreconditionError("--field " + flag + " does not match the file's field " +
                            (actual.is_prime_field() ? std::to_string(actual.modulus()) : "int"));
}

struct VerifyArgs {
  std::string expansion = "laplace";
  int n = 3;
  int row = 1;
  std::string rows = "1,2";
  std::string field = "int";
  std::string path;
  std::string target;
};

Decomposition build_expansion(const VerifyArgs& a) {
  FieldSpec spec = parse_field(a.field);
  if (a.expansion == "laplace") return laplace(a.n, a.row - 1, spec);
  if (a.expansion == "two-row") return two_row_laplace(parse_rows(a.rows), spec);
  if (a.expansion == "det4-quadratic") return det4_quadratic(spec);
  if (a.expansion == "file") {
    if (a.path.empty()) throw PreconditionError("--path is required with --expansion file");
    return load_decomposition(a.path);
  }
  throw PreconditionError("--expansion: unknown value '" + a.expansion + "'");
}

Outcome cmd_identity(bool inject_fault) {
  Symbol4 symbol;
  if (inject_fault) {
    symbol = [](int i, int j, int k, int l) {
      std::vector<int> idx{i, j, k, l};
      int s = levi_civita(idx);
      return (i == 1 && j == 0) ? -s : s;
    };
  }
  IdentityReport r = check_4to2_identity(symbol);
  Outcome o;
  o.result = record(r);
  o.code = r.ok() ? exit_ok : exit_violation;
  o.summary = std::to_string(r.passed) + "/" + std::to_string(r.total) + " cases hold";
  return o;
}

Outcome cmd_verify(const VerifyArgs& a) {
  Decomposition dec = build_expansion(a);
  if (a.expansion != "file") check_field(a.field, dec.shape().spec);
  MultilinearForm target = a.target.empty() ? det_form(dec.shape().d, dec.shape().spec)
                                            : form_from_text(read_file(a.target));
  VerifyResult v = verify(dec, target);
  Outcome o;
  o.result = record(dec);
  o.result["target"] = a.target.empty() ? "det" + std::to_string(dec.shape().d) : a.target;
  o.result["verification"] = record(v);
  o.code = v.verified ? exit_ok : exit_violation;
  o.summary = v.verified ? std::to_string(dec.size()) + " terms verified"
                         : "mismatch at " + v.witness_text + ": expected " + std::to_string(v.expected) + ", got " + std::to_string(v.actual);
  return o;
}

struct ArkArgs {
  int det = 0;
  std::string form;
  std::string field;
  std::string method = "exact";
  std::uint64_t samples = 100000;
  std::uint64_t seed = 1;
  double confidence = 0.99;
  unsigned workers = 1;
  std::uint64_t budget = 0;
};

Outcome cmd_ark(const ArkArgs& a) {
  if ((a.det > 0) == !a.form.empty()) throw PreconditionError("exactly one of --det and --form is required");
  std::uint64_t budget = a.budget ? a.budget : budget_from_env(kDefaultBudget);
  BiasReport r;
  Outcome o;
  if (a.det > 0) {
    if (a.field.empty()) throw PreconditionError("--field is required with --det");
    FieldSpec spec = parse_field(a.field);
    if (!spec.is_prime_field()) throw PreconditionError("--field: bias needs a prime field");
    if (a.method == "closed-form") {
      r = ark_det_closed_form(a.det, spec.modulus());
    } else {
      MultilinearForm t = det_form(a.det, spec);
      if (a.method == "exact") r = bias_exact(t, budget);
      else if (a.method == "gradient") r = bias_via_gradient(t, budget);
      else if (a.method == "mc") r = bias_monte_carlo(t, a.samples, a.seed, a.confidence, a.workers);
      else throw PreconditionError("--method: unknown value '" + a.method + "'");
    }
    o.result["target"] = "det" + std::to_string(a.det);
  } else {
    MultilinearForm t = form_from_text(read_file(a.form));
    check_field(a.field, t.shape().spec);
    if (!t.shape().spec.is_prime_field()) throw PreconditionError("form: bias needs a prime field");
    if (a.method == "exact") r = bias_exact(t, budget);
    else if (a.method == "gradient") r = bias_via_gradient(t, budget);
    else if (a.method == "mc") r = bias_monte_carlo(t, a.samples, a.seed, a.confidence, a.workers);
    else if (a.method == "closed-form") throw PreconditionError("--method closed-form applies to --det only");
    else throw PreconditionError("--method: unknown value '" + a.method + "'");
    o.result["target"] = a.form;
  }
  o.result["report"] = record(r);
  o.summary = r.bias ? "bias " + r.bias->to_string() : "bias ~ " + decimal(r.estimate) + " +- " + decimal(r.half_width);
  if (r.ceil_ark) o.summary += ", ceil(ark) = " + std::to_string(*r.ceil_ark);
  return o;
}

struct SearchArgs {
  int det = 2;
  std::string field = "2";
  int max_rank = 1;
  std::uint64_t budget = 0;
  unsigned workers = 1;
};

Outcome cmd_search(const SearchArgs& a) {
  FieldSpec spec = parse_field(a.field);
  if (!spec.is_prime_field()) throw PreconditionError("--field: search needs a prime field");
  std::uint64_t budget = a.budget ? a.budget : budget_from_env(kDefaultSearchBudget);
  SearchCertificate c =
      exhaustive_prk_at_most(det_form(a.det, spec), a.max_rank, budget, a.workers, "det" + std::to_string(a.det));
  Outcome o;
  o.result = record(c);
  o.summary = verdict_name(c.verdict) + " after " + std::to_string(c.candidates_examined) + " of " +
              std::to_string(c.enumeration_size) + " candidates";
  return o;
}

struct RestrictArgs {
  std::string decomposition;
  std::string field;
  std::string target;
  bool force = false;
};

Outcome cmd_restrict(const RestrictArgs& a) {
  Decomposition dec = load_decomposition(a.decomposition);
  check_field(a.field, dec.shape().spec);
  Outcome o;
  MultilinearForm target = a.target.empty() ? det_form(dec.shape().d, dec.shape().spec)
                                            : form_from_text(read_file(a.target));
  VerifyResult v = verify(dec, target);
  if (!v.verified) {
    o.code = exit_violation;
    o.result["verification"] = record(v);
    o.summary = "decomposition does not verify: mismatch at " + v.witness_text;
    return o;
  }
  bool det_target = a.target.empty() || target == det_form(target.shape().d, target.shape().spec);
  RestrictionOutcome r = det_target && dec.is_multilinear() ? restriction_step(dec, a.force)
                                                            : restriction_step_general(target, dec);
  o.result = record(r);
  o.result["entry"] = det_target ? "det" : "general";
  o.summary = branch_name(r.branch) + " with k = " + std::to_string(r.k) + ", r = " + std::to_string(r.r);
  return o;
}

Outcome cmd_experiment(const std::string& config, const std::string& out_prefix) {
  Json j;
  try {
    j = Json::parse(read_file(config));
  } catch (const Json::parse_error& e) {
    throw PreconditionError(std::string("config: ") + e.what());
  }
  EnsembleParams p = params_from_json(j);
  ExperimentReport r = run_bias_experiment(p);
  Outcome o;
  o.result = record(r);
  if (!out_prefix.empty()) {
    write_file(out_prefix + ".json", o.result.dump(2) + "\n");
    write_file(out_prefix + ".tsv", experiment_table(r));
  }
  o.summary = "mean bias " + decimal(r.mean_bias) + ", ratio to q^-r " + decimal(r.ratio);
  return o;
}

struct ExportArgs {
  std::string what = "laplace";
  int n = 3;
  int row = 1;
  std::string rows = "1,2";
  std::string field = "int";
};

Outcome cmd_export(const ExportArgs& a, std::ostream& out) {
  FieldSpec spec = parse_field(a.field);
  if (a.what == "det") {
    out << to_text(det_form(a.n, spec));
  } else if (a.what == "synthetic") {
    out << to_text(synthetic_two_term(spec).second);
  } else if (a.what == "synthetic-target") {
    out << to_text(synthetic_two_term(spec).first);
  } else {
    VerifyArgs v;
    v.expansion = a.what == "file" ? "" : a.what;
    v.n = a.n;
    v.row = a.row;
    v.rows = a.rows;
    v.field = a.field;
    out << to_text(build_expansion(v));
  }
  return {};
}

Outcome cmd_separation(int d, const std::string& field) {
  FieldSpec spec = parse_field(field);
  if (!spec.is_prime_field()) throw PreconditionError("--field: needs a prime field");
  SeparationReport r = separation_report(d, spec.modulus());
  Outcome o;
  o.result = record(r);
  o.summary = "witnessed ratio " + r.witnessed_ratio.to_string();
  return o;
}

Outcome cmd_script(const std::string& path) {
  std::string base = std::filesystem::path(path).parent_path().string();
  ScriptTrace t = run_script(parse_script(read_file(path), base.empty() ? "." : base));
  Outcome o;
  o.result = record(t);
  o.code = t.ok() ? exit_ok : exit_violation;
  o.summary = std::to_string(t.step_names.size()) + " steps, expectations " + (t.ok() ? "hold" : "fail");
  return o;
}

Outcome cmd_minors(const std::string& rows, bool replace) {
  MinorIndependenceReport r = check_minor_independence(parse_rows(rows), replace);
  Outcome o;
  o.result = record(r);
  o.summary = std::to_string(r.count) + " minors, rank " + std::to_string(r.rank);
  return o;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact partition-rank and analytic-rank toolkit for determinant expansions", "partrank"};
  app.require_subcommand(1);
  app.get_formatter()->column_width(36);

  bool inject_fault = false;
  auto* identity = app.add_subcommand("identity", "Check the 4-to-2 Levi-Civita identity on all 256 tuples");
  identity->add_flag("--inject-fault", inject_fault, "Flip one entry of the 4-index symbol");

  VerifyArgs va;
  auto* verify_cmd = app.add_subcommand("verify", "Verify an expansion of det_n coefficient-wise");
  verify_cmd->add_option("--expansion", va.expansion, "Expansion")
      ->check(CLI::IsMember({"laplace", "two-row", "det4-quadratic", "file"}))
      ->capture_default_str();
  verify_cmd->add_option("--n", va.n, "Matrix size for laplace")->capture_default_str();
  verify_cmd->add_option("--row", va.row, "Expanded row for laplace (1-based)")->capture_default_str();
  verify_cmd->add_option("--rows", va.rows, "Two rows for two-row, e.g. 1,2")->capture_default_str();
  verify_cmd->add_option("--field", va.field, "Prime p or 'int'")->capture_default_str();
  verify_cmd->add_option("--path", va.path, "Decomposition file for --expansion file");
  verify_cmd->add_option("--target", va.target, "Form file to verify against instead of det_n");

  ArkArgs aa;
  auto* ark = app.add_subcommand("ark", "Bias and analytic rank");
  ark->add_option("--det", aa.det, "Use det_n");
  ark->add_option("--form", aa.form, "Form file");
  ark->add_option("--field", aa.field, "Prime p");
  ark->add_option("--method", aa.method, "Method")
      ->check(CLI::IsMember({"exact", "gradient", "closed-form", "mc"}))
      ->capture_default_str();
  ark->add_option("--samples", aa.samples, "Monte-Carlo points")->capture_default_str();
  ark->add_option("--seed", aa.seed, "Monte-Carlo seed")->capture_default_str();
  ark->add_option("--confidence", aa.confidence, "Monte-Carlo confidence level")->capture_default_str();
  ark->add_option("--workers", aa.workers, "Monte-Carlo worker threads")->capture_default_str();
  ark->add_option("--budget", aa.budget, "Evaluation budget (default 2^24 or PARTRANK_BUDGET)");

  SearchArgs sa;
  auto* search = app.add_subcommand("search", "Exhaustive partition-rank search for det_n");
  search->add_option("--det", sa.det, "Matrix size")->capture_default_str();
  search->add_option("--field", sa.field, "Prime p")->capture_default_str();
  search->add_option("--max-rank", sa.max_rank, "Largest number of terms")->capture_default_str();
  search->add_option("--budget", sa.budget, "Candidate budget (default 2^32 or PARTRANK_BUDGET)");
  search->add_option("--workers", sa.workers, "Worker threads")->capture_default_str();

  RestrictArgs ra;
  auto* restrict_cmd = app.add_subcommand("restrict", "One step of the lower-bound restriction procedure");
  restrict_cmd->add_option("--decomposition", ra.decomposition, "Decomposition file")->required();
  restrict_cmd->add_option("--field", ra.field, "Expected field of the file");
  restrict_cmd->add_option("--target", ra.target, "Form file for a non-det target (default det_d)");
  restrict_cmd->add_flag("--force", ra.force, "Reduce even when k + r > n, as long as k + ell <= n");

  std::string config, out_prefix;
  auto* experiment = app.add_subcommand("experiment", "Random-ensemble bias experiment");
  experiment->add_option("--config", config, "JSON file with the ensemble parameters")->required();
  experiment->add_option("--out", out_prefix, "Write <out>.json and <out>.tsv");

  ExportArgs ea;
  auto* export_cmd = app.add_subcommand("export", "Print a generated decomposition or det_n in file format");
  export_cmd->add_option("--what", ea.what, "Object")
      ->check(CLI::IsMember({"laplace", "two-row", "det4-quadratic", "det", "synthetic", "synthetic-target"}))
      ->capture_default_str();
  export_cmd->add_option("--n", ea.n, "Matrix size")->capture_default_str();
  export_cmd->add_option("--row", ea.row, "Row for laplace (1-based)")->capture_default_str();
  export_cmd->add_option("--rows", ea.rows, "Rows for two-row")->capture_default_str();
  export_cmd->add_option("--field", ea.field, "Prime p or 'int'")->capture_default_str();

  int sep_d = 4;
  std::string sep_field = "2";
  auto* separation = app.add_subcommand("separation", "Partition rank versus analytic rank of det_d");
  separation->add_option("--d", sep_d, "Order")->capture_default_str();
  separation->add_option("--field", sep_field, "Prime p")->capture_default_str();

  std::string script_path;
  auto* script = app.add_subcommand("script", "Run a reduction script");
  script->add_option("--path", script_path, "Script file")->required();

  std::string minor_rows = "1,2";
  bool minor_replace = false;
  auto* minors = app.add_subcommand("minors", "Rank of the 2x2 minors of det_4 on two rows");
  minors->add_option("--rows", minor_rows, "Two rows, 1-based")->capture_default_str();
  minors->add_flag("--replace", minor_replace, "Replace the first row by the sum of both");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? exit_ok : exit_rejected;
  }

  std::string name = app.get_subcommands().front()->get_name();
  Outcome o;
  try {
    if (*identity) o = cmd_identity(inject_fault);
    else if (*verify_cmd) o = cmd_verify(va);
    else if (*ark) o = cmd_ark(aa);
    else if (*search) o = cmd_search(sa);
    else if (*restrict_cmd) o = cmd_restrict(ra);
    else if (*experiment) o = cmd_experiment(config, out_prefix);
    else if (*export_cmd) return cmd_export(ea, out).code;
    else if (*separation) o = cmd_separation(sep_d, sep_field);
    else if (*script) o = cmd_script(script_path);
    else if (*minors) o = cmd_minors(minor_rows, minor_replace);
  } catch (const InternalError& e) {
    o.code = exit_violation;
    o.result = Json::object();
    o.result["error"] = e.what();
    o.summary = e.what();
  } catch (const std::exception& e) {
    o.code = exit_rejected;
    o.result = Json::object();
    o.result["error"] = e.what();
    o.summary = e.what();
  }
  Json payload = {{"command", name}, {"status", status_name(o.code)}, {"result", o.result}};
  out << payload.dump(2) << "\n";
  err << name << ": " << status_name(o.code) << (o.summary.empty() ? "" : ": " + o.summary) << "\n";
  return o.code;
}

}  // namespace partrank
