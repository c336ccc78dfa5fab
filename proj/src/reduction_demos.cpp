#include "partrank/reduction_demos.hpp"

#include <filesystem>
#include <random>
#include <sstream>

#include "partrank/error.hpp"
#include "partrank/rank.hpp"
#include "partrank/text_io.hpp"

namespace partrank {

std::string expectation_name(Expectation e) {
  switch (e) {
    case Expectation::verifies: return "verifies";
    case Expectation::structurally_equal_initial: return "structurally-equal-initial";
    case Expectation::linear_factors_unchanged: return "linear-factors-unchanged";
    case Expectation::linear_span_first_column: return "linear-span-first-column";
    case Expectation::linear_span_first_row: return "linear-span-first-row";
  }
  return "unknown";
}

Expectation parse_expectation(std::string_view text) {
  for (auto e : {Expectation::verifies, Expectation::structurally_equal_initial, Expectation::linear_factors_unchanged,
                 Expectation::linear_span_first_column, Expectation::linear_span_first_row}) {
    if (expectation_name(e) == text) return e;
  }
  throw PreconditionError("unknown expectation '" + std::string(text) + "'");
}

bool ScriptTrace::ok() const {
  return std::all_of(expectations.begin(), expectations.end(), [](const ExpectationResult& r) { return r.holds; });
}

namespace {

std::string join_rest(const std::vector<std::string>& tokens, std::size_t from) {
  std::string out;
  for (std::size_t i = from; i < tokens.size(); ++i) out += (i > from ? " " : "") + tokens[i];
  return out;
}

std::string resolve(const std::string& base_dir, const std::string& path) {
  const std::filesystem::path p(path);
  return p.is_absolute() ? path : (std::filesystem::path(base_dir) / p).string();
}

Decomposition load_initial(const std::vector<std::string>& t, const std::string& base_dir, const LineReader& reader) {
  if (t.size() == 3 && t[1] == "file") return decomposition_from_text(read_file(resolve(base_dir, t[2])));
  if (t.size() == 5 && t[1] == "laplace") {
    return laplace(static_cast<int>(parse_int(t[2])), static_cast<int>(parse_int(t[3])) - 1, parse_field(t[4]));
  }
  if (t.size() == 4 && t[1] == "two-row") {
    std::vector<int> rows;
    for (const auto& tok : split(t[2], ',')) rows.push_back(static_cast<int>(parse_int(tok)) - 1);
    return two_row_laplace(rows, parse_field(t[3]));
  }
  if (t.size() == 3 && t[1] == "det4-quadratic") return det4_quadratic(parse_field(t[2]));
  reader.fail("unrecognized initial decomposition reference");
}

std::vector<Value> read_int_row(LineReader& reader, std::size_t expected) {
  std::vector<Value> row;
  for (const auto& tok : split_whitespace(reader.next())) row.push_back(parse_int(tok));
  if (row.size() != expected) reader.fail("expected " + std::to_string(expected) + " integers");
  return row;
}

}  // namespace

ReductionScript parse_script(std::string_view text, const std::string& base_dir) {
  LineReader reader(text);
  std::optional<Decomposition> initial;
  std::string initial_ref, target_ref;
  std::optional<MultilinearForm> target;
  std::vector<ReductionStep> steps;
  std::vector<Expectation> expectations;
  while (!reader.at_end()) {
    const auto t = split_whitespace(reader.next());
    const std::string& cmd = t[0];
    if (cmd == "initial") {
      if (t.size() < 2) reader.fail("initial needs a reference");
      initial = load_initial(t, base_dir, reader);
      initial_ref = join_rest(t, 1);
      continue;
    }
    if (!initial) reader.fail("'initial' must come first");
    const Shape& s = initial->shape();
    const auto r = initial->size();
    if (cmd == "target") {
      if (t.size() == 3 && t[1] == "det") {
        target = det_form(static_cast<int>(parse_int(t[2])), s.spec);
      } else if (t.size() == 3 && t[1] == "file") {
        target = form_from_text(read_file(resolve(base_dir, t[2])));
      } else {
        reader.fail("target must be 'det <n>' or 'file <path>'");
      }
      target_ref = join_rest(t, 1);
    } else if (cmd == "expect") {
      if (t.size() != 2) reader.fail("expect needs one property");
      expectations.push_back(parse_expectation(t[1]));
    } else if (cmd == "step") {
      if (t.size() < 2) reader.fail("step needs a kind");
      if (t[1] == "linear") {
        LinearStep step;
        step.beta.assign(r, Polynomial(s.spec, s.d, s.n));
        while (true) {
          if (reader.at_end()) reader.fail("missing 'end'");
          const auto u = split_whitespace(reader.next());
          if (u[0] == "end") break;
          if (u[0] == "beta" && u.size() == 2) {
            const auto j = parse_int(u[1]);
            if (j < 1 || static_cast<std::size_t>(j) > r) reader.fail("beta index out of range");
            step.beta[static_cast<std::size_t>(j - 1)] = read_polynomial(reader);
          } else if (u[0] == "c" && u.size() == 1) {
            std::vector<Vector> rows;
            for (std::size_t i = 0; i < r; ++i) rows.push_back(read_int_row(reader, r));
            step.c = Matrix::from_rows(s.spec, rows);
          } else {
            reader.fail("expected 'beta <j>', 'c' or 'end'");
          }
        }
        steps.emplace_back(std::move(step));
      } else if (t[1] == "syzygy") {
        SyzygyStep step;
        step.q.assign(r, std::vector<Polynomial>(r, Polynomial(s.spec, s.d, s.n)));
        while (true) {
          if (reader.at_end()) reader.fail("missing 'end'");
          const auto u = split_whitespace(reader.next());
          if (u[0] == "end") break;
          if (u[0] != "q" || u.size() != 3) reader.fail("expected 'q <i> <j>' or 'end'");
          const auto i = parse_int(u[1]), j = parse_int(u[2]);
          if (i < 1 || j < 1 || static_cast<std::size_t>(i) > r || static_cast<std::size_t>(j) > r) {
            reader.fail("q index out of range");
          }
          step.q[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(j - 1)] = read_polynomial(reader);
        }
        steps.emplace_back(std::move(step));
      } else if (t[1] == "symmetric") {
        if (t.size() == 3 && t[2] == "transpose") {
          if (s.d != s.n) reader.fail("transpose needs d == n");
          steps.emplace_back(SymmetricStep{transpose_map(s.n, s.spec)});
          continue;
        }
        const auto vars = static_cast<std::size_t>(s.d * s.n);
        if (reader.at_end() || reader.next() != "L") reader.fail("expected 'L'");
        std::vector<Vector> rows;
        for (std::size_t i = 0; i < vars; ++i) rows.push_back(read_int_row(reader, vars));
        if (reader.at_end() || reader.next() != "end") reader.fail("missing 'end'");
        steps.emplace_back(SymmetricStep{Matrix::from_rows(s.spec, rows)});
      } else {
        reader.fail("unknown step kind '" + t[1] + "'");
      }
    } else {
      reader.fail("unknown directive '" + cmd + "'");
    }
  }
  if (!initial) throw PreconditionError("script has no initial decomposition");
  MultilinearForm tgt = target ? std::move(*target) : expand(*initial);
  return ReductionScript{initial_ref, std::move(*initial), target_ref, std::move(tgt), std::move(steps),
                         std::move(expectations)};
}

std::string to_text(const ReductionScript& script) {
  std::ostringstream out;
  out << "initial " << script.initial_ref << '\n';
  if (!script.target_ref.empty()) out << "target " << script.target_ref << '\n';
  const auto& s = script.initial.shape();
  for (const auto& step : script.steps) {
    if (const auto* lin = std::get_if<LinearStep>(&step)) {
      out << "step linear\n";
      for (std::size_t j = 0; j < lin->beta.size(); ++j) out << "beta " << j + 1 << '\n' << to_text(lin->beta[j]);
      if (lin->c) {
        out << "c\n";
        for (std::size_t i = 0; i < lin->c->rows(); ++i) {
          for (std::size_t j = 0; j < lin->c->cols(); ++j) out << (j ? " " : "") << (*lin->c)(i, j);
          out << '\n';
        }
      }
      out << "end\n";
    } else if (const auto* syz = std::get_if<SyzygyStep>(&step)) {
      out << "step syzygy\n";
      for (std::size_t i = 0; i < syz->q.size(); ++i)
        for (std::size_t j = 0; j < syz->q[i].size(); ++j)
          if (!syz->q[i][j].is_zero()) out << "q " << i + 1 << ' ' << j + 1 << '\n' << to_text(syz->q[i][j]);
      out << "end\n";
    } else {
      const auto& sym = std::get<SymmetricStep>(step);
      if (s.d == s.n && sym.l == transpose_map(s.n, s.spec)) {
        out << "step symmetric transpose\n";
        continue;
      }
      out << "step symmetric\nL\n";
      for (std::size_t i = 0; i < sym.l.rows(); ++i) {
        for (std::size_t j = 0; j < sym.l.cols(); ++j) out << (j ? " " : "") << sym.l(i, j);
        out << '\n';
      }
      out << "end\n";
    }
  }
  for (auto e : script.expectations) out << "expect " << expectation_name(e) << '\n';
  return out.str();
}

namespace {

bool linear_span_is(const Decomposition& dec, const std::vector<std::size_t>& coords) {
  const Shape& s = dec.shape();
  const auto vars = static_cast<std::size_t>(s.d * s.n);
  std::vector<Vector> vecs;
  for (const auto& t : dec.terms()) {
    const Polynomial q = t.q_polynomial();
    if (q.degree() != std::optional<int>(1)) return false;
    Vector v = q.linear_coefficients();
    for (std::size_t i = 0; i < vars; ++i)
      if (v[i] != 0 && std::find(coords.begin(), coords.end(), i) == coords.end()) return false;
    vecs.push_back(std::move(v));
  }
  return rank_of(s.spec, vecs, vars) == coords.size();
}

bool holds(Expectation e, const Decomposition& initial, const Decomposition& last, const MultilinearForm& target) {
  const Shape& s = last.shape();
  switch (e) {
    case Expectation::verifies: return verify(last, target).verified;
    case Expectation::structurally_equal_initial: return structurally_equal(last, initial);
    case Expectation::linear_factors_unchanged: {
      if (last.size() != initial.size()) return false;
      for (std::size_t i = 0; i < last.size(); ++i)
        if (!(last.terms()[i].q_polynomial() == initial.terms()[i].q_polynomial())) return false;
      return true;
    }
    case Expectation::linear_span_first_column: {
      std::vector<std::size_t> coords;
      for (int slot = 0; slot < s.d; ++slot) coords.push_back(static_cast<std::size_t>(slot * s.n));
      return linear_span_is(last, coords);
    }
    case Expectation::linear_span_first_row: {
      std::vector<std::size_t> coords;
      for (int c = 0; c < s.n; ++c) coords.push_back(static_cast<std::size_t>(c));
      return linear_span_is(last, coords);
    }
  }
  return false;
}

}  // namespace

ScriptTrace run_script(const ReductionScript& script) {
  ScriptTrace trace;
  const auto first = verify(script.initial, script.target);
  if (!first.verified) {
    throw PreconditionError("initial decomposition does not verify; mismatch at " + first.witness_text);
  }
  trace.decompositions.push_back(script.initial);
  for (std::size_t i = 0; i < script.steps.size(); ++i) {
    const auto& step = script.steps[i];
    try {
      trace.decompositions.push_back(apply_reduction(trace.decompositions.back(), step));
    } catch (const PreconditionError& e) {
      throw PreconditionError("step " + std::to_string(i + 1) + " (" + step_name(step) + "): " + e.what());
    }
    trace.step_names.push_back(step_name(step));
    if (!verify(trace.decompositions.back(), script.target).verified) {
      throw InternalError("step " + std::to_string(i + 1) + " broke verification");
    }
  }
  for (auto e : script.expectations)
    trace.expectations.push_back({e, holds(e, script.initial, trace.decompositions.back(), script.target)});
  return trace;
}

namespace {

Polynomial variable(FieldSpec spec, int d, int n, int slot, int coord, Value coeff) {
  Polynomial p(spec, d, n);
  p.add_term({static_cast<std::uint16_t>(slot * n + coord)}, coeff);
  return p;
}

std::string generator_ref(const std::string& name, int n, FieldSpec spec) {
  return name + " " + std::to_string(n) + " 1 " + (spec.is_prime_field() ? std::to_string(spec.modulus()) : "int");
}

}  // namespace

ReductionScript demo_linear_roundtrip(FieldSpec spec) {
  if (!spec.is_prime_field()) throw PreconditionError("the linear round trip solves for c and needs a prime field");
  Decomposition initial = laplace(3, 0, spec);
  LinearStep there, back;
  for (int j = 0; j < 3; ++j) {
    Value scale = spec.from_int(j + 2);
    if (scale == 0) scale = 1;
    there.beta.push_back(variable(spec, 3, 3, 0, (j + 1) % 3, scale));
    back.beta.push_back(initial.terms()[static_cast<std::size_t>(j)].q_polynomial());
  }
  MultilinearForm target = det_form(3, spec);
  return ReductionScript{generator_ref("laplace", 3, spec), std::move(initial), "det 3", std::move(target),
                         {there, back},
                         {Expectation::verifies, Expectation::structurally_equal_initial,
                          Expectation::linear_span_first_row}};
}

ReductionScript demo_transpose(FieldSpec spec) {
  return ReductionScript{generator_ref("laplace", 4, spec), laplace(4, 0, spec), "det 4", det_form(4, spec),
                         {SymmetricStep{transpose_map(4, spec)}},
                         {Expectation::verifies, Expectation::linear_span_first_column}};
}

ReductionScript demo_syzygy(FieldSpec spec, std::uint64_t seed) {
  if (!spec.is_prime_field()) throw PreconditionError("random syzygies need a prime field");
  const int n = 3;
  std::mt19937_64 rng(mix_seed(seed, 0));
  SyzygyStep step;
  step.q.assign(3, std::vector<Polynomial>(3, Polynomial(spec, n, n)));
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = i + 1; j < 3; ++j) {
      Vector coeffs(static_cast<std::size_t>(n * n));
      for (auto& c : coeffs) c = uniform_below(rng, spec.modulus());
      step.q[i][j] = Polynomial::linear(spec, n, n, coeffs);
      step.q[j][i] = step.q[i][j].scaled(spec.neg(1));
    }
  return ReductionScript{generator_ref("laplace", 3, spec), laplace(3, 0, spec), "det 3", det_form(3, spec),
                         {step},
                         {Expectation::verifies, Expectation::linear_factors_unchanged}};
}

MinorIndependenceReport check_minor_independence(std::vector<int> rows, bool replace_one_with_sum) {
  std::sort(rows.begin(), rows.end());
  if (rows.size() != 2 || rows[0] == rows[1] || rows[0] < 0 || rows[1] > 3) {
    throw PreconditionError("minor independence needs two distinct rows of a 4x4 matrix");
  }
  const FieldSpec z = FieldSpec::integers();
  std::vector<Vector> vecs;
  for (int j1 = 0; j1 < 4; ++j1)
    for (int j2 = j1 + 1; j2 < 4; ++j2) {
      const std::vector<int> cols{j1, j2};
      // Coefficients of a_{rows[0], i} a_{rows[1], j} over the 16 pairs (i, j).
      const Polynomial p = Polynomial::from_form(minor_form(cols, 4, z), rows, 4);
      Vector v(16, 0);
      for (const auto& [m, c] : p.terms()) v[static_cast<std::size_t>((m[0] % 4) * 4 + m[1] % 4)] = c;
      vecs.push_back(std::move(v));
    }
  if (replace_one_with_sum)
    for (std::size_t i = 0; i < 16; ++i) vecs[0][i] = vecs[1][i] + vecs[2][i];
  return {rows, vecs.size(), rank_of(z, vecs, 16)};
}

}  // namespace partrank
