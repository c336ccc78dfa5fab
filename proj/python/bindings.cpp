#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "partrank/cli.hpp"
#include "partrank/error.hpp"
#include "partrank/records.hpp"
#include "partrank/text_io.hpp"

namespace py = pybind11;
using namespace partrank;

namespace {

std::string dump(const Json& j) { return j.dump(); }

MultilinearForm target_of(const Decomposition& dec, const std::optional<std::string>& target_text) {
  return target_text ? form_from_text(*target_text) : det_form(dec.shape().d, dec.shape().spec);
}

std::string bias_json(const MultilinearForm& t, const std::string& method, std::uint64_t samples, std::uint64_t seed,
                      double confidence, unsigned workers, std::uint64_t budget) {
  if (method == "exact") return dump(record(bias_exact(t, budget)));
  if (method == "gradient") return dump(record(bias_via_gradient(t, budget)));
  if (method == "mc") return dump(record(bias_monte_carlo(t, samples, seed, confidence, workers)));
  throw PreconditionError("method must be exact, gradient or mc");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Exact partition-rank and analytic-rank toolkit";

  py::register_exception<PreconditionError>(m, "PreconditionError", PyExc_ValueError);
  py::register_exception<BudgetExceeded>(m, "BudgetExceeded", PyExc_RuntimeError);
  py::register_exception<InternalError>(m, "InternalError", PyExc_AssertionError);

  m.def("levi_civita", [](std::vector<int> idx) { return levi_civita(idx); });
  m.def("identity", []() { return dump(record(check_4to2_identity())); });

  m.def("det_form", [](int n, const std::string& field) { return to_text(det_form(n, parse_field(field))); });
  m.def("laplace", [](int n, int row, const std::string& field) { return to_text(laplace(n, row, parse_field(field))); },
        py::arg("n"), py::arg("row"), py::arg("field") = "int");
  m.def("two_row_laplace",
        [](std::vector<int> rows, const std::string& field) { return to_text(two_row_laplace(rows, parse_field(field))); },
        py::arg("rows"), py::arg("field") = "int");
  m.def("det4_quadratic", [](const std::string& field) { return to_text(det4_quadratic(parse_field(field))); },
        py::arg("field") = "int");
  m.def("synthetic_two_term", [](const std::string& field) {
    auto [t, dec] = synthetic_two_term(parse_field(field));
    return std::make_pair(to_text(t), to_text(dec));
  }, py::arg("field") = "2");

  m.def("verify", [](const std::string& dec_text, std::optional<std::string> target_text) {
    Decomposition dec = decomposition_from_text(dec_text);
    return dump(record(verify(dec, target_of(dec, target_text))));
  }, py::arg("decomposition"), py::arg("target") = py::none());

  m.def("bias_det", [](int n, std::int64_t q, const std::string& method, std::uint64_t samples, std::uint64_t seed,
                       double confidence, unsigned workers, std::uint64_t budget) {
    if (method == "closed-form") return dump(record(ark_det_closed_form(n, q)));
    return bias_json(det_form(n, FieldSpec::prime(q)), method, samples, seed, confidence, workers, budget);
  }, py::arg("n"), py::arg("q"), py::arg("method") = "exact", py::arg("samples") = 100000, py::arg("seed") = 1,
        py::arg("confidence") = 0.99, py::arg("workers") = 1, py::arg("budget") = kDefaultBudget);
  m.def("bias_form", [](const std::string& form_text, const std::string& method, std::uint64_t samples,
                        std::uint64_t seed, double confidence, unsigned workers, std::uint64_t budget) {
    return bias_json(form_from_text(form_text), method, samples, seed, confidence, workers, budget);
  }, py::arg("form"), py::arg("method") = "exact", py::arg("samples") = 100000, py::arg("seed") = 1,
        py::arg("confidence") = 0.99, py::arg("workers") = 1, py::arg("budget") = kDefaultBudget);

  m.def("search_det", [](int n, std::int64_t q, int r, std::uint64_t budget, unsigned workers) {
    py::gil_scoped_release release;
    return dump(record(exhaustive_prk_at_most(det_form(n, FieldSpec::prime(q)), r, budget, workers,
                                              "det" + std::to_string(n))));
  }, py::arg("n"), py::arg("q"), py::arg("r"), py::arg("budget") = kDefaultSearchBudget, py::arg("workers") = 1);

  m.def("restrict", [](const std::string& dec_text, std::optional<std::string> target_text, bool force) {
    Decomposition dec = decomposition_from_text(dec_text);
    if (target_text) return dump(record(restriction_step_general(form_from_text(*target_text), dec)));
    return dump(record(restriction_step(dec, force)));
  }, py::arg("decomposition"), py::arg("target") = py::none(), py::arg("force") = false);

  m.def("run_experiment", [](const std::string& config_json) {
    EnsembleParams p = params_from_json(Json::parse(config_json));
    py::gil_scoped_release release;
    return dump(record(run_bias_experiment(p)));
  });
  m.def("separation", [](int d, std::int64_t q) { return dump(record(separation_report(d, q))); },
        py::arg("d") = 4, py::arg("q") = 2);
  m.def("minor_independence", [](std::vector<int> rows, bool replace) {
    return dump(record(check_minor_independence(rows, replace)));
  }, py::arg("rows"), py::arg("replace") = false);

  m.def("run_cli", [](std::vector<std::string> args) {
    args.insert(args.begin(), "partrank");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    return py::make_tuple(code, out.str(), err.str());
  });
}
