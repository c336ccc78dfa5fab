#include <doctest.h>

#include "partrank/error.hpp"
#include "partrank/records.hpp"

using namespace partrank;

TEST_CASE("bias record") {
  Json j = record(bias_exact(det_form(2, FieldSpec::prime(2))));
  CHECK(j["bias"] == "1/4");
  CHECK(j["ark"] == "2");
  CHECK(j["ceil_ark"] == 2);
  CHECK(j["method"] == "full-enumeration");
  CHECK_FALSE(j.contains("seed"));
  Json mc = record(bias_monte_carlo(det_form(2, FieldSpec::prime(2)), 1000, 3));
  CHECK(mc["seed"] == 3);
  CHECK(mc["samples"] == 1000);
  CHECK(mc["bias"].is_null());
}

TEST_CASE("restriction record carries the replay data") {
  Json j = record(restriction_step(det4_quadratic(FieldSpec::prime(5)), true));
  CHECK(j["branch"] == "reduced");
  CHECK(j["support"] == Json::array({1, 2}));
  CHECK(j["vectors"].size() == 2);
  CHECK(j["basis_change"].size() == 4);
  Decomposition back = decomposition_from_text(j["new_decomposition"].get<std::string>());
  CHECK(verify(back, form_from_text(j["new_target"].get<std::string>())).verified);
}

TEST_CASE("search record") {
  Json j = record(exhaustive_prk_at_most(det_form(2, FieldSpec::prime(2)), 2, kDefaultSearchBudget, 1, "det2"));
  CHECK(j["verdict"] == "found");
  CHECK(j["target"] == "det2");
  CHECK(j["enumeration_size"] == 46);
  CHECK(decomposition_from_text(j["decomposition"].get<std::string>()).size() == 2);
}

TEST_CASE("params round trip through JSON") {
  EnsembleParams p;
  p.n = 7;
  p.q = 3;
  p.split = SplitPolicy::uniform_random_split;
  p.c_values = {1, 4};
  EnsembleParams back = params_from_json(record(p));
  CHECK(record(back) == record(p));
}

TEST_CASE("params_from_json names the offending field") {
  auto message = [](const char* text) {
    try {
      params_from_json(Json::parse(text));
    } catch (const PreconditionError& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  CHECK(message(R"({"nn": 3})") == "nn: unknown field");
  CHECK(message(R"({"n": "3"})") == "n: wrong type");
  CHECK(message(R"({"q": 6})").rfind("q:", 0) == 0);
  CHECK(message(R"({"split": "diagonal"})").rfind("split:", 0) == 0);
  CHECK(message(R"([1, 2])").rfind("config:", 0) == 0);
  CHECK(message(R"({"n": 5})").empty());
}

TEST_CASE("records are deterministic") {
  EnsembleParams p;
  p.n = 4;
  p.samples = 5;
  CHECK(record(run_bias_experiment(p)).dump() == record(run_bias_experiment(p)).dump());
  CHECK(record(separation_report(4, 2))["witnessed_ratio"] == "3/2");
  CHECK(record(check_4to2_identity())["permutations"] == 24);
}
