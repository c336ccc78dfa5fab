#pragma once

#include <json.hpp>

#include "partrank/decomp.hpp"
#include "partrank/experiments.hpp"
#include "partrank/rank.hpp"
#include "partrank/reduction_demos.hpp"
#include "partrank/search.hpp"

namespace partrank {

using Json = nlohmann::ordered_json;

/// Decimal string with 15 significant digits.
std::string decimal(double v);

Json record(const IdentityReport& r);
Json record(const Decomposition& dec);
Json record(const VerifyResult& r);
Json record(const BiasReport& r);
Json record(const UniformityReport& r);
Json record(const RestrictionOutcome& r);
Json record(const SearchCertificate& c);
Json record(const EnsembleParams& p);
Json record(const ExperimentReport& r);
Json record(const SeparationReport& r);
Json record(const ScriptTrace& t);
Json record(const MinorIndependenceReport& r);

/// Reads the EnsembleParams fields; unknown keys and bad values are
/// rejected with PreconditionError naming the field.
EnsembleParams params_from_json(const Json& j);

}  // namespace partrank
