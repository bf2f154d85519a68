#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "fssqm/analysis.hpp"
#include "fssqm/model.hpp"
#include "fssqm/verify.hpp"

namespace fssqm {

/// Malformed or schema-invalid configuration input.
struct config_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// JSON model description.  Schema (complex numbers are [re, im] pairs):
///
/// {
///   "lambda": 3,
///   "fock_dimension": 30,
///   "tolerance": 1e-9,                            // optional
///   "structure_function": {
///     "kind": "oscillator" | "c_lambda_extended" | "table",
///     "alpha": [a0, ...],                         // c_lambda_extended
///     "values": [F0, F1, ...]                     // table, F(0..fock_dimension)
///   },
///   "f": [ {"kind": "poly", "coeffs": [[re,im], ...]} |
///          {"kind": "table", "values": [[re,im], ...]}, ... ]   // lambda entries
/// }
struct ModelConfig {
    int lambda = 0;
    int fock_dimension = 0;
    double tolerance = 1e-9;
    StructureFunctionSpec structure_function;
    std::vector<ComponentFunction> f;
};

/// Parse and validate; parse errors report line and column.
ModelConfig parse_model_config(const std::string& text);
ModelConfig load_model_config(const std::string& path);

FssqmModel build_from_config(const ModelConfig& cfg);

using Json = nlohmann::ordered_json;

Json config_json(const ModelConfig& cfg);
Json relations_json(const std::vector<RelationResult>& results);
Json spectrum_json(const SpectrumReport& report);
Json topology_json(const TopologyReport& topo);
Json sector_json(const SectorReport& sector, const TopologyReport& invariants);

/// Locale-independent shortest decimal form ('.' decimal point).
std::string num_str(double v);

std::string relations_csv(const std::vector<RelationResult>& results);
std::string spectrum_csv(const SpectrumReport& analytic, const SpectrumReport& numeric);
std::string sectors_csv(const std::vector<SectorReport>& sectors,
                        const std::vector<TopologyReport>& invariants, int lambda);

}  // namespace fssqm
