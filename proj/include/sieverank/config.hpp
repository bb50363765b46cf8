#pragma once

// JSON forms of the user-facing configuration objects.
//
// Sieve space:
//   {"components": [
//      {"type": "identity", "input": {"coord": 0}, "coefficient": 1, "pinned": true},
//      {"type": "spline", "input": {"product": [0, 1]}, "degree": 2, "n_interior": 2,
//       "intercept": false, "knots": [...]}],             // knots optional
//    "normalization": {"type": "none"}
//                   | {"type": "anchor", "point": [0, 0], "value": 0}
//                   | {"type": "two_point", "points": [{"point": [..], "value": 0},
//                                                     {"point": [..], "value": 1}]}}
//
// Grid: {"points": [[z...], ...]} or {"axes": [[v, ...] | {"from": a, "to": b, "num": m}, ...]};
// axes expand to their Cartesian product, row-major (last axis fastest).

#include <filesystem>

#include <json.hpp>

#include "sieverank/io.hpp"
#include "sieverank/matrix.hpp"
#include "sieverank/monte_carlo.hpp"
#include "sieverank/optimize.hpp"
#include "sieverank/sieve.hpp"

namespace sieverank {

using Json = nlohmann::json;

/// Parses a JSON file; throws ConfigError with the path on failure.
Json read_json_file(const std::filesystem::path& path);

SieveTemplate sieve_template_from_json(const Json& j);
Json sieve_template_to_json(const SieveTemplate& t);
/// Realized spec including knots; parses back through sieve_template_from_json.
Json sieve_spec_to_json(const SieveSpec& spec);

DatasetSchema schema_from_json(const Json& j);
OptimizerConfig optimizer_from_json(const Json& j, OptimizerConfig base = {});
MCConfig mc_config_from_json(const Json& j);
Matrix grid_from_json(const Json& j);

}  // namespace sieverank
