#ifndef FLPAA_JSON_IO_HPP
#define FLPAA_JSON_IO_HPP

#include <optional>
#include <string>

#include <json.hpp>

#include "flpaa/adversary.hpp"

namespace flpaa {

using json = nlohmann::json;

// Schemas consumed by the CLI.
//   distribution: {"segments": [[lo, hi, mass], ...]}
//              or {"atoms": [[point, weight], ...], "side": "left"|"right"|"centered"}
//                 (atoms require an "ell" either in the object or from context)
//   instance:     {"n": int, "reports": [real, ...]}
//   two-instance: {"c": int, "reports": [real, ...]}
//   plan:         {"levels": [real, ...]}
PiecewiseUniform parse_distribution(const json& j, std::optional<long> ell = std::nullopt);
Instance parse_instance(const json& j);
TwoInstance parse_two_instance(const json& j);
QueryPlan parse_plan(const json& j);
InstanceFamily parse_family(const json& j);

json outcome_to_json(const TwoFacilityOutcome& out);

// Fixed-width float formatting (12 significant digits) so artifacts are
// byte-identical across runs.
std::string fmt12(double v);

// One experiment run driven by a config object; writes artifacts to
// out_path (when nonempty) and human-readable lines to `out`.
// Returns the process exit status.
int run_config(const json& config, const std::string& out_path, std::ostream& out);

}  // namespace flpaa

#endif
