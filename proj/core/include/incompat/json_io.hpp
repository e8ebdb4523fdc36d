#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "incompat/audit.hpp"
#include "incompat/convex_bounds.hpp"
#include "incompat/fidelity.hpp"
#include "incompat/linalg.hpp"
#include "incompat/qkd.hpp"

namespace incompat {

// Complex numbers are [re, im] pairs; matrices are flattened column-major.
// Malformed documents throw Error(ParseError).

nlohmann::json observable_to_json(const Observable& a);
Observable observable_from_json(const nlohmann::json& j);

nlohmann::json povm_to_json(const RankOnePovm& m);
RankOnePovm povm_from_json(const nlohmann::json& j);

/// {"states": [[[re, im], ...], ...]} or {"observables": [observable, ...]}.
Ensemble ensemble_from_json(const nlohmann::json& j);
/// {"weights", "directions"[, "reconstruction": [matrix, ...]]}; without a
/// reconstruction each outcome resends its own POVM direction.
EveStrategy strategy_from_json(const nlohmann::json& j);

nlohmann::json bound_report_to_json(const BoundReport& r);
nlohmann::json audit_row_to_json(const AuditRow& r);
nlohmann::json sim_result_to_json(const SimResult& r);

nlohmann::json parse_json(const std::string& text);
nlohmann::json read_json_file(const std::string& path);

/// Shortest decimal string that parses back to the same double.
std::string format_number(double x);

}  // namespace incompat
