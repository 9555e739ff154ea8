#pragma once

#include <nlohmann/json.hpp>

#include "screenopt/assumptions.hpp"
#include "screenopt/solver.hpp"

namespace screenopt::io {

/// Shared by solve and oracle.
nlohmann::ordered_json to_json(const SolveReport& report);
nlohmann::ordered_json to_json(const AssumptionReport& report);
nlohmann::ordered_json to_json(const Menu& menu);

/// Deterministic text: two-space indent, trailing newline, reals with 17
/// significant digits.
std::string dump(const nlohmann::ordered_json& value);

}  // namespace screenopt::io
