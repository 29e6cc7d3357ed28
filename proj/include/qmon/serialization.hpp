#pragma once

#include "qmon/darwinism.hpp"
#include "qmon/phase_system.hpp"

#include <json.hpp>

#include <string>

namespace qmon {

// Operator as a list of rows of [re, im] pairs.
nlohmann::json operator_to_json(const Operator& op);
Operator operator_from_json(const nlohmann::json& j);

// PhaseVector as a JSON array of radians.
nlohmann::json phases_to_json(const PhaseVector& p);
PhaseVector phases_from_json(const nlohmann::json& j);

nlohmann::json solver_report_to_json(const SolverReport& report);
nlohmann::json fragment_profile_to_json(const FragmentProfile& profile);

// One float with 12 significant digits, the fixed CSV cell format.
std::string format_float(double value);

std::string fragment_profile_to_csv(const FragmentProfile& profile);

}  // namespace qmon
