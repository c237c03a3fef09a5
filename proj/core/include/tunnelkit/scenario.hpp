#pragma once

#include <filesystem>

#include <nlohmann/json.hpp>

#include "tunnelkit/tdse.hpp"

namespace tunnelkit {

// Scenario files carry units in every key:
//
// {
//   "barrier":  {"v0_ev": 10, "kappa_width": 8,        // or "width_nm"
//                "mass_kg": 9.1093837015e-31},          // optional, electron
//   "packet":   {"energy_ev": 5,                        // or "k0_per_m"
//                "k0_sigma": 8,                         // or "sigma_nm"
//                "x0_nm": -6.3},                        // optional, -9 sigma
//   "detector_offset_nm": 2.1,                          // optional, 3 sigma
//   "grid": {"points_per_length": 32, "dx_nm": 0.003},  // optional
//   "phase_per_step": 0.02,                             // optional
//   "sample_every": 10                                  // optional
// }
TraversalScenario scenario_from_json(const nlohmann::json& j);
TraversalScenario load_scenario(const std::filesystem::path& path);
nlohmann::json scenario_to_json(const TraversalScenario& scenario);

}  // namespace tunnelkit
