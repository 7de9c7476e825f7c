#pragma once

// Builds experiment configurations from flat key-value files. Keys are
// looked up as prefix + name; unknown keys are left for reject_unused().

#include <string>

#include "cloak/helmholtz_experiment.hpp"
#include "cloak/quasistatic_experiment.hpp"
#include "cloak/workbench/config.hpp"

namespace cloak::workbench {

/// Keys: alpha_star delta_star gamma n disk.center (re im) disk.radius
/// disk.epsilon disk.series_order contour_radius incident (re im pairs,
/// ascending powers) measurement_points window (4) grid (2) device_level
/// quiet_level. Lengths are raw problem units.
quasistatic::QuasistaticExperimentConfig quasistatic_config(const FlatConfig& cfg, const std::string& prefix = "");

/// Keys: k alpha delta gamma devices N max_spacing (both circles)
/// alpha_spacing gamma_spacing tauA tauB device_angles
/// incident_angle obstacle (kite|none) kite_scale kite_center (2) nystrom_q
/// measurement_points window (4) grid (2) device_level. Lengths are in
/// wavelengths.
helmholtz::HelmholtzExperimentConfig helmholtz_config(const FlatConfig& cfg, const std::string& prefix = "");

}  // namespace cloak::workbench
