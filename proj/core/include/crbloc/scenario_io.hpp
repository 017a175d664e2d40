#pragma once

#include <string>

#include "crbloc/estimator.hpp"
#include "crbloc/geometry.hpp"
#include "crbloc/quadrature.hpp"

namespace crbloc {

// A scenario file's full contents: the geometry plus any quadrature and
// estimator overrides it carries.
struct ScenarioBundle {
    Scenario scenario;
    QuadratureSpec quadrature;
    EstimatorConfig estimator;
    std::string description;
};

// Parses a JSON scenario document. Beacon indices in the file are 1-based;
// beacons are renumbered into canonical order (biased first) on load, and
// diagnostics refer to the canonical order. Unknown keys anywhere throw
// Error(ParseError); bias model parameter breaches throw
// Error(InvalidModel). Geometry-level violations (bad noise stds, too few
// beacons, ...) are NOT raised here; run geometry.validate on the result.
ScenarioBundle parse_scenario_json(const std::string& text);

// parse_scenario_json over a file's contents; unreadable files throw
// Error(ParseError).
ScenarioBundle load_scenario(const std::string& path);

}  // namespace crbloc
