#pragma once

#include <string>

#include "porolb/config.hpp"

namespace porolb {

struct ScenarioOutcome {
  bool converged = true;
  std::string summary;
};

/// Runs one scenario end to end: creates the output directory, echoes the
/// config for reproducibility, executes the driver and writes CSV/report
/// (and VTK when requested) outputs.
ScenarioOutcome run_scenario(const Scenario& scenario);

}  // namespace porolb
