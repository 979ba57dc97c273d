#pragma once

#include <optional>
#include <string>
#include <vector>

#include "stancesim/mrac.hpp"
#include "stancesim/plant.hpp"
#include "stancesim/regulator.hpp"
#include "stancesim/sim.hpp"

namespace stancesim {

// One registry entry: the mass offset and the tuning that goes with it.
// Everything else inherits the library defaults.
struct Scenario {
  std::string name;
  double y_m = 0.049;
  double mu1 = -4.5;
  double mu2 = -4.5;
  double observer_pole = -10.0;
  Mat2 gamma_x = Mat2::diag(10000.0, 2000.0);
  double gamma_r = 10.0;
};

// Scenarios 1..4; throws UnknownScenarioError outside that range.
Scenario builtin_scenario(int index);
inline constexpr int kScenarioCount = 4;

// Canonical serialization used by the golden-registry test.
std::string scenario_to_json(const Scenario& s);

// Full merged run configuration: file values over scenario values over
// library defaults.
struct RunConfig {
  PhysicalParams physical;
  RegulatorConfig regulator;
  MracConfig mrac;
  SimConfig sim;

  // Throws ValidationError on the first violated invariant; returns
  // accumulated warnings (currently only the slow-observer one).
  std::vector<std::string> validate() const;
};

RunConfig make_run_config(const Scenario& s);
RunConfig default_run_config();

// Parses a JSON config file with sections physical/regulator/mrac/sim and
// overlays it on `base`. Unknown keys are errors. With
// `enforce_invariants == false` the type checks still run but invariant
// violations are skipped, so deliberately broken physics can be simulated.
RunConfig load_config(const std::string& path, const RunConfig& base,
                      bool enforce_invariants = true);
RunConfig apply_config_text(const std::string& text, const RunConfig& base,
                            bool enforce_invariants = true);

// Per-run summary computed from a finished SimResult.
struct RunReport {
  std::optional<double> x1_settling_time;  // 0.1% band around zero
  double terminal_theta_abs = 0.0;
  double terminal_tracking_error = 0.0;  // ||e|| at the last sample
  double peak_u = 0.0;
  double v_min = 0.0;
  double v_max = 0.0;
  SimStatus status = SimStatus::completed;
};

RunReport make_report(const SimResult& result);

// Runs one scenario-derived config in its configured mode.
SimResult run(const RunConfig& cfg);

}  // namespace stancesim
