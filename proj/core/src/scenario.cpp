#include "stancesim/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "stancesim/errors.hpp"

namespace stancesim {

Scenario builtin_scenario(int index) {
  switch (index) {
    case 1:
      return {"scenario1", 0.049, -4.5, -4.5, -10.0, Mat2::diag(10000.0, 2000.0), 10.0};
    case 2:
      return {"scenario2", 0.040, -4.5, -4.5, -10.0, Mat2::diag(5000.0, 4000.0), 14.0};
    case 3:
      return {"scenario3", 0.035, -7.0, -7.0, -14.0, Mat2::diag(7000.0, 700.0), 6.3};
    case 4:
      return {"scenario4", 0.030, -2.0, -2.0, -4.0, Mat2::diag(7000.0, 5000.0), 100.0};
    default:
      throw UnknownScenarioError("scenario index " + std::to_string(index) +
                                 " outside 1.." + std::to_string(kScenarioCount));
  }
}

std::string scenario_to_json(const Scenario& s) {
  std::ostringstream os;
  os.precision(17);
  os << "{\"name\":\"" << s.name << "\",\"y_m\":" << s.y_m << ",\"mu1\":" << s.mu1
     << ",\"mu2\":" << s.mu2 << ",\"observer_pole\":" << s.observer_pole
     << ",\"gamma_x\":[[" << s.gamma_x.a11 << "," << s.gamma_x.a12 << "],["
     << s.gamma_x.a21 << "," << s.gamma_x.a22 << "]],\"gamma_r\":" << s.gamma_r
     << "}";
  return os.str();
}

RunConfig default_run_config() { return RunConfig{}; }

RunConfig make_run_config(const Scenario& s) {
  RunConfig cfg;
  cfg.physical.com_offset = s.y_m;
  cfg.regulator.mu1 = s.mu1;
  cfg.regulator.mu2 = s.mu2;
  cfg.regulator.observer_pole = s.observer_pole;
  cfg.mrac.gamma_x = s.gamma_x;
  cfg.mrac.gamma_r = s.gamma_r;
  return cfg;
}

std::vector<std::string> RunConfig::validate() const {
  physical.validate("physical");
  mrac.validate("mrac");
  sim.validate("sim");
  std::vector<std::string> warnings;
  if (auto w = regulator.validate("regulator"); !w.empty()) warnings.push_back(w);
  return warnings;
}

RunReport make_report(const SimResult& result) {
  RunReport rep;
  rep.status = result.status;
  if (result.size() == 0) return rep;
  rep.x1_settling_time = settling_time(result.x1, result.t, 0.0, 1e-3);
  rep.terminal_theta_abs = std::abs(result.theta.back());
  rep.terminal_tracking_error = std::hypot(result.e1.back(), result.e2.back());
  rep.peak_u = 0.0;
  for (double u : result.u_c) rep.peak_u = std::max(rep.peak_u, std::abs(u));
  const auto [vmin, vmax] = std::minmax_element(result.V.begin(), result.V.end());
  rep.v_min = *vmin;
  rep.v_max = *vmax;
  return rep;
}

SimResult run(const RunConfig& cfg) {
  const StanceLinearization lin = linearize(cfg.physical);
  const RegulatorDesign design = design_regulator(lin, cfg.regulator);
  if (cfg.sim.mode == RunMode::coupled) {
    return run_coupled(cfg.physical, design, cfg.mrac, cfg.sim);
  }
  return run_sequential(cfg.physical, design, cfg.mrac, cfg.sim);
}

}  // namespace stancesim
