// Command line front end: scenario runs with CSV export, design-constant
// dumps, and the acceptance check suite.

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "stancesim/acceptance.hpp"
#include "stancesim/csv.hpp"
#include "stancesim/errors.hpp"
#include "stancesim/scenario.hpp"

namespace {

using namespace stancesim;

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

int cmd_run(int scenario_index, const std::optional<std::string>& mode,
            const std::optional<std::string>& config_path, const std::string& out_dir,
            const std::optional<double>& dt, const std::optional<double>& duration) {
  const Scenario scenario = builtin_scenario(scenario_index);
  RunConfig cfg = make_run_config(scenario);
  if (config_path) cfg = load_config(*config_path, cfg, /*enforce_invariants=*/true);
  if (mode) {
    if (*mode == "sequential") {
      cfg.sim.mode = RunMode::sequential;
    } else if (*mode == "coupled") {
      cfg.sim.mode = RunMode::coupled;
    } else {
      throw ValidationError("--mode must be sequential or coupled");
    }
  }
  if (dt) cfg.sim.dt = *dt;
  if (duration) cfg.sim.duration = *duration;
  for (const std::string& w : cfg.validate()) {
    std::cerr << "warning: " << w << "\n";
  }

  const SimResult result = run(cfg);
  const std::string mode_name =
      cfg.sim.mode == RunMode::coupled ? "coupled" : "sequential";
  std::filesystem::create_directories(out_dir);
  const std::string path =
      (std::filesystem::path(out_dir) / (scenario.name + "_" + mode_name + ".csv")).string();
  write_csv(result, path);

  const RunReport rep = make_report(result);
  std::cout << scenario.name << " (" << mode_name << "): " << to_string(rep.status) << ", "
            << result.size() << " samples -> " << path << "\n";
  std::cout << std::setprecision(6);
  std::cout << "  x1 settling time: ";
  if (rep.x1_settling_time) {
    std::cout << *rep.x1_settling_time << " s\n";
  } else {
    std::cout << "not settled\n";
  }
  std::cout << "  terminal |theta|: " << rep.terminal_theta_abs << " rad\n"
            << "  terminal ||e||:   " << rep.terminal_tracking_error << " m\n"
            << "  peak |u_c|:       " << rep.peak_u << " N\n"
            << "  V range:          [" << rep.v_min << ", " << rep.v_max << "]\n";
  return rep.status == SimStatus::completed ? 0 : 1;
}

int cmd_design(int scenario_index) {
  const Scenario scenario = builtin_scenario(scenario_index);
  const RunConfig cfg = make_run_config(scenario);
  const StanceLinearization lin = linearize(cfg.physical);
  const RegulatorDesign design = design_regulator(lin, cfg.regulator);
  const MracDerived md = make_mrac_derived(cfg.physical.cart_mass, cfg.mrac);
  const auto [kx, kr] = ideal_gains(cfg.physical.cart_mass, cfg.physical.friction_b,
                                    cfg.mrac.b_nominal);

  std::cout << std::setprecision(10);
  std::cout << scenario.name << " design constants\n"
            << "  delta:       " << delta(cfg.physical) << " kg m^2\n"
            << "  a:           " << lin.a << " 1/s^2\n"
            << "  b_lin:       " << lin.b_lin << "\n"
            << "  feedthrough: " << lin.feedthrough << " s^2\n"
            << "  K:           [" << design.K.x1 << ", " << design.K.x2 << "]\n"
            << "  K_e:         " << design.K_e << "\n"
            << "  equilibrium: " << equilibrium_cart_position(cfg.physical) << " m\n"
            << "  A_m:         [[" << md.A_m.a11 << ", " << md.A_m.a12 << "], ["
            << md.A_m.a21 << ", " << md.A_m.a22 << "]]\n"
            << "  B_m:         [" << md.B_m.x1 << ", " << md.B_m.x2 << "]\n"
            << "  P:           [[" << md.P.a11 << ", " << md.P.a12 << "], [" << md.P.a21
            << ", " << md.P.a22 << "]]\n"
            << "  ideal K_x:   [" << kx.x1 << ", " << kx.x2 << "]\n"
            << "  ideal K_r:   " << kr << "\n";
  return 0;
}

int cmd_check(const std::optional<std::string>& config_path) {
  acceptance::ConfigOverlay overlay;
  if (config_path) {
    const std::string text = read_file(*config_path);
    overlay = [text](const RunConfig& base) {
      return apply_config_text(text, base, /*enforce_invariants=*/false);
    };
  }
  const auto results = acceptance::run_all(overlay);
  acceptance::print_results(std::cout, results);
  const bool ok = acceptance::all_passed(results);
  std::cout << (ok ? "all criteria passed" : "some criteria failed") << "\n";
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"one-leg stance balance simulator"};
  app.require_subcommand(1);

  int scenario_index = 1;
  std::optional<std::string> mode, config_path;
  std::string out_dir = ".";
  std::optional<double> dt, duration;

  auto* run_cmd = app.add_subcommand("run", "simulate a scenario and export CSV");
  run_cmd->add_option("--scenario", scenario_index, "scenario index 1..4")->required();
  run_cmd->add_option("--mode", mode, "sequential | coupled");
  run_cmd->add_option("--config", config_path, "JSON config overlay");
  run_cmd->add_option("--out", out_dir, "output directory");
  run_cmd->add_option("--dt", dt, "integration step (s)");
  run_cmd->add_option("--duration", duration, "horizon (s)");

  int design_index = 1;
  auto* design_cmd = app.add_subcommand("design", "print controller design constants");
  design_cmd->add_option("--scenario", design_index, "scenario index 1..4")->required();

  std::optional<std::string> check_config;
  auto* check_cmd = app.add_subcommand("check", "run the acceptance criteria");
  check_cmd->add_option("--config", check_config, "JSON config overlay injected into every run");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    std::cout << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n\n" << app.help();
    return 2;
  }

  try {
    if (run_cmd->parsed()) {
      return cmd_run(scenario_index, mode, config_path, out_dir, dt, duration);
    }
    if (design_cmd->parsed()) return cmd_design(design_index);
    if (check_cmd->parsed()) return cmd_check(check_config);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
