#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>

#include <json.hpp>

#include "stancesim/errors.hpp"
#include "stancesim/scenario.hpp"

namespace stancesim {

namespace {

using nlohmann::json;

[[noreturn]] void type_error(const std::string& path, const char* expected) {
  throw ValidationError(path + " must be " + expected);
}

double as_number(const json& j, const std::string& path) {
  if (!j.is_number()) type_error(path, "a number");
  return j.get<double>();
}

bool as_bool(const json& j, const std::string& path) {
  if (!j.is_boolean()) type_error(path, "a boolean");
  return j.get<bool>();
}

Mat2 as_mat2(const json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_array() || !j[1].is_array() ||
      j[0].size() != 2 || j[1].size() != 2) {
    type_error(path, "a 2x2 array of numbers");
  }
  return {as_number(j[0][0], path), as_number(j[0][1], path),
          as_number(j[1][0], path), as_number(j[1][1], path)};
}

Vec2 as_vec2(const json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 2) type_error(path, "an array of 2 numbers");
  return {as_number(j[0], path), as_number(j[1], path)};
}

// Rejects keys outside the accepted set with their dotted path.
void check_keys(const json& obj, const std::string& section,
                std::initializer_list<const char*> allowed) {
  for (const auto& [key, value] : obj.items()) {
    bool ok = false;
    for (const char* a : allowed) {
      if (key == a) {
        ok = true;
        break;
      }
    }
    if (!ok) {
      throw UnknownKeyError("unknown key " + (section.empty() ? key : section + "." + key));
    }
  }
}

void apply_physical(const json& j, PhysicalParams& p) {
  check_keys(j, "physical",
             {"cart_mass", "body_mass", "leg_length", "gravity", "com_offset", "y_m",
              "friction_b", "b_true"});
  if (j.contains("cart_mass")) p.cart_mass = as_number(j["cart_mass"], "physical.cart_mass");
  if (j.contains("body_mass")) p.body_mass = as_number(j["body_mass"], "physical.body_mass");
  if (j.contains("leg_length")) p.leg_length = as_number(j["leg_length"], "physical.leg_length");
  if (j.contains("gravity")) p.gravity = as_number(j["gravity"], "physical.gravity");
  if (j.contains("com_offset")) p.com_offset = as_number(j["com_offset"], "physical.com_offset");
  if (j.contains("y_m")) p.com_offset = as_number(j["y_m"], "physical.y_m");
  if (j.contains("friction_b")) p.friction_b = as_number(j["friction_b"], "physical.friction_b");
  if (j.contains("b_true")) p.friction_b = as_number(j["b_true"], "physical.b_true");
}

void apply_regulator(const json& j, RegulatorConfig& r) {
  check_keys(j, "regulator", {"mu1", "mu2", "observer_pole"});
  if (j.contains("mu1")) r.mu1 = as_number(j["mu1"], "regulator.mu1");
  if (j.contains("mu2")) r.mu2 = as_number(j["mu2"], "regulator.mu2");
  if (j.contains("observer_pole")) {
    r.observer_pole = as_number(j["observer_pole"], "regulator.observer_pole");
  }
}

void apply_mrac(const json& j, MracConfig& m) {
  check_keys(j, "mrac",
             {"gamma_x", "gamma_r", "q", "b_nominal", "prescale_reference", "kx_hat0",
              "kr_hat0"});
  if (j.contains("gamma_x")) m.gamma_x = as_mat2(j["gamma_x"], "mrac.gamma_x");
  if (j.contains("gamma_r")) m.gamma_r = as_number(j["gamma_r"], "mrac.gamma_r");
  if (j.contains("q")) m.Q = as_mat2(j["q"], "mrac.q");
  if (j.contains("b_nominal")) m.b_nominal = as_number(j["b_nominal"], "mrac.b_nominal");
  if (j.contains("prescale_reference")) {
    m.prescale_reference = as_bool(j["prescale_reference"], "mrac.prescale_reference");
  }
  if (j.contains("kx_hat0")) m.kx_hat0 = as_vec2(j["kx_hat0"], "mrac.kx_hat0");
  if (j.contains("kr_hat0")) m.kr_hat0 = as_number(j["kr_hat0"], "mrac.kr_hat0");
}

void apply_sim(const json& j, SimConfig& s) {
  check_keys(j, "sim",
             {"dt", "duration", "integrator", "mode", "theta0", "theta_dot0", "y0",
              "y_dot0", "x2_hat0", "use_observer"});
  if (j.contains("dt")) s.dt = as_number(j["dt"], "sim.dt");
  if (j.contains("duration")) s.duration = as_number(j["duration"], "sim.duration");
  if (j.contains("integrator")) {
    if (!j["integrator"].is_string()) type_error("sim.integrator", "\"rk4\" or \"euler\"");
    const std::string v = j["integrator"].get<std::string>();
    if (v == "rk4") {
      s.integrator = Integrator::rk4;
    } else if (v == "euler") {
      s.integrator = Integrator::euler;
    } else {
      type_error("sim.integrator", "\"rk4\" or \"euler\"");
    }
  }
  if (j.contains("mode")) {
    if (!j["mode"].is_string()) type_error("sim.mode", "\"sequential\" or \"coupled\"");
    const std::string v = j["mode"].get<std::string>();
    if (v == "sequential") {
      s.mode = RunMode::sequential;
    } else if (v == "coupled") {
      s.mode = RunMode::coupled;
    } else {
      type_error("sim.mode", "\"sequential\" or \"coupled\"");
    }
  }
  if (j.contains("theta0")) s.theta0 = as_number(j["theta0"], "sim.theta0");
  if (j.contains("theta_dot0")) s.theta_dot0 = as_number(j["theta_dot0"], "sim.theta_dot0");
  if (j.contains("y0")) {
    if (j["y0"].is_null()) {
      s.y0.reset();
    } else {
      s.y0 = as_number(j["y0"], "sim.y0");
    }
  }
  if (j.contains("y_dot0")) s.y_dot0 = as_number(j["y_dot0"], "sim.y_dot0");
  if (j.contains("x2_hat0")) s.x2_hat0 = as_number(j["x2_hat0"], "sim.x2_hat0");
  if (j.contains("use_observer")) {
    s.use_observer = as_bool(j["use_observer"], "sim.use_observer");
  }
}

}  // namespace

RunConfig apply_config_text(const std::string& text, const RunConfig& base,
                            bool enforce_invariants) {
  json root;
  try {
    root = text.empty() ? json::object() : json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("config parse error: ") + e.what());
  }
  if (!root.is_object()) throw ParseError("config root must be an object");
  check_keys(root, "", {"physical", "regulator", "mrac", "sim"});

  RunConfig cfg = base;
  if (root.contains("physical")) apply_physical(root["physical"], cfg.physical);
  if (root.contains("regulator")) apply_regulator(root["regulator"], cfg.regulator);
  if (root.contains("mrac")) apply_mrac(root["mrac"], cfg.mrac);
  if (root.contains("sim")) apply_sim(root["sim"], cfg.sim);
  if (enforce_invariants) cfg.validate();
  return cfg;
}

RunConfig load_config(const std::string& path, const RunConfig& base,
                      bool enforce_invariants) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return apply_config_text(buf.str(), base, enforce_invariants);
}

}  // namespace stancesim
