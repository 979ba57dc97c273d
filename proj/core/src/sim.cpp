#include "stancesim/sim.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace stancesim {

namespace {

constexpr double kDivergenceGuard = 1e6;
constexpr double kFallAngle = std::numbers::pi / 2.0;

template <std::size_t N>
bool exceeds_guard(const std::array<double, N>& s) {
  for (double v : s) {
    if (std::abs(v) > kDivergenceGuard) return true;
  }
  return false;
}

template <std::size_t N, typename F>
std::array<double, N> advance(Integrator integ, F&& deriv,
                              const std::array<double, N>& x, double t, double dt) {
  if (integ == Integrator::euler) return euler_step(deriv, x, t, dt);
  return rk4_step(deriv, x, t, dt);
}

}  // namespace

const std::array<const char*, kResultColumnCount> kResultColumnNames = {
    "t",  "theta", "theta_dot", "x1", "x2",    "x2_hat", "v",       "y_ref", "r",
    "y",  "y_dot", "u_c",       "e1", "e2",    "kx1_hat", "kx2_hat", "kr_hat", "V"};

std::span<const double> result_column(const SimResult& r, std::size_t index) {
  const std::vector<double>* cols[kResultColumnCount] = {
      &r.t,  &r.theta, &r.theta_dot, &r.x1, &r.x2,    &r.x2_hat,  &r.v,
      &r.y_ref, &r.r,  &r.y,         &r.y_dot, &r.u_c, &r.e1,      &r.e2,
      &r.kx1_hat, &r.kx2_hat, &r.kr_hat, &r.V};
  return *cols[index];
}

const char* to_string(SimStatus s) {
  switch (s) {
    case SimStatus::completed: return "completed";
    case SimStatus::fell: return "fell";
    case SimStatus::diverged: return "diverged";
  }
  return "unknown";
}

void SimConfig::validate(const char* prefix) const {
  const std::string p(prefix);
  auto bad = [&](const char* field, const char* what) {
    throw ValidationError(p + "." + field + " " + what);
  };
  if (!std::isfinite(dt) || dt <= 0.0) bad("dt", "must be > 0");
  if (dt > 0.05) bad("dt", "must be <= 0.05 for the stiffest scenario poles");
  if (!std::isfinite(duration) || duration < dt) bad("duration", "must be >= dt");
  if (!std::isfinite(theta0)) bad("theta0", "must be finite");
  if (!std::isfinite(theta_dot0)) bad("theta_dot0", "must be finite");
  if (y0 && !std::isfinite(*y0)) bad("y0", "must be finite");
  if (!std::isfinite(y_dot0)) bad("y_dot0", "must be finite");
  if (!std::isfinite(x2_hat0)) bad("x2_hat0", "must be finite");
  if (mode == RunMode::coupled && !use_observer) {
    bad("use_observer", "ideal-state feedback is a sequential-only diagnostic");
  }
}

namespace {

// Regulated transformed stance system plus the moving-mass reference it
// produces. Truncates on fall or divergence.
struct StancePhase {
  std::vector<double> x1, x2, x2_hat, v, y_ref, theta, theta_dot;
  SimStatus status = SimStatus::completed;
};

StancePhase run_stance_phase(const PhysicalParams& params, const RegulatorDesign& d,
                             const SimConfig& cfg) {
  const StanceLinearization lin = linearize(params);
  const double k1 = d.K.x1, k2 = d.K.x2, Ke = d.K_e;
  const double f = lin.feedthrough;

  auto deriv = [&](double, const std::array<double, 3>& s) -> std::array<double, 3> {
    const double x1 = s[0], x2 = s[1], eta = s[2];
    const double x2h = eta + Ke * x1;
    const double v = control_v(d, x1, cfg.use_observer ? x2h : x2);
    return {x2, -lin.a * x1 + lin.b_lin * v, observer_eta_dot(d, lin, x1, v, eta)};
  };

  const TransformedInit init =
      initial_transformed_state(cfg.theta0, cfg.theta_dot0, cfg.x2_hat0, d, lin);
  std::array<double, 3> s = {init.x1, init.x2, init.eta};

  const std::size_t n = cfg.steps();
  StancePhase out;
  out.x1.reserve(n + 1);
  for (std::size_t k = 0; k <= n; ++k) {
    const double x1 = s[0], x2 = s[1], eta = s[2];
    const double x2h = eta + Ke * x1;
    const double v = control_v(d, x1, cfg.use_observer ? x2h : x2);
    const double eta_dot = observer_eta_dot(d, lin, x1, v, eta);
    double v_dot;
    if (cfg.use_observer) {
      v_dot = -((k1 + k2 * Ke) * x2 + k2 * eta_dot);
    } else {
      v_dot = -(k1 * x2 + k2 * (-lin.a * x1 + lin.b_lin * v));
    }
    const double theta = theta_from_state(x1, v, lin);
    out.x1.push_back(x1);
    out.x2.push_back(x2);
    out.x2_hat.push_back(x2h);
    out.v.push_back(v);
    out.y_ref.push_back(y_from_virtual(params, v));
    out.theta.push_back(theta);
    out.theta_dot.push_back(x2 + f * v_dot);

    if (std::abs(theta) >= kFallAngle) {
      out.status = SimStatus::fell;
      break;
    }
    if (exceeds_guard(s)) {
      out.status = SimStatus::diverged;
      break;
    }
    if (k < n) s = advance(cfg.integrator, deriv, s, k * cfg.dt, cfg.dt);
  }
  return out;
}

struct TrackerSetup {
  MracDerived derived;
  Vec2 kx_ideal;
  double kr_ideal = 0.0;
  double y_star = 0.0;
};

TrackerSetup make_tracker_setup(const PhysicalParams& params, const MracConfig& cfg) {
  TrackerSetup ts;
  ts.derived = make_mrac_derived(params.cart_mass, cfg);
  std::tie(ts.kx_ideal, ts.kr_ideal) =
      ideal_gains(params.cart_mass, params.friction_b, cfg.b_nominal);
  ts.y_star = equilibrium_cart_position(params);
  return ts;
}

}  // namespace

SimResult run_sequential(const PhysicalParams& params, const RegulatorDesign& design,
                         const MracConfig& mrac_cfg, const SimConfig& sim_cfg) {
  const StancePhase stance = run_stance_phase(params, design, sim_cfg);
  const TrackerSetup ts = make_tracker_setup(params, mrac_cfg);
  const MracDerived& md = ts.derived;

  // The cart plant is translation invariant, so the tracker runs on the
  // displacement from the equilibrium position; the logged y stays absolute.
  const double y0_abs = sim_cfg.y0.value_or(ts.y_star);
  std::array<double, 7> s = {y0_abs - ts.y_star,
                             sim_cfg.y_dot0,
                             y0_abs - ts.y_star,
                             sim_cfg.y_dot0,
                             mrac_cfg.kx_hat0.x1,
                             mrac_cfg.kx_hat0.x2,
                             mrac_cfg.kr_hat0};

  SimResult res;
  res.status = stance.status;
  const std::size_t n_stance = stance.x1.size();
  for (std::size_t k = 0; k < n_stance; ++k) {
    const double dev_ref = stance.y_ref[k] - ts.y_star;
    const double r = mrac_cfg.prescale_reference
                         ? prescale_reference(dev_ref, params.cart_mass, mrac_cfg.b_nominal)
                         : dev_ref;

    auto deriv = [&](double, const std::array<double, 7>& q) -> std::array<double, 7> {
      const Vec2 X = {q[0], q[1]};
      const Vec2 xm = {q[2], q[3]};
      const MracState ms{{q[4], q[5]}, q[6], xm};
      const Vec2 e = X - xm;
      const double u = control_u(ms, X, r);
      const Vec2 xm_dot = md.A_m * xm + r * md.B_m;
      const auto [kx_dot, kr_dot] = adapt_rates(mrac_cfg, md, X, e, r);
      return {X.x2,      cart_accel(params, u, X.x2), xm_dot.x1, xm_dot.x2,
              kx_dot.x1, kx_dot.x2,                   kr_dot};
    };

    const Vec2 X = {s[0], s[1]};
    const Vec2 e = {s[0] - s[2], s[1] - s[3]};
    const MracState ms{{s[4], s[5]}, s[6], {s[2], s[3]}};

    res.t.push_back(static_cast<double>(k) * sim_cfg.dt);
    res.theta.push_back(stance.theta[k]);
    res.theta_dot.push_back(stance.theta_dot[k]);
    res.x1.push_back(stance.x1[k]);
    res.x2.push_back(stance.x2[k]);
    res.x2_hat.push_back(stance.x2_hat[k]);
    res.v.push_back(stance.v[k]);
    res.y_ref.push_back(stance.y_ref[k]);
    res.r.push_back(r);
    res.y.push_back(s[0] + ts.y_star);
    res.y_dot.push_back(s[1]);
    res.u_c.push_back(control_u(ms, X, r));
    res.e1.push_back(e.x1);
    res.e2.push_back(e.x2);
    res.kx1_hat.push_back(s[4]);
    res.kx2_hat.push_back(s[5]);
    res.kr_hat.push_back(s[6]);
    res.V.push_back(lyapunov_value(e, ms.k_x_hat - ts.kx_ideal, s[6] - ts.kr_ideal,
                                   md.P, mrac_cfg));

    if (exceeds_guard(s)) {
      res.status = SimStatus::diverged;
      break;
    }
    if (k + 1 < n_stance) {
      s = advance(sim_cfg.integrator, deriv, s, static_cast<double>(k) * sim_cfg.dt,
                  sim_cfg.dt);
    }
  }
  return res;
}

SimResult run_coupled(const PhysicalParams& params, const RegulatorDesign& design,
                      const MracConfig& mrac_cfg, const SimConfig& sim_cfg) {
  const StanceLinearization lin = linearize(params);
  const TrackerSetup ts = make_tracker_setup(params, mrac_cfg);
  const MracDerived& md = ts.derived;
  const double k2 = design.K.x2, Ke = design.K_e;
  const double f = lin.feedthrough;
  const double rate_den = 1.0 - f * (design.K.x1 + k2 * Ke);

  struct Loop {
    double x1, x2_hat, v, y_ref, r;
  };
  auto close_loop = [&](double theta, double eta) -> Loop {
    Loop l;
    l.x1 = resolve_x1_eta(theta, eta, design, lin);
    l.x2_hat = eta + Ke * l.x1;
    l.v = control_v(design, l.x1, l.x2_hat);
    l.y_ref = y_from_virtual(params, l.v);
    const double dev = l.y_ref - ts.y_star;
    l.r = mrac_cfg.prescale_reference
              ? prescale_reference(dev, params.cart_mass, mrac_cfg.b_nominal)
              : dev;
    return l;
  };

  // State: theta, theta', y, y', eta, x_m (2), adaptive gains (3).
  auto deriv = [&](double, const std::array<double, 10>& q) -> std::array<double, 10> {
    const double theta = q[0], theta_dot = q[1], y = q[2], y_dot = q[3], eta = q[4];
    const Loop l = close_loop(theta, eta);
    const Vec2 X = {y - ts.y_star, y_dot};
    const Vec2 xm = {q[5], q[6]};
    const MracState ms{{q[7], q[8]}, q[9], xm};
    const Vec2 e = X - xm;
    const double u = control_u(ms, X, l.r);
    const double y_ddot = cart_accel(params, u, y_dot);
    const double theta_ddot = theta_ddot_full(params, theta, y, y_ddot);
    const double eta_dot = observer_eta_dot(design, lin, l.x1, l.v, eta);
    const Vec2 xm_dot = md.A_m * xm + l.r * md.B_m;
    const auto [kx_dot, kr_dot] = adapt_rates(mrac_cfg, md, X, e, l.r);
    return {theta_dot, theta_ddot, y_dot,     y_ddot,    eta_dot,
            xm_dot.x1, xm_dot.x2,  kx_dot.x1, kx_dot.x2, kr_dot};
  };

  const TransformedInit init = initial_transformed_state(
      sim_cfg.theta0, sim_cfg.theta_dot0, sim_cfg.x2_hat0, design, lin);
  const double y0_abs = sim_cfg.y0.value_or(ts.y_star);
  std::array<double, 10> s = {sim_cfg.theta0,
                              sim_cfg.theta_dot0,
                              y0_abs,
                              sim_cfg.y_dot0,
                              init.eta,
                              y0_abs - ts.y_star,
                              sim_cfg.y_dot0,
                              mrac_cfg.kx_hat0.x1,
                              mrac_cfg.kx_hat0.x2,
                              mrac_cfg.kr_hat0};

  SimResult res;
  const std::size_t n = sim_cfg.steps();
  for (std::size_t k = 0; k <= n; ++k) {
    const double theta = s[0], theta_dot = s[1], y = s[2], y_dot = s[3], eta = s[4];
    const Loop l = close_loop(theta, eta);
    const double eta_dot = observer_eta_dot(design, lin, l.x1, l.v, eta);
    const Vec2 X = {y - ts.y_star, y_dot};
    const Vec2 xm = {s[5], s[6]};
    const MracState ms{{s[7], s[8]}, s[9], xm};
    const Vec2 e = X - xm;

    res.t.push_back(static_cast<double>(k) * sim_cfg.dt);
    res.theta.push_back(theta);
    res.theta_dot.push_back(theta_dot);
    res.x1.push_back(l.x1);
    // X2 = theta' - f v' resolved through the same loop as x1.
    res.x2.push_back((theta_dot + f * k2 * eta_dot) / rate_den);
    res.x2_hat.push_back(l.x2_hat);
    res.v.push_back(l.v);
    res.y_ref.push_back(l.y_ref);
    res.r.push_back(l.r);
    res.y.push_back(y);
    res.y_dot.push_back(y_dot);
    res.u_c.push_back(control_u(ms, X, l.r));
    res.e1.push_back(e.x1);
    res.e2.push_back(e.x2);
    res.kx1_hat.push_back(s[7]);
    res.kx2_hat.push_back(s[8]);
    res.kr_hat.push_back(s[9]);
    res.V.push_back(lyapunov_value(e, ms.k_x_hat - ts.kx_ideal, s[9] - ts.kr_ideal,
                                   md.P, mrac_cfg));

    if (std::abs(theta) >= kFallAngle) {
      res.status = SimStatus::fell;
      break;
    }
    if (exceeds_guard(s)) {
      res.status = SimStatus::diverged;
      break;
    }
    if (k < n) {
      s = advance(sim_cfg.integrator, deriv, s, static_cast<double>(k) * sim_cfg.dt,
                  sim_cfg.dt);
    }
  }
  return res;
}

std::optional<double> settling_time(std::span<const double> series,
                                    std::span<const double> t, double reference,
                                    double band_fraction) {
  if (series.empty() || series.size() != t.size()) return std::nullopt;
  const double band = band_fraction * std::abs(series[0] - reference);
  std::size_t last_violation = series.size();  // sentinel: none
  for (std::size_t i = series.size(); i-- > 0;) {
    if (std::abs(series[i] - reference) > band) {
      last_violation = i;
      break;
    }
  }
  if (last_violation == series.size()) return t[0];
  if (last_violation + 1 >= series.size()) return std::nullopt;
  return t[last_violation + 1];
}

double fit_exp_rate(std::span<const double> series, std::span<const double> t) {
  double st = 0.0, sy = 0.0, stt = 0.0, sty = 0.0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < series.size() && i < t.size(); ++i) {
    const double a = std::abs(series[i]);
    if (a == 0.0 || !std::isfinite(a)) continue;
    const double y = std::log(a);
    st += t[i];
    sy += y;
    stt += t[i] * t[i];
    sty += t[i] * y;
    ++n;
  }
  if (n < 10) {
    throw DegenerateFitError("fit_exp_rate: only " + std::to_string(n) +
                             " usable samples, need at least 10");
  }
  const double denom = static_cast<double>(n) * stt - st * st;
  if (denom == 0.0) {
    throw DegenerateFitError("fit_exp_rate: time grid has no spread");
  }
  return (static_cast<double>(n) * sty - st * sy) / denom;
}

}  // namespace stancesim
