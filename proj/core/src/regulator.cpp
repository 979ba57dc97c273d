#include "stancesim/regulator.hpp"

#include <cmath>
#include <string>

#include "stancesim/errors.hpp"

namespace stancesim {

std::string RegulatorConfig::validate(const char* prefix) const {
  const std::string p(prefix);
  auto bad = [&](const char* field, const char* what) {
    throw ValidationError(p + "." + field + " " + what);
  };
  if (!std::isfinite(mu1) || mu1 >= 0.0) bad("mu1", "must be < 0");
  if (!std::isfinite(mu2) || mu2 >= 0.0) bad("mu2", "must be < 0");
  if (!std::isfinite(observer_pole) || observer_pole >= 0.0) bad("observer_pole", "must be < 0");
  const double fastest = std::max(std::abs(mu1), std::abs(mu2));
  if (std::abs(observer_pole) < fastest) {
    return p + ".observer_pole is slower than the regulator poles; estimation "
               "error will dominate the transient";
  }
  return {};
}

StanceLinearization linearize(const PhysicalParams& p) {
  const double d = delta(p);
  const double total = p.cart_mass + p.body_mass;
  StanceLinearization lin;
  lin.a = -p.gravity * p.leg_length * total / d;
  lin.b_lin = 1.0 + p.leg_length * p.leg_length * total / d;
  lin.feedthrough = p.leg_length / p.gravity;
  return lin;
}

StateSpace2 stance_state_space(const StanceLinearization& lin) {
  return {Mat2{0.0, 1.0, -lin.a, 0.0}, Vec2{0.0, lin.b_lin}, Vec2{1.0, 0.0},
          lin.feedthrough};
}

RegulatorDesign design_regulator(const StanceLinearization& lin, const RegulatorConfig& cfg) {
  const StateSpace2 sys = stance_state_space(lin);
  RegulatorDesign d;
  d.K = place_poles2(sys.A, sys.B, cfg.mu1, cfg.mu2);
  // Scalar error dynamic e' = (A_bb - K_e A_ab) e = -K_e e.
  d.K_e = -cfg.observer_pole;
  return d;
}

double observer_eta_dot(const RegulatorDesign& d, const StanceLinearization& lin,
                        double x1, double v, double eta) {
  return -d.K_e * eta + (-lin.a - d.K_e * d.K_e) * x1 + lin.b_lin * v;
}

double control_v(const RegulatorDesign& d, double x1, double x2_hat) {
  return -(d.K.x1 * x1 + d.K.x2 * x2_hat);
}

double resolve_x1(double theta, double x2_hat, const RegulatorDesign& d,
                  const StanceLinearization& lin) {
  const double den = 1.0 - lin.feedthrough * d.K.x1;
  if (std::abs(den) < 1e-9) {
    throw SingularFeedthroughError(
        "resolve_x1: 1 - feedthrough*k1 = " + std::to_string(den) +
        " is within 1e-9 of zero");
  }
  return (theta + lin.feedthrough * d.K.x2 * x2_hat) / den;
}

double resolve_x1_eta(double theta, double eta, const RegulatorDesign& d,
                      const StanceLinearization& lin) {
  const double den =
      1.0 - lin.feedthrough * (d.K.x1 + d.K.x2 * d.K_e);
  if (std::abs(den) < 1e-9) {
    throw SingularFeedthroughError(
        "resolve_x1_eta: 1 - feedthrough*(k1 + k2*K_e) = " +
        std::to_string(den) + " is within 1e-9 of zero");
  }
  return (theta + lin.feedthrough * d.K.x2 * eta) / den;
}

double theta_from_state(double x1, double v, const StanceLinearization& lin) {
  return x1 + lin.feedthrough * v;
}

TransformedInit initial_transformed_state(double theta0, double theta_dot0,
                                          double x2_hat0, const RegulatorDesign& d,
                                          const StanceLinearization& lin) {
  TransformedInit s;
  s.x1 = resolve_x1(theta0, x2_hat0, d, lin);
  s.eta = x2_hat0 - d.K_e * s.x1;
  const double v0 = control_v(d, s.x1, x2_hat0);
  const double eta_dot0 = observer_eta_dot(d, lin, s.x1, v0, s.eta);
  const double den =
      1.0 - lin.feedthrough * (d.K.x1 + d.K.x2 * d.K_e);
  if (std::abs(den) < 1e-9) {
    throw SingularFeedthroughError(
        "initial_transformed_state: rate loop denominator within 1e-9 of zero");
  }
  s.x2 = (theta_dot0 + lin.feedthrough * d.K.x2 * eta_dot0) / den;
  return s;
}

}  // namespace stancesim
