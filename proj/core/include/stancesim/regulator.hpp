#pragma once

#include <string>

#include "stancesim/control_math.hpp"
#include "stancesim/plant.hpp"

namespace stancesim {

// Stance dynamics in the backstepping coordinates X1 = theta - (L/g) v,
// X2 = theta' - (L/g) v'. Note `b_lin` is the input gain of the transformed
// system, not the cart friction.
struct StanceLinearization {
  double a = 0.0;            // -gL(M+m)/delta, always negative
  double b_lin = 0.0;        // 1 + L^2(M+m)/delta, always > 1
  double feedthrough = 0.0;  // L/g (s^2)
};

struct RegulatorConfig {
  double mu1 = -4.5;           // closed-loop poles (1/s)
  double mu2 = -4.5;
  double observer_pole = -10.0;

  // Returns a warning string (empty if none) for a slow observer; throws
  // ValidationError for hard violations.
  std::string validate(const char* prefix = "regulator") const;
};

struct RegulatorDesign {
  Vec2 K;           // state feedback row (k1, k2)
  double K_e = 0.0; // observer gain, equal to -observer_pole
};

// Minimum-order observer state. The transformed coordinate eta avoids both
// the unmeasurable X2 and differentiation of the measurement; the estimate is
// recovered as x2_hat = eta + K_e x1.
struct ObserverState {
  double eta = 0.0;
  double x2_hat(double K_e, double x1) const { return eta + K_e * x1; }
};

StanceLinearization linearize(const PhysicalParams& p);

// The transformed system of the stance: A = [[0,1],[-a,0]], B = [0, b_lin],
// Y = [1 0] X + (L/g) v.
StateSpace2 stance_state_space(const StanceLinearization& lin);

RegulatorDesign design_regulator(const StanceLinearization& lin, const RegulatorConfig& cfg);

// eta' = -K_e eta + (-a - K_e^2) x1 + b_lin v.
double observer_eta_dot(const RegulatorDesign& d, const StanceLinearization& lin,
                        double x1, double v, double eta);

// v = -(k1 x1 + k2 x2_hat).
double control_v(const RegulatorDesign& d, double x1, double x2_hat);

// Closes the algebraic loop of the output feedthrough for a given estimate:
// x1 = (theta + f k2 x2_hat) / (1 - f k1). Throws SingularFeedthroughError
// when the denominator is within 1e-9 of zero.
double resolve_x1(double theta, double x2_hat, const RegulatorDesign& d,
                  const StanceLinearization& lin);

// Same loop closed jointly with x2_hat = eta + K_e x1, the form the coupled
// engine needs: x1 = (theta + f k2 eta) / (1 - f (k1 + k2 K_e)).
double resolve_x1_eta(double theta, double eta, const RegulatorDesign& d,
                      const StanceLinearization& lin);

// theta = x1 + (L/g) v.
double theta_from_state(double x1, double v, const StanceLinearization& lin);

// Transformed-coordinate initial state consistent with physical initial
// conditions (theta0, theta0') and the configured observer estimate x2_hat0.
// x2 follows from X2 = theta' - f v' with v' resolved through the same
// algebraic loop.
struct TransformedInit {
  double x1 = 0.0;
  double x2 = 0.0;
  double eta = 0.0;
};
TransformedInit initial_transformed_state(double theta0, double theta_dot0,
                                          double x2_hat0, const RegulatorDesign& d,
                                          const StanceLinearization& lin);

}  // namespace stancesim
