#pragma once

namespace stancesim {

// Ground truth of the simulated world: the moving cart of mass M balances a
// body of mass m, lumped at height L and lateral offset y_m above the stance
// foot. friction_b is the cart's viscous friction; the regulator side never
// sees it.
struct PhysicalParams {
  double cart_mass = 3.0;     // M (kg)
  double body_mass = 6.12;    // m (kg)
  double leg_length = 0.42;   // L (m)
  double gravity = 9.81;      // g (m/s^2)
  double com_offset = 0.049;  // y_m (m)
  double friction_b = 5.0;    // true viscous friction (N s/m)

  // Throws ValidationError naming the offending field; `prefix` is the dotted
  // config path of this section.
  void validate(const char* prefix = "physical") const;
};

struct StanceState {
  double theta = 0.0;      // tilt angle (rad); |theta| >= pi/2 means fallen
  double theta_dot = 0.0;  // (rad/s)
};

struct CartState {
  double y = 0.0;      // cart position (m)
  double y_dot = 0.0;  // (m/s)
};

struct DerivedConstants {
  double delta = 0.0;          // effective inertia (kg m^2)
  double equilibrium_y = 0.0;  // cart position balancing the body (m)
};

// delta = M L^2 + m (L^2 + y_m^2)
double delta(const PhysicalParams& p);

DerivedConstants derived_constants(const PhysicalParams& p);

// Torque about the ankle: M y'' L - m g (y_m cos0 - L sin0) + M g (y cos0 + L sin0).
double stance_torque(const PhysicalParams& p, double theta, double y, double y_ddot);

// Total moment of inertia M (L^2 + y^2) + m (L^2 + y_m^2).
double inertia_sum(const PhysicalParams& p, double y);

// Full nonlinear angular acceleration: exactly stance_torque / inertia_sum.
double theta_ddot_full(const PhysicalParams& p, double theta, double y, double y_ddot);

// Small-angle model with the y^2 inertia term dropped:
// (gL/delta)(M+m) theta - m g y_m/delta + (M g/delta) y + (M L/delta) y''.
double theta_ddot_linear(const PhysicalParams& p, double theta, double y, double y_ddot);

// Cart acceleration u_c/M - (b/M) y'.
double cart_accel(const PhysicalParams& p, double u_c, double y_dot);

// Cart position at which the tilt torque vanishes: (m/M) y_m.
double equilibrium_cart_position(const PhysicalParams& p);

// Virtual control v = (M g/delta) y - m g y_m/delta and its inverse.
double virtual_from_y(const PhysicalParams& p, double y);
double y_from_virtual(const PhysicalParams& p, double v);

}  // namespace stancesim
