#include "stancesim/plant.hpp"

#include <cmath>
#include <string>

#include "stancesim/errors.hpp"

namespace stancesim {

namespace {

void require(bool ok, const std::string& prefix, const char* field, const char* what) {
  if (!ok) {
    throw ValidationError(prefix + "." + field + " " + what);
  }
}

}  // namespace

void PhysicalParams::validate(const char* prefix) const {
  const std::string p(prefix);
  require(std::isfinite(cart_mass) && cart_mass > 0.0, p, "cart_mass", "must be > 0");
  require(std::isfinite(body_mass) && body_mass > 0.0, p, "body_mass", "must be > 0");
  require(std::isfinite(leg_length) && leg_length > 0.0, p, "leg_length", "must be > 0");
  require(std::isfinite(gravity) && gravity > 0.0, p, "gravity", "must be > 0");
  require(std::isfinite(friction_b) && friction_b >= 0.0, p, "friction_b", "must be >= 0");
  require(std::isfinite(com_offset) && std::abs(com_offset) < leg_length, p, "com_offset",
          "must satisfy |y_m| < leg_length");
}

double delta(const PhysicalParams& p) {
  const double L2 = p.leg_length * p.leg_length;
  return p.cart_mass * L2 + p.body_mass * (L2 + p.com_offset * p.com_offset);
}

DerivedConstants derived_constants(const PhysicalParams& p) {
  return {delta(p), equilibrium_cart_position(p)};
}

double stance_torque(const PhysicalParams& p, double theta, double y, double y_ddot) {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  return p.cart_mass * y_ddot * p.leg_length -
         p.body_mass * p.gravity * (p.com_offset * c - p.leg_length * s) +
         p.cart_mass * p.gravity * (y * c + p.leg_length * s);
}

double inertia_sum(const PhysicalParams& p, double y) {
  const double L2 = p.leg_length * p.leg_length;
  return p.cart_mass * (L2 + y * y) +
         p.body_mass * (L2 + p.com_offset * p.com_offset);
}

double theta_ddot_full(const PhysicalParams& p, double theta, double y, double y_ddot) {
  return stance_torque(p, theta, y, y_ddot) / inertia_sum(p, y);
}

double theta_ddot_linear(const PhysicalParams& p, double theta, double y, double y_ddot) {
  const double d = delta(p);
  const double total = p.cart_mass + p.body_mass;
  return p.gravity * p.leg_length / d * total * theta -
         p.body_mass * p.gravity * p.com_offset / d +
         p.cart_mass * p.gravity / d * y + p.cart_mass * p.leg_length / d * y_ddot;
}

double cart_accel(const PhysicalParams& p, double u_c, double y_dot) {
  return u_c / p.cart_mass - p.friction_b / p.cart_mass * y_dot;
}

double equilibrium_cart_position(const PhysicalParams& p) {
  return p.body_mass / p.cart_mass * p.com_offset;
}

double virtual_from_y(const PhysicalParams& p, double y) {
  const double d = delta(p);
  return p.cart_mass * p.gravity / d * y -
         p.body_mass * p.gravity * p.com_offset / d;
}

double y_from_virtual(const PhysicalParams& p, double v) {
  return (delta(p) * v + p.body_mass * p.gravity * p.com_offset) /
         (p.cart_mass * p.gravity);
}

}  // namespace stancesim
