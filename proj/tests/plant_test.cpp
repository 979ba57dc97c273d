#include <cmath>
#include <random>

#include <doctest.h>

#include "stancesim/errors.hpp"
#include "stancesim/plant.hpp"

using namespace stancesim;

namespace {

PhysicalParams defaults() { return {}; }

PhysicalParams with(double M, double m, double L, double y_m, double g = 9.81) {
  PhysicalParams p;
  p.cart_mass = M;
  p.body_mass = m;
  p.leg_length = L;
  p.com_offset = y_m;
  p.gravity = g;
  return p;
}

}  // namespace

TEST_CASE("delta") {
  CHECK(delta(with(1.0, 0.0, 1.0, 0.0)) == 1.0);
  CHECK(delta(defaults()) == doctest::Approx(1.62346).epsilon(1e-5));
  // Body term vanishes with m = 0 regardless of the offset.
  CHECK(delta(with(2.5, 0.0, 0.7, 0.3)) == doctest::Approx(2.5 * 0.49).epsilon(1e-15));
}

TEST_CASE("stance_torque") {
  const PhysicalParams p = defaults();
  SUBCASE("equilibrium cancels the gravity terms") {
    const double y_eq = p.body_mass * p.com_offset / p.cart_mass;
    CHECK(std::abs(stance_torque(p, 0.0, y_eq, 0.0)) < 1e-12);
  }
  SUBCASE("only the inertial term survives without gravity") {
    PhysicalParams q = with(2.0, 1.0, 0.5, 0.1, 9.81);
    q.gravity = 0.0;
    CHECK(stance_torque(q, 0.3, 0.2, 1.0) == doctest::Approx(1.0).epsilon(1e-15));
  }
  SUBCASE("matches an independent term-by-term expansion") {
    const double theta = 0.05, y = 0.08;
    const double t1 = 0.0;  // y_ddot = 0
    const double t2 = -p.body_mass * p.gravity *
                      (p.com_offset * std::cos(theta) - p.leg_length * std::sin(theta));
    const double t3 = p.cart_mass * p.gravity *
                      (y * std::cos(theta) + p.leg_length * std::sin(theta));
    CHECK(stance_torque(p, theta, y, 0.0) == doctest::Approx(t1 + t2 + t3).epsilon(1e-14));
  }
}

TEST_CASE("inertia_sum") {
  const PhysicalParams p = defaults();
  CHECK(inertia_sum(p, 0.0) == delta(p));
  CHECK(inertia_sum(with(1.0, 1.0, 1.0, 1.0), 1.0) == doctest::Approx(4.0).epsilon(1e-15));
  CHECK(inertia_sum(p, 0.1) == doctest::Approx(delta(p) + p.cart_mass * 0.01).epsilon(1e-14));
  CHECK(inertia_sum(p, 0.1) == doctest::Approx(1.65346).epsilon(1e-5));
}

TEST_CASE("theta_ddot_full") {
  const PhysicalParams p = defaults();
  SUBCASE("equilibrium inputs give zero acceleration") {
    const double y_eq = p.body_mass * p.com_offset / p.cart_mass;
    CHECK(std::abs(theta_ddot_full(p, 0.0, y_eq, 0.0)) < 1e-12);
  }
  SUBCASE("is exactly the torque over inertia quotient") {
    std::mt19937 rng(23u);
    std::uniform_real_distribution<double> th(-1.5, 1.5), yy(-0.5, 0.5), acc(-10.0, 10.0);
    for (int i = 0; i < 1000; ++i) {
      const double theta = th(rng), y = yy(rng), ydd = acc(rng);
      const double want = stance_torque(p, theta, y, ydd) / inertia_sum(p, y);
      const double got = theta_ddot_full(p, theta, y, ydd);
      CHECK(got == doctest::Approx(want).epsilon(1e-13));
    }
  }
  SUBCASE("matches direct numeric substitution") {
    const double theta = 0.01;
    const double num = -p.body_mass * p.gravity *
                           (p.com_offset * std::cos(theta) - p.leg_length * std::sin(theta)) +
                       p.cart_mass * p.gravity * p.leg_length * std::sin(theta);
    const double den = p.cart_mass * p.leg_length * p.leg_length +
                       p.body_mass * (p.leg_length * p.leg_length +
                                      p.com_offset * p.com_offset);
    CHECK(theta_ddot_full(p, theta, 0.0, 0.0) == doctest::Approx(num / den).epsilon(1e-13));
  }
}

TEST_CASE("theta_ddot_linear") {
  const PhysicalParams p = defaults();
  SUBCASE("constant offset term at the origin, equal to the full model") {
    const double want = -p.body_mass * p.gravity * p.com_offset / delta(p);
    CHECK(theta_ddot_linear(p, 0.0, 0.0, 0.0) == doctest::Approx(want).epsilon(1e-15));
    CHECK(std::abs(theta_ddot_linear(p, 0.0, 0.0, 0.0) - theta_ddot_full(p, 0.0, 0.0, 0.0)) <
          1e-15);
  }
  SUBCASE("zero at the equilibrium") {
    const double y_eq = p.body_mass * p.com_offset / p.cart_mass;
    CHECK(std::abs(theta_ddot_linear(p, 0.0, y_eq, 0.0)) < 1e-13);
  }
  SUBCASE("tilt slope matches a central finite difference of the full model") {
    const double h = 1e-6;
    const double slope =
        (theta_ddot_full(p, h, 0.0, 0.0) - theta_ddot_full(p, -h, 0.0, 0.0)) / (2.0 * h);
    const double want = p.gravity * p.leg_length * (p.cart_mass + p.body_mass) / delta(p);
    CHECK(slope == doctest::Approx(want).epsilon(1e-6));
  }
  SUBCASE("small-signal agreement within the Taylor remainder bound") {
    double worst = 0.0;
    for (double theta = -0.01; theta <= 0.01; theta += 0.0005) {
      const double diff =
          std::abs(theta_ddot_full(p, theta, 0.0, 0.0) - theta_ddot_linear(p, theta, 0.0, 0.0));
      const double bound = (p.body_mass * p.gravity * p.com_offset * theta * theta / 2.0 +
                            (p.cart_mass + p.body_mass) * p.gravity * p.leg_length *
                                std::abs(theta * theta * theta) / 6.0) /
                               delta(p) +
                           1e-14;
      CHECK(diff <= bound);
      worst = std::max(worst, diff);
    }
    CHECK(worst <= 1e-4);
  }
}

TEST_CASE("cart_accel") {
  PhysicalParams p = with(3.0, 6.12, 0.42, 0.049);
  p.friction_b = 5.0;
  CHECK(cart_accel(p, 0.0, 0.0) == 0.0);
  CHECK(std::abs(cart_accel(p, 5.0 * 0.3, 0.3)) < 1e-15);  // force balances friction
  CHECK(cart_accel(p, 6.0, 0.3) == doctest::Approx(1.5).epsilon(1e-15));
}

TEST_CASE("equilibrium_cart_position brackets the mass range") {
  PhysicalParams p = defaults();
  p.com_offset = 0.0;
  CHECK(equilibrium_cart_position(p) == 0.0);
  p.com_offset = 0.049;
  const double hi = equilibrium_cart_position(p);
  CHECK(hi == doctest::Approx(0.100).epsilon(0.02));
  p.com_offset = 0.030;
  const double lo = equilibrium_cart_position(p);
  CHECK(lo == doctest::Approx(0.0624).epsilon(0.02));
  CHECK(lo > 0.0612 - 1e-9);
  CHECK(hi < 0.1000 + 1e-9);
}

TEST_CASE("virtual control map") {
  const PhysicalParams p = defaults();
  SUBCASE("vanishes at the equilibrium position") {
    CHECK(std::abs(virtual_from_y(p, equilibrium_cart_position(p))) < 1e-14);
  }
  SUBCASE("offset term at y = 0") {
    CHECK(virtual_from_y(p, 0.0) ==
          doctest::Approx(-p.body_mass * p.gravity * p.com_offset / delta(p)).epsilon(1e-15));
  }
  SUBCASE("bijection over the working range") {
    for (double y = -0.2; y <= 0.2; y += 0.001) {
      CHECK(y_from_virtual(p, virtual_from_y(p, y)) == doctest::Approx(y).epsilon(1e-12));
    }
  }
  SUBCASE("inverse matches direct arithmetic") {
    const double want = (1.62346212 * 0.01 + 6.12 * 9.81 * 0.049) / (3.0 * 9.81);
    CHECK(y_from_virtual(p, 0.01) == doctest::Approx(want).epsilon(1e-8));
    CHECK(y_from_virtual(p, 0.0) == doctest::Approx(equilibrium_cart_position(p)).epsilon(1e-14));
  }
}

TEST_CASE("PhysicalParams validation names the offending field") {
  PhysicalParams p = defaults();
  p.cart_mass = 0.0;
  CHECK_THROWS_WITH_AS(p.validate(), doctest::Contains("physical.cart_mass"), ValidationError);
  p = defaults();
  p.friction_b = -1.0;
  CHECK_THROWS_WITH_AS(p.validate(), doctest::Contains("physical.friction_b"), ValidationError);
  p = defaults();
  p.com_offset = 0.5;  // beyond the leg length
  CHECK_THROWS_WITH_AS(p.validate(), doctest::Contains("physical.com_offset"), ValidationError);
  CHECK_NOTHROW(defaults().validate());
}
