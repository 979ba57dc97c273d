#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "stancesim/errors.hpp"
#include "stancesim/mrac.hpp"
#include "stancesim/plant.hpp"
#include "stancesim/regulator.hpp"

namespace stancesim {

enum class Integrator { rk4, euler };
enum class RunMode { sequential, coupled };

struct SimConfig {
  double dt = 0.01;
  double duration = 10.0;
  Integrator integrator = Integrator::rk4;
  RunMode mode = RunMode::sequential;
  double theta0 = 0.0349;  // 2 degrees
  double theta_dot0 = 0.0;
  std::optional<double> y0;  // defaults to the equilibrium cart position
  double y_dot0 = 0.0;
  double x2_hat0 = 0.0;      // observer estimate at t = 0
  bool use_observer = true;  // sequential only; coupled always runs the observer

  void validate(const char* prefix = "sim") const;
  std::size_t steps() const { return static_cast<std::size_t>(std::llround(duration / dt)); }
};

enum class SimStatus { completed, fell, diverged };
const char* to_string(SimStatus s);

// Time-indexed log of every plant, observer and adaptation signal. Columns
// stay aligned with the CSV header; a status other than `completed` truncates
// the series at the offending sample.
struct SimResult {
  std::vector<double> t, theta, theta_dot, x1, x2, x2_hat, v, y_ref, r, y,
      y_dot, u_c, e1, e2, kx1_hat, kx2_hat, kr_hat, V;
  SimStatus status = SimStatus::completed;

  std::size_t size() const { return t.size(); }
};

inline constexpr std::size_t kResultColumnCount = 18;
extern const std::array<const char*, kResultColumnCount> kResultColumnNames;
std::span<const double> result_column(const SimResult& r, std::size_t index);

// Classical 4-stage Runge-Kutta update. Throws NonFiniteDerivativeError when
// any stage evaluates to a non-finite value.
template <std::size_t N, typename F>
std::array<double, N> rk4_step(F&& deriv, const std::array<double, N>& x,
                               double t, double dt) {
  auto check = [](const std::array<double, N>& k) {
    for (double v : k) {
      if (!std::isfinite(v)) {
        throw NonFiniteDerivativeError("rk4_step: derivative stage is not finite");
      }
    }
  };
  std::array<double, N> k1 = deriv(t, x);
  check(k1);
  std::array<double, N> xs;
  for (std::size_t i = 0; i < N; ++i) xs[i] = x[i] + 0.5 * dt * k1[i];
  std::array<double, N> k2 = deriv(t + 0.5 * dt, xs);
  check(k2);
  for (std::size_t i = 0; i < N; ++i) xs[i] = x[i] + 0.5 * dt * k2[i];
  std::array<double, N> k3 = deriv(t + 0.5 * dt, xs);
  check(k3);
  for (std::size_t i = 0; i < N; ++i) xs[i] = x[i] + dt * k3[i];
  std::array<double, N> k4 = deriv(t + dt, xs);
  check(k4);
  std::array<double, N> out;
  for (std::size_t i = 0; i < N; ++i) {
    out[i] = x[i] + dt / 6.0 * (k1[i] + 2.0 * (k2[i] + k3[i]) + k4[i]);
  }
  return out;
}

template <std::size_t N, typename F>
std::array<double, N> euler_step(F&& deriv, const std::array<double, N>& x,
                                 double t, double dt) {
  std::array<double, N> k1 = deriv(t, x);
  for (double v : k1) {
    if (!std::isfinite(v)) {
      throw NonFiniteDerivativeError("euler_step: derivative is not finite");
    }
  }
  std::array<double, N> out;
  for (std::size_t i = 0; i < N; ++i) out[i] = x[i] + dt * k1[i];
  return out;
}

// Two-phase pipeline: regulate the transformed stance system, extract the
// moving-mass reference from the recorded virtual control, then track it with
// the adaptive cart controller on the same time grid.
SimResult run_sequential(const PhysicalParams& params, const RegulatorDesign& design,
                         const MracConfig& mrac_cfg, const SimConfig& sim_cfg);

// Single loop against the full nonlinear tilt dynamics: the measured angle
// feeds the observer/regulator, the commanded mass position feeds the adaptive
// cart, and the actual cart motion drives the tilt.
SimResult run_coupled(const PhysicalParams& params, const RegulatorDesign& design,
                      const MracConfig& mrac_cfg, const SimConfig& sim_cfg);

// First time after which the series stays within band*|initial deviation| of
// the reference; nullopt if it never settles.
std::optional<double> settling_time(std::span<const double> series,
                                    std::span<const double> t, double reference,
                                    double band_fraction);

// Least-squares slope of log|series| over t. Zero samples are excluded;
// throws DegenerateFitError with fewer than 10 usable points.
double fit_exp_rate(std::span<const double> series, std::span<const double> t);

}  // namespace stancesim
