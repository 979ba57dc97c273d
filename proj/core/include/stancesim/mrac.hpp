#pragma once

#include <string>

#include "stancesim/control_math.hpp"

namespace stancesim {

struct MracConfig {
  Mat2 gamma_x = Mat2::diag(10000.0, 2000.0);  // adaptation gain, SPD
  double gamma_r = 10.0;                       // feedforward adaptation gain, > 0
  Mat2 Q = Mat2::identity();                   // Lyapunov equation right-hand side, SPD
  double b_nominal = 5.0;                      // friction the reference model assumes
  bool prescale_reference = true;              // compensate the model's DC gain
  Vec2 kx_hat0 = {0.0, 0.0};                   // adaptive gain initial values
  double kr_hat0 = 0.0;

  void validate(const char* prefix = "mrac") const;
};

// Adaptive gain estimates plus the reference-model state, advanced by the
// simulation loop.
struct MracState {
  Vec2 k_x_hat = {0.0, 0.0};
  double k_r_hat = 0.0;
  Vec2 x_m = {0.0, 0.0};  // reference-model position (m) and velocity (m/s)
};

// Quantities fixed for a run: reference model, Lyapunov solution, plant input
// direction. Lambda is the (unit) input effectiveness, kept explicit so the
// adaptation formulas read like their derivation.
struct MracDerived {
  Mat2 A_m;
  Vec2 B_m;
  Mat2 P;
  Vec2 B;               // plant input [0, 1/M]
  double Lambda = 1.0;
};

// A_m = [[0,1],[-1,-b_nominal/M]], B_m = [0, -b_nominal/M]. The negative B_m
// entry is deliberate; see prescale_reference.
std::pair<Mat2, Vec2> make_reference_model(double M, double b_nominal);

// Builds the per-run constants; P solves P A_m + A_m' P = -Q.
MracDerived make_mrac_derived(double M, const MracConfig& cfg);

// Gains satisfying the matching condition A + B Lambda Kx' = A_m and
// B Lambda Kr = B_m: Kx = [-M, b_true - b_nominal], Kr = -b_nominal.
std::pair<Vec2, double> ideal_gains(double M, double b_true, double b_nominal);

// Entry-wise residuals of the matching condition, evaluated with the common
// denominator collapsed so exact inputs give exact zeros.
struct MatchingResiduals {
  Mat2 state_residual;   // A + B Lambda Kx' - A_m
  Vec2 input_residual;   // B Lambda Kr - B_m
  double max_abs() const;
};
MatchingResiduals matching_residuals(double M, double b_true, double b_nominal);

// u_c = k_x_hat' X + k_r_hat r.
double control_u(const MracState& s, Vec2 X, double r);

// Adaptive laws: k_x_hat' = -Gamma_x X (e' P B), k_r_hat' = -Gamma_r (e' P B) r.
std::pair<Vec2, double> adapt_rates(const MracConfig& cfg, const MracDerived& d,
                                    Vec2 X, Vec2 e, double r);

// r = -(M/b_nominal) y_ref, cancelling the model's steady-state position gain
// of -b_nominal/M so the model converges to y_ref.
double prescale_reference(double y_ref, double M, double b_nominal);

// V = e'Pe + dKx' Gamma_x^-1 dKx Lambda + Gamma_r^-1 dKr^2 Lambda.
double lyapunov_value(Vec2 e, Vec2 dK_x, double dK_r, const Mat2& P,
                      const MracConfig& cfg);

}  // namespace stancesim
