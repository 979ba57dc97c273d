#include "stancesim/mrac.hpp"

#include <cmath>
#include <string>

#include "stancesim/errors.hpp"

namespace stancesim {

void MracConfig::validate(const char* prefix) const {
  const std::string p(prefix);
  auto bad = [&](const char* field, const char* what) {
    throw ValidationError(p + "." + field + " " + what);
  };
  if (!is_spd2(gamma_x)) bad("gamma_x", "must be symmetric positive definite");
  if (!std::isfinite(gamma_r) || gamma_r <= 0.0) bad("gamma_r", "must be > 0");
  if (!is_spd2(Q)) bad("q", "must be symmetric positive definite");
  if (!std::isfinite(b_nominal) || b_nominal <= 0.0) bad("b_nominal", "must be > 0");
  if (!std::isfinite(kx_hat0.x1) || !std::isfinite(kx_hat0.x2)) bad("kx_hat0", "must be finite");
  if (!std::isfinite(kr_hat0)) bad("kr_hat0", "must be finite");
}

std::pair<Mat2, Vec2> make_reference_model(double M, double b_nominal) {
  const double ratio = b_nominal / M;
  return {Mat2{0.0, 1.0, -1.0, -ratio}, Vec2{0.0, -ratio}};
}

MracDerived make_mrac_derived(double M, const MracConfig& cfg) {
  MracDerived d;
  const auto [A_m, B_m] = make_reference_model(M, cfg.b_nominal);
  d.A_m = A_m;
  d.B_m = B_m;
  d.P = solve_lyapunov2(A_m, cfg.Q);
  d.B = {0.0, 1.0 / M};
  d.Lambda = 1.0;
  return d;
}

std::pair<Vec2, double> ideal_gains(double M, double b_true, double b_nominal) {
  return {Vec2{-M, b_true - b_nominal}, -b_nominal};
}

double MatchingResiduals::max_abs() const {
  return std::max(state_residual.max_abs(),
                  std::max(std::abs(input_residual.x1), std::abs(input_residual.x2)));
}

MatchingResiduals matching_residuals(double M, double b_true, double b_nominal) {
  const auto [Kx, Kr] = ideal_gains(M, b_true, b_nominal);
  const auto [A_m, B_m] = make_reference_model(M, b_nominal);
  // B Lambda Kx' only touches the second row; collapse each entry over the
  // common denominator M before dividing.
  MatchingResiduals r;
  r.state_residual = Mat2{0.0 - A_m.a11, 1.0 - A_m.a12,
                          Kx.x1 / M - A_m.a21,
                          (-b_true + Kx.x2) / M - A_m.a22};
  r.input_residual = Vec2{0.0 - B_m.x1, Kr / M - B_m.x2};
  return r;
}

double control_u(const MracState& s, Vec2 X, double r) {
  return dot(s.k_x_hat, X) + s.k_r_hat * r;
}

std::pair<Vec2, double> adapt_rates(const MracConfig& cfg, const MracDerived& d,
                                    Vec2 X, Vec2 e, double r) {
  const double epb = dot(e, d.P * d.B);
  const Vec2 kx_dot = -1.0 * (cfg.gamma_x * (epb * X));
  const double kr_dot = -cfg.gamma_r * epb * r;
  return {kx_dot, kr_dot};
}

double prescale_reference(double y_ref, double M, double b_nominal) {
  return -(M / b_nominal) * y_ref;
}

double lyapunov_value(Vec2 e, Vec2 dK_x, double dK_r, const Mat2& P,
                      const MracConfig& cfg) {
  const Mat2 gx_inv = inverse2(cfg.gamma_x);
  const double lambda = 1.0;
  return quad_form(P, e) + quad_form(gx_inv, dK_x) * lambda +
         dK_r * dK_r / cfg.gamma_r * lambda;
}

}  // namespace stancesim
