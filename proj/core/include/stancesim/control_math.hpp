#pragma once

#include <array>
#include <complex>
#include <utility>

namespace stancesim {

// Row-major 2x2 matrix. All control math in this library is second order,
// so the fixed size keeps every solver exactly testable.
struct Mat2 {
  double a11 = 0.0, a12 = 0.0;
  double a21 = 0.0, a22 = 0.0;

  static constexpr Mat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }
  static constexpr Mat2 diag(double d1, double d2) { return {d1, 0.0, 0.0, d2}; }

  constexpr double trace() const { return a11 + a22; }
  constexpr double det() const { return a11 * a22 - a12 * a21; }
  double max_abs() const;

  Mat2 transpose() const { return {a11, a21, a12, a22}; }
};

struct Vec2 {
  double x1 = 0.0;
  double x2 = 0.0;
};

constexpr Vec2 operator+(Vec2 a, Vec2 b) { return {a.x1 + b.x1, a.x2 + b.x2}; }
constexpr Vec2 operator-(Vec2 a, Vec2 b) { return {a.x1 - b.x1, a.x2 - b.x2}; }
constexpr Vec2 operator*(double s, Vec2 v) { return {s * v.x1, s * v.x2}; }
constexpr double dot(Vec2 a, Vec2 b) { return a.x1 * b.x1 + a.x2 * b.x2; }
constexpr Vec2 operator*(const Mat2& m, Vec2 v) {
  return {m.a11 * v.x1 + m.a12 * v.x2, m.a21 * v.x1 + m.a22 * v.x2};
}
constexpr Mat2 operator+(const Mat2& a, const Mat2& b) {
  return {a.a11 + b.a11, a.a12 + b.a12, a.a21 + b.a21, a.a22 + b.a22};
}
constexpr Mat2 operator-(const Mat2& a, const Mat2& b) {
  return {a.a11 - b.a11, a.a12 - b.a12, a.a21 - b.a21, a.a22 - b.a22};
}
constexpr Mat2 operator*(const Mat2& a, const Mat2& b) {
  return {a.a11 * b.a11 + a.a12 * b.a21, a.a11 * b.a12 + a.a12 * b.a22,
          a.a21 * b.a11 + a.a22 * b.a21, a.a21 * b.a12 + a.a22 * b.a22};
}

// Quadratic form x' M x.
constexpr double quad_form(const Mat2& m, Vec2 x) { return dot(x, m * x); }

// Single-input single-output second-order state space with scalar feedthrough.
struct StateSpace2 {
  Mat2 A;
  Vec2 B;
  Vec2 C;          // output row
  double D = 0.0;  // feedthrough
};

using Eig2 = std::pair<std::complex<double>, std::complex<double>>;

// Roots of s^2 - tr(A) s + det(A), with a cancellation-safe discriminant.
Eig2 eig2(const Mat2& A);

// State-feedback gain K such that eig(A - B K) = {mu1, mu2}, found by matching
// characteristic-polynomial coefficients. Complex poles must be a conjugate
// pair. Throws UncontrollableError when det[B, AB] is below 1e-12.
Vec2 place_poles2(const Mat2& A, Vec2 B, std::complex<double> mu1,
                  std::complex<double> mu2);
Vec2 place_poles2(const Mat2& A, Vec2 B, double mu1, double mu2);

// Symmetric P > 0 with P A_m + A_m' P = -Q, via the 3-unknown linear system in
// (p11, p12, p22). Throws NotHurwitzError / SingularSystemError.
Mat2 solve_lyapunov2(const Mat2& A_m, const Mat2& Q);

// tr < 0 and det > 0; marginal cases are excluded.
bool is_hurwitz2(const Mat2& A);

// Symmetric within 1e-12 with positive leading minors.
bool is_spd2(const Mat2& P);

// 2x2 inverse; throws SingularSystemError when |det| < 1e-300.
Mat2 inverse2(const Mat2& m);

}  // namespace stancesim
