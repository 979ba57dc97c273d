#include "stancesim/control_math.hpp"

#include <cmath>

#include "stancesim/errors.hpp"

namespace stancesim {

double Mat2::max_abs() const {
  return std::max(std::max(std::abs(a11), std::abs(a12)),
                  std::max(std::abs(a21), std::abs(a22)));
}

Eig2 eig2(const Mat2& A) {
  const double tr = A.trace();
  const double det = A.det();
  const double disc = tr * tr - 4.0 * det;
  if (disc >= 0.0) {
    const double sq = std::sqrt(disc);
    // Add the root of larger magnitude first, recover the other from det to
    // avoid cancellation.
    const double r1 = 0.5 * (tr + std::copysign(sq, tr));
    const double r2 = (r1 != 0.0) ? det / r1 : tr - r1;
    return {std::complex<double>(r1, 0.0), std::complex<double>(r2, 0.0)};
  }
  const double re = 0.5 * tr;
  const double im = 0.5 * std::sqrt(-disc);
  return {std::complex<double>(re, im), std::complex<double>(re, -im)};
}

Vec2 place_poles2(const Mat2& A, Vec2 B, std::complex<double> mu1,
                  std::complex<double> mu2) {
  const double conj_tol = 1e-9 * std::max(1.0, std::abs(mu1));
  if (std::abs(mu1 - std::conj(mu2)) > conj_tol &&
      (mu1.imag() != 0.0 || mu2.imag() != 0.0)) {
    throw ValidationError("place_poles2: complex poles must be a conjugate pair");
  }
  // Desired characteristic polynomial s^2 + c1 s + c0.
  const double c1 = -(mu1 + mu2).real();
  const double c0 = (mu1 * mu2).real();

  // tr(A - BK) = -c1 and det(A - BK) = c0 give a linear system in (k1, k2)
  // whose determinant equals det[B, AB].
  const double m11 = B.x1;
  const double m12 = B.x2;
  const double m21 = A.a12 * B.x2 - A.a22 * B.x1;
  const double m22 = A.a21 * B.x1 - A.a11 * B.x2;
  const double ctrb = m11 * m22 - m12 * m21;
  if (std::abs(ctrb) < 1e-12) {
    throw UncontrollableError("place_poles2: controllability determinant " +
                              std::to_string(ctrb) + " below 1e-12");
  }
  const double r1 = A.trace() + c1;
  const double r2 = c0 - A.det();
  return {(r1 * m22 - r2 * m12) / ctrb, (r2 * m11 - r1 * m21) / ctrb};
}

Vec2 place_poles2(const Mat2& A, Vec2 B, double mu1, double mu2) {
  return place_poles2(A, B, std::complex<double>(mu1, 0.0),
                      std::complex<double>(mu2, 0.0));
}

namespace {

// Gaussian elimination with partial pivoting on a 3x3 system.
std::array<double, 3> solve3(std::array<std::array<double, 4>, 3> m) {
  for (int col = 0; col < 3; ++col) {
    int piv = col;
    for (int r = col + 1; r < 3; ++r) {
      if (std::abs(m[r][col]) > std::abs(m[piv][col])) piv = r;
    }
    std::swap(m[col], m[piv]);
    double scale = 0.0;
    for (int c = 0; c < 4; ++c) scale = std::max(scale, std::abs(m[col][c]));
    if (std::abs(m[col][col]) <= 1e-12 * std::max(1.0, scale)) {
      throw SingularSystemError("solve_lyapunov2: pivot below conditioning threshold");
    }
    for (int r = col + 1; r < 3; ++r) {
      const double f = m[r][col] / m[col][col];
      for (int c = col; c < 4; ++c) m[r][c] -= f * m[col][c];
    }
  }
  std::array<double, 3> x{};
  for (int r = 2; r >= 0; --r) {
    double s = m[r][3];
    for (int c = r + 1; c < 3; ++c) s -= m[r][c] * x[c];
    x[r] = s / m[r][r];
  }
  return x;
}

}  // namespace

Mat2 solve_lyapunov2(const Mat2& A_m, const Mat2& Q) {
  if (!is_hurwitz2(A_m)) {
    throw NotHurwitzError("solve_lyapunov2: A_m is not Hurwitz (tr=" +
                          std::to_string(A_m.trace()) +
                          ", det=" + std::to_string(A_m.det()) + ")");
  }
  // Writing P = [[p11, p12], [p12, p22]], the equation P A_m + A_m' P = -Q
  // reduces to three independent scalar equations.
  const double a = A_m.a11, b = A_m.a12, c = A_m.a21, d = A_m.a22;
  const auto p = solve3({{{2.0 * a, 2.0 * c, 0.0, -Q.a11},
                          {b, a + d, c, -Q.a12},
                          {0.0, 2.0 * b, 2.0 * d, -Q.a22}}});
  return {p[0], p[1], p[1], p[2]};
}

bool is_hurwitz2(const Mat2& A) { return A.trace() < 0.0 && A.det() > 0.0; }

bool is_spd2(const Mat2& P) {
  const double scale = std::max(1.0, P.max_abs());
  if (std::abs(P.a12 - P.a21) > 1e-12 * scale) return false;
  return P.a11 > 0.0 && P.det() > 0.0;
}

Mat2 inverse2(const Mat2& m) {
  const double det = m.det();
  if (std::abs(det) < 1e-300) {
    throw SingularSystemError("inverse2: matrix is singular");
  }
  return {m.a22 / det, -m.a12 / det, -m.a21 / det, m.a11 / det};
}

}  // namespace stancesim
