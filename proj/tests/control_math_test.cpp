#include <cmath>
#include <complex>
#include <random>

#include <doctest.h>

#include "stancesim/control_math.hpp"
#include "stancesim/errors.hpp"
#include "test_util.hpp"

using namespace stancesim;

namespace {

double char_poly_residual(const Mat2& A, std::complex<double> root) {
  const std::complex<double> r = root * root - A.trace() * root + A.det();
  return std::abs(r);
}

}  // namespace

TEST_CASE("eig2 on canonical matrices") {
  SUBCASE("rotation generator gives +-i") {
    auto [l1, l2] = eig2({0.0, 1.0, -1.0, 0.0});
    CHECK(l1.real() == doctest::Approx(0.0));
    CHECK(std::abs(l1.imag()) == doctest::Approx(1.0));
    CHECK(l2 == std::conj(l1));
  }
  SUBCASE("diagonal") {
    auto [l1, l2] = eig2(Mat2::diag(-2.0, -3.0));
    CHECK(std::min(l1.real(), l2.real()) == doctest::Approx(-3.0));
    CHECK(std::max(l1.real(), l2.real()) == doctest::Approx(-2.0));
    CHECK(l1.imag() == 0.0);
  }
  SUBCASE("open-loop stance matrix splits symmetrically") {
    auto [l1, l2] = eig2({0.0, 1.0, 23.145, 0.0});
    CHECK(std::max(l1.real(), l2.real()) == doctest::Approx(std::sqrt(23.145)).epsilon(1e-12));
    CHECK(l1.real() == doctest::Approx(-l2.real()));
  }
}

TEST_CASE("eig2 roots satisfy the characteristic polynomial") {
  std::mt19937 rng(7u);
  for (int i = 0; i < 1000; ++i) {
    const Mat2 A = test_util::random_mat2(rng);
    auto [l1, l2] = eig2(A);
    const double scale =
        std::max({1.0, std::norm(l1), std::abs(A.trace() * l1), std::abs(A.det())});
    CHECK(char_poly_residual(A, l1) <= 1e-10 * scale);
    CHECK(char_poly_residual(A, l2) <= 1e-10 * scale);
  }
}

TEST_CASE("place_poles2 worked example") {
  const Vec2 K = place_poles2({0.0, 1.0, 1.0, 0.0}, {0.0, 1.0}, -1.0, -1.0);
  CHECK(K.x1 == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(K.x2 == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("place_poles2 hits random distinct pole pairs") {
  std::mt19937 rng(11u);
  std::uniform_real_distribution<double> pole(-8.0, -0.5);
  int tested = 0;
  while (tested < 400) {
    const Mat2 A = test_util::random_mat2(rng);
    const Vec2 B = {std::uniform_real_distribution<double>(-2.0, 2.0)(rng),
                    std::uniform_real_distribution<double>(-2.0, 2.0)(rng)};
    const double mu1 = pole(rng);
    double mu2 = pole(rng);
    if (std::abs(mu1 - mu2) < 0.5) mu2 -= 1.0;
    Vec2 K;
    try {
      K = place_poles2(A, B, mu1, mu2);
    } catch (const UncontrollableError&) {
      continue;
    }
    const Mat2 Acl = {A.a11 - B.x1 * K.x1, A.a12 - B.x1 * K.x2,
                      A.a21 - B.x2 * K.x1, A.a22 - B.x2 * K.x2};
    auto [l1, l2] = eig2(Acl);
    const double err =
        std::min(std::max(std::abs(l1 - std::complex<double>(mu1)), std::abs(l2 - std::complex<double>(mu2))),
                 std::max(std::abs(l1 - std::complex<double>(mu2)), std::abs(l2 - std::complex<double>(mu1))));
    CHECK(err <= 1e-9 * std::max(1.0, std::max(std::abs(mu1), std::abs(mu2))));
    ++tested;
  }
}

TEST_CASE("place_poles2 accepts conjugate pairs and rejects mismatched ones") {
  const Mat2 A = {0.0, 1.0, 2.0, -1.0};
  const Vec2 B = {0.0, 1.0};
  const std::complex<double> mu(-2.0, 1.5);
  const Vec2 K = place_poles2(A, B, mu, std::conj(mu));
  const Mat2 Acl = {A.a11, A.a12, A.a21 - K.x1, A.a22 - K.x2};
  auto [l1, l2] = eig2(Acl);
  CHECK(std::min(std::abs(l1 - mu), std::abs(l2 - mu)) <= 1e-9);

  CHECK_THROWS_AS(place_poles2(A, B, mu, std::complex<double>(-2.0, 1.0)), ValidationError);
}

TEST_CASE("place_poles2 rejects uncontrollable pairs") {
  CHECK_THROWS_AS(place_poles2(Mat2::diag(-1.0, -2.0), {0.0, 0.0}, -1.0, -2.0),
                  UncontrollableError);
  // B aligned with an eigenvector of a diagonal A leaves the other mode free.
  CHECK_THROWS_AS(place_poles2(Mat2::diag(-1.0, -2.0), {1.0, 0.0}, -3.0, -4.0),
                  UncontrollableError);
}

TEST_CASE("place_poles2 on the default stance system") {
  // a and b_lin for M=3, m=6.12, L=0.42, g=9.81, y_m=0.049.
  const double a = -23.14573499;
  const double b = 1.990948899;
  const Vec2 K = place_poles2({0.0, 1.0, -a, 0.0}, {0.0, b}, -4.5, -4.5);
  CHECK(K.x1 == doctest::Approx(21.797).epsilon(5e-4));
  CHECK(K.x2 == doctest::Approx(4.5206).epsilon(5e-4));
  // Repeated roots are sqrt(eps)-sensitive, so verify membership through the
  // characteristic polynomial instead of root distance.
  const Mat2 Acl = {0.0, 1.0, -a - b * K.x1, -b * K.x2};
  CHECK(char_poly_residual(Acl, {-4.5, 0.0}) <= 1e-9 * 20.25);
}

TEST_CASE("solve_lyapunov2 diagonal cases") {
  CHECK(solve_lyapunov2(Mat2::diag(-1.0, -1.0), Mat2::diag(2.0, 2.0)).a11 ==
        doctest::Approx(1.0).epsilon(1e-14));
  const Mat2 P = solve_lyapunov2(Mat2::diag(-3.0, -0.5), Mat2::diag(6.0, 1.0));
  CHECK(P.a11 == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(P.a22 == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(P.a12 == doctest::Approx(0.0));
}

TEST_CASE("solve_lyapunov2 on the reference-model matrix") {
  const Mat2 A_m = {0.0, 1.0, -1.0, -5.0 / 3.0};
  const Mat2 P = solve_lyapunov2(A_m, Mat2::identity());
  // Hand elimination of the 3x3 system gives p12 = 1/2, p22 = 3/5,
  // p11 = p22 + (5/3) p12 = 43/30.
  CHECK(P.a11 == doctest::Approx(43.0 / 30.0).epsilon(1e-13));
  CHECK(P.a12 == doctest::Approx(0.5).epsilon(1e-13));
  CHECK(P.a22 == doctest::Approx(0.6).epsilon(1e-13));
  const Mat2 res = P * A_m + A_m.transpose() * P + Mat2::identity();
  CHECK(res.max_abs() < 1e-12);
}

TEST_CASE("solve_lyapunov2 rejects non-Hurwitz input") {
  CHECK_THROWS_AS(solve_lyapunov2({0.0, 1.0, 23.145, 0.0}, Mat2::identity()),
                  NotHurwitzError);
  CHECK_THROWS_AS(solve_lyapunov2({0.0, 1.0, -1.0, 0.0}, Mat2::identity()),
                  NotHurwitzError);
}

TEST_CASE("solve_lyapunov2 randomized residual and definiteness") {
  std::mt19937 rng(13u);
  for (int i = 0; i < 1000; ++i) {
    const Mat2 A = test_util::random_hurwitz(rng);
    const Mat2 Q = test_util::random_spd(rng);
    const Mat2 P = solve_lyapunov2(A, Q);
    const Mat2 res = P * A + A.transpose() * P + Q;
    CHECK(res.max_abs() < 1e-12);
    CHECK(is_spd2(P));
  }
}

TEST_CASE("quadratic form rate along the reference flow equals -x'Qx") {
  std::mt19937 rng(17u);
  std::uniform_real_distribution<double> d(-2.0, 2.0);
  for (int i = 0; i < 200; ++i) {
    const Mat2 A = test_util::random_hurwitz(rng);
    const Mat2 Q = test_util::random_spd(rng);
    const Mat2 P = solve_lyapunov2(A, Q);
    const Vec2 x = {d(rng), d(rng)};
    // d/dt x'Px = x'(PA + A'P)x = -x'Qx, expanded per sample.
    const double rate = 2.0 * dot(x, P * (A * x));
    const double want = -quad_form(Q, x);
    CHECK(rate == doctest::Approx(want).epsilon(1e-10));
  }
}

TEST_CASE("is_hurwitz2 and is_spd2 classify the documented cases") {
  CHECK(is_hurwitz2(Mat2::diag(-1.0, -1.0)));
  CHECK_FALSE(is_hurwitz2({0.0, 1.0, 23.145, 0.0}));   // det < 0
  CHECK_FALSE(is_hurwitz2({0.0, 1.0, -1.0, 0.0}));     // marginal, tr = 0
  CHECK(is_spd2(Mat2::identity()));
  CHECK_FALSE(is_spd2({1.0, 2.0, 2.0, 1.0}));          // det = -3
  CHECK_FALSE(is_spd2({1.0, 0.5, -0.5, 1.0}));         // not symmetric
}

TEST_CASE("inverse2 inverts and flags singular input") {
  const Mat2 m = {3.0, 1.0, -2.0, 4.0};
  const Mat2 id = m * inverse2(m);
  CHECK(id.a11 == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(id.a22 == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(std::abs(id.a12) < 1e-14);
  CHECK_THROWS_AS(inverse2({1.0, 2.0, 2.0, 4.0}), SingularSystemError);
}
