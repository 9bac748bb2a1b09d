#include <cmath>
#include <numbers>

#include <doctest.h>

#include "dosusy/errors.hpp"
#include "dosusy/numkit.hpp"

using namespace dosusy;
using namespace dosusy::numkit;
constexpr double pi = std::numbers::pi;

TEST_CASE("gegenbauer: low orders against explicit polynomials") {
  CHECK(gegenbauer_eval(2, 1.0, 0.5) == doctest::Approx(0.0).epsilon(1e-15));
  for (double q : {0.5, 1.0, 2.5, 7.0})
    for (double x = -0.95; x < 1.0; x += 0.1) {
      CHECK(gegenbauer_eval(0, q, x) == 1.0);
      CHECK(gegenbauer_eval(1, q, x) == doctest::Approx(2 * q * x).epsilon(1e-14));
      CHECK(gegenbauer_eval(2, q, x) ==
            doctest::Approx(2 * q * (1 + q) * x * x - q).epsilon(1e-13));
      const double c3 = 4.0 / 3.0 * q * (q + 1) * (q + 2) * x * x * x - 2 * q * (q + 1) * x;
      CHECK(gegenbauer_eval(3, q, x) == doctest::Approx(c3).epsilon(1e-12));
    }
}

TEST_CASE("gegenbauer: q = 1 is Chebyshev U, q = 1/2 is Legendre") {
  for (int p = 0; p <= 12; ++p)
    for (double th = 0.1; th < 3.1; th += 0.3) {
      const double x = std::cos(th);
      CHECK(gegenbauer_eval(p, 1.0, x) ==
            doctest::Approx(std::sin((p + 1) * th) / std::sin(th)).epsilon(1e-11));
      CHECK(gegenbauer_eval(p, 0.5, x) ==
            doctest::Approx(std::legendre(p, x)).epsilon(1e-11));
    }
}

TEST_CASE("gegenbauer: derivatives match finite differences and the ODE holds") {
  for (int p = 0; p <= 8; ++p)
    for (double q : {0.5, 1.5, 3.25})
      for (double x = -0.9; x < 0.95; x += 0.15) {
        const auto g = gegenbauer_with_derivatives(p, q, x);
        const auto C = [&](double t) { return gegenbauer_eval(p, q, t); };
        CHECK(g.value == doctest::Approx(C(x)).epsilon(1e-14));
        CHECK(g.d1 == doctest::Approx(derivative(C, x, 1e-3)).epsilon(1e-8).scale(1.0));
        CHECK(g.d2 == doctest::Approx(second_derivative(C, x, 2e-3)).epsilon(1e-6).scale(1.0));
        const double scale = 1 + std::abs(g.d2) + std::abs(g.d1) / (1 - x * x);
        CHECK(std::abs(gegenbauer_ode_residual(p, q, x)) / scale < 1e-11);
      }
  CHECK_THROWS_AS(gegenbauer_ode_residual(2, 1.0, 1.0), DomainError);
  CHECK_THROWS_AS(gegenbauer_eval(-1, 1.0, 0.0), DomainError);
}

TEST_CASE("quadrature: smooth, oscillatory and endpoint-singular integrands") {
  CHECK(integrate_adaptive([](double x) { return std::sin(x); }, 0, pi).value ==
        doctest::Approx(2.0).epsilon(1e-13));
  for (int k = 0; k <= 9; ++k)
    CHECK(integrate_adaptive([k](double x) { return std::pow(x, k); }, 0, 1).value ==
          doctest::Approx(1.0 / (k + 1)).epsilon(1e-13));
  CHECK(integrate_adaptive([](double x) { return 1 / std::sqrt(x); }, 0, 1).value ==
        doctest::Approx(2.0).epsilon(1e-9));
  CHECK(integrate_adaptive([](double x) { return std::log(x); }, 0, 1).value ==
        doctest::Approx(-1.0).epsilon(1e-9));
  // Reversed limits flip the sign.
  CHECK(integrate_adaptive([](double x) { return x * x; }, 2, 0).value ==
        doctest::Approx(-8.0 / 3.0).epsilon(1e-13));
  CHECK(integrate_adaptive([](double x) { return std::cos(40 * x); }, 0, 2).value ==
        doctest::Approx(std::sin(80.0) / 40).epsilon(1e-10));
}

TEST_CASE("quadrature: half line through the tangent map") {
  for (double kappa : {0.5, 1.0, 1.5}) {
    const auto r = integrate_half_line([](double r) { return 1 / (1 + r * r); }, kappa);
    CHECK(r.value == doctest::Approx(pi / 2).epsilon(1e-10));
    CHECK(integrate_half_line([](double r) { return std::exp(-r); }, kappa).value ==
          doctest::Approx(1.0).epsilon(1e-10));
  }
}

TEST_CASE("quadrature: divergent integral reports failure with an estimate") {
  try {
    integrate_adaptive([](double x) { return 1 / x; }, 0, 1);
    FAIL("expected QuadratureError");
  } catch (const QuadratureError& e) {
    CHECK(e.estimate() > 10.0);
    CHECK(e.error_bound() > 0.0);
  }
}

TEST_CASE("finite differences reach O(h^4)") {
  const auto f = [](double x) { return std::sin(x); };
  for (double x : {0.0, 0.3, 1.7, 5.0}) {
    CHECK(derivative(f, x, 1e-2) == doctest::Approx(std::cos(x)).epsilon(1e-10).scale(1.0));
    CHECK(second_derivative(f, x, 1e-2) ==
          doctest::Approx(-std::sin(x)).epsilon(1e-8).scale(1.0));
  }
  ToleranceProfile p;
  CHECK(default_step(p, 0.5) == p.deriv_step);
  CHECK(default_step(p, -20.0) == doctest::Approx(20 * p.deriv_step));
}

TEST_CASE("roots: bracketed and two-dimensional") {
  const auto r = find_root([](double x) { return std::cos(x); }, 1, 2);
  CHECK(r.root == doctest::Approx(pi / 2).epsilon(1e-14));
  CHECK(std::abs(r.residual) < 1e-12);
  CHECK_THROWS_AS(find_root([](double x) { return x * x + 1; }, 0, 1), BracketError);

  const VecFn2 F = [](const Vec2& v) {
    return Vec2{v[0] * v[0] + v[1] * v[1] - 4, v[0] - v[1]};
  };
  const auto s = newton_2d(F, {1.0, 1.7}, {{0.1, 0.1}, {3.0, 3.0}});
  CHECK(s.point[0] == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
  CHECK(s.point[1] == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
  CHECK(std::abs(s.residual[0]) + std::abs(s.residual[1]) < 1e-12);
}

TEST_CASE("tolerance profile rejects non-positive fields") {
  CHECK_NOTHROW(ToleranceProfile{}.validate());
  CHECK_THROWS_AS((ToleranceProfile{0.0, 1e-3, 1e-12}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((ToleranceProfile{1e-10, -1.0, 1e-12}.validate()), std::invalid_argument);
}
