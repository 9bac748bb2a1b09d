#include <cmath>
#include <numbers>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <doctest.h>

#include "dosusy/do_model.hpp"
#include "dosusy/errors.hpp"

using namespace dosusy;
constexpr double pi = std::numbers::pi;

TEST_CASE("rational kappa is kept in lowest terms") {
  const Rational r(2, 4);
  CHECK(r.num == 1);
  CHECK(r.den == 2);
  CHECK_THROWS_AS(Rational(0, 1), DomainError);
  CHECK_THROWS_AS(Rational(1, -2), DomainError);

  const auto k = Kappa::parse("3/2");
  REQUIRE(k.exact());
  CHECK(k.exact()->num == 3);
  CHECK(k.value() == 1.5);
  CHECK(k.to_string() == "3/2");
  CHECK(Kappa::parse("6/3").to_string() == "2");
  CHECK(Kappa::parse("0.5").value() == 0.5);
  CHECK_FALSE(Kappa::parse("0.5").exact());
  CHECK_THROWS_AS(Kappa::parse("abc"), DomainError);
  CHECK_THROWS_AS(Kappa::parse("-1"), DomainError);
  CHECK_THROWS_AS(Kappa::parse("1/x"), DomainError);
}

TEST_CASE("default grid: 400 log-spaced points over [1e-3, 1e3]") {
  const auto g = default_grid();
  REQUIRE(g.size() == 400);
  CHECK(g.front() == 1e-3);
  CHECK(g.back() == 1e3);
  const double step = std::log(g[1] / g[0]);
  for (std::size_t i = 1; i < g.size(); ++i)
    CHECK(std::log(g[i] / g[i - 1]) == doctest::Approx(step).epsilon(1e-9));
  CHECK_THROWS_AS(default_grid(1), std::invalid_argument);
}

TEST_CASE("potential: spot value and derivative") {
  CHECK(potential(2.0, 1.0, 3.0) == doctest::Approx(-0.12).epsilon(1e-15));
  // kappa = 1/2: -w / (rho (1 + rho)^2)
  CHECK(potential(3.0, 0.5, 2.0) == doctest::Approx(-2.0 / (3.0 * 16.0)).epsilon(1e-15));
  for (double k : {0.5, 1.0, 1.5})
    for (double rho : {0.1, 0.7, 1.0, 3.0, 20.0}) {
      const double h = 1e-4 * rho;
      const double fd = (potential(rho + h, k, 5.0) - potential(rho - h, k, 5.0)) / (2 * h);
      CHECK(potential_derivative(rho, k, 5.0) == doctest::Approx(fd).epsilon(1e-7));
    }
  CHECK_THROWS_AS(potential(0.0, 1.0, 1.0), DomainError);
  CHECK_THROWS_AS(potential(1.0, -1.0, 1.0), DomainError);
}

TEST_CASE("quantized coupling") {
  CHECK(coupling_quantized(1, 1.0) == doctest::Approx(3.0));
  CHECK(coupling_quantized(2, 1.0) == doctest::Approx(15.0));
  CHECK(coupling_quantized(2, 0.5) == doctest::Approx(6.0));
  // kappa = 1: (2N - 1)(2N + 1) = 4N^2 - 1
  for (int N = 1; N <= 10; ++N) CHECK(coupling_quantized(N, 1.0) == doctest::Approx(4.0 * N * N - 1));
  // kappa = 1/2: N (N + 1)
  for (int N = 1; N <= 10; ++N) CHECK(coupling_quantized(N, 0.5) == doctest::Approx(N * (N + 1.0)));
  CHECK_THROWS_AS(coupling_quantized(0, 1.0), DomainError);
}

TEST_CASE("coordinates: xi = cos(alpha), rho = 1 maps to the equator") {
  const auto c = map_coordinates(1.0, 0.7);
  CHECK(c.xi == doctest::Approx(0.0).scale(1.0));
  CHECK(c.alpha == doctest::Approx(pi / 2));
  for (double k : {0.5, 1.0, 1.5})
    for (double rho : {1e-3, 0.2, 1.0, 5.0, 1e3}) {
      const auto m = map_coordinates(rho, k);
      CHECK(m.xi == doctest::Approx(std::cos(m.alpha)).epsilon(1e-12).scale(1.0));
      const double s = std::pow(rho, 2 * k);
      CHECK(m.xi == doctest::Approx((1 - s) / (1 + s)).epsilon(1e-12).scale(1.0));
    }
}

TEST_CASE("f factor and its log-derivative") {
  // kappa = 1, l = 0: rho / sqrt(1 + rho^2)
  for (double rho : {0.01, 0.5, 1.0, 4.0, 100.0})
    CHECK(f_factor(rho, 1.0, 0) == doctest::Approx(rho / std::sqrt(1 + rho * rho)).epsilon(1e-14));
  // kappa = 1/2, l = 1: rho^2 / (1 + rho)^3
  CHECK(f_factor(2.0, 0.5, 1) == doctest::Approx(4.0 / 27.0).epsilon(1e-14));
  for (double k : {0.5, 1.0, 1.5})
    for (int l = 0; l <= 4; ++l)
      for (double rho : {0.05, 0.9, 2.5, 30.0}) {
        const double h = 1e-5 * rho;
        const double fd = (std::log(f_factor(rho + h, k, l)) - std::log(f_factor(rho - h, k, l))) / (2 * h);
        CHECK(f_log_derivative(rho, k, l) == doctest::Approx(fd).epsilon(1e-8));
      }
  // No overflow deep in the tail.
  CHECK(std::isfinite(f_factor(1e6, 0.5, 10)));
}

TEST_CASE("polynomial degree and state validity") {
  CHECK(polynomial_degree(Kappa(1, 1), 3, 1) == 1);
  CHECK(polynomial_degree(Kappa(1, 2), 3, 1) == 0);
  CHECK(polynomial_degree(Kappa(3, 2), 3, 3) == 0);
  CHECK(polynomial_degree(Kappa(1.0), 4, 0) == 3);
  CHECK_THROWS_AS(polynomial_degree(Kappa(1, 2), 1, 1), StateValidityError);
  CHECK_THROWS_AS(polynomial_degree(Kappa(3, 2), 2, 1), StateValidityError);
  CHECK_THROWS_AS(polynomial_degree(Kappa(1.5), 2, 1), StateValidityError);
  CHECK(gegenbauer_parameter(1.0, 0) == doctest::Approx(1.0));
  CHECK(gegenbauer_parameter(0.5, 1) == doctest::Approx(3.5));
}

TEST_CASE("radial u: explicit forms and nodes") {
  // kappa = 1, N = 2, l = 0: f C_1^1(xi) = 2 xi f, node at rho = 1.
  for (double rho : {0.3, 1.0, 2.0}) {
    const double xi = (1 - rho * rho) / (1 + rho * rho);
    CHECK(radial_u(rho, Kappa(1, 1), 2, 0) ==
          doctest::Approx(2 * xi * rho / std::sqrt(1 + rho * rho)).scale(1.0).epsilon(1e-14));
  }
  const auto s = sample_radial_u(default_grid(100, 0.01, 100), Kappa(1, 1), 3, 0);
  int changes = 0;
  for (std::size_t i = 1; i < s.size(); ++i) changes += (s.values[i] > 0) != (s.values[i - 1] > 0);
  CHECK(changes == 2);
}

TEST_CASE("normalization: l = 0 diverges, l >= 1 matches an independent quadrature") {
  const auto n0 = normalization_constant(Kappa(1, 1), 1, 0);
  CHECK(n0.status == NormStatus::not_normalizable);
  CHECK(std::isinf(n0.square_integral));
  CHECK_THROWS_AS(radial_u(1.0, Kappa(1, 1), 1, 0, true), NotNormalizableError);
  CHECK_THROWS_AS(sample_radial_u({1.0, 2.0}, Kappa(1, 2), 2, 0, true), NotNormalizableError);

  // kappa = 1, N = 2, l = 1: int rho^4 / (1 + rho^2)^3 = 3 pi / 16.
  const auto n1 = normalization_constant(Kappa(1, 1), 2, 1);
  CHECK(n1.status == NormStatus::normalizable);
  CHECK(n1.square_integral == doctest::Approx(3 * pi / 16).epsilon(1e-10));

  boost::math::quadrature::exp_sinh<double> oracle;
  struct Case {
    Kappa k;
    int N, l;
  };
  for (const auto& c : {Case{Kappa(1, 2), 3, 1}, Case{Kappa(1, 1), 4, 2}, Case{Kappa(3, 2), 3, 3}}) {
    const auto n = normalization_constant(c.k, c.N, c.l);
    const double ref = oracle.integrate([&](double r) {
      const double u = radial_u(r, c.k, c.N, c.l);
      return u * u;
    });
    CHECK(n.square_integral == doctest::Approx(ref).epsilon(1e-8));
    CHECK(n.constant == doctest::Approx(1 / std::sqrt(ref)).epsilon(1e-8));
  }
}

TEST_CASE("effective potential reduces to l(l+1)/rho^2 + U") {
  for (double rho : {0.1, 1.0, 7.0})
    CHECK(effective_potential_general(rho, 1.0, 2, 1) ==
          doctest::Approx(2 / (rho * rho) + potential(rho, 1.0, 15.0)).epsilon(1e-14));
}

TEST_CASE("shell degeneracy") {
  for (int N = 1; N <= 6; ++N) {
    const auto shell = enumerate_shell(N, Rational(1, 1));
    CHECK(shell.degeneracy == static_cast<std::size_t>(N * N));
    for (const auto& s : shell.states) {
      CHECK(s.n_r + s.l + 1 == s.n);
      CHECK(std::abs(s.m) <= s.l);
    }
  }
  // kappa = 1/2: l runs over 0..floor((N-1)/2).
  for (int N = 1; N <= 8; ++N) {
    std::size_t expect = 0;
    for (int l = 0; 2 * l <= N - 1; ++l) expect += 2 * l + 1;
    CHECK(enumerate_shell(N, Rational(1, 2)).degeneracy == expect);
  }
  CHECK_THROWS_AS(enumerate_shell(0, Rational(1, 1)), DomainError);
}

TEST_CASE("sampled function validation") {
  CHECK_THROWS_AS((SampledFunction{{1.0, 2.0}, {1.0}}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((SampledFunction{{2.0, 1.0}, {1.0, 1.0}}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((SampledFunction{{0.0, 1.0}, {1.0, 1.0}}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((SampledFunction{{1.0, 2.0}, {1.0, NAN}}.validate()), std::invalid_argument);
  CHECK_NOTHROW((SampledFunction{{1.0, 2.0}, {1.0, 3.0}}.validate()));
}
