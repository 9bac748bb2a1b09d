#include <cmath>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <doctest.h>

#include "dosusy/errors.hpp"
#include "dosusy/riccati_family.hpp"
#include "dosusy/susy_core.hpp"

using namespace dosusy;
constexpr double pi = std::numbers::pi;

namespace {

// Independent quadrature of int_1^rho f^{+-2}.
double oracle_integral(double rho, double k, int l, double power) {
  return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
      [&](double r) { return std::pow(f_factor(r, k, l), power); }, 1.0, rho, 15, 1e-13);
}

}  // namespace

TEST_CASE("bosonic member, kappa = 1, l = 0, lambda = 0: closed form") {
  const FamilyMember m(FamilySide::bosonic_fixed, 0.0, 1.0, 0);
  for (double rho : {0.05, 0.5, 2.0, 9.0})
    CHECK(m.V(rho) == doctest::Approx(rho * (1 - rho * rho) / (1 + rho * rho)).epsilon(1e-10));
  CHECK(m.V(1.0) == 0.0);
  CHECK(m.V(2.0) == doctest::Approx(-1.2).epsilon(1e-12));
  CHECK(m.W_lambda(2.0) == doctest::Approx(-0.1 - 5.0 / 6.0).epsilon(1e-12));
  try {
    m.W_lambda(1.0);
    FAIL("expected SingularPointError");
  } catch (const SingularPointError& e) {
    CHECK(e.location() == 1.0);
  }
  const auto zeros = m.v_zeros(default_grid(101, 0.1, 10.0));
  REQUIRE(zeros.size() == 1);
  CHECK(zeros[0] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("family V against an independent quadrature, and the lambda shift") {
  for (double k : {0.5, 1.0, 1.5})
    for (int l : {0, 1, 3})
      for (double rho : {0.1, 0.8, 3.0}) {
        const double f2 = std::pow(f_factor(rho, k, l), 2);
        const FamilyMember b0(FamilySide::bosonic_fixed, 0.0, k, l);
        const FamilyMember f0(FamilySide::fermionic_fixed, 0.0, k, l);
        CHECK(b0.V(rho) == doctest::Approx(-f2 * oracle_integral(rho, k, l, -2)).epsilon(1e-9));
        CHECK(f0.V(rho) == doctest::Approx(oracle_integral(rho, k, l, 2) / f2).epsilon(1e-9));
        for (double lam : {-2.0, 0.5, 2.0}) {
          const FamilyMember b(FamilySide::bosonic_fixed, lam, k, l);
          CHECK(b.V(rho) - b0.V(rho) == doctest::Approx(-lam * f2).epsilon(1e-9));
        }
      }
}

TEST_CASE("both sides satisfy their first-order ODE and the Riccati identity") {
  const auto grid = default_grid(40, 1e-2, 1e2);
  for (double k : {0.5, 1.0, 1.5})
    for (int l : {0, 2})
      for (double lam : {-2.0, -0.5, 0.0, 0.5, 2.0})
        for (auto side : {FamilySide::bosonic_fixed, FamilySide::fermionic_fixed}) {
          const FamilyMember m(side, lam, k, l);
          const auto zeros = m.v_zeros(grid);
          for (double rho : grid) {
            // Cross-check against a finite-difference V', scaled by the largest term.
            const double h = 1e-3 * rho;
            const double dV = numkit::derivative([&](double r) { return m.V(r); }, rho, h);
            const double sign = side == FamilySide::bosonic_fixed ? 1.0 : -1.0;
            const double twoWV = 2 * superpotential(rho, k, l) * m.V(rho);
            const double terms = std::max({1.0, std::abs(dV), std::abs(twoWV)});
            CHECK(std::abs(dV + sign * twoWV + sign) / terms < 1e-7);
            CHECK(std::abs(m.ode_residual(rho)) / std::max({1.0, std::abs(m.dV(rho)), std::abs(twoWV)}) <
                  1e-8);

            bool near = false;
            for (double z : zeros) near = near || std::abs(std::log(rho / z)) < 0.02;
            if (near) continue;
            const double W = m.W_lambda(rho), dW = m.dW_lambda(rho);
            const double U = side == FamilySide::bosonic_fixed ? partner_potentials(rho, k, l).minus
                                                               : partner_potentials(rho, k, l).plus;
            const double lhs = side == FamilySide::bosonic_fixed ? W * W - dW : W * W + dW;
            CHECK(std::abs(lhs - U) / (W * W + std::abs(dW)) < 1e-7);
          }
        }
}

TEST_CASE("large |lambda| recovers W") {
  for (double rho : {0.3, 1.7, 6.0}) {
    const double W = superpotential(rho, 1.0, 1);
    CHECK(family_superpotential(rho, 1.0, 1, 1e9, FamilySide::bosonic_fixed) ==
          doctest::Approx(W).epsilon(1e-6));
    CHECK(family_superpotential(rho, 1.0, 1, -1e9, FamilySide::fermionic_fixed) ==
          doctest::Approx(W).epsilon(1e-6));
  }
}

TEST_CASE("printed series at l = 0") {
  for (double a = 0.2; a < 3.0; a += 0.35) {
    const double s = std::sin(a), c = std::cos(a), t = std::tan(a / 2);
    CHECK(printed_series_eval(a, 0, SeriesFormula::S1) == doctest::Approx(-2 * c / s).scale(1.0));
    CHECK(printed_series_eval(a, 0, SeriesFormula::V1) == doctest::Approx(2 * c * t).scale(1.0));
    CHECK(printed_series_eval(a, 0, SeriesFormula::S_half) ==
          doctest::Approx(-8 * c / (s * s) + 4 * std::log(t)).scale(1.0));
    // The antiderivative for kappa = 1/2, l = 0 is -4 cos/sin^2 + 4 ln tan(a/2).
    CHECK(antiderivative_integrand(a, 0.5, 0) == doctest::Approx(8 / (s * s * s)));
    const auto F = [](double x) { return -4 * std::cos(x) / std::pow(std::sin(x), 2) + 4 * std::log(std::tan(x / 2)); };
    CHECK(numkit::derivative(F, a, 1e-3) == doctest::Approx(8 / (s * s * s)).epsilon(1e-8));
  }
  CHECK_THROWS_AS(printed_series_eval(0.0, 1, SeriesFormula::S1), DomainError);
  CHECK_THROWS_AS(printed_series_eval(pi, 1, SeriesFormula::V1), DomainError);
}

TEST_CASE("series audit verdicts") {
  const auto grid = default_grid(120, 1e-2, 1e2);
  const auto s1 = audit_formula(SeriesFormula::S1, 0, grid);
  CHECK(s1.verdict == Verdict::match);
  CHECK(s1.max_dev < 1e-10);

  const auto v1 = audit_formula(SeriesFormula::V1, 0, grid);
  CHECK(v1.verdict == Verdict::mismatch);
  CHECK(v1.ratio_min == doctest::Approx(2.0).epsilon(1e-6));
  CHECK(v1.ratio_max == doctest::Approx(2.0).epsilon(1e-6));
  CHECK(v1.ode_residual_max > 0.1);

  // S1 is exact for every l; the other printed forms all deviate.
  for (int l = 1; l <= 3; ++l) CHECK(audit_formula(SeriesFormula::S1, l, grid).verdict == Verdict::match);
  for (auto id : {SeriesFormula::S_half, SeriesFormula::V1, SeriesFormula::V_half})
    for (int l = 0; l <= 3; ++l) CHECK(audit_formula(id, l, grid).verdict == Verdict::mismatch);

  const auto all = series_audit(0.5, 0, 3, grid);
  CHECK(all.size() == 8);
  const auto j = to_json(all.front());
  for (const char* key : {"formula_id", "l", "kappa", "max_dev", "ode_residual_max", "verdict"})
    CHECK(j.contains(key));
  CHECK_THROWS(series_audit(1.5, 0, 1, grid));
}

TEST_CASE("names round-trip") {
  for (auto id : {SeriesFormula::S1, SeriesFormula::S_half, SeriesFormula::V1, SeriesFormula::V_half})
    CHECK(parse_series_formula(to_string(id)) == id);
  for (auto side : {FamilySide::bosonic_fixed, FamilySide::fermionic_fixed})
    CHECK(parse_family_side(to_string(side)) == side);
  CHECK(to_string(Verdict::constant_offset_match) == "constant-offset-match");
  CHECK_THROWS(parse_family_side("sideways"));
}
