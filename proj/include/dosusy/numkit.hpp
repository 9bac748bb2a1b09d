#pragma once

// Generic numerics shared by the model, SUSY and solver modules:
// Gegenbauer polynomials, adaptive Gauss-Kronrod quadrature, Richardson
// finite differences, and 1-D / 2-D root finding.

#include <array>
#include <functional>
#include <utility>

namespace dosusy::numkit {

using RealFn = std::function<double(double)>;

struct ToleranceProfile {
  double quad_tol = 1e-10;   // relative quadrature tolerance
  double deriv_step = 1e-3;  // base finite-difference step
  double root_tol = 1e-12;   // residual tolerance for root finding

  /// Throws std::invalid_argument unless every field is strictly positive.
  void validate() const;
};

// --- Gegenbauer ------------------------------------------------------------

struct GegenbauerValue {
  double value = 0.0;
  double d1 = 0.0;  // dC/dx
  double d2 = 0.0;  // d^2C/dx^2
};

/// C_p^q(x) by the three-term recurrence. Requires p >= 0, q > -1/2, |x| <= 1.
double gegenbauer_eval(int p, double q, double x);

/// Value and first two x-derivatives, obtained by differentiating the recurrence.
GegenbauerValue gegenbauer_with_derivatives(int p, double q, double x);

/// C'' + Q C' + R_p C for the ultraspherical equation with
/// Q = (2q+1) x/(x^2-1) and R_p = -p(p+2q)/(x^2-1). Requires |x| < 1.
double gegenbauer_ode_residual(int p, double q, double x);

// --- quadrature ------------------------------------------------------------

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;  // estimated absolute error
  int intervals = 0;
};

/// Global adaptive G7/K15 quadrature with interval bisection. The endpoints
/// are never evaluated, so integrable endpoint singularities are allowed.
/// Converges when the error estimate is below quad_tol times the integral of
/// |f|; throws QuadratureError (carrying the best estimate) otherwise.
QuadratureResult integrate_adaptive(const RealFn& f, double a, double b,
                                    const ToleranceProfile& profile = {});

/// Integral of f over (0, inf) through rho^kappa = tan(alpha/2), alpha in (0, pi).
QuadratureResult integrate_half_line(const RealFn& f, double kappa,
                                     const ToleranceProfile& profile = {});

// --- finite differences ----------------------------------------------------

/// Step used by the default derivative helpers: deriv_step * max(1, |x|).
double default_step(const ToleranceProfile& profile, double x);

/// Central first derivative with one Richardson level (O(h^4)).
double derivative(const RealFn& f, double x, double h);

/// Central second derivative with one Richardson level (O(h^4)).
double second_derivative(const RealFn& f, double x, double h);

// --- roots -----------------------------------------------------------------

struct RootResult {
  double root = 0.0;
  double residual = 0.0;
  int iterations = 0;
};

/// Bracketed 1-D root (TOMS 748). Throws BracketError without a sign change.
RootResult find_root(const RealFn& f, double a, double b, const ToleranceProfile& profile = {},
                     int max_iterations = 200);

using Vec2 = std::array<double, 2>;
using VecFn2 = std::function<Vec2(const Vec2&)>;

struct Box2 {
  Vec2 lo;
  Vec2 hi;
};

struct Root2Result {
  Vec2 point{};
  Vec2 residual{};
  int iterations = 0;
  bool used_fallback = false;
};

/// Damped Newton on F(x) = 0 with a finite-difference Jacobian, started from
/// `seed` and confined to `box`. If Newton stalls, falls back to nested
/// bracketing: an inner 1-D root of F[1] in x[1], then an outer 1-D root of
/// F[0] along that curve in x[0]. Throws ConvergenceError if both fail.
Root2Result newton_2d(const VecFn2& F, const Vec2& seed, const Box2& box,
                      const ToleranceProfile& profile = {}, int max_iterations = 100);

}  // namespace dosusy::numkit
