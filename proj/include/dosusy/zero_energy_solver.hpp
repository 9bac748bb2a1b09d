#pragma once

// Numerical oracles for the zero-energy problem: outward radial integration,
// shooting in the coupling w, the critical angular number of U+, and planar
// classical paths at E = 0.

#include <numbers>
#include <optional>
#include <utility>
#include <vector>

#include "dosusy/do_model.hpp"
#include "dosusy/numkit.hpp"

namespace dosusy {

struct RadialOptions {
  double rel_tol = 1e-10;
  double abs_tol = 1e-14;    // relative to the start normalization u(rho0) = 1
  double rho_start = 1e-4;   // Frobenius start, small-rho branch
  double rho_far = 1e3;      // asymptotic start, large-rho branch
  double overflow = 1e250;
};

struct RadialSolution {
  SampledFunction u;          // scaled so u(rho_start) = rho_start^{l+1} series value
  SampledFunction du;
  std::vector<double> nodes;  // zero crossings located on the dense output
  double tail_exponent = 0.0; // rho u'/u at the last grid point
  bool decaying = false;      // tail exponent closer to -l than to l+1
};

/// Integrates u'' = (l(l+1)/rho^2 + U(rho)) u outward from the regular
/// Frobenius series u = rho^{l+1}(1 + c rho^{2k} + ...), c = -w / (2k(2l+2k+1)),
/// summed to convergence, with an adaptive Dormand-Prince pair. Throws OverflowError with the blow-up radius.
RadialSolution integrate_radial(double kappa, double w, int l, const std::vector<double>& grid,
                                const RadialOptions& options = {});

/// Normalized Wronskian of the regular (outward) and decaying (inward,
/// u ~ rho^{-l}(1 + c rho^{-2k} + ...)) branches at rho = 1. Zero exactly at the
/// coupling eigenvalues; continuous in w.
double matching_defect(double kappa, double w, int l, const RadialOptions& options = {});

struct ShootingResult {
  double w_star = 0.0;
  int iterations = 0;
  double match_defect = 0.0;
  std::pair<double, double> bracket{0.0, 0.0};
};

/// Bracket around the (n_r+1)-th sign change of matching_defect, found by a
/// geometric scan in w. Uses no knowledge of the quantization formula.
std::pair<double, double> bracket_by_scan(int n_r, double kappa, int l,
                                          const RadialOptions& options = {},
                                          double w_min = 0.05, double w_max = 1e4,
                                          double growth = 1.02);

/// Root of matching_defect in w. Without a bracket, one is found by
/// bracket_by_scan for n_r = N - 1 - l/kappa (checked for validity).
ShootingResult shoot_coupling(int N, const Kappa& kappa, int l,
                              std::optional<std::pair<double, double>> bracket = std::nullopt,
                              const numkit::ToleranceProfile& profile = {},
                              const RadialOptions& options = {});

struct CriticalPoint {
  double l_cr = 0.0;
  double rho_cr = 0.0;
  double slope_residual = 0.0;      // dU+/drho at the point
  double curvature_residual = 0.0;  // d2U+/drho2 at the point
  int iterations = 0;
};

struct CriticalSearch {
  double l_min = 1.0;
  double l_max = 20.0;
  double rho_min = 0.1;
  double rho_max = 10.0;
  int l_samples = 96;
  int rho_samples = 400;
};

/// Every (l, rho) in the scan box where U+ has a flat inflection, each polished
/// by damped 2-D Newton, sorted by l. Deterministic for a fixed scan.
std::vector<CriticalPoint> critical_points(double kappa, const CriticalSearch& search = {},
                                           const numkit::ToleranceProfile& profile = {});

/// The smallest-l critical point; throws NotFoundError when the scan finds none.
CriticalPoint critical_angular(double kappa, const CriticalSearch& search = {},
                               const numkit::ToleranceProfile& profile = {});

struct PlusExtrema {
  std::vector<double> maxima;
  std::vector<double> minima;
};

/// Local extrema of U+(rho; kappa, l) in (lo, hi), from slope sign changes on
/// a fine grid refined by bracketing.
PlusExtrema plus_extrema(double kappa, double l, double lo, double hi, int samples = 2000);

struct LaunchSpec {
  double rho = 0.5;           // start radius (units of R)
  double polar_angle = 0.0;   // position angle of the start point
  double launch_angle = 0.5 * std::numbers::pi;  // velocity angle relative to radial
};

struct Trajectory {
  std::vector<double> t, x, y, speed;
  double closure_defect = 0.0;  // phase-space distance after k2 revolutions
  double focal_defect = 0.0;    // distance from the predicted focus after k2/2 revolutions
  double focal_x = 0.0, focal_y = 0.0;
  double revolutions = 0.0;
  double energy_violation = 0.0;  // max |v^2/2 + U| / |U(start)|
};

struct TrajectoryOptions {
  double rel_tol = 1e-12;
  double abs_tol = 1e-14;
  int samples_per_revolution = 256;
};

/// Planar zero-energy motion x'' = -grad U (unit mass) started with
/// |v| = sqrt(-2U). Integrated with the polar angle as the independent
/// variable, so the closure check lands exactly on 2 pi k2. The predicted
/// focus sits at polar angle + pi k2 and radius rho^{(-1)^{k1}}.
/// `revolutions` defaults to k2. Throws GeometryError if the path reaches the
/// centre (or is launched radially) or escapes beyond rho = 1e3.
Trajectory classical_trajectory(const Rational& kappa, double w, const LaunchSpec& start,
                                std::optional<double> revolutions = std::nullopt,
                                const TrajectoryOptions& options = {});

/// Max pointwise distance between two paths sampled at the same polar angles;
/// an upper bound on their Hausdorff distance.
double path_distance(const Trajectory& a, const Trajectory& b);

}  // namespace dosusy
