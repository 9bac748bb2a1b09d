#pragma once

// Superpotential, partner potentials and factorization operators of the
// nodeless (C_0 = 1) sector.

#include <vector>

#include "dosusy/do_model.hpp"
#include "dosusy/numkit.hpp"

namespace dosusy {

/// W = l/rho - (2l+1) / (rho (1 + rho^{2k})).
double superpotential(double rho, double kappa, int l);

/// dW/drho, differentiated in closed form.
double superpotential_derivative(double rho, double kappa, int l);

struct PartnerValues {
  double minus = 0.0;  // W^2 - W'
  double plus = 0.0;   // W^2 + W'
};

/// Closed forms:
///   U-  = l(l+1)/rho^2 - (2l+1)(2l+2k+1) / (rho^{2(1-k)} (1+rho^{2k})^2)
///   U+  = l(l-1)/rho^2 - (2l+1)(2l-2k-1) / (rho^{2(1-k)} (1+rho^{2k})^2)
///         + 2(2l+1) / (rho^2 (1+rho^{2k})^2)
PartnerValues partner_potentials(double rho, double kappa, int l);

/// U+ and its first two rho-derivatives, with l allowed to be non-integer.
struct PlusCurve {
  double value = 0.0;
  double slope = 0.0;
  double curvature = 0.0;
};
PlusCurve plus_potential_with_derivatives(double rho, double kappa, double l);

/// The (kappa, l) partner bundle.
class SusyPair {
 public:
  SusyPair(double kappa, int l);

  double kappa() const { return kappa_; }
  int l() const { return l_; }
  double W(double rho) const { return superpotential(rho, kappa_, l_); }
  double dW(double rho) const { return superpotential_derivative(rho, kappa_, l_); }
  double U_minus(double rho) const { return partner_potentials(rho, kappa_, l_).minus; }
  double U_plus(double rho) const { return partner_potentials(rho, kappa_, l_).plus; }

 private:
  double kappa_;
  int l_;
};

enum class Ladder { A, A_dagger };

struct LadderResult {
  SampledFunction input;
  SampledFunction output;
  Ladder op = Ladder::A;
};

/// d/drho of sampled data: five-point Fornberg weights, centred in the
/// interior and one-sided at the two points nearest each edge.
/// Throws GridError for fewer than five points.
std::vector<double> differentiate_sampled(const std::vector<double>& grid,
                                          const std::vector<double>& values);

/// A u = u' + W u, A+ u = -u' + W u.
LadderResult apply_ladder(const SampledFunction& u, const SusyPair& pair, Ladder which);

/// f rebuilt from |xi'|^{-1/2} exp(1/2 int Q dxi) with Q = (2l+2k+1)/k * xi/(xi^2-1);
/// the integral runs from xi = 0 (rho = 1) by adaptive quadrature. Equal to
/// f_factor up to one global constant.
SampledFunction natanzon_f_reconstruction(double kappa, int l, const std::vector<double>& grid,
                                          const numkit::ToleranceProfile& profile = {});

}  // namespace dosusy
