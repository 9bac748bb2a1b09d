#pragma once

// One-parameter families of superpotentials W + 1/V generated by the general
// solutions of the bosonic and fermionic Riccati equations, and an audit of
// the closed-form series printed for the kappa = 1 and kappa = 1/2 cases.

#include <string>
#include <vector>

#include <json.hpp>

#include "dosusy/numkit.hpp"

namespace dosusy {

enum class FamilySide {
  bosonic_fixed,    // V' + 2WV = -1; members share U-, fermionic partners vary
  fermionic_fixed,  // V' - 2WV = +1; members share U+, bosonic partners vary
};

std::string to_string(FamilySide side);
FamilySide parse_family_side(const std::string& text);

/// V and W_lambda of one family member. The integral reference point is rho = 1:
///   bosonic:   V = -f^2 (lambda + int_1^rho f^{-2})
///   fermionic: V = f^{-2} (lambda + int_1^rho f^{2})
class FamilyMember {
 public:
  FamilyMember(FamilySide side, double lambda, double kappa, int l,
               numkit::ToleranceProfile profile = {});

  FamilySide side() const { return side_; }
  double lambda() const { return lambda_; }
  double kappa() const { return kappa_; }
  int l() const { return l_; }

  /// int_1^rho f^{-2} (bosonic) or int_1^rho f^{2} (fermionic).
  double reference_integral(double rho) const;

  double V(double rho) const;

  /// V' from the product rule: the analytic f'/f and the integrand at rho.
  double dV(double rho) const;

  /// V' + 2WV + 1 (bosonic) or V' - 2WV - 1 (fermionic).
  double ode_residual(double rho) const;

  /// W + 1/V. Throws SingularPointError at a zero of V.
  double W_lambda(double rho) const;

  /// W' - V'/V^2 with V' taken from the defining ODE.
  double dW_lambda(double rho) const;

  /// W_l^2 - W_l' - U- (bosonic) or W_l^2 + W_l' - U+ (fermionic).
  double riccati_residual(double rho) const;

  /// Zeros of V within the span of `grid`: sign changes between grid points,
  /// refined by bracketing. These are the singular loci of W_lambda.
  std::vector<double> v_zeros(const std::vector<double>& grid) const;

 private:
  struct Parts {
    double f2, integral, bracket;  // bracket = lambda + integral
  };
  Parts parts(double rho) const;

  FamilySide side_;
  double lambda_;
  double kappa_;
  int l_;
  numkit::ToleranceProfile profile_;
};

double v_family(double rho, double kappa, int l, double lambda, FamilySide side,
                const numkit::ToleranceProfile& profile = {});

double family_superpotential(double rho, double kappa, int l, double lambda, FamilySide side,
                             const numkit::ToleranceProfile& profile = {});

// --- printed series ---------------------------------------------------------

enum class SeriesFormula {
  S1,      // antiderivative, kappa = 1
  S_half,  // antiderivative, kappa = 1/2
  V1,      // V, kappa = 1
  V_half,  // V, kappa = 1/2
};

std::string to_string(SeriesFormula id);
SeriesFormula parse_series_formula(const std::string& text);

/// kappa the formula belongs to (1 or 1/2).
double series_kappa(SeriesFormula id);

/// The series exactly as typeset, including its descending products and the
/// double factorial (log space above l = 15). Requires alpha in (0, pi).
double printed_series_eval(double alpha, int l, SeriesFormula id);

/// The antiderivative integrand: 2^{(2l+1)/k}/k * csc(alpha)^{(2l+k+1)/k}.
double antiderivative_integrand(double alpha, double kappa, int l);

enum class Verdict { match, constant_offset_match, mismatch };
std::string to_string(Verdict v);

struct SeriesAuditRecord {
  SeriesFormula formula = SeriesFormula::S1;
  int l = 0;
  double kappa = 1.0;
  double max_dev = 0.0;           // max relative deviation vs the quadrature oracle
  double ode_residual_max = 0.0;  // see series_audit
  double deviation_factor = 1.0;  // median printed/oracle ratio
  double ratio_min = 1.0;
  double ratio_max = 1.0;
  Verdict verdict = Verdict::mismatch;
};

nlohmann::json to_json(const SeriesAuditRecord& record);

/// Verdict thresholds.
inline constexpr double kAuditMatchTolerance = 1e-8;

/// Audits every formula belonging to `kappa` (1 or 1/2) for each l in
/// [l_min, l_max] on alpha = 2 atan(rho^kappa) over `rho_grid`.
///   S formulas: consecutive differences S(a2) - S(a1) against quadrature of
///     the antiderivative integrand (max_dev), the pointwise offset at
///     alpha = pi/2 (where the oracle vanishes) decides match vs
///     constant_offset_match, and ode_residual_max is the relative mismatch of
///     dS/dalpha (finite differences) against the integrand.
///   V formulas: pointwise ratio to the quadrature-built bosonic V with
///     lambda = 0 (max_dev = max |ratio - 1|), and ode_residual_max is the
///     relative residual of V' + 2WV + 1 for the printed V.
std::vector<SeriesAuditRecord> series_audit(double kappa, int l_min, int l_max,
                                            const std::vector<double>& rho_grid,
                                            const numkit::ToleranceProfile& profile = {});

SeriesAuditRecord audit_formula(SeriesFormula id, int l, const std::vector<double>& rho_grid,
                                const numkit::ToleranceProfile& profile = {});

}  // namespace dosusy
