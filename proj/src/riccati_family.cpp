#include "dosusy/riccati_family.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "dosusy/do_model.hpp"
#include "dosusy/errors.hpp"
#include "dosusy/susy_core.hpp"

namespace dosusy {

std::string to_string(FamilySide side) {
  return side == FamilySide::bosonic_fixed ? "bosonic" : "fermionic";
}

FamilySide parse_family_side(const std::string& text) {
  if (text == "bosonic" || text == "bosonic-fixed") return FamilySide::bosonic_fixed;
  if (text == "fermionic" || text == "fermionic-fixed") return FamilySide::fermionic_fixed;
  throw std::invalid_argument("unknown family side '" + text + "'");
}

FamilyMember::FamilyMember(FamilySide side, double lambda, double kappa, int l,
                           numkit::ToleranceProfile profile)
    : side_(side), lambda_(lambda), kappa_(kappa), l_(l), profile_(profile) {
  if (!(kappa > 0.0)) throw DomainError("FamilyMember: kappa must be positive");
  if (l < 0) throw DomainError("FamilyMember: l must be nonnegative");
  if (!std::isfinite(lambda)) throw DomainError("FamilyMember: lambda must be finite");
  profile_.validate();
}

double FamilyMember::reference_integral(double rho) const {
  if (!(rho > 0.0)) throw DomainError("FamilyMember: rho must be positive");
  const double power = side_ == FamilySide::bosonic_fixed ? -2.0 : 2.0;
  const auto integrand = [&](double r) { return std::pow(f_factor(r, kappa_, l_), power); };
  return numkit::integrate_adaptive(integrand, 1.0, rho, profile_).value;
}

FamilyMember::Parts FamilyMember::parts(double rho) const {
  const double f = f_factor(rho, kappa_, l_);
  const double integral = reference_integral(rho);
  return {f * f, integral, lambda_ + integral};
}

double FamilyMember::V(double rho) const {
  const Parts p = parts(rho);
  return side_ == FamilySide::bosonic_fixed ? -p.f2 * p.bracket : p.bracket / p.f2;
}

double FamilyMember::dV(double rho) const {
  const Parts p = parts(rho);
  const double g = f_log_derivative(rho, kappa_, l_);
  // d/drho of -f^2 (lambda + I) and f^{-2} (lambda + I), with I' = f^{-+2}.
  if (side_ == FamilySide::bosonic_fixed) return -2.0 * g * p.f2 * p.bracket - 1.0;
  return -2.0 * g * p.bracket / p.f2 + 1.0;
}

double FamilyMember::ode_residual(double rho) const {
  const double w = superpotential(rho, kappa_, l_);
  const double v = V(rho);
  const double dv = dV(rho);
  return side_ == FamilySide::bosonic_fixed ? dv + 2.0 * w * v + 1.0 : dv - 2.0 * w * v - 1.0;
}

double FamilyMember::W_lambda(double rho) const {
  const Parts p = parts(rho);
  const double scale = std::abs(lambda_) + std::abs(p.integral);
  if (p.bracket == 0.0 || std::abs(p.bracket) <= 4.0 * std::numeric_limits<double>::epsilon() * scale) {
    throw SingularPointError("W_lambda: V vanishes at rho = " + std::to_string(rho), rho);
  }
  const double v = side_ == FamilySide::bosonic_fixed ? -p.f2 * p.bracket : p.bracket / p.f2;
  return superpotential(rho, kappa_, l_) + 1.0 / v;
}

double FamilyMember::dW_lambda(double rho) const {
  const double w = superpotential(rho, kappa_, l_);
  const double v = V(rho);
  if (v == 0.0) throw SingularPointError("dW_lambda: V vanishes", rho);
  const double dv = side_ == FamilySide::bosonic_fixed ? -1.0 - 2.0 * w * v : 1.0 + 2.0 * w * v;
  return superpotential_derivative(rho, kappa_, l_) - dv / (v * v);
}

double FamilyMember::riccati_residual(double rho) const {
  const double wl = W_lambda(rho);
  const double dwl = dW_lambda(rho);
  const PartnerValues u = partner_potentials(rho, kappa_, l_);
  return side_ == FamilySide::bosonic_fixed ? wl * wl - dwl - u.minus : wl * wl + dwl - u.plus;
}

std::vector<double> FamilyMember::v_zeros(const std::vector<double>& grid) const {
  std::vector<double> zeros;
  if (grid.size() < 2) return zeros;
  const auto bracket = [&](double r) { return lambda_ + reference_integral(r); };
  double prev = bracket(grid.front());
  if (prev == 0.0) zeros.push_back(grid.front());
  for (std::size_t i = 1; i < grid.size(); ++i) {
    const double cur = bracket(grid[i]);
    if (cur == 0.0) {
      zeros.push_back(grid[i]);
    } else if (prev != 0.0 && (prev > 0.0) != (cur > 0.0)) {
      zeros.push_back(numkit::find_root(bracket, grid[i - 1], grid[i], profile_).root);
    }
    prev = cur;
  }
  return zeros;
}

double v_family(double rho, double kappa, int l, double lambda, FamilySide side,
                const numkit::ToleranceProfile& profile) {
  return FamilyMember(side, lambda, kappa, l, profile).V(rho);
}

double family_superpotential(double rho, double kappa, int l, double lambda, FamilySide side,
                             const numkit::ToleranceProfile& profile) {
  return FamilyMember(side, lambda, kappa, l, profile).W_lambda(rho);
}

// ---------------------------------------------------------------------------
// Printed series

std::string to_string(SeriesFormula id) {
  switch (id) {
    case SeriesFormula::S1: return "S1";
    case SeriesFormula::S_half: return "S_half";
    case SeriesFormula::V1: return "V1";
    case SeriesFormula::V_half: return "V_half";
  }
  return "?";
}

SeriesFormula parse_series_formula(const std::string& text) {
  if (text == "S1") return SeriesFormula::S1;
  if (text == "S_half") return SeriesFormula::S_half;
  if (text == "V1") return SeriesFormula::V1;
  if (text == "V_half") return SeriesFormula::V_half;
  throw std::invalid_argument("unknown series formula '" + text + "'");
}

double series_kappa(SeriesFormula id) {
  return (id == SeriesFormula::S1 || id == SeriesFormula::V1) ? 1.0 : 0.5;
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::match: return "match";
    case Verdict::constant_offset_match: return "constant-offset-match";
    case Verdict::mismatch: return "mismatch";
  }
  return "?";
}

namespace {

// 4 (4l+1)!! / (4^{-l} (2l+1)!), the log-term coefficient shared by the kappa = 1/2 series.
double half_log_coefficient(int l) {
  if (l <= 15) {
    double dfact = 1.0;
    for (int k = 4 * l + 1; k > 1; k -= 2) dfact *= k;
    double fact = 1.0;
    for (int k = 2; k <= 2 * l + 1; ++k) fact *= k;
    return 4.0 * dfact * std::pow(4.0, l) / fact;
  }
  // (4l+1)!! = (4l+1)! / (2^{2l} (2l)!)
  const double log_dfact =
      std::lgamma(4.0 * l + 2.0) - 2.0 * l * std::log(2.0) - std::lgamma(2.0 * l + 1.0);
  return std::exp(std::log(4.0) + l * std::log(4.0) + log_dfact - std::lgamma(2.0 * l + 2.0));
}

// [(4l+1)(4l-1)...(4l-2m+3)] / [(2l)(2l-1)...(2l-m+1)], m factors each.
double half_product_ratio(int l, int m) {
  double r = 1.0;
  for (int j = 1; j <= m; ++j) r *= (4.0 * l + 3.0 - 2.0 * j) / (2.0 * l - (j - 1.0));
  return r;
}

double s_one(double alpha, int l) {
  const double csc = 1.0 / std::sin(alpha);
  double braces = std::pow(csc, 2 * l + 1);
  for (int m = 1; m <= l; ++m) {
    // 2^m [l(l-1)...(l+1-m)] / [(2l-1)(2l-3)...(2l+1-2m)]
    double numer = 1.0;
    double denom = 1.0;
    for (int j = 0; j < m; ++j) numer *= l - j;
    for (int j = 1; j <= m; ++j) denom *= 2.0 * l + 1.0 - 2.0 * j;
    braces += std::pow(2.0, m) * numer / denom * std::pow(csc, 2 * l + 1 - 2 * m);
  }
  return -std::pow(2.0, 2 * l + 1) / (2.0 * l + 1.0) * std::cos(alpha) * braces;
}

double s_half(double alpha, int l) {
  const double csc2 = 1.0 / (std::sin(alpha) * std::sin(alpha));
  double bracket = 1.0;
  for (int m = 1; m <= 2 * l; ++m) {
    bracket += half_product_ratio(l, m) / std::pow(2.0 * csc2, m);
  }
  return -std::pow(2.0, 4 * l + 3) / (2.0 * l + 1.0) * std::cos(alpha) * std::pow(csc2, 2 * l + 1) *
             bracket +
         half_log_coefficient(l) * std::log(std::tan(0.5 * alpha));
}

double v_one(double alpha, int l) {
  const double sin2 = std::sin(alpha) * std::sin(alpha);
  double braces = 1.0;
  for (int m = 1; m <= l; ++m) {
    // [l(l-1)...(l-m)] has m+1 factors as printed.
    double numer = 1.0;
    double denom = 1.0;
    for (int j = 0; j <= m; ++j) numer *= l - j;
    for (int j = 1; j <= m; ++j) denom *= 2.0 * l + 1.0 - 2.0 * j;
    braces += std::pow(2.0 * sin2, m) * numer / denom;
  }
  return 2.0 * std::cos(alpha) / (2.0 * l + 1.0) * std::tan(0.5 * alpha) * braces;
}

double v_half(double alpha, int l) {
  const double sin2 = std::sin(alpha) * std::sin(alpha);
  double bracket = 1.0;
  for (int m = 1; m <= 2 * l; ++m) {
    bracket += std::pow(0.5 * sin2, m) * half_product_ratio(l, m);
  }
  const double t = std::tan(0.5 * alpha);
  const double csc_half = 1.0 / std::sin(0.5 * alpha);
  return 2.0 * std::cos(alpha) / (2.0 * l + 1.0) * t * t * bracket +
         half_log_coefficient(l) * std::pow(0.5 * sin2, 2 * l) / std::pow(csc_half, 4) *
             std::log(t);
}

double median(std::vector<double> v) {
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  const auto mid = v.begin() + static_cast<std::ptrdiff_t>(v.size() / 2);
  std::nth_element(v.begin(), mid, v.end());
  return *mid;
}

}  // namespace

double printed_series_eval(double alpha, int l, SeriesFormula id) {
  if (!(alpha > 0.0 && alpha < std::numbers::pi)) {
    throw DomainError("printed_series_eval: alpha must lie in (0, pi)");
  }
  if (l < 0) throw DomainError("printed_series_eval: l must be nonnegative");
  switch (id) {
    case SeriesFormula::S1: return s_one(alpha, l);
    case SeriesFormula::S_half: return s_half(alpha, l);
    case SeriesFormula::V1: return v_one(alpha, l);
    case SeriesFormula::V_half: return v_half(alpha, l);
  }
  throw std::invalid_argument("printed_series_eval: unknown formula");
}

double antiderivative_integrand(double alpha, double kappa, int l) {
  const double power = (2.0 * l + kappa + 1.0) / kappa;
  return std::pow(2.0, (2.0 * l + 1.0) / kappa) / kappa * std::pow(std::sin(alpha), -power);
}

nlohmann::json to_json(const SeriesAuditRecord& r) {
  return {{"formula_id", to_string(r.formula)},
          {"l", r.l},
          {"kappa", r.kappa},
          {"max_dev", r.max_dev},
          {"ode_residual_max", r.ode_residual_max},
          {"deviation_factor", r.deviation_factor},
          {"verdict", to_string(r.verdict)}};
}

namespace {

SeriesAuditRecord audit_antiderivative(SeriesFormula id, int l, const std::vector<double>& rho_grid,
                                       const numkit::ToleranceProfile& profile) {
  const double kappa = series_kappa(id);
  SeriesAuditRecord rec{id, l, kappa};
  std::vector<double> alphas;
  alphas.reserve(rho_grid.size());
  for (double rho : rho_grid) alphas.push_back(map_coordinates(rho, kappa).alpha);

  const auto printed = [&](double a) { return printed_series_eval(a, l, id); };
  const auto integrand = [&](double a) { return antiderivative_integrand(a, kappa, l); };

  std::vector<double> ratios;
  double max_dev = 0.0;
  for (std::size_t i = 1; i < alphas.size(); ++i) {
    const double oracle = numkit::integrate_adaptive(integrand, alphas[i - 1], alphas[i], profile).value;
    const double diff = printed(alphas[i]) - printed(alphas[i - 1]);
    max_dev = std::max(max_dev, std::abs(diff - oracle) / std::abs(oracle));
    ratios.push_back(diff / oracle);
  }

  double deriv_dev = 0.0;
  for (double a : alphas) {
    const double h = 1e-4 * std::min(a, std::numbers::pi - a);
    const double d = numkit::derivative(printed, a, h);
    deriv_dev = std::max(deriv_dev, std::abs(d - integrand(a)) / integrand(a));
  }

  // The oracle antiderivative referenced at alpha = pi/2 vanishes there.
  const double offset = std::abs(printed(0.5 * std::numbers::pi)) / integrand(0.5 * std::numbers::pi);

  rec.max_dev = max_dev;
  rec.ode_residual_max = deriv_dev;
  rec.deviation_factor = median(ratios);
  if (!ratios.empty()) {
    const auto [lo, hi] = std::minmax_element(ratios.begin(), ratios.end());
    rec.ratio_min = *lo;
    rec.ratio_max = *hi;
  }
  if (max_dev < kAuditMatchTolerance) {
    rec.verdict = offset < kAuditMatchTolerance ? Verdict::match : Verdict::constant_offset_match;
  } else {
    rec.verdict = Verdict::mismatch;
  }
  return rec;
}

SeriesAuditRecord audit_v(SeriesFormula id, int l, const std::vector<double>& rho_grid,
                          const numkit::ToleranceProfile& profile) {
  const double kappa = series_kappa(id);
  SeriesAuditRecord rec{id, l, kappa};
  const FamilyMember oracle(FamilySide::bosonic_fixed, 0.0, kappa, l, profile);
  const auto printed_rho = [&](double rho) {
    return printed_series_eval(map_coordinates(rho, kappa).alpha, l, id);
  };

  std::vector<double> ratios;
  double max_dev = 0.0;
  double residual = 0.0;
  for (double rho : rho_grid) {
    const double vo = oracle.V(rho);
    const double vp = printed_rho(rho);
    if (vo != 0.0 && std::isfinite(vp / vo)) {
      ratios.push_back(vp / vo);
      max_dev = std::max(max_dev, std::abs(vp / vo - 1.0));
    }
    const double w = superpotential(rho, kappa, l);
    const double dvp = numkit::derivative(printed_rho, rho, 1e-3 * rho);
    residual = std::max(residual, std::abs(dvp + 2.0 * w * vp + 1.0) / (1.0 + std::abs(2.0 * w * vp)));
  }
  rec.max_dev = max_dev;
  rec.ode_residual_max = residual;
  rec.deviation_factor = median(ratios);
  if (!ratios.empty()) {
    const auto [lo, hi] = std::minmax_element(ratios.begin(), ratios.end());
    rec.ratio_min = *lo;
    rec.ratio_max = *hi;
  }
  rec.verdict = max_dev < kAuditMatchTolerance ? Verdict::match : Verdict::mismatch;
  return rec;
}

}  // namespace

SeriesAuditRecord audit_formula(SeriesFormula id, int l, const std::vector<double>& rho_grid,
                                const numkit::ToleranceProfile& profile) {
  if (l < 0) throw DomainError("audit_formula: l must be nonnegative");
  if (rho_grid.size() < 2) throw std::invalid_argument("audit_formula: grid needs >= 2 points");
  if (id == SeriesFormula::S1 || id == SeriesFormula::S_half) {
    return audit_antiderivative(id, l, rho_grid, profile);
  }
  return audit_v(id, l, rho_grid, profile);
}

std::vector<SeriesAuditRecord> series_audit(double kappa, int l_min, int l_max,
                                            const std::vector<double>& rho_grid,
                                            const numkit::ToleranceProfile& profile) {
  std::vector<SeriesFormula> ids;
  if (kappa == 1.0) {
    ids = {SeriesFormula::S1, SeriesFormula::V1};
  } else if (kappa == 0.5) {
    ids = {SeriesFormula::S_half, SeriesFormula::V_half};
  } else {
    throw DomainError("series_audit: printed series exist only for kappa = 1 and 1/2");
  }
  std::vector<SeriesAuditRecord> out;
  for (SeriesFormula id : ids) {
    for (int l = l_min; l <= l_max; ++l) out.push_back(audit_formula(id, l, rho_grid, profile));
  }
  return out;
}

}  // namespace dosusy
