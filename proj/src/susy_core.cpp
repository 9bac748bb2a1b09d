#include "dosusy/susy_core.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "dosusy/errors.hpp"

namespace dosusy {

namespace {

void require_positive_rho(double rho, const char* op) {
  if (!(rho > 0.0)) throw DomainError(std::string(op) + ": rho must be positive");
}

// W = l/rho - (2l+1)/h with h = rho + rho^{2k+1}; derivatives of 1/h up to third order.
struct InverseH {
  double g0, g1, g2, g3;
};

InverseH inverse_h(double rho, double kappa) {
  const double s = std::pow(rho, 2.0 * kappa);
  const double h = rho * (1.0 + s);
  const double h1 = 1.0 + (2.0 * kappa + 1.0) * s;
  const double h2 = (2.0 * kappa + 1.0) * (2.0 * kappa) * s / rho;
  const double h3 = (2.0 * kappa + 1.0) * (2.0 * kappa) * (2.0 * kappa - 1.0) * s / (rho * rho);
  const double ih = 1.0 / h;
  return {ih, -h1 * ih * ih, (-h2 + 2.0 * h1 * h1 * ih) * ih * ih,
          (-h3 + 6.0 * h1 * h2 * ih - 6.0 * h1 * h1 * h1 * ih * ih) * ih * ih};
}

}  // namespace

double superpotential(double rho, double kappa, int l) {
  require_positive_rho(rho, "superpotential");
  const double s = std::pow(rho, 2.0 * kappa);
  return l / rho - (2.0 * l + 1.0) / (rho * (1.0 + s));
}

double superpotential_derivative(double rho, double kappa, int l) {
  require_positive_rho(rho, "superpotential_derivative");
  const double s = std::pow(rho, 2.0 * kappa);
  const double h = rho * (1.0 + s);
  return -l / (rho * rho) + (2.0 * l + 1.0) * (1.0 + (2.0 * kappa + 1.0) * s) / (h * h);
}

PartnerValues partner_potentials(double rho, double kappa, int l) {
  require_positive_rho(rho, "partner_potentials");
  const double s = std::pow(rho, 2.0 * kappa);
  const double well = std::pow(rho, 2.0 * (1.0 - kappa)) * (1.0 + s) * (1.0 + s);
  const double lf = l;
  const double r2 = rho * rho;
  PartnerValues out;
  out.minus = lf * (lf + 1.0) / r2 - (2.0 * lf + 1.0) * (2.0 * lf + 2.0 * kappa + 1.0) / well;
  out.plus = lf * (lf - 1.0) / r2 - (2.0 * lf + 1.0) * (2.0 * lf - 2.0 * kappa - 1.0) / well +
             2.0 * (2.0 * lf + 1.0) / (r2 * (1.0 + s) * (1.0 + s));
  return out;
}

PlusCurve plus_potential_with_derivatives(double rho, double kappa, double l) {
  require_positive_rho(rho, "plus_potential_with_derivatives");
  const InverseH g = inverse_h(rho, kappa);
  const double c = 2.0 * l + 1.0;
  const double r = rho;
  const double W0 = l / r - c * g.g0;
  const double W1 = -l / (r * r) - c * g.g1;
  const double W2 = 2.0 * l / (r * r * r) - c * g.g2;
  const double W3 = -6.0 * l / (r * r * r * r) - c * g.g3;
  return {W0 * W0 + W1, 2.0 * W0 * W1 + W2, 2.0 * W1 * W1 + 2.0 * W0 * W2 + W3};
}

SusyPair::SusyPair(double kappa, int l) : kappa_(kappa), l_(l) {
  if (!(kappa > 0.0)) throw DomainError("SusyPair: kappa must be positive");
  if (l < 0) throw DomainError("SusyPair: l must be nonnegative");
}

// ---------------------------------------------------------------------------

namespace {

// Fornberg weights for the first derivative at z over five nodes.
std::array<double, 5> first_derivative_weights(const double* x, double z) {
  constexpr int n = 5;
  constexpr int m = 1;
  double c[n][m + 1] = {};
  double c1 = 1.0;
  double c4 = x[0] - z;
  c[0][0] = 1.0;
  for (int i = 1; i < n; ++i) {
    const int mn = std::min(i, m);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = x[i] - z;
    for (int j = 0; j < i; ++j) {
      const double c3 = x[i] - x[j];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k) {
          c[i][k] = c1 * (k * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
        }
        c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
      }
      for (int k = mn; k >= 1; --k) c[j][k] = (c4 * c[j][k] - k * c[j][k - 1]) / c3;
      c[j][0] = c4 * c[j][0] / c3;
    }
    c1 = c2;
  }
  return {c[0][1], c[1][1], c[2][1], c[3][1], c[4][1]};
}

}  // namespace

std::vector<double> differentiate_sampled(const std::vector<double>& grid,
                                          const std::vector<double>& values) {
  if (grid.size() < 5) throw GridError("differentiate_sampled: need at least 5 grid points");
  if (grid.size() != values.size()) {
    throw std::invalid_argument("differentiate_sampled: grid and values differ in length");
  }
  const std::size_t n = grid.size();
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t start = std::min(i >= 2 ? i - 2 : 0, n - 5);
    const auto w = first_derivative_weights(grid.data() + start, grid[i]);
    double d = 0.0;
    for (std::size_t k = 0; k < 5; ++k) d += w[k] * values[start + k];
    out[i] = d;
  }
  return out;
}

LadderResult apply_ladder(const SampledFunction& u, const SusyPair& pair, Ladder which) {
  u.validate();
  const std::vector<double> du = differentiate_sampled(u.grid, u.values);
  const double sign = which == Ladder::A ? 1.0 : -1.0;
  SampledFunction out{u.grid, std::vector<double>(u.size())};
  for (std::size_t i = 0; i < u.size(); ++i) {
    out.values[i] = sign * du[i] + pair.W(u.grid[i]) * u.values[i];
  }
  return {u, std::move(out), which};
}

// ---------------------------------------------------------------------------

namespace {

// Q(xi) of the ultraspherical equation; 1 - xi and 1 + xi passed separately so
// xi^2 - 1 keeps full relative precision near xi = +-1.
double ultraspherical_Q(double kappa, int l, double xi, double one_minus, double one_plus) {
  return (2.0 * l + 2.0 * kappa + 1.0) / kappa * xi / (-one_minus * one_plus);
}

struct XiData {
  double xi, one_minus, one_plus, dxi;
};

XiData xi_data(double rho, double kappa) {
  const double s = std::pow(rho, 2.0 * kappa);
  const double xi = map_coordinates(rho, kappa).xi;
  const double dxi = -4.0 * kappa * s / (rho * (1.0 + s) * (1.0 + s));
  return {xi, 2.0 * s / (1.0 + s), 2.0 / (1.0 + s), dxi};
}

}  // namespace

SampledFunction natanzon_f_reconstruction(double kappa, int l, const std::vector<double>& grid,
                                          const numkit::ToleranceProfile& profile) {
  SampledFunction probe{grid, std::vector<double>(grid.size(), 0.0)};
  probe.validate();
  // Q(xi(r)) xi'(r): the xi-integral written over r so its endpoints are exact.
  const auto integrand = [&](double r) {
    const XiData d = xi_data(r, kappa);
    return ultraspherical_Q(kappa, l, d.xi, d.one_minus, d.one_plus) * d.dxi;
  };

  const std::size_t n = grid.size();
  std::vector<double> log_integral(n, 0.0);
  // Cumulative integrals from rho = 1 outward in both directions.
  const auto split = static_cast<std::size_t>(
      std::lower_bound(grid.begin(), grid.end(), 1.0) - grid.begin());
  double acc = 0.0;
  double prev = 1.0;
  for (std::size_t i = split; i < n; ++i) {
    acc += numkit::integrate_adaptive(integrand, prev, grid[i], profile).value;
    log_integral[i] = acc;
    prev = grid[i];
  }
  acc = 0.0;
  prev = 1.0;
  for (std::size_t i = split; i-- > 0;) {
    acc += numkit::integrate_adaptive(integrand, prev, grid[i], profile).value;
    log_integral[i] = acc;
    prev = grid[i];
  }

  SampledFunction out{grid, std::vector<double>(n)};
  for (std::size_t i = 0; i < n; ++i) {
    const XiData d = xi_data(grid[i], kappa);
    out.values[i] = std::exp(0.5 * log_integral[i]) / std::sqrt(std::abs(d.dxi));
  }
  return out;
}

}  // namespace dosusy
