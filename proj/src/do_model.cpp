#include "dosusy/do_model.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "dosusy/errors.hpp"

namespace dosusy {

namespace {

void require_positive_rho(double rho, const char* op) {
  if (!(rho > 0.0)) throw DomainError(std::string(op) + ": rho must be positive");
}

void require_positive_kappa(double kappa, const char* op) {
  if (!(kappa > 0.0)) throw DomainError(std::string(op) + ": kappa must be positive");
}

std::int64_t parse_int(const std::string& text) {
  std::int64_t v = 0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end) throw DomainError("kappa: bad integer '" + text + "'");
  return v;
}

}  // namespace

Rational::Rational(std::int64_t n, std::int64_t d) {
  if (n <= 0 || d <= 0) throw DomainError("rational kappa needs positive k1 and k2");
  const std::int64_t g = std::gcd(n, d);
  num = n / g;
  den = d / g;
}

Kappa::Kappa(double value) : value_(value) {
  require_positive_kappa(value, "Kappa");
  if (!std::isfinite(value)) throw DomainError("Kappa: must be finite");
}

Kappa::Kappa(std::int64_t k1, std::int64_t k2) : Kappa(Rational(k1, k2)) {}

Kappa::Kappa(Rational exact) : value_(exact.value()), exact_(exact) {}

Kappa Kappa::parse(const std::string& text) {
  const auto slash = text.find('/');
  if (slash != std::string::npos) {
    return Kappa(parse_int(text.substr(0, slash)), parse_int(text.substr(slash + 1)));
  }
  double v = 0.0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end) throw DomainError("kappa: cannot parse '" + text + "'");
  return Kappa(v);
}

std::string Kappa::to_string() const {
  if (exact_) {
    if (exact_->den == 1) return std::to_string(exact_->num);
    return std::to_string(exact_->num) + "/" + std::to_string(exact_->den);
  }
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value_);
  return std::string(buf, res.ptr);
}

void ModelParams::validate() const {
  if (!(w > 0.0)) throw DomainError("ModelParams: w must be positive");
  if (l < 0) throw DomainError("ModelParams: l must be nonnegative");
}

void SampledFunction::validate() const {
  if (grid.size() != values.size()) {
    throw std::invalid_argument("SampledFunction: grid and values differ in length");
  }
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] > 0.0)) throw std::invalid_argument("SampledFunction: grid must be positive");
    if (i > 0 && !(grid[i] > grid[i - 1])) {
      throw std::invalid_argument("SampledFunction: grid must be strictly increasing");
    }
    if (!std::isfinite(values[i])) throw std::invalid_argument("SampledFunction: non-finite value");
  }
}

std::vector<double> default_grid(int points, double lo, double hi) {
  if (points < 2 || !(lo > 0.0) || !(hi > lo)) {
    throw std::invalid_argument("default_grid: need >= 2 points and 0 < lo < hi");
  }
  std::vector<double> grid(static_cast<std::size_t>(points));
  const double a = std::log10(lo);
  const double b = std::log10(hi);
  for (int i = 0; i < points; ++i) {
    grid[static_cast<std::size_t>(i)] = std::pow(10.0, a + (b - a) * i / (points - 1));
  }
  grid.front() = lo;
  grid.back() = hi;
  return grid;
}

Coordinates map_coordinates(double rho, double kappa) {
  require_positive_rho(rho, "map_coordinates");
  require_positive_kappa(kappa, "map_coordinates");
  const double t = std::pow(rho, kappa);
  const double s = t * t;
  Coordinates c;
  if (s <= 1.0) {
    c.xi = (1.0 - s) / (1.0 + s);
  } else {
    const double inv = 1.0 / s;
    c.xi = (inv - 1.0) / (inv + 1.0);
  }
  c.alpha = 2.0 * std::atan(t);
  return c;
}

double potential(double rho, double kappa, double w) {
  require_positive_rho(rho, "potential");
  require_positive_kappa(kappa, "potential");
  const double s = std::pow(rho, 2.0 * kappa);
  return -w / (std::pow(rho, 2.0 * (1.0 - kappa)) * (1.0 + s) * (1.0 + s));
}

double potential_derivative(double rho, double kappa, double w) {
  require_positive_rho(rho, "potential_derivative");
  require_positive_kappa(kappa, "potential_derivative");
  const double s = std::pow(rho, 2.0 * kappa);
  const double u = potential(rho, kappa, w);
  // d/drho ln|U| = (2k - 2)/rho - 4k rho^{2k-1} / (1 + s)
  return u * ((2.0 * kappa - 2.0) / rho - 4.0 * kappa * s / (rho * (1.0 + s)));
}

double coupling_quantized(int N, double kappa) {
  if (N < 1) throw DomainError("coupling_quantized: N must be >= 1");
  require_positive_kappa(kappa, "coupling_quantized");
  const double h = 1.0 / (2.0 * kappa);
  return 4.0 * kappa * kappa * (N + h - 1.0) * (N + h);
}

double f_factor(double rho, double kappa, int l) {
  require_positive_rho(rho, "f_factor");
  require_positive_kappa(kappa, "f_factor");
  const double s = std::pow(rho, 2.0 * kappa);
  return std::exp((l + 1.0) * std::log(rho) - (2.0 * l + 1.0) / (2.0 * kappa) * std::log1p(s));
}

double f_log_derivative(double rho, double kappa, int l) {
  require_positive_rho(rho, "f_log_derivative");
  const double s = std::pow(rho, 2.0 * kappa);
  return (l + 1.0) / rho - (2.0 * l + 1.0) * s / (rho * (1.0 + s));
}

int polynomial_degree(const Kappa& kappa, int N, int l) {
  if (N < 1 || l < 0) throw StateValidityError("state: need N >= 1 and l >= 0");
  if (const auto& q = kappa.exact()) {
    const std::int64_t scaled = static_cast<std::int64_t>(l) * q->den;
    if (scaled % q->num != 0) {
      throw StateValidityError("state: l/kappa is not an integer");
    }
    const std::int64_t p = N - 1 - scaled / q->num;
    if (p < 0) throw StateValidityError("state: N - 1 - l/kappa is negative");
    return static_cast<int>(p);
  }
  const double p = N - 1.0 - l / kappa.value();
  const double rounded = std::round(p);
  if (std::abs(p - rounded) > 1e-9 * std::max(1.0, std::abs(p))) {
    throw StateValidityError("state: N - 1 - l/kappa is not an integer");
  }
  if (rounded < 0.0) throw StateValidityError("state: N - 1 - l/kappa is negative");
  return static_cast<int>(rounded);
}

double gegenbauer_parameter(double kappa, int l) {
  return (2.0 * l + 1.0) / (2.0 * kappa) + 0.5;
}

namespace {

double unnormalized_u(double rho, double kappa, int p, double q, int l) {
  return f_factor(rho, kappa, l) * numkit::gegenbauer_eval(p, q, map_coordinates(rho, kappa).xi);
}

}  // namespace

Normalization normalization_constant(const Kappa& kappa, int N, int l,
                                     const numkit::ToleranceProfile& profile) {
  const int p = polynomial_degree(kappa, N, l);
  // u^2 ~ C_p^q(-1)^2 rho^{-2l} at large rho, and C_p^q(-1) != 0 for q > 0.
  if (2 * l <= 1) {
    return {NormStatus::not_normalizable, 0.0, std::numeric_limits<double>::infinity()};
  }
  const double k = kappa.value();
  const double q = gegenbauer_parameter(k, l);
  const auto integrand = [&](double rho) {
    const double u = unnormalized_u(rho, k, p, q, l);
    return u * u;
  };
  const double integral = numkit::integrate_half_line(integrand, k, profile).value;
  return {NormStatus::normalizable, 1.0 / std::sqrt(integral), integral};
}

double radial_u(double rho, const Kappa& kappa, int N, int l, bool normalized,
                const numkit::ToleranceProfile& profile) {
  require_positive_rho(rho, "radial_u");
  const int p = polynomial_degree(kappa, N, l);
  const double value =
      unnormalized_u(rho, kappa.value(), p, gegenbauer_parameter(kappa.value(), l), l);
  if (!normalized) return value;
  const Normalization norm = normalization_constant(kappa, N, l, profile);
  if (norm.status != NormStatus::normalizable) {
    throw NotNormalizableError("radial_u: state has a divergent square integral");
  }
  return norm.constant * value;
}

SampledFunction sample_radial_u(const std::vector<double>& grid, const Kappa& kappa, int N, int l,
                                bool normalized, const numkit::ToleranceProfile& profile) {
  const int p = polynomial_degree(kappa, N, l);
  double scale = 1.0;
  if (normalized) {
    const Normalization norm = normalization_constant(kappa, N, l, profile);
    if (norm.status != NormStatus::normalizable) {
      throw NotNormalizableError("sample_radial_u: state has a divergent square integral");
    }
    scale = norm.constant;
  }
  const double k = kappa.value();
  const double q = gegenbauer_parameter(k, l);
  SampledFunction out{grid, std::vector<double>(grid.size())};
  for (std::size_t i = 0; i < grid.size(); ++i) {
    require_positive_rho(grid[i], "sample_radial_u");
    out.values[i] = scale * unnormalized_u(grid[i], k, p, q, l);
  }
  return out;
}

double effective_potential_general(double rho, double kappa, int N, int l) {
  require_positive_rho(rho, "effective_potential_general");
  return l * (l + 1.0) / (rho * rho) + potential(rho, kappa, coupling_quantized(N, kappa));
}

Shell enumerate_shell(int N, const Rational& kappa) {
  if (N < 1) throw DomainError("enumerate_shell: N must be >= 1");
  Shell shell;
  for (std::int64_t l = 0; l * kappa.den <= static_cast<std::int64_t>(N - 1) * kappa.num; ++l) {
    if ((l * kappa.den) % kappa.num != 0) continue;
    const int n_r = N - 1 - static_cast<int>(l * kappa.den / kappa.num);
    const int li = static_cast<int>(l);
    for (int m = -li; m <= li; ++m) {
      shell.states.push_back({N, n_r + li + 1, n_r, li, m});
    }
  }
  shell.degeneracy = shell.states.size();
  return shell;
}

}  // namespace dosusy
