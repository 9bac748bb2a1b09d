#pragma once

// Demkov-Ostrovsky focusing potentials in scaled units: lengths in R,
// energies in E0 = hbar^2 / (2 m R^2).

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dosusy/numkit.hpp"

namespace dosusy {

/// Positive rational k1/k2 in lowest terms.
struct Rational {
  std::int64_t num = 1;
  std::int64_t den = 1;

  Rational() = default;
  Rational(std::int64_t n, std::int64_t d);  // normalizes; throws DomainError unless n, d > 0
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  bool operator==(const Rational&) const = default;
};

/// kappa as a real, optionally backed by its exact rational form.
class Kappa {
 public:
  explicit Kappa(double value);
  Kappa(std::int64_t k1, std::int64_t k2);
  explicit Kappa(Rational exact);

  /// Accepts "k1/k2" (exact) or a decimal literal.
  static Kappa parse(const std::string& text);

  double value() const { return value_; }
  const std::optional<Rational>& exact() const { return exact_; }
  std::string to_string() const;

 private:
  double value_;
  std::optional<Rational> exact_;
};

struct ModelParams {
  Kappa kappa{1.0};
  double w = 1.0;
  int l = 0;

  void validate() const;
};

struct StateLabel {
  int N = 1;    // total quantum number
  int n = 1;    // principal, n_r + l + 1
  int n_r = 0;  // radial nodes, also the Gegenbauer degree
  int l = 0;
  int m = 0;

  bool operator==(const StateLabel&) const = default;
};

/// Values on a strictly increasing grid of positive radii.
struct SampledFunction {
  std::vector<double> grid;
  std::vector<double> values;

  /// Throws std::invalid_argument on length mismatch, non-increasing or
  /// non-positive grid, or non-finite values.
  void validate() const;
  std::size_t size() const { return grid.size(); }
};

struct Coordinates {
  double xi = 0.0;     // (1 - rho^{2k}) / (1 + rho^{2k})
  double alpha = 0.0;  // 2 atan(rho^k); xi = cos(alpha)
};

/// 400 log-spaced points over [1e-3, 1e3] unless overridden.
std::vector<double> default_grid(int points = 400, double lo = 1e-3, double hi = 1e3);

Coordinates map_coordinates(double rho, double kappa);

/// -w / (rho^{2(1-k)} (1 + rho^{2k})^2).
double potential(double rho, double kappa, double w);

/// dU/drho of `potential`.
double potential_derivative(double rho, double kappa, double w);

/// w_{N,k} = (2k)^2 [N + 1/(2k) - 1][N + 1/(2k)].
double coupling_quantized(int N, double kappa);

/// f = rho^{l+1} / (1 + rho^{2k})^{(2l+1)/(2k)}; evaluated in log space.
double f_factor(double rho, double kappa, int l);

/// f'/f = (l+1)/rho - (2l+1) rho^{2k-1} / (1 + rho^{2k}), from the closed form of f.
double f_log_derivative(double rho, double kappa, int l);

/// Gegenbauer degree p = N - 1 - l/kappa. Throws StateValidityError unless p is a
/// nonnegative integer (exactly, when kappa has a rational form).
int polynomial_degree(const Kappa& kappa, int N, int l);

/// Gegenbauer parameter q = (2l+1)/(2k) + 1/2.
double gegenbauer_parameter(double kappa, int l);

enum class NormStatus { normalizable, not_normalizable };

struct Normalization {
  NormStatus status = NormStatus::normalizable;
  double constant = 0.0;         // N_{Nl}; 0 when not normalizable
  double square_integral = 0.0;  // integral of (f C)^2, infinity when divergent
};

/// Normalization of u = f C_p^q(xi). Since u ~ rho^{-l} as rho -> inf, every l = 0
/// state has a divergent square integral and is reported as not normalizable.
Normalization normalization_constant(const Kappa& kappa, int N, int l,
                                     const numkit::ToleranceProfile& profile = {});

/// u_{Nl} = rho R_{Nl}. Unnormalized: f C_p^q(xi). Normalized: scaled by N_{Nl};
/// throws NotNormalizableError for divergent states.
double radial_u(double rho, const Kappa& kappa, int N, int l, bool normalized = false,
                const numkit::ToleranceProfile& profile = {});

/// Evaluates radial_u (with a single normalization solve) on a grid.
SampledFunction sample_radial_u(const std::vector<double>& grid, const Kappa& kappa, int N, int l,
                                bool normalized = false,
                                const numkit::ToleranceProfile& profile = {});

/// l(l+1)/rho^2 - w_{N,k} / (rho^{2(1-k)} (1 + rho^{2k})^2).
double effective_potential_general(double rho, double kappa, int N, int l);

struct Shell {
  std::vector<StateLabel> states;
  std::size_t degeneracy = 0;
};

/// All (n_r, l, m) with n_r = N - 1 - l/kappa a nonnegative integer and |m| <= l.
Shell enumerate_shell(int N, const Rational& kappa);

}  // namespace dosusy
