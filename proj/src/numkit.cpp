#include "dosusy/numkit.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <queue>
#include <stdexcept>
#include <vector>

#include <boost/math/tools/toms748_solve.hpp>

#include "dosusy/errors.hpp"

namespace dosusy::numkit {

void ToleranceProfile::validate() const {
  if (!(quad_tol > 0.0) || !(deriv_step > 0.0) || !(root_tol > 0.0)) {
    throw std::invalid_argument("tolerance profile entries must be strictly positive");
  }
}

// ---------------------------------------------------------------------------
// Gegenbauer

namespace {

void check_gegenbauer_args(int p, double q, double x) {
  if (p < 0) throw DomainError("gegenbauer: degree must be nonnegative");
  if (!(q > -0.5)) throw DomainError("gegenbauer: parameter must exceed -1/2");
  if (!(std::abs(x) <= 1.0)) throw DomainError("gegenbauer: |x| must not exceed 1");
}

}  // namespace

GegenbauerValue gegenbauer_with_derivatives(int p, double q, double x) {
  check_gegenbauer_args(p, q, x);
  GegenbauerValue prev{1.0, 0.0, 0.0};
  if (p == 0) return prev;
  GegenbauerValue cur{2.0 * q * x, 2.0 * q, 0.0};
  for (int k = 2; k <= p; ++k) {
    const double a = 2.0 * (k + q - 1.0);
    const double b = k + 2.0 * q - 2.0;
    GegenbauerValue next;
    next.value = (a * x * cur.value - b * prev.value) / k;
    next.d1 = (a * cur.value + a * x * cur.d1 - b * prev.d1) / k;
    next.d2 = (2.0 * a * cur.d1 + a * x * cur.d2 - b * prev.d2) / k;
    prev = cur;
    cur = next;
  }
  return cur;
}

double gegenbauer_eval(int p, double q, double x) {
  return gegenbauer_with_derivatives(p, q, x).value;
}

double gegenbauer_ode_residual(int p, double q, double x) {
  if (!(std::abs(x) < 1.0)) {
    throw DomainError("gegenbauer_ode_residual: equation is singular at x = +-1");
  }
  const GegenbauerValue c = gegenbauer_with_derivatives(p, q, x);
  const double denom = x * x - 1.0;
  const double Q = (2.0 * q + 1.0) * x / denom;
  const double R = -static_cast<double>(p) * (p + 2.0 * q) / denom;
  return c.d2 + Q * c.d1 + R * c.value;
}

// ---------------------------------------------------------------------------
// Quadrature

namespace {

constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
// Gauss weights for the odd-indexed Kronrod nodes (1, 3, 5, 7).
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double a, b;
  double value, error, abs_value;
  bool operator<(const Segment& o) const { return error < o.error; }
};

Segment gk15(const RealFn& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const double fc = f(c);
  double kron = fc * kWgk[7];
  double gauss = fc * kWg[3];
  double absk = std::abs(fc) * kWgk[7];
  for (int j = 0; j < 7; ++j) {
    const double dx = h * kXgk[j];
    const double f1 = f(c - dx);
    const double f2 = f(c + dx);
    kron += kWgk[j] * (f1 + f2);
    absk += kWgk[j] * (std::abs(f1) + std::abs(f2));
    if (j % 2 == 1) gauss += kWg[j / 2] * (f1 + f2);
  }
  const double value = kron * h;
  const double err = std::abs((kron - gauss) * h);
  if (!std::isfinite(value)) {
    throw QuadratureError("integrate_adaptive: non-finite integrand value", value,
                          std::numeric_limits<double>::infinity());
  }
  return {a, b, value, err, absk * std::abs(h)};
}

constexpr int kMaxSegments = 5000;

}  // namespace

QuadratureResult integrate_adaptive(const RealFn& f, double a, double b,
                                    const ToleranceProfile& profile) {
  if (!(std::isfinite(a) && std::isfinite(b))) {
    throw DomainError("integrate_adaptive: limits must be finite (use integrate_half_line)");
  }
  if (a == b) return {0.0, 0.0, 0};
  const double sign = b > a ? 1.0 : -1.0;
  if (b < a) std::swap(a, b);

  std::priority_queue<Segment> heap;
  Segment first = gk15(f, a, b);
  double total = first.value;
  double total_err = first.error;
  double total_abs = first.abs_value;
  heap.push(first);
  int count = 1;

  // Error estimates below ~50 ulps of the integral are roundoff.
  const auto target = [&] {
    return std::max(profile.quad_tol * total_abs,
                    50.0 * std::numeric_limits<double>::epsilon() * std::abs(total));
  };

  while (total_err > target()) {
    if (count >= kMaxSegments) {
      throw QuadratureError("integrate_adaptive: subdivision limit reached", sign * total,
                            total_err);
    }
    Segment worst = heap.top();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b) ||
        (worst.b - worst.a) < 8.0 * std::numeric_limits<double>::epsilon() *
                                  std::max(std::abs(worst.a), std::abs(worst.b))) {
      throw QuadratureError("integrate_adaptive: interval too small to bisect", sign * total,
                            total_err);
    }
    heap.pop();
    const Segment left = gk15(f, worst.a, mid);
    const Segment right = gk15(f, mid, worst.b);
    total += left.value + right.value - worst.value;
    total_err += left.error + right.error - worst.error;
    total_abs += left.abs_value + right.abs_value - worst.abs_value;
    heap.push(left);
    heap.push(right);
    ++count;
    if (count % 64 == 0) {
      // Re-sum to keep accumulated cancellation out of the running totals.
      std::priority_queue<Segment> copy = heap;
      total = total_err = total_abs = 0.0;
      while (!copy.empty()) {
        total += copy.top().value;
        total_err += copy.top().error;
        total_abs += copy.top().abs_value;
        copy.pop();
      }
    }
  }
  return {sign * total, total_err, count};
}

QuadratureResult integrate_half_line(const RealFn& f, double kappa,
                                     const ToleranceProfile& profile) {
  if (!(kappa > 0.0)) throw DomainError("integrate_half_line: kappa must be positive");
  const double inv_kappa = 1.0 / kappa;
  const auto mapped = [&](double alpha) {
    const double t = std::tan(0.5 * alpha);
    const double rho = std::pow(t, inv_kappa);
    const double drho = inv_kappa * std::pow(t, inv_kappa - 1.0) * 0.5 * (1.0 + t * t);
    const double value = f(rho) * drho;
    return std::isfinite(value) ? value : 0.0;
  };
  return integrate_adaptive(mapped, 0.0, std::numbers::pi, profile);
}

// ---------------------------------------------------------------------------
// Finite differences

double default_step(const ToleranceProfile& profile, double x) {
  return profile.deriv_step * std::max(1.0, std::abs(x));
}

double derivative(const RealFn& f, double x, double h) {
  const auto central = [&](double s) { return (f(x + s) - f(x - s)) / (2.0 * s); };
  const double coarse = central(h);
  const double fine = central(0.5 * h);
  return (4.0 * fine - coarse) / 3.0;
}

double second_derivative(const RealFn& f, double x, double h) {
  const double f0 = f(x);
  const auto central = [&](double s) { return (f(x + s) - 2.0 * f0 + f(x - s)) / (s * s); };
  const double coarse = central(h);
  const double fine = central(0.5 * h);
  return (4.0 * fine - coarse) / 3.0;
}

// ---------------------------------------------------------------------------
// Roots

RootResult find_root(const RealFn& f, double a, double b, const ToleranceProfile& profile,
                     int max_iterations) {
  double fa = f(a);
  double fb = f(b);
  if (fa == 0.0) return {a, 0.0, 0};
  if (fb == 0.0) return {b, 0.0, 0};
  if ((fa > 0.0) == (fb > 0.0)) {
    throw BracketError("find_root: no sign change in bracket");
  }
  std::uintmax_t iters = static_cast<std::uintmax_t>(max_iterations);
  // Bracket width criterion; the residual tolerance is checked below.
  const auto stop = [&](double lo, double hi) {
    return std::abs(hi - lo) <= 4.0 * std::numeric_limits<double>::epsilon() *
                                    std::max(std::abs(lo), std::abs(hi));
  };
  const auto [lo, hi] = boost::math::tools::toms748_solve(f, a, b, fa, fb, stop, iters);
  const double flo = f(lo);
  const double fhi = f(hi);
  const bool pick_lo = std::abs(flo) <= std::abs(fhi);
  RootResult out{pick_lo ? lo : hi, pick_lo ? flo : fhi, static_cast<int>(iters)};
  if (static_cast<int>(iters) >= max_iterations && std::abs(out.residual) > profile.root_tol) {
    throw ConvergenceError("find_root: iteration limit reached");
  }
  return out;
}

namespace {

double max_abs(const Vec2& v) { return std::max(std::abs(v[0]), std::abs(v[1])); }

Vec2 clamp_to(const Vec2& x, const Box2& box) {
  return {std::clamp(x[0], box.lo[0], box.hi[0]), std::clamp(x[1], box.lo[1], box.hi[1])};
}

// Sign change of g on [lo, hi] closest to `near`, refined to a root.
std::optional<double> scan_root(const RealFn& g, double lo, double hi, double near,
                                const ToleranceProfile& profile, int samples = 400) {
  std::optional<double> best;
  double prev_x = lo;
  double prev_g = g(lo);
  for (int i = 1; i <= samples; ++i) {
    const double x = lo + (hi - lo) * i / samples;
    const double gx = g(x);
    if (std::isfinite(prev_g) && std::isfinite(gx) && (prev_g > 0.0) != (gx > 0.0)) {
      const double r = find_root(g, prev_x, x, profile).root;
      if (!best || std::abs(r - near) < std::abs(*best - near)) best = r;
    }
    prev_x = x;
    prev_g = gx;
  }
  return best;
}

}  // namespace

Root2Result newton_2d(const VecFn2& F, const Vec2& seed, const Box2& box,
                      const ToleranceProfile& profile, int max_iterations) {
  Vec2 x = clamp_to(seed, box);
  Vec2 fx = F(x);
  for (int it = 0; it < max_iterations; ++it) {
    if (max_abs(fx) <= profile.root_tol) return {x, fx, it, false};

    std::array<Vec2, 2> jac{};  // jac[j] = dF/dx_j
    for (int j = 0; j < 2; ++j) {
      const double h = 1e-6 * std::max(1.0, std::abs(x[j]));
      Vec2 xp = x, xm = x;
      xp[j] += h;
      xm[j] -= h;
      const Vec2 fp = F(xp), fm = F(xm);
      jac[j] = {(fp[0] - fm[0]) / (2.0 * h), (fp[1] - fm[1]) / (2.0 * h)};
    }
    const double det = jac[0][0] * jac[1][1] - jac[1][0] * jac[0][1];
    if (!(std::abs(det) > 0.0) || !std::isfinite(det)) break;
    const Vec2 step = {-(jac[1][1] * fx[0] - jac[1][0] * fx[1]) / det,
                       -(-jac[0][1] * fx[0] + jac[0][0] * fx[1]) / det};

    double t = 1.0;
    bool improved = false;
    while (t > 1e-6) {
      const Vec2 trial = clamp_to({x[0] + t * step[0], x[1] + t * step[1]}, box);
      const Vec2 ft = F(trial);
      if (std::isfinite(ft[0]) && std::isfinite(ft[1]) && max_abs(ft) < max_abs(fx)) {
        x = trial;
        fx = ft;
        improved = true;
        break;
      }
      t *= 0.5;
    }
    if (!improved) break;
  }
  if (max_abs(fx) <= profile.root_tol) return {x, fx, max_iterations, false};

  // Fallback: nested bracketing, inner variable x[1], outer variable x[0].
  double y_hint = x[1];
  const auto inner = [&](double x0) -> std::optional<double> {
    const RealFn g = [&](double y) { return F({x0, y})[1]; };
    return scan_root(g, box.lo[1], box.hi[1], y_hint, profile);
  };
  const RealFn outer = [&](double x0) {
    const auto y = inner(x0);
    if (!y) return std::numeric_limits<double>::quiet_NaN();
    return F({x0, *y})[0];
  };
  const auto x0 = scan_root(outer, box.lo[0], box.hi[0], seed[0], profile, 200);
  if (!x0) throw ConvergenceError("newton_2d: Newton stalled and nested bracketing found no root");
  const auto y0 = inner(*x0);
  if (!y0) throw ConvergenceError("newton_2d: inner bracket lost at the outer root");
  const Vec2 root{*x0, *y0};
  return {root, F(root), max_iterations, true};
}

}  // namespace dosusy::numkit
