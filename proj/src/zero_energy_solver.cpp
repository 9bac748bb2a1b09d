#include "dosusy/zero_energy_solver.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include <boost/numeric/odeint.hpp>

#include "dosusy/errors.hpp"
#include "dosusy/susy_core.hpp"

namespace odeint = boost::numeric::odeint;

namespace dosusy {

namespace {

using RadialState = std::array<double, 2>;
using Dopri = odeint::runge_kutta_dopri5<RadialState>;

struct RadialSystem {
  double kappa, w, l;
  void operator()(const RadialState& y, RadialState& dy, double rho) const {
    dy[0] = y[1];
    dy[1] = (l * (l + 1.0) / (rho * rho) + potential(rho, kappa, w)) * y[0];
  }
};

// Both branches share one recursion in the small variable x = rho^{2k} (near 0)
// or x = rho^{-2k} (near infinity): u = rho^{l+1} sum a_n x^n, resp.
// rho^{-l} sum a_n x^n, with
//   a_n 2kn(2l+1+2kn) = -w sum_{j+m=n-1} (-1)^j (j+1) a_m,  a_0 = 1.
// Returns sum a_n x^n and sum a_n e_n x^n, e_n the exponent shift factor.
std::pair<double, double> frobenius_sums(double kappa, double w, int l, double x, double lead,
                                         double step) {
  constexpr int kTerms = 40;
  std::array<double, kTerms> a{};
  a[0] = 1.0;
  double value = 1.0, slope = lead, xn = 1.0;
  for (int n = 1; n < kTerms; ++n) {
    double acc = 0.0;
    for (int m = 0; m < n; ++m) {
      const int j = n - 1 - m;
      acc += (j % 2 ? -1.0 : 1.0) * (j + 1.0) * a[m];
    }
    a[n] = -w * acc / (2.0 * kappa * n * (2.0 * l + 1.0 + 2.0 * kappa * n));
    xn *= x;
    const double term = a[n] * xn;
    value += term;
    slope += term * (lead + step * n);
    if (std::abs(term) < 1e-18 * std::abs(value)) break;
  }
  return {value, slope};
}

// Regular branch at rho0, divided by rho0^{l+1}.
RadialState regular_start(double kappa, double w, int l, double rho0) {
  const auto [v, d] = frobenius_sums(kappa, w, l, std::pow(rho0, 2.0 * kappa), l + 1.0, 2.0 * kappa);
  return {v, d / rho0};
}

// Decaying branch at rho1, multiplied by rho1^{l}.
RadialState decaying_start(double kappa, double w, int l, double rho1) {
  const auto [v, d] =
      frobenius_sums(kappa, w, l, std::pow(rho1, -2.0 * kappa), -static_cast<double>(l), -2.0 * kappa);
  return {v, d / rho1};
}

RadialState integrate_to(const RadialSystem& sys, RadialState y, double from, double to,
                         const RadialOptions& opt) {
  auto stepper = odeint::make_controlled(opt.abs_tol, opt.rel_tol, Dopri());
  const double dt = (to - from) * 1e-3;
  odeint::integrate_adaptive(stepper, sys, y, from, to, dt);
  return y;
}

}  // namespace

RadialSolution integrate_radial(double kappa, double w, int l, const std::vector<double>& grid,
                                const RadialOptions& opt) {
  if (!(kappa > 0.0) || !(w > 0.0) || l < 0) {
    throw DomainError("integrate_radial: need kappa > 0, w > 0, l >= 0");
  }
  SampledFunction probe{grid, std::vector<double>(grid.size(), 0.0)};
  probe.validate();

  const RadialSystem sys{kappa, w, static_cast<double>(l)};
  const double rho0 = std::min(opt.rho_start, grid.front());
  RadialState y = regular_start(kappa, w, l, rho0);

  RadialSolution out;
  out.u.grid = grid;
  out.du.grid = grid;
  out.u.values.resize(grid.size());
  out.du.values.resize(grid.size());

  auto dense = odeint::make_dense_output(opt.abs_tol, opt.rel_tol, Dopri());
  dense.initialize(y, rho0, 1e-2 * rho0);

  std::size_t next = 0;
  // Grid points at the start radius take the series value directly.
  while (next < grid.size() && grid[next] <= rho0) {
    const RadialState s = regular_start(kappa, w, l, grid[next]);
    const double scale = std::pow(grid[next] / rho0, l + 1.0);
    out.u.values[next] = s[0] * scale;
    out.du.values[next] = s[1] * scale;
    ++next;
  }

  RadialState tmp;
  while (next < grid.size()) {
    const auto [t0, t1] = dense.do_step(sys);
    const RadialState& cur = dense.current_state();
    if (!std::isfinite(cur[0]) || std::abs(cur[0]) > opt.overflow) {
      throw OverflowError("integrate_radial: solution overflow at rho = " + std::to_string(t1), t1);
    }
    const RadialState prev_state = [&] {
      RadialState s;
      dense.calc_state(t0, s);
      return s;
    }();
    if ((prev_state[0] > 0.0) != (cur[0] > 0.0) && prev_state[0] != 0.0) {
      const numkit::RealFn u_at = [&](double r) {
        dense.calc_state(r, tmp);
        return tmp[0];
      };
      out.nodes.push_back(numkit::find_root(u_at, t0, t1).root);
    }
    while (next < grid.size() && grid[next] <= t1) {
      dense.calc_state(grid[next], tmp);
      out.u.values[next] = tmp[0];
      out.du.values[next] = tmp[1];
      ++next;
    }
  }
  const double last_rho = grid.back();
  out.tail_exponent = last_rho * out.du.values.back() / out.u.values.back();
  out.decaying = std::abs(out.tail_exponent + l) < std::abs(out.tail_exponent - (l + 1.0));
  return out;
}

double matching_defect(double kappa, double w, int l, const RadialOptions& opt) {
  const RadialSystem sys{kappa, w, static_cast<double>(l)};
  const RadialState a = integrate_to(sys, regular_start(kappa, w, l, opt.rho_start),
                                     opt.rho_start, 1.0, opt);
  const RadialState b =
      integrate_to(sys, decaying_start(kappa, w, l, opt.rho_far), opt.rho_far, 1.0, opt);
  const double wron = a[0] * b[1] - a[1] * b[0];
  return wron / std::sqrt((a[0] * a[0] + a[1] * a[1]) * (b[0] * b[0] + b[1] * b[1]));
}

std::pair<double, double> bracket_by_scan(int n_r, double kappa, int l, const RadialOptions& opt,
                                          double w_min, double w_max, double growth) {
  if (n_r < 0) throw DomainError("bracket_by_scan: n_r must be nonnegative");
  int crossings = 0;
  double w_prev = w_min;
  double d_prev = matching_defect(kappa, w_prev, l, opt);
  for (double w = w_min * growth; w <= w_max; w *= growth) {
    const double d = matching_defect(kappa, w, l, opt);
    if ((d > 0.0) != (d_prev > 0.0)) {
      if (crossings == n_r) return {w_prev, w};
      ++crossings;
    }
    w_prev = w;
    d_prev = d;
  }
  throw BracketError("bracket_by_scan: eigenvalue not found below w_max");
}

ShootingResult shoot_coupling(int N, const Kappa& kappa, int l,
                              std::optional<std::pair<double, double>> bracket,
                              const numkit::ToleranceProfile& profile, const RadialOptions& opt) {
  const int n_r = polynomial_degree(kappa, N, l);
  const double k = kappa.value();
  const auto br = bracket ? *bracket : bracket_by_scan(n_r, k, l, opt);
  const numkit::RealFn defect = [&](double w) { return matching_defect(k, w, l, opt); };
  const numkit::RootResult root = numkit::find_root(defect, br.first, br.second, profile);
  return {root.root, root.iterations, root.residual, br};
}

// ---------------------------------------------------------------------------
// Critical angular number

PlusExtrema plus_extrema(double kappa, double l, double lo, double hi, int samples) {
  PlusExtrema out;
  const auto slope = [&](double r) { return plus_potential_with_derivatives(r, kappa, l).slope; };
  const double a = std::log(lo);
  const double b = std::log(hi);
  double r_prev = lo;
  double s_prev = slope(lo);
  for (int i = 1; i <= samples; ++i) {
    const double r = std::exp(a + (b - a) * i / samples);
    const double s = slope(r);
    if ((s > 0.0) != (s_prev > 0.0)) {
      const double root = numkit::find_root(slope, r_prev, r).root;
      // Slope going + to - is a maximum.
      (s_prev > 0.0 ? out.maxima : out.minima).push_back(root);
    }
    r_prev = r;
    s_prev = s;
  }
  return out;
}

std::vector<CriticalPoint> critical_points(double kappa, const CriticalSearch& search,
                                           const numkit::ToleranceProfile& profile) {
  if (!(kappa > 0.0)) throw DomainError("critical_points: kappa must be positive");
  const numkit::VecFn2 F = [&](const numkit::Vec2& v) -> numkit::Vec2 {
    const PlusCurve c = plus_potential_with_derivatives(v[1], kappa, v[0]);
    return {c.slope, c.curvature};
  };
  const numkit::Box2 box{{search.l_min, search.rho_min}, {search.l_max, search.rho_max}};

  std::vector<CriticalPoint> found;
  const auto extrema_at = [&](double l) {
    PlusExtrema e = plus_extrema(kappa, l, search.rho_min, search.rho_max, search.rho_samples);
    std::vector<double> all = e.maxima;
    all.insert(all.end(), e.minima.begin(), e.minima.end());
    std::sort(all.begin(), all.end());
    return all;
  };

  double l_prev = search.l_min;
  std::vector<double> e_prev = extrema_at(l_prev);
  for (int i = 1; i <= search.l_samples; ++i) {
    const double l = search.l_min + (search.l_max - search.l_min) * i / search.l_samples;
    std::vector<double> e = extrema_at(l);
    const std::size_t born = e.size() > e_prev.size() ? e.size() - e_prev.size()
                                                      : e_prev.size() - e.size();
    if (born == 2) {
      // The merging pair is the closest adjacent pair on the side that has it.
      const std::vector<double>& side = e.size() > e_prev.size() ? e : e_prev;
      std::size_t best = 0;
      for (std::size_t j = 1; j + 1 < side.size(); ++j) {
        if (side[j + 1] - side[j] < side[best + 1] - side[best]) best = j;
      }
      const numkit::Vec2 seed{0.5 * (l + l_prev), 0.5 * (side[best] + side[best + 1])};
      const numkit::Root2Result r = numkit::newton_2d(F, seed, box, profile);
      CriticalPoint cp{r.point[0], r.point[1], r.residual[0], r.residual[1], r.iterations};
      const bool duplicate = std::any_of(found.begin(), found.end(), [&](const CriticalPoint& o) {
        return std::abs(o.l_cr - cp.l_cr) < 1e-6 && std::abs(o.rho_cr - cp.rho_cr) < 1e-6;
      });
      if (!duplicate) found.push_back(cp);
    }
    l_prev = l;
    e_prev = std::move(e);
  }
  std::sort(found.begin(), found.end(),
            [](const CriticalPoint& a, const CriticalPoint& b) { return a.l_cr < b.l_cr; });
  return found;
}

CriticalPoint critical_angular(double kappa, const CriticalSearch& search,
                               const numkit::ToleranceProfile& profile) {
  const auto all = critical_points(kappa, search, profile);
  if (all.empty()) {
    throw NotFoundError("critical_angular: no flat inflection of U+ in the scan range");
  }
  return all.front();
}

// ---------------------------------------------------------------------------
// Classical paths

namespace {

// (x, y, vx, vy, t) as functions of the polar angle.
using OrbitState = std::array<double, 5>;

struct OrbitSystem {
  double kappa, w;
  void operator()(const OrbitState& s, OrbitState& ds, double /*theta*/) const {
    const double r2 = s[0] * s[0] + s[1] * s[1];
    const double r = std::sqrt(r2);
    if (!(r > 1e-9)) throw GeometryError("classical_trajectory: path reached the force centre");
    if (r > 1e3) throw GeometryError("classical_trajectory: path escaped beyond rho = 1e3");
    const double ang_mom = s[0] * s[3] - s[1] * s[2];
    const double dt = r2 / ang_mom;
    const double radial_force = -potential_derivative(r, kappa, w) / r;
    ds[0] = s[2] * dt;
    ds[1] = s[3] * dt;
    ds[2] = radial_force * s[0] * dt;
    ds[3] = radial_force * s[1] * dt;
    ds[4] = dt;
  }
};

}  // namespace

Trajectory classical_trajectory(const Rational& kappa, double w, const LaunchSpec& start,
                                std::optional<double> revolutions, const TrajectoryOptions& opt) {
  if (!(w > 0.0)) throw DomainError("classical_trajectory: w must be positive");
  if (!(start.rho > 0.0)) throw GeometryError("classical_trajectory: start must be off the origin");
  const double k = kappa.value();
  const double k2 = static_cast<double>(kappa.den);
  const double revs = revolutions.value_or(k2);
  if (!(revs > 0.0)) throw DomainError("classical_trajectory: revolutions must be positive");

  const double sin_b = std::sin(start.launch_angle);
  const double cos_b = std::cos(start.launch_angle);
  if (std::abs(sin_b) < 1e-12) {
    throw GeometryError("classical_trajectory: radial launch passes through the force centre");
  }
  // Integrate in a frame with the start on +x and counter-clockwise motion;
  // mirror and rotate on output.
  const double mirror = sin_b > 0.0 ? 1.0 : -1.0;
  const double speed0 = std::sqrt(-2.0 * potential(start.rho, k, w));
  const OrbitState s0{start.rho, 0.0, speed0 * cos_b, speed0 * std::abs(sin_b), 0.0};

  const int total = static_cast<int>(std::ceil(revs * opt.samples_per_revolution));
  std::vector<double> thetas;
  for (int i = 0; i <= total; ++i) {
    thetas.push_back(std::min(2.0 * std::numbers::pi * revs,
                              2.0 * std::numbers::pi * i / opt.samples_per_revolution));
  }
  // Land exactly on the focal and closure angles.
  const double theta_focus = std::numbers::pi * k2;
  const double theta_close = 2.0 * std::numbers::pi * k2;
  for (double extra : {theta_focus, theta_close}) {
    if (extra <= thetas.back()) thetas.push_back(extra);
  }
  std::sort(thetas.begin(), thetas.end());
  thetas.erase(std::unique(thetas.begin(), thetas.end()), thetas.end());

  std::vector<OrbitState> states;
  std::vector<double> at;
  OrbitState s = s0;
  const OrbitSystem sys{k, w};
  auto stepper = odeint::make_controlled(opt.abs_tol, opt.rel_tol,
                                         odeint::runge_kutta_dopri5<OrbitState>());
  odeint::integrate_times(stepper, sys, s, thetas.begin(), thetas.end(), 1e-3,
                          [&](const OrbitState& st, double th) {
                            states.push_back(st);
                            at.push_back(th);
                          });

  const double c = std::cos(start.polar_angle);
  const double sn = std::sin(start.polar_angle);
  const auto to_world = [&](double x, double y) {
    y *= mirror;
    return std::pair<double, double>{c * x - sn * y, sn * x + c * y};
  };

  Trajectory out;
  const double u0 = std::abs(potential(start.rho, k, w));
  out.revolutions = revs;
  out.closure_defect = std::numeric_limits<double>::quiet_NaN();
  out.focal_defect = std::numeric_limits<double>::quiet_NaN();
  const double focus_radius = kappa.num % 2 == 1 ? 1.0 / start.rho : start.rho;
  const double focus_x = focus_radius * std::cos(theta_focus);
  const double focus_y = focus_radius * std::sin(theta_focus);
  for (std::size_t i = 0; i < states.size(); ++i) {
    const OrbitState& st = states[i];
    const auto [wx, wy] = to_world(st[0], st[1]);
    const double v2 = st[2] * st[2] + st[3] * st[3];
    out.t.push_back(st[4]);
    out.x.push_back(wx);
    out.y.push_back(wy);
    out.speed.push_back(std::sqrt(v2));
    const double r = std::hypot(st[0], st[1]);
    out.energy_violation =
        std::max(out.energy_violation, std::abs(0.5 * v2 + potential(r, k, w)) / u0);
    if (at[i] == theta_close) {
      out.closure_defect = std::sqrt((st[0] - s0[0]) * (st[0] - s0[0]) +
                                     (st[1] - s0[1]) * (st[1] - s0[1]) +
                                     (st[2] - s0[2]) * (st[2] - s0[2]) +
                                     (st[3] - s0[3]) * (st[3] - s0[3]));
    }
    if (at[i] == theta_focus) {
      out.focal_defect = std::hypot(st[0] - focus_x, st[1] - focus_y);
      std::tie(out.focal_x, out.focal_y) = to_world(st[0], st[1]);
    }
  }
  return out;
}

double path_distance(const Trajectory& a, const Trajectory& b) {
  if (a.x.size() != b.x.size()) {
    throw std::invalid_argument("path_distance: paths sampled on different angle grids");
  }
  double d = 0.0;
  for (std::size_t i = 0; i < a.x.size(); ++i) {
    d = std::max(d, std::hypot(a.x[i] - b.x[i], a.y[i] - b.y[i]));
  }
  return d;
}

}  // namespace dosusy
