#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "dosusy/cli.hpp"
#include "dosusy/do_model.hpp"
#include "dosusy/errors.hpp"
#include "dosusy/riccati_family.hpp"
#include "dosusy/susy_core.hpp"
#include "dosusy/zero_energy_solver.hpp"

namespace dosusy::cli {

using nlohmann::json;

namespace {

struct RunConfig {
  std::string quantity;
  std::string kappa = "1";
  int l = 0;
  int N = 1;
  double w = 3.0;
  double rho = 1.0;
  double lambda = 0.0;
  std::string side = "bosonic";
  double grid_min = 1e-3;
  double grid_max = 1e3;
  int grid_points = 400;
  std::string out;
  std::string format = "csv";
  std::string suite = "all";
  std::string figure = "all";
  int l_max = 3;
  double launch_angle = 90.0;  // degrees from radial
  double polar_angle = 0.0;    // degrees
  double revolutions = 0.0;    // 0: k2
  numkit::ToleranceProfile tol;
};

// A usage problem detected after parsing (bad combination, unknown name).
struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

Rational require_rational(const Kappa& k) {
  if (k.exact()) return *k.exact();
  for (std::int64_t den = 1; den <= 64; ++den) {
    const double num = k.value() * static_cast<double>(den);
    if (std::abs(num - std::round(num)) < 1e-12 * den)
      return Rational(static_cast<std::int64_t>(std::round(num)), den);
  }
  throw UsageError("this command needs a rational kappa (k1/k2), got " + k.to_string());
}

std::vector<double> grid_of(const RunConfig& c) {
  if (c.grid_points < 5) throw UsageError("--grid-points must be at least 5");
  if (!(c.grid_min > 0.0 && c.grid_max > c.grid_min))
    throw UsageError("--grid-min/--grid-max must satisfy 0 < min < max");
  return default_grid(c.grid_points, c.grid_min, c.grid_max);
}

// Writes to --out when given, otherwise to the output stream.
void emit(const RunConfig& c, std::ostream& out, const std::string& text) {
  if (c.out.empty())
    out << text;
  else
    write_text(c.out, text);
}

std::string table_text(const RunConfig& c, const CsvTable& t) {
  if (c.format == "csv") return render_csv(t);
  json j = json::object();
  for (std::size_t col = 0; col < t.columns.size(); ++col) {
    json values = json::array();
    for (const auto& row : t.rows) values.push_back(row[col]);
    j[t.columns[col]] = values;
  }
  j["comments"] = t.comments;
  return j.dump(2) + "\n";
}

// --- commands --------------------------------------------------------------

int cmd_eval(const RunConfig& c, std::ostream& out) {
  const Kappa kappa = Kappa::parse(c.kappa);
  const double k = kappa.value(), r = c.rho;
  const std::map<std::string, std::function<double()>> table{
      {"W", [&] { return superpotential(r, k, c.l); }},
      {"dW", [&] { return superpotential_derivative(r, k, c.l); }},
      {"Uminus", [&] { return partner_potentials(r, k, c.l).minus; }},
      {"Uplus", [&] { return partner_potentials(r, k, c.l).plus; }},
      {"U", [&] { return potential(r, k, c.w); }},
      {"Ueff", [&] { return effective_potential_general(r, k, c.N, c.l); }},
      {"f", [&] { return f_factor(r, k, c.l); }},
      {"u", [&] { return radial_u(r, kappa, c.N, c.l, false, c.tol); }},
      {"xi", [&] { return map_coordinates(r, k).xi; }},
      {"alpha", [&] { return map_coordinates(r, k).alpha; }},
      {"w", [&] { return coupling_quantized(c.N, k); }},
      {"V", [&] { return v_family(r, k, c.l, c.lambda, parse_family_side(c.side), c.tol); }},
      {"Wlambda",
       [&] { return family_superpotential(r, k, c.l, c.lambda, parse_family_side(c.side), c.tol); }},
  };
  auto it = table.find(c.quantity);
  if (it == table.end()) throw UsageError("eval: unknown quantity '" + c.quantity + "'");
  const double v = it->second();
  if (c.format == "json")
    emit(c, out,
         json{{"quantity", c.quantity}, {"kappa", kappa.to_string()}, {"l", c.l}, {"rho", r},
              {"value", v}}.dump() + "\n");
  else
    emit(c, out, format_number(v) + "\n");
  return 0;
}

int cmd_quantize(const RunConfig& c, std::ostream& out) {
  const Kappa kappa = Kappa::parse(c.kappa);
  const int n_r = polynomial_degree(kappa, c.N, c.l);
  const double w = coupling_quantized(c.N, kappa.value());
  const auto s = shoot_coupling(c.N, kappa, c.l, std::nullopt, c.tol);
  const double dev = std::abs(s.w_star - w) / w;
  const bool ok = dev < 1e-6;
  if (c.format == "json") {
    emit(c, out,
         json{{"kappa", kappa.to_string()}, {"N", c.N}, {"l", c.l}, {"n_r", n_r},
              {"w_formula", w}, {"w_shooting", s.w_star}, {"relative_deviation", dev},
              {"threshold", 1e-6}, {"pass", ok}}.dump(2) + "\n");
  } else {
    emit(c, out,
         format_number(w) + "\nshooting: w = " + format_number(s.w_star) +
             ", relative deviation " + format_number(dev) + " (threshold 1e-6) " +
             (ok ? "ok" : "FAILED") + "\n");
  }
  return ok ? 0 : 1;
}

int cmd_partners(const RunConfig& c, std::ostream& out) {
  const double k = Kappa::parse(c.kappa).value();
  CsvTable t;
  t.comments = {"partner potentials U- = W^2 - W', U+ = W^2 + W' of the nodeless sector",
                "units: rho in R; W in 1/R; U in E0",
                "parameters: kappa = " + c.kappa + ", l = " + std::to_string(c.l)};
  t.columns = {"rho", "W", "U_minus", "U_plus", "kappa", "l"};
  for (double rho : grid_of(c)) {
    const auto p = partner_potentials(rho, k, c.l);
    t.rows.push_back({rho, superpotential(rho, k, c.l), p.minus, p.plus, k, double(c.l)});
  }
  emit(c, out, table_text(c, t));
  return 0;
}

int cmd_family(const RunConfig& c, std::ostream& out) {
  const double k = Kappa::parse(c.kappa).value();
  const FamilyMember m(parse_family_side(c.side), c.lambda, k, c.l, c.tol);
  const auto grid = grid_of(c);
  const auto zeros = m.v_zeros(grid);
  std::string zs;
  for (double z : zeros) zs += (zs.empty() ? "" : " ") + format_number(z);
  CsvTable t;
  t.comments = {"Riccati family member W_lambda = W + 1/V, reference point rho = 1",
                "parameters: kappa = " + c.kappa + ", l = " + std::to_string(c.l) +
                    ", lambda = " + format_number(c.lambda) + ", side = " + c.side,
                "zeros of V (W_lambda singular): " + (zs.empty() ? "none" : zs)};
  t.columns = {"rho", "V", "W_lambda", "kappa", "l"};
  for (double rho : grid) {
    double wl = NAN;
    try {
      wl = m.W_lambda(rho);
    } catch (const SingularPointError&) {
    }
    t.rows.push_back({rho, m.V(rho), wl, k, double(c.l)});
  }
  emit(c, out, table_text(c, t));
  return 0;
}

int cmd_audit(const RunConfig& c, std::ostream& out) {
  const double k = Kappa::parse(c.kappa).value();
  if (k != 1.0 && k != 0.5) throw UsageError("audit: kappa must be 1 or 1/2");
  if (c.l_max < 0) throw UsageError("audit: --l-max must be nonnegative");
  const auto records = series_audit(k, 0, c.l_max, grid_of(c), c.tol);
  std::string text;
  if (c.format == "csv") {
    text = "# printed series against quadrature oracles; max_dev is relative\n"
           "formula_id,l,kappa,max_dev,ode_residual_max,deviation_factor,verdict\n";
    for (const auto& r : records)
      text += to_string(r.formula) + "," + std::to_string(r.l) + "," + format_number(r.kappa) +
              "," + format_number(r.max_dev) + "," + format_number(r.ode_residual_max) + "," +
              format_number(r.deviation_factor) + "," + to_string(r.verdict) + "\n";
  } else {
    json j = json::array();
    for (const auto& r : records) j.push_back(to_json(r));
    text = j.dump(2) + "\n";
  }
  emit(c, out, text);
  return 0;
}

int cmd_critical(const RunConfig& c, std::ostream& out) {
  const double k = Kappa::parse(c.kappa).value();
  const auto points = critical_points(k, {}, c.tol);
  if (points.empty()) throw NotFoundError("critical: no flat inflection of U+ in the scan box");
  if (c.format == "json") {
    json j = json::array();
    for (const auto& p : points)
      j.push_back({{"l_cr", p.l_cr}, {"rho_cr", p.rho_cr}, {"slope_residual", p.slope_residual},
                   {"curvature_residual", p.curvature_residual}, {"iterations", p.iterations}});
    emit(c, out, j.dump(2) + "\n");
  } else {
    std::string text = "l_cr,rho_cr,slope_residual,curvature_residual\n";
    for (const auto& p : points)
      text += format_number(p.l_cr) + "," + format_number(p.rho_cr) + "," +
              format_number(p.slope_residual) + "," + format_number(p.curvature_residual) + "\n";
    emit(c, out, text);
  }
  return 0;
}

int cmd_figures(const RunConfig& c, std::ostream& out) {
  const auto written = emit_figure_data(c.figure, c.out.empty() ? "." : c.out);
  for (const auto& p : written) out << p.string() << "\n";
  return 0;
}

int cmd_trace(const RunConfig& c, std::ostream& out) {
  const Rational kappa = require_rational(Kappa::parse(c.kappa));
  constexpr double deg = std::numbers::pi / 180.0;
  LaunchSpec start{c.rho, c.polar_angle * deg, c.launch_angle * deg};
  std::optional<double> revs;
  if (c.revolutions > 0.0) revs = c.revolutions;
  const auto tr = classical_trajectory(kappa, c.w, start, revs);
  CsvTable t;
  t.comments = {"zero-energy classical path, unit mass; t in units of R/sqrt(E0)",
                "parameters: kappa = " + Kappa(kappa).to_string() + ", w = " + format_number(c.w) +
                    ", rho0 = " + format_number(c.rho) + ", launch angle = " +
                    format_number(c.launch_angle) + " deg",
                "revolutions = " + format_number(tr.revolutions) +
                    ", closure_defect = " + format_number(tr.closure_defect) +
                    ", focal_defect = " + format_number(tr.focal_defect) +
                    ", energy_violation = " + format_number(tr.energy_violation)};
  t.columns = {"t", "x", "y", "speed"};
  for (std::size_t i = 0; i < tr.t.size(); ++i)
    t.rows.push_back({tr.t[i], tr.x[i], tr.y[i], tr.speed[i]});
  emit(c, out, table_text(c, t));
  return 0;
}

int cmd_verify(const RunConfig& c, std::ostream& out) {
  const auto report = verify(c.suite, c.tol);
  emit(c, out, report.json.dump(2) + "\n");
  return report.all_pass ? 0 : 1;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig c;
  CLI::App app{"dosusy: zero-energy Demkov-Ostrovsky potentials, SUSY partners and checks"};
  app.name("dosusy");
  app.require_subcommand(1, 1);
  app.add_option("--tol-quad", c.tol.quad_tol, "relative quadrature tolerance")->capture_default_str();
  app.add_option("--tol-deriv", c.tol.deriv_step, "finite-difference base step")->capture_default_str();
  app.add_option("--tol-root", c.tol.root_tol, "root-finding residual tolerance")->capture_default_str();

  const auto kappa_opt = [&](CLI::App* s) {
    s->add_option("--kappa", c.kappa, "kappa as k1/k2 or decimal")->capture_default_str();
  };
  const auto l_opt = [&](CLI::App* s) {
    s->add_option("--l", c.l, "angular number")->capture_default_str()->check(CLI::NonNegativeNumber);
  };
  const auto n_opt = [&](CLI::App* s) {
    s->add_option("--N", c.N, "total quantum number")->capture_default_str()->check(CLI::PositiveNumber);
  };
  const auto grid_opts = [&](CLI::App* s) {
    s->add_option("--grid-min", c.grid_min, "smallest rho")->capture_default_str();
    s->add_option("--grid-max", c.grid_max, "largest rho")->capture_default_str();
    s->add_option("--grid-points", c.grid_points, "log-spaced points")->capture_default_str();
  };
  const auto out_opt = [&](CLI::App* s, const char* help) {
    s->add_option("--out", c.out, help);
  };
  const auto format_opt = [&](CLI::App* s) {
    s->add_option("--format", c.format, "csv or json")
        ->capture_default_str()
        ->check(CLI::IsMember({"csv", "json"}));
  };
  const auto common = [&](CLI::App* s) {
    s->fallthrough();  // tolerance flags may follow the command
  };

  auto* eval = app.add_subcommand("eval", "evaluate one closed-form quantity at rho");
  eval->add_option("quantity", c.quantity,
                   "W dW Uminus Uplus U Ueff f u xi alpha w V Wlambda")
      ->required();
  kappa_opt(eval);
  l_opt(eval);
  n_opt(eval);
  eval->add_option("--w", c.w, "coupling (for U)")->capture_default_str();
  eval->add_option("--rho", c.rho, "radius in units of R")->capture_default_str();
  eval->add_option("--lambda", c.lambda, "family parameter (V, Wlambda)")->capture_default_str();
  eval->add_option("--side", c.side, "bosonic or fermionic")->capture_default_str();
  out_opt(eval, "output file");
  eval->add_option("--format", c.format, "csv (bare number) or json")
      ->capture_default_str()
      ->check(CLI::IsMember({"csv", "json"}));
  common(eval);

  auto* quantize = app.add_subcommand("quantize", "quantized coupling w_{N,kappa} with shooting cross-check");
  kappa_opt(quantize);
  l_opt(quantize);
  n_opt(quantize);
  out_opt(quantize, "output file");
  format_opt(quantize);
  common(quantize);

  auto* partners = app.add_subcommand("partners", "W, U- and U+ on a grid");
  kappa_opt(partners);
  l_opt(partners);
  grid_opts(partners);
  out_opt(partners, "output file");
  format_opt(partners);
  common(partners);

  auto* family = app.add_subcommand("family", "Riccati family member V and W_lambda on a grid");
  kappa_opt(family);
  l_opt(family);
  family->add_option("--lambda", c.lambda, "family parameter")->capture_default_str();
  family->add_option("--side", c.side, "bosonic or fermionic")
      ->capture_default_str()
      ->check(CLI::IsMember({"bosonic", "fermionic"}));
  grid_opts(family);
  out_opt(family, "output file");
  format_opt(family);
  common(family);

  auto* audit = app.add_subcommand("audit", "audit the printed series for kappa = 1 or 1/2");
  kappa_opt(audit);
  audit->add_option("--l-max", c.l_max, "largest l audited")->capture_default_str();
  grid_opts(audit);
  out_opt(audit, "output file");
  audit->add_option("--format", c.format, "json or csv")
      ->capture_default_str()
      ->check(CLI::IsMember({"csv", "json"}));
  common(audit);

  auto* critical = app.add_subcommand("critical", "critical angular number of U+");
  kappa_opt(critical);
  out_opt(critical, "output file");
  format_opt(critical);
  common(critical);

  auto* figures = app.add_subcommand("figures", "write the figure CSV files");
  figures->add_option("--figure", c.figure, "fig1, fig2 or all")
      ->capture_default_str()
      ->check(CLI::IsMember({"fig1", "fig2", "all"}));
  out_opt(figures, "output directory (default: current directory)");
  common(figures);

  auto* trace = app.add_subcommand("trace", "zero-energy classical path as CSV (t,x,y,speed)");
  kappa_opt(trace);
  trace->add_option("--w", c.w, "coupling")->capture_default_str();
  trace->add_option("--rho", c.rho, "start radius")->capture_default_str();
  trace->add_option("--launch-angle", c.launch_angle, "velocity angle from radial, degrees")
      ->capture_default_str();
  trace->add_option("--polar-angle", c.polar_angle, "start polar angle, degrees")
      ->capture_default_str();
  trace->add_option("--revolutions", c.revolutions, "revolutions (0: k2)")->capture_default_str();
  out_opt(trace, "output file");
  format_opt(trace);
  common(trace);

  auto* verify_cmd = app.add_subcommand("verify", "run verification suites, JSON report");
  std::string suites = "all";
  for (const auto& n : suite_names()) suites += ", " + n;
  verify_cmd->add_option("--suite", c.suite, "comma-separated: " + suites)->capture_default_str();
  out_opt(verify_cmd, "report file");
  common(verify_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return 2;
  }

  try {
    c.tol.validate();
    if (*eval) return cmd_eval(c, out);
    if (*quantize) return cmd_quantize(c, out);
    if (*partners) return cmd_partners(c, out);
    if (*family) return cmd_family(c, out);
    if (*audit) return cmd_audit(c, out);
    if (*critical) return cmd_critical(c, out);
    if (*figures) return cmd_figures(c, out);
    if (*trace) return cmd_trace(c, out);
    if (*verify_cmd) return cmd_verify(c, out);
  } catch (const std::logic_error& e) {
    // Domain errors, invalid states and bad names are usage problems.
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

}  // namespace dosusy::cli
