#include <algorithm>
#include <charconv>
#include <fstream>
#include <stdexcept>
#include <system_error>

#include "dosusy/cli.hpp"
#include "dosusy/do_model.hpp"
#include "dosusy/susy_core.hpp"

namespace dosusy::cli {

std::string format_number(double value) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
  if (ec != std::errc{}) throw std::runtime_error("format_number: conversion failed");
  return std::string(buf, end);
}

std::string render_csv(const CsvTable& table) {
  std::string text;
  for (const auto& c : table.comments) text += "# " + c + "\n";
  for (std::size_t i = 0; i < table.columns.size(); ++i) {
    if (i) text += ',';
    text += table.columns[i];
  }
  text += '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) text += ',';
      text += format_number(row[i]);
    }
    text += '\n';
  }
  return text;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os)
    throw std::filesystem::filesystem_error("cannot open for writing", path,
                                            std::make_error_code(std::errc::permission_denied));
  os << text;
  if (!os)
    throw std::filesystem::filesystem_error("write failed", path,
                                            std::make_error_code(std::errc::io_error));
}

namespace {

std::vector<double> figure_grid() {
  auto grid = default_grid();
  grid.push_back(1.0);  // keeps the rho = 1 spot value on the grid
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  return grid;
}

struct Curve {
  double kappa;
  int l;
};

CsvTable curve_table(const std::string& name, bool plus, const std::vector<Curve>& curves,
                     const std::string& provenance) {
  const auto grid = figure_grid();
  CsvTable t;
  t.comments = {
      name + ": " + (plus ? "U+ = W^2 + W'" : "U- = W^2 - W'") +
          " of the nodeless sector, closed-form evaluation",
      "units: rho in R, U in E0 = hbar^2/(2 m R^2)",
      "parameters: " + provenance,
      "grid: " + std::to_string(grid.size()) +
          " points, 400 log-spaced over [1e-3, 1e3] plus rho = 1",
      "columns: rho, U, kappa, l (long format, one block per curve)"};
  t.columns = {"rho", "U", "kappa", "l"};
  for (const auto& c : curves)
    for (double rho : grid) {
      auto p = partner_potentials(rho, c.kappa, c.l);
      t.rows.push_back({rho, plus ? p.plus : p.minus, c.kappa, static_cast<double>(c.l)});
    }
  return t;
}

}  // namespace

std::vector<std::pair<std::string, CsvTable>> figure_tables(const std::string& figure) {
  std::vector<std::pair<std::string, CsvTable>> out;
  const bool all = figure == "all";
  if (!all && figure != "fig1" && figure != "fig2")
    throw std::invalid_argument("unknown figure '" + figure + "' (expected fig1, fig2 or all)");
  if (all || figure == "fig1") {
    const std::vector<Curve> c{{0.5, 2}, {1.0, 2}, {1.5, 2}};
    const std::string prov = "l = 2; kappa = 1/2, 1, 3/2";
    out.emplace_back("fig1_minus.csv", curve_table("fig1_minus", false, c, prov));
    out.emplace_back("fig1_plus.csv", curve_table("fig1_plus", true, c, prov));
  }
  if (all || figure == "fig2") {
    out.emplace_back("fig2_minus.csv",
                     curve_table("fig2_minus", false, {{1.0, 1}, {1.0, 5}, {1.0, 10}},
                                 "kappa = 1; l = 1, 5, 10"));
    out.emplace_back("fig2_plus.csv",
                     curve_table("fig2_plus", true, {{1.0, 6}, {1.0, 7}, {1.0, 8}},
                                 "kappa = 1; l = 6, 7, 8"));
  }
  return out;
}

std::vector<std::filesystem::path> emit_figure_data(const std::string& figure,
                                                    const std::filesystem::path& outdir) {
  auto tables = figure_tables(figure);
  std::filesystem::create_directories(outdir);
  std::vector<std::filesystem::path> written;
  for (const auto& [name, table] : tables) {
    auto path = outdir / name;
    write_text(path, render_csv(table));
    written.push_back(path);
  }
  return written;
}

nlohmann::json to_json(const CheckResult& c) {
  nlohmann::json j;
  j["check_id"] = c.check_id;
  j["params"] = c.params;
  j["measured"] = c.measured;
  j["threshold"] = c.threshold;
  j["pass"] = c.pass;
  if (c.informative) j["informative"] = true;
  return j;
}

}  // namespace dosusy::cli
