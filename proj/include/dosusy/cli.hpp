#pragma once

// Command-line front end, figure emission and the verification report.

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "dosusy/numkit.hpp"

namespace dosusy::cli {

/// Parses argv and dispatches one subcommand. Exit codes: 0 success,
/// 1 verification failure, 2 usage error.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Shortest round-trip decimal form, independent of the C locale.
std::string format_number(double value);

// --- CSV -------------------------------------------------------------------

struct CsvTable {
  std::vector<std::string> comments;  // written as '# ' lines
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

std::string render_csv(const CsvTable& table);
void write_text(const std::filesystem::path& path, const std::string& text);

/// fig1: U-/U+ for l = 2, kappa in {1/2, 1, 3/2}. fig2: kappa = 1, U- for
/// l in {1, 5, 10} and U+ for l in {6, 7, 8}. Rows use the default grid with
/// rho = 1 inserted.
std::vector<std::pair<std::string, CsvTable>> figure_tables(const std::string& figure);

/// Writes <figure>_minus.csv and <figure>_plus.csv; figure is fig1, fig2 or all.
std::vector<std::filesystem::path> emit_figure_data(const std::string& figure,
                                                    const std::filesystem::path& outdir);

// --- verification ----------------------------------------------------------

struct CheckResult {
  std::string check_id;
  nlohmann::json params = nlohmann::json::object();
  double measured = 0.0;
  double threshold = 0.0;
  bool pass = false;
  bool informative = false;  // reported, but never affects the exit code
};

nlohmann::json to_json(const CheckResult& check);

std::vector<std::string> suite_names();

/// Runs the named suite ("all" runs every suite). Throws std::invalid_argument
/// for unknown names.
std::vector<CheckResult> run_suite(const std::string& name,
                                   const numkit::ToleranceProfile& profile = {});

struct VerificationReport {
  nlohmann::json json;  // sorted by check_id
  bool all_pass = true;
};

/// Comma-separated suite selection.
VerificationReport verify(const std::string& selection,
                          const numkit::ToleranceProfile& profile = {});

}  // namespace dosusy::cli
