#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <sys/wait.h>

#include <doctest.h>

#include "dosusy/cli.hpp"

using namespace dosusy;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "dosusy");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(is), {}};
}

fs::path scratch(const std::string& name) {
  auto p = fs::temp_directory_path() / ("dosusy_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

}  // namespace

TEST_CASE("eval prints shortest round-trip numbers") {
  auto r = run({"eval", "W", "--kappa", "1", "--l", "0", "--rho", "1"});
  CHECK(r.code == 0);
  CHECK(r.out == "-0.5\n");
  CHECK(run({"eval", "Uminus", "--kappa", "1", "--l", "2", "--rho", "1"}).out == "-2.75\n");
  CHECK(run({"eval", "U", "--kappa", "1", "--w", "3", "--rho", "2"}).out == "-0.12\n");
  CHECK(run({"eval", "w", "--kappa", "1/2", "--N", "2"}).out == "6\n");
  const auto j = nlohmann::json::parse(run({"eval", "Uplus", "--format", "json"}).out);
  CHECK(j["value"] == 1.25);
  CHECK(cli::format_number(0.1) == "0.1");
  CHECK(cli::format_number(1e-300) == "1e-300");
}

TEST_CASE("quantize prints the formula value and the shooting status") {
  const auto r = run({"quantize", "--kappa", "1", "--l", "0", "--N", "1"});
  CHECK(r.code == 0);
  CHECK(r.out.rfind("3\n", 0) == 0);
  CHECK(r.out.find("ok") != std::string::npos);
  const auto j = nlohmann::json::parse(run({"quantize", "--kappa", "1/2", "--N", "2", "--format", "json"}).out);
  CHECK(j["w_formula"] == 6.0);
  CHECK(j["pass"] == true);
  // Invalid state: usage error.
  CHECK(run({"quantize", "--kappa", "1/2", "--l", "1", "--N", "1"}).code == 2);
}

TEST_CASE("usage errors exit with 2") {
  CHECK(run({"bogus-cmd"}).code == 2);
  CHECK(run({}).code == 2);
  CHECK(run({"eval", "W", "--bogus-flag", "1"}).code == 2);
  CHECK(run({"eval", "nonsense"}).code == 2);
  CHECK(run({"eval", "W", "--rho", "-1"}).code == 2);
  CHECK(run({"eval", "W", "--kappa", "x/2"}).code == 2);
  CHECK(run({"verify", "--suite", "nope"}).code == 2);
  CHECK(run({"partners", "--format", "xml"}).code == 2);
  const auto r = run({"eval", "W", "--kappa", "1", "--l", "0", "--rho", "1", "extra"});
  CHECK(r.code == 2);
  CHECK_FALSE(r.err.empty());
}

TEST_CASE("help lists every command") {
  const auto r = run({"--help"});
  CHECK(r.code == 0);
  for (const char* c : {"eval", "quantize", "partners", "family", "audit", "critical", "figures",
                        "trace", "verify"})
    CHECK(r.out.find(c) != std::string::npos);
}

TEST_CASE("curve commands emit documented CSV") {
  const auto p = run({"partners", "--kappa", "1", "--l", "2", "--grid-points", "10"});
  CHECK(p.code == 0);
  CHECK(p.out[0] == '#');
  CHECK(p.out.find("rho,W,U_minus,U_plus,kappa,l\n") != std::string::npos);
  int rows = 0;
  std::istringstream is(p.out);
  for (std::string line; std::getline(is, line);) rows += line[0] != '#';
  CHECK(rows == 11);

  const auto f = run({"family", "--kappa", "1", "--l", "0", "--lambda", "0", "--grid-points", "9",
                      "--grid-min", "0.1", "--grid-max", "10"});
  CHECK(f.code == 0);
  CHECK(f.out.find("zeros of V (W_lambda singular): 1") != std::string::npos);

  const auto t = run({"trace", "--kappa", "1", "--w", "3", "--rho", "0.5"});
  CHECK(t.code == 0);
  CHECK(t.out.find("\nt,x,y,speed\n") != std::string::npos);
  CHECK(run({"trace", "--kappa", "0.7071", "--rho", "0.5"}).code == 2);
}

TEST_CASE("audit and critical") {
  const auto a = run({"audit", "--kappa", "1", "--l-max", "1", "--format", "json"});
  CHECK(a.code == 0);
  const auto j = nlohmann::json::parse(a.out);
  REQUIRE(j.size() == 4);
  CHECK(j[0]["formula_id"] == "S1");
  CHECK(j[0]["verdict"] == "match");
  CHECK(run({"audit", "--kappa", "3/2"}).code == 2);

  const auto c = run({"critical", "--kappa", "1", "--format", "json"});
  CHECK(c.code == 0);
  const auto cj = nlohmann::json::parse(c.out);
  CHECK(cj[0]["l_cr"].get<double>() == doctest::Approx(6.876).epsilon(1e-3));
}

TEST_CASE("figures regenerate byte-identically with the rho = 1 spot value") {
  const auto a = scratch("fig_a"), b = scratch("fig_b");
  CHECK(run({"figures", "--out", a.string()}).code == 0);
  CHECK(run({"figures", "--figure", "all", "--out", b.string()}).code == 0);
  for (const char* name : {"fig1_minus.csv", "fig1_plus.csv", "fig2_minus.csv", "fig2_plus.csv"}) {
    REQUIRE(fs::exists(a / name));
    CHECK(slurp(a / name) == slurp(b / name));
  }
  const auto text = slurp(a / "fig1_minus.csv");
  CHECK(text.find("\n1,-2.75,1,2\n") != std::string::npos);
  CHECK(text.find("# units:") != std::string::npos);
  CHECK(text.find("\nrho,U,kappa,l\n") != std::string::npos);
}

TEST_CASE("verify suites and report determinism") {
  const auto r = run({"verify", "--suite", "riccati"});
  CHECK(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["summary"]["all_pass"] == true);
  std::vector<std::string> ids;
  for (const auto& c : j["checks"]) {
    for (const char* key : {"check_id", "params", "measured", "threshold", "pass"})
      CHECK(c.contains(key));
    ids.push_back(c["check_id"]);
  }
  CHECK(ids.size() == 66);
  CHECK(std::is_sorted(ids.begin(), ids.end()));

  const auto c = run({"verify", "--suite", "critical"});
  CHECK(c.code == 0);
  CHECK(c.out.find("critical.l_cr") != std::string::npos);

  const auto x = run({"verify", "--suite", "degeneracy,figures"});
  const auto y = run({"verify", "--suite", "figures,degeneracy"});
  CHECK(x.code == 0);
  CHECK(x.out == y.out);
}

TEST_CASE("the installed binary honours the exit-code contract") {
  const std::string bin = DOSUSY_BINARY;
  const auto code = [&](const std::string& args) {
    const int s = std::system((bin + " " + args + " >/dev/null 2>&1").c_str());
    return WIFEXITED(s) ? WEXITSTATUS(s) : -1;
  };
  CHECK(code("eval W --kappa 1 --l 0 --rho 1") == 0);
  CHECK(code("bogus-cmd") == 2);
  CHECK(code("--help") == 0);
  CHECK(code("verify --suite degeneracy") == 0);
}
