#include <doctest.h>

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"

namespace {

struct Result {
  int code = 0;
  std::string out;
  std::string err;
};

Result invoke(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = cwphase::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream in(line);
  for (std::string cell; std::getline(in, cell, ',');) out.push_back(cell);
  return out;
}

void check_flat(const nlohmann::json& j) {
  REQUIRE(j.is_object());
  for (const auto& [key, value] : j.items()) {
    INFO("key " << key);
    CHECK_FALSE(value.is_object());
    if (value.is_array()) {
      for (const auto& v : value) CHECK_FALSE(v.is_structured());
    }
  }
}

}  // namespace

TEST_CASE("critical") {
  const Result r = invoke({"critical", "--a", "1.2", "--upsilon", "12"});
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  check_flat(j);
  CHECK(std::abs(j["p_c"].get<double>() - 3.928235) <= 1e-5);
  CHECK(std::abs(j["n_c"].get<double>() - 0.5139) <= 5e-4);
  CHECK(r.err.empty());
}

TEST_CASE("coexist") {
  const Result r = invoke({"coexist", "--a", "1.2", "--upsilon", "12", "--p", "6"});
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  check_flat(j);
  CHECK(std::abs(j["mu_c"].get<double>() - -1.890291) <= 1e-5);
  REQUIRE(j["mu_window"].size() == 2);
  CHECK(j["mu_window"][0].get<double>() < j["mu_c"].get<double>());
  CHECK(j["mu_c"].get<double>() < j["mu_window"][1].get<double>());
  CHECK(j["y_low"].get<double>() < j["y_high"].get<double>());
}

TEST_CASE("coexist below the critical line is a precondition error") {
  const Result r = invoke({"coexist", "--a", "1.2", "--upsilon", "12", "--p", "3"});
  CHECK(r.code == 4);
  CHECK(r.out.empty());
  const auto j = nlohmann::json::parse(r.err);
  CHECK(j["error"] == "no-spinodal");
  CHECK(j["exit_code"] == 4);
}

TEST_CASE("argument errors exit with 2") {
  CHECK(invoke({}).code == 2);
  CHECK(invoke({"frobnicate"}).code == 2);
  CHECK(invoke({"coexist"}).code == 2);
  CHECK(invoke({"critical", "--precision", "5"}).code == 2);
  CHECK(invoke({"critical", "--precision", "18"}).code == 2);
  CHECK(invoke({"critical", "--format", "xml"}).code == 2);
  CHECK(invoke({"critical", "--a", "1.0"}).code == 2);
  CHECK(invoke({"mu-curve", "--p", "2", "--y-min", "1", "--y-max", "2", "--steps", "1"}).code == 2);
  CHECK(invoke({"distribution", "--p", "2", "--mu", "-1", "--n-max", "4", "--branch", "middle"}).code == 2);
  const Result r = invoke({"critical", "--bogus"});
  CHECK(nlohmann::json::parse(r.err)["error"] == "invalid-arguments");
}

TEST_CASE("solver failures exit with 3") {
  const Result r = invoke({"mu-curve", "--p", "6", "--y-min", "1e-13", "--y-max", "1", "--steps", "2"});
  CHECK(r.code == 3);
  CHECK(nlohmann::json::parse(r.err)["error"] == "no-convergence");
}

TEST_CASE("help") {
  const Result r = invoke({"--help"});
  CHECK(r.code == 0);
  CHECK(r.out.find("isotherm") != std::string::npos);
}

TEST_CASE("classify") {
  const Result low = invoke({"classify", "--p", "6", "--mu", "-2.3080"});
  REQUIRE(low.code == 0);
  const auto j = nlohmann::json::parse(low.out);
  check_flat(j);
  CHECK(j["status"] == "single_phase");
  CHECK(j["n_points"] == 3);
  CHECK(j["global_max_y"] == j["points_y"][0]);

  const Result tied = invoke({"classify", "--p", "6", "--mu", "-1.890291", "--tie-tol", "5e-7"});
  REQUIRE(tied.code == 0);
  CHECK(nlohmann::json::parse(tied.out)["status"] == "coexistence_candidate");

  const Result single = invoke({"classify", "--p", "2", "--mu", "-1"});
  CHECK(nlohmann::json::parse(single.out)["gap"].is_null());
}

TEST_CASE("CSV grids have the documented columns") {
  struct Case {
    std::vector<std::string> args;
    std::string header;
    std::size_t rows;
  };
  const std::vector<Case> cases{
      {{"mu-curve", "--p", "6", "--y-min", "0.1", "--y-max", "6", "--steps", "25"}, "y,mu_bar", 25},
      {{"energy", "--p", "6", "--mu", "-1.89", "--y-min", "0", "--y-max", "7", "--steps", "30"}, "y,E", 30},
      {{"branch-energies", "--p", "6", "--mu-min", "-2.3", "--mu-max", "-1.5", "--steps", "9"}, "mu,E_low,E_high", 9},
      {{"isotherm", "--p", "6", "--y-min", "0.1", "--y-max", "6", "--steps", "40", "--maxwell"},
       "y,n,mu,pressure,branch", 40},
      {{"distribution", "--p", "2", "--mu", "-1", "--n-max", "20"}, "n,Q", 21},
      {{"validate", "--p", "2", "--mu", "-1", "--n-list", "2,4,8"}, "N,P_N,P_limit,gap", 3},
  };
  for (const Case& c : cases) {
    const Result r = invoke(c.args);
    INFO(c.args[0]);
    REQUIRE(r.code == 0);
    CHECK(r.out.find('\r') == std::string::npos);
    CHECK(r.out.back() == '\n');
    const auto rows = lines(r.out);
    REQUIRE(rows.size() == c.rows + 1);
    CHECK(rows[0] == c.header);
    const std::size_t width = split(c.header).size();
    for (std::size_t i = 1; i < rows.size(); ++i) CHECK(split(rows[i]).size() == width);
  }
}

TEST_CASE("isotherm CSV carries the Maxwell tie line") {
  const Result r = invoke({"isotherm", "--p", "6", "--y-min", "0.1", "--y-max", "6", "--steps", "60", "--maxwell"});
  REQUIRE(r.code == 0);
  const auto rows = lines(r.out);
  std::string tie_pressure;
  int on_tie = 0;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto cells = split(rows[i]);
    if (cells[4] != "stable") {
      if (tie_pressure.empty()) tie_pressure = cells[3];
      CHECK(cells[3] == tie_pressure);
      ++on_tie;
    }
  }
  CHECK(on_tie > 10);
}

TEST_CASE("distribution sums to one and respects --branch at coexistence") {
  const Result r = invoke({"distribution", "--p", "2", "--mu", "-1", "--n-max", "40", "--precision", "17"});
  REQUIRE(r.code == 0);
  double total = 0.0;
  const auto rows = lines(r.out);
  for (std::size_t i = 1; i < rows.size(); ++i) total += std::stod(split(rows[i])[1]);
  CHECK(total == doctest::Approx(1.0).epsilon(1e-12));

  const Result coex = invoke({"coexist", "--p", "6", "--precision", "17"});
  const std::string mu_c = nlohmann::json::parse(coex.out)["mu_c"].dump();
  CHECK(invoke({"distribution", "--p", "6", "--mu", mu_c, "--n-max", "5"}).code == 4);
  CHECK(invoke({"distribution", "--p", "6", "--mu", mu_c, "--n-max", "5", "--branch", "high"}).code == 0);
}

TEST_CASE("precision controls significant digits") {
  const Result six = invoke({"--format", "csv", "critical", "--precision", "6"});
  const Result seventeen = invoke({"--format", "csv", "critical", "--precision", "17"});
  REQUIRE(six.code == 0);
  const auto short_row = split(lines(six.out)[1]);
  const auto long_row = split(lines(seventeen.out)[1]);
  CHECK(short_row[2] == "3.92823");
  CHECK(long_row[2].size() > short_row[2].size());
}

TEST_CASE("JSON table output is column-oriented and flat") {
  const Result r = invoke({"mu-curve", "--p", "2", "--y-min", "0.5", "--y-max", "3", "--steps", "4", "--format", "json"});
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  check_flat(j);
  CHECK(j["y"].size() == 4);
  CHECK(j["mu_bar"].size() == 4);
}

TEST_CASE("output is byte-identical across runs and thread counts") {
  const std::vector<std::string> args{"mu-curve", "--p", "6", "--y-min", "0.1", "--y-max", "6", "--steps", "200"};
  ::setenv("CW_PHASE_THREADS", "1", 1);
  const Result serial = invoke(args);
  ::setenv("CW_PHASE_THREADS", "4", 1);
  const Result threaded = invoke(args);
  const Result again = invoke(args);
  ::unsetenv("CW_PHASE_THREADS");
  CHECK(serial.out == threaded.out);
  CHECK(threaded.out == again.out);

  const std::vector<std::string> iso{"isotherm", "--p", "6", "--y-min", "0.1", "--y-max", "6", "--steps", "100", "--maxwell"};
  ::setenv("CW_PHASE_THREADS", "1", 1);
  const Result iso_serial = invoke(iso);
  ::setenv("CW_PHASE_THREADS", "3", 1);
  const Result iso_threaded = invoke(iso);
  ::unsetenv("CW_PHASE_THREADS");
  CHECK(iso_serial.out == iso_threaded.out);
}

TEST_CASE("--output writes the file and nothing to stdout") {
  const auto path = std::filesystem::temp_directory_path() / "cwphase_cli_test.json";
  const Result r = invoke({"critical", "--output", path.string()});
  REQUIRE(r.code == 0);
  CHECK(r.out.empty());
  std::ifstream in(path);
  const std::string body((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  CHECK(body == invoke({"critical"}).out);
  std::filesystem::remove(path);

  CHECK(invoke({"critical", "--output", "/nonexistent-dir/x.json"}).code == 2);
}
