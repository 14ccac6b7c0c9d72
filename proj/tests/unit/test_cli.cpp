#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "facons/groebner.hpp"
#include "facons/report.hpp"

using namespace facons;

namespace {

std::string data(const std::string& name) { return std::string(FACONS_TEST_DATA) + "/" + name; }

RunResult run(const std::string& command, const std::string& file, const std::string& format = "json") {
  RunConfig cfg;
  cfg.command = command;
  cfg.input = file;
  cfg.format = format;
  return run_command(cfg);
}

std::string scratch(const std::string& name, const std::string& text) {
  auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream(path) << text;
  return path.string();
}

}  // namespace

TEST_CASE("analyze reports") {
  auto r = run("analyze", data("three_coordinate.map"));
  REQUIRE(r.exit_code == 0);
  auto j = nlohmann::json::parse(r.output);
  CHECK(j["schema"] == "facons-kit/1");
  CHECK(j["strata"].size() == 7);
  CHECK(j["frontier"]["edges"].size() == 9);
  CHECK(j["coverage"]["covered"] == 20);
  CHECK(j["status"] == "ok");

  auto c = nlohmann::json::parse(run("analyze", data("cusp.map")).output);
  CHECK(c["strata"].size() == 2);
  CHECK(c["frontier"]["edges"].size() == 1);

  auto dot = run("analyze", data("cusp.map"), "dot");
  CHECK(dot.output.find("S2 -> S1;") != std::string::npos);
  auto text = run("analyze", data("cusp.map"), "text");
  CHECK(text.output.find("frontier: ok") != std::string::npos);
}

TEST_CASE("output is reproducible") {
  for (const char* name : {"three_coordinate.map", "cusp.map", "two_planes.map"}) {
    auto a = run("analyze", data(name)), b = run("analyze", data(name));
    CHECK(a.output == b.output);
  }
}

TEST_CASE("exit codes") {
  CHECK(run("analyze", scratch("facons_bad.map", "vars: x1 x2\nmap:\n  x1 x2\n  x2\n")).exit_code == 2);
  auto missing = run("analyze", "/nonexistent/file.map");
  CHECK(missing.exit_code == 2);
  CHECK(missing.error.find("cannot read") != std::string::npos);
  CHECK(run("analyze", scratch("facons_nd.map", "vars: x1 x2\nmap:\n  x1\n  x1\n")).exit_code == 2);
  CHECK(run("bogus", data("cusp.map")).exit_code == 2);
  CHECK(run("analyze", data("cusp.map"), "yaml").exit_code == 2);

  auto saved = default_budget();
  default_budget().max_pairs = 3;
  // fresh map, so no cached basis bypasses the budget
  CHECK(run("analyze", scratch("facons_budget.map", "vars: x1 x2\nmap:\n  (x1*x2)^2 + x2\n  (x1*x2)^3 + 3*x1\n"))
            .exit_code == 3);
  default_budget() = saved;
}

TEST_CASE("subcommands") {
  auto a = nlohmann::json::parse(run("asymptotic-set", data("cusp.map")).output);
  CHECK(a["asymptotic_set"]["components"].size() == 1);
  auto f = run("facons", data("three_coordinate.map"));
  CHECK(f.exit_code == 0);
  CHECK(nlohmann::json::parse(f.output)["cells"].size() == 7);

  auto t = run("tube-verify", data("two_planes.map"));
  CHECK(t.exit_code == 0);
  auto tj = nlohmann::json::parse(t.output);
  bool axis_plane = false;
  for (const auto& p : tj["pairs"]) {
    CHECK(p["max_pi_residual"].get<double>() < 1e-9);
    CHECK(p["max_rho_residual"].get<double>() < 1e-9);
    if (p["lower_facon"] == "(3)[1,2]" && p["upper_facon"] == "(3)[1]") axis_plane = true;
  }
  CHECK(axis_plane);
  CHECK(tj["coverage"]["covered"] == 20);
  CHECK_FALSE(t.warnings.empty());  // origin pairs have no exact ray
}
