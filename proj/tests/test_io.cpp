#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "sccm/io.hpp"
#include "sccm/plan.hpp"

using namespace sccm;
namespace fs = std::filesystem;

namespace {

json minimal_case() {
  return json::parse(R"({
    "schema_version": 1,
    "name": "mini",
    "buses": [{"id": 1, "i_lim": 1.0}, {"id": 2, "monitored": false}],
    "branches": [{"from": 1, "to": 2, "x": 0.1}],
    "sync_gens": [{"id": "g", "bus": 1, "no_load_cost": 1, "marginal_cost": 2, "startup_cost": 0,
                   "shutdown_cost": 0, "p_min": 1, "p_max": 5, "ramp_down": 5, "ramp_up": 5,
                   "u0": 0, "p0": 0, "x_internal": 0.2}],
    "ibr_units": [{"id": "w", "bus": 2, "p_max": 3, "energy_bid": 1, "capacity_factor": [0.5, 0.2, 0.1]}],
    "demand": [2, 3, 4]
  })");
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path fresh_dir(const std::string& name) {
  auto d = fs::temp_directory_path() / "sccm_tests" / name;
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

std::vector<std::string> issues_of(const json& j) {
  try {
    case_from_json(j);
  } catch (const ValidationError& e) {
    return e.issues;
  }
  return {};
}

ExperimentPlan toy_plan(const fs::path& out) {
  ExperimentPlan p;
  p.case_path = std::string(SCCM_DATA_DIR) + "/toy3.json";
  p.stages = {Stage::Train, Stage::Validate, Stage::Competitive, Stage::Price, Stage::Strategic, Stage::Sweep};
  p.out_dir = out.string();
  p.train_limits = {2.0};
  p.market_limit = 2.0;
  p.n_train = 200;
  p.n_validate = 50;
  ScenarioSpec s;
  s.name = "b";
  s.strategic = {"b"};
  s.W = {1, 10};
  s.envelope = EnvelopeBounds::Box;
  p.scenarios = {s};
  return p;
}

// timings differ between runs
json without_timings(json j) {
  for (auto& s : j["scenarios"]) s.erase("seconds");
  return j;
}

}  // namespace

TEST_CASE("minimal case loads and infers the horizon") {
  auto c = case_from_json(minimal_case());
  CHECK(c.horizon() == 3);
  CHECK(c.buses.size() == 2);
  CHECK_FALSE(c.buses[1].monitored);
  CHECK(c.sgs[0].scc_injection == doctest::Approx(1.0 / 0.2));
  CHECK(c.ibrs[0].scc_injection == 1.0);
}

TEST_CASE("capacity factor out of range names its index") {
  auto j = minimal_case();
  j["ibr_units"][0]["capacity_factor"][1] = 1.2;
  auto issues = issues_of(j);
  REQUIRE(issues.size() == 1);
  CHECK(issues[0].find("/ibr_units/0/capacity_factor/1") != std::string::npos);
  CHECK_THROWS_AS(case_from_json(j), ValidationError);
}

TEST_CASE("every violation is reported") {
  auto j = minimal_case();
  j["branches"][0]["x"] = -1;
  j["sync_gens"][0]["p_max"] = 0.5;
  j["ibr_units"][0]["capacity_factor"] = {0.5};
  j["buses"][0]["i_lim"] = 0;
  auto issues = issues_of(j);
  CHECK(issues.size() >= 4);
  std::string all;
  for (const auto& s : issues) all += s + "\n";
  CHECK(all.find("/branches/0/x") != std::string::npos);
  CHECK(all.find("/sync_gens/0/p_max") != std::string::npos);
  CHECK(all.find("/ibr_units/0/capacity_factor") != std::string::npos);
  CHECK(all.find("/buses/0/i_lim") != std::string::npos);
}

TEST_CASE("missing and wrong-typed fields") {
  auto j = minimal_case();
  j["sync_gens"][0].erase("p_min");
  j["sync_gens"][0]["marginal_cost"] = "cheap";
  auto issues = issues_of(j);
  std::string all;
  for (const auto& s : issues) all += s + "\n";
  CHECK(all.find("/sync_gens/0/p_min") != std::string::npos);
  CHECK(all.find("/sync_gens/0/marginal_cost") != std::string::npos);
}

TEST_CASE("schema version is enforced") {
  auto j = minimal_case();
  j["schema_version"] = 2;
  CHECK_THROWS_AS(case_from_json(j), SchemaVersionError);
  j.erase("schema_version");
  CHECK_THROWS_AS(case_from_json(j), SchemaVersionError);
}

TEST_CASE("missing file") { CHECK_THROWS(load_case("/nonexistent/case.json")); }

TEST_CASE("shipped 30-bus case") {
  auto c = load_case(std::string(SCCM_DATA_DIR) + "/ieee30_scc.json");
  CHECK(c.buses.size() == 30);
  CHECK(c.sgs.size() == 12);
  CHECK(c.ibrs.size() == 3);
  CHECK(c.horizon() == 24);
  std::map<int, int> per_bus;
  for (const auto& g : c.sgs) ++per_bus[g.bus];
  for (const auto& [b, n] : per_bus) CHECK(n == 2);
}

TEST_CASE("case round trip") {
  auto c = load_case(std::string(SCCM_DATA_DIR) + "/toy3.json");
  auto back = case_from_json(case_to_json(c));
  CHECK(case_to_json(back) == case_to_json(c));
}

TEST_CASE("coefficient and offer round trips") {
  auto c = load_case(std::string(SCCM_DATA_DIR) + "/toy3.json");
  SccCoefficients k;
  BusCoefficients b;
  b.bus = 3;
  b.i_lim = 2.0;
  b.k_g = {2.2, 5.0};
  b.k_c = {0.5};
  k.buses = {b};
  auto k2 = coefficients_from_json(c, coefficients_to_json(c, k));
  CHECK(k2.find(3)->k_g == k.find(3)->k_g);
  CHECK(k2.find(3)->k_c == k.find(3)->k_c);

  SccOffers o;
  o.by_bus[3] = {{105, 0}, {0, 360}};
  auto o2 = offers_from_json(c, offers_to_json(c, o));
  CHECK(o2.by_bus == o.by_bus);

  auto bad = coefficients_to_json(c, k);
  bad["buses"][0]["k_g"].erase("a");
  CHECK_THROWS_AS(coefficients_from_json(c, bad), MissingCoefficients);
}

TEST_CASE("scenario round trip") {
  ScenarioSpec s;
  s.name = "x";
  s.strategic = {"a", "b"};
  s.beta_m_cap = 1.5;
  s.W = {1, 10};
  s.envelope = EnvelopeBounds::Box;
  auto s2 = scenario_from_json(scenario_to_json(s));
  CHECK(s2.name == s.name);
  CHECK(s2.strategic == s.strategic);
  CHECK(s2.beta_m_cap == 1.5);
  CHECK(s2.W == s.W);
  CHECK(s2.envelope == EnvelopeBounds::Box);
  auto c = load_case(std::string(SCCM_DATA_DIR) + "/toy3.json");
  auto cfg = s.config(c, 10);
  CHECK(cfg.strategic == std::vector<int>{0, 1});
  s.strategic = {"zz"};
  CHECK_THROWS(s.config(c, 10));
}

TEST_CASE("atomic writes leave no temporary file") {
  auto d = fresh_dir("atomic");
  auto p = (d / "x.json").string();
  write_json(p, json{{"a", 1}});
  CHECK(read_json(p)["a"] == 1);
  int n = 0;
  for (auto& e : fs::directory_iterator(d)) (void)e, ++n;
  CHECK(n == 1);
}

TEST_CASE("plan validation") {
  ExperimentPlan p;
  p.case_path = std::string(SCCM_DATA_DIR) + "/toy3.json";
  p.out_dir = fresh_dir("plan_check").string();
  p.stages = {Stage::Price};
  CHECK_THROWS_AS(p.check(), ValidationError);
  p.stages = {Stage::Competitive, Stage::Price, Stage::Strategic};
  CHECK_THROWS_AS(p.check(), ValidationError);  // no scenario, no coefficients
  auto j = plan_to_json(toy_plan(p.out_dir));
  auto back = plan_from_json(j);
  CHECK(plan_to_json(back) == j);
  j["stages"].push_back("plot");
  CHECK_THROWS_AS(plan_from_json(j), ValidationError);
}

TEST_CASE("exit codes") {
  CHECK(exit_code_for(ValidationError({"x"})) == 2);
  CHECK(exit_code_for(SchemaVersionError("x")) == 2);
  CHECK(exit_code_for(SolverFailure("x")) == 3);
  CHECK(exit_code_for(InfeasibleMarket("x")) == 4);
  CHECK(exit_code_for(std::runtime_error("x")) == 1);
}

TEST_CASE("full toy pipeline is deterministic and rerunnable") {
  auto d1 = fresh_dir("run1"), d2 = fresh_dir("run2");
  auto b1 = run_plan(toy_plan(d1));
  for (const auto& s : b1.stages) {
    INFO(to_string(s.stage) << ": " << s.error);
    CHECK(s.ok);
  }
  REQUIRE(b1.ok());
  auto b2 = run_plan(toy_plan(d2));
  REQUIRE(b2.ok());
  const char* tables[] = {"error_report.csv", "clearing.csv", "offers.csv", "uc_status.csv", "uc_status_competitive.csv",
                          "clearing_strategic.csv", "sweep.csv"};
  for (const char* f : tables) {
    INFO(f);
    auto a = slurp((d1 / f).string());
    CHECK(a.rfind("# schema_version=1\n", 0) == 0);
    CHECK(a == slurp((d2 / f).string()));
  }
  CHECK(without_timings(read_json((d1 / "strategic_summary.json").string())) ==
        without_timings(read_json((d2 / "strategic_summary.json").string())));
  auto prov = read_json((d1 / "provenance.json").string());
  CHECK(prov.contains("seed"));
  CHECK(prov.contains("solver"));
  CHECK(prov.contains("timestamp"));

  // ids in the reports exist in the case
  auto c = load_case(std::string(SCCM_DATA_DIR) + "/toy3.json");
  std::istringstream cl(slurp((d1 / "clearing.csv").string()));
  std::string line;
  std::getline(cl, line);
  std::getline(cl, line);
  while (std::getline(cl, line)) {
    auto a = line.find(','), b = line.find(',', a + 1);
    auto id = line.substr(a + 1, b - a - 1);
    bool known = false;
    for (const auto& g : c.sgs) known |= g.id == id;
    for (const auto& w : c.ibrs) known |= w.id == id;
    CHECK(known);
  }

  // later stages rerun from the persisted coefficients and offers
  auto offers = slurp((d1 / "offers.csv").string());
  auto summary = read_json((d1 / "strategic_summary.json").string());
  fs::remove(d1 / "offers.csv");
  fs::remove(d1 / "strategic_summary.json");
  auto p = toy_plan(d1);
  p.stages = {Stage::Strategic};
  REQUIRE(run_plan(p).ok());
  CHECK(without_timings(read_json((d1 / "strategic_summary.json").string())) == without_timings(summary));
  p.stages = {Stage::Price};
  REQUIRE(run_plan(p).ok());
  CHECK(slurp((d1 / "offers.csv").string()) == offers);
}

TEST_CASE("a failing stage skips its dependents") {
  auto d = fresh_dir("fail");
  auto p = toy_plan(d);
  p.market_limit = 50.0;  // unattainable
  p.train_limits = {50.0};
  auto b = run_plan(p);
  CHECK_FALSE(b.ok());
  CHECK(b.exit_code() != 0);
  bool skipped = false;
  for (const auto& s : b.stages) skipped |= s.skipped;
  CHECK(skipped);
}
