#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "oracles.hpp"
#include "sccm/io.hpp"
#include "sccm/market.hpp"
#include "sccm/solver.hpp"

using namespace sccm;

namespace {

std::string tmp_path(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / "sccm_tests";
  std::filesystem::create_directories(dir);
  return (dir / name).string();
}

ModelIR knapsack_model(const std::vector<double>& v, const std::vector<double>& w, double cap) {
  ModelIR m;
  m.maximize = true;
  std::vector<std::pair<int, double>> row;
  for (size_t i = 0; i < v.size(); ++i) {
    int x = m.add_var("x" + std::to_string(i), 0, 1, v[i], true);
    row.push_back({x, w[i]});
  }
  m.add_row("cap", row, RowSense::Le, cap);
  return m;
}

}  // namespace

TEST_CASE("single-variable LP") {
  ModelIR m;
  int x = m.add_var("x", 0, 10, 1.0);
  m.add_row("r", {{x, 1.0}}, RowSense::Ge, 3.0);
  auto r = solve(m);
  REQUIRE(r.status == SolveStatus::Optimal);
  CHECK(r.x[x] == doctest::Approx(3.0));
  CHECK(r.objective == doctest::Approx(3.0));
  // one more unit of rhs costs one more unit of objective
  CHECK(r.duals[0] == doctest::Approx(1.0));
}

TEST_CASE("dual sign follows the objective sense") {
  ModelIR m;
  m.maximize = true;
  int x = m.add_var("x", 0, 10, -2.0);
  m.add_row("r", {{x, 1.0}}, RowSense::Ge, 3.0);
  auto r = solve(m);
  REQUIRE(r.status == SolveStatus::Optimal);
  CHECK(r.objective == doctest::Approx(-6.0));
  CHECK(r.duals[0] == doctest::Approx(-2.0));
}

TEST_CASE("infeasible pair") {
  ModelIR m;
  int x = m.add_var("x", -kInf, kInf);
  m.add_row("a", {{x, 1.0}}, RowSense::Ge, 3.0);
  m.add_row("b", {{x, 1.0}}, RowSense::Le, 2.0);
  CHECK(solve(m).status == SolveStatus::Infeasible);
}

TEST_CASE("unbounded LP") {
  ModelIR m;
  m.add_var("x", 0, kInf, -1.0);
  CHECK(solve(m).status == SolveStatus::Unbounded);
}

TEST_CASE("knapsack matches enumeration") {
  std::vector<double> v{6, 10, 12}, w{1, 2, 3};
  for (double cap : {0.0, 2.0, 4.0, 5.0, 6.0}) {
    auto r = solve(knapsack_model(v, w, cap));
    REQUIRE(r.status == SolveStatus::Optimal);
    CHECK(r.objective == doctest::Approx(oracle::knapsack(v, w, cap)));
  }
}

TEST_CASE("model construction errors") {
  ModelIR m;
  m.add_var("x", 0, 1);
  CHECK_THROWS_AS(m.add_var("x", 0, 1), MalformedModel);
  CHECK_THROWS_AS(m.add_var("y", 2, 1), MalformedModel);
  m.rows.push_back({"bad", {{5, 1.0}}, RowSense::Ge, 0.0});
  CHECK_THROWS_AS(m.validate(), MalformedModel);
}

TEST_CASE("objective constant is carried") {
  ModelIR m;
  int x = m.add_var("x", 1, 2, 1.0);
  m.obj_const = 5.0;
  auto r = solve(m);
  CHECK(r.objective == doctest::Approx(6.0));
  CHECK(m.objective(r.x) == doctest::Approx(6.0));
  (void)x;
}

TEST_CASE("LP names are sanitized deterministically") {
  CHECK(sanitize_lp_name("p[g1-b2,3]") == "p_g1_b2_3_");
  CHECK(sanitize_lp_name("3x") == "n_3x");
  CHECK(sanitize_lp_name("e12") == "n_e12");
  CHECK(sanitize_lp_name("") == "n_");
  CHECK(sanitize_lp_name("ok_name") == "ok_name");

  ModelIR m;
  int a = m.add_var("p[1]", 0, 4, 1.0);
  int b = m.add_var("p(1)", 0, 4, 1.0);
  m.add_row("sum-row", {{a, 1.0}, {b, 1.0}}, RowSense::Ge, 3.0);
  auto e1 = to_lp_format(m);
  auto e2 = to_lp_format(m);
  CHECK(e1.text == e2.text);
  CHECK(e1.renamed.at("p[1]") == "p_1_");
  CHECK(e1.renamed.at("p(1)") == "p_1__2");
  CHECK(e1.renamed.at("sum-row") == "sum_row");

  auto path = tmp_path("renamed.lp");
  export_lp(m, path);
  CHECK(std::filesystem::exists(path + ".names.csv"));
  CHECK(solve_lp_file(path).objective == doctest::Approx(3.0));
}

TEST_CASE("empty-constraint model exports bounds only") {
  ModelIR m;
  m.add_var("x", 1, 5, 2.0);
  m.add_var("y", -kInf, kInf, 0.0);
  auto ex = to_lp_format(m);
  CHECK(ex.text.find("Bounds") != std::string::npos);
  auto path = tmp_path("empty.lp");
  export_lp(m, path);
  CHECK_FALSE(std::filesystem::exists(path + ".names.csv"));
  auto r = solve_lp_file(path);
  REQUIRE(r.status == SolveStatus::Optimal);
  CHECK(r.objective == doctest::Approx(2.0));
}

TEST_CASE("LP round trip on a mixed-integer model with a constant") {
  auto m = knapsack_model({6, 10, 12}, {1, 2, 3}, 5);
  m.obj_const = 1.5;
  auto path = tmp_path("knap.lp");
  export_lp(m, path);
  auto a = solve(m), b = solve_lp_file(path);
  CHECK(b.objective == doctest::Approx(a.objective).epsilon(1e-6));
  CHECK(a.objective == doctest::Approx(23.5));
}

TEST_CASE("competitive model round trip through the LP file") {
  auto c = load_case(std::string(SCCM_DATA_DIR) + "/toy3.json");
  SccCoefficients k;
  BusCoefficients b;
  b.bus = 3;
  b.i_lim = 2.0;
  b.k_g = {2.2, 5.0};
  b.k_c = {0.5};
  k.buses = {b};
  auto m = build_competitive_model(c, {}, k);
  auto path = tmp_path("toy_competitive.lp");
  export_lp(m, path);
  auto direct = solve(m), file = solve_lp_file(path);
  REQUIRE(direct.status == SolveStatus::Optimal);
  CHECK(file.objective == doctest::Approx(direct.objective).epsilon(1e-6));
}

TEST_CASE("dualize gives the same optimum") {
  ModelIR m;
  int x = m.add_var("x", 0, 4, 3.0);
  int y = m.add_var("y", 1, kInf, 2.0);
  int z = m.add_var("z", -kInf, kInf, 0.0);
  m.add_row("a", {{x, 1.0}, {y, 1.0}}, RowSense::Ge, 5.0);
  m.add_row("b", {{x, 1.0}, {y, -1.0}}, RowSense::Le, 1.0);
  m.add_row("c", {{z, 1.0}, {x, -1.0}}, RowSense::Eq, 0.0);
  auto p = solve(m);
  auto d = solve(dualize(m));
  REQUIRE(p.status == SolveStatus::Optimal);
  REQUIRE(d.status == SolveStatus::Optimal);
  CHECK(d.objective == doctest::Approx(p.objective).epsilon(1e-9));

  m.maximize = true;
  for (auto& v : m.vars) v.cost = -v.cost;
  auto pm = solve(m), dm = solve(dualize(m));
  CHECK(dm.objective == doctest::Approx(pm.objective).epsilon(1e-9));
  CHECK_THROWS_AS(dualize(knapsack_model({1}, {1}, 1)), MalformedModel);
}

TEST_CASE("fix and relax integers") {
  auto m = knapsack_model({6, 10, 12}, {1, 2, 3}, 5);
  auto r = solve(m);
  auto f = fix_integers(m, r.x);
  CHECK_FALSE(f.has_integers());
  CHECK(solve(f).objective == doctest::Approx(r.objective));
  auto rel = relax_integers(m);
  CHECK(solve(rel).objective >= r.objective - 1e-9);
}

TEST_CASE("solver reports its version") { CHECK_FALSE(solver_version().empty()); }
