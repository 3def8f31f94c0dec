#include <doctest.h>

#include "oracles.hpp"
#include "sccm/grid.hpp"
#include "sccm/io.hpp"
#include "sccm/market.hpp"

using namespace sccm;

namespace {

NetworkCase toy() { return load_case(std::string(SCCM_DATA_DIR) + "/toy3.json"); }

SccCoefficients toy_coefficients(double lim = 2.0) {
  SccCoefficients k;
  BusCoefficients b;
  b.bus = 3;
  b.i_lim = lim;
  b.k_g = {2.2, 5.0};
  b.k_c = {0.5};
  k.buses = {b};
  return k;
}

int count_prefix(const ModelIR& m, const std::string& p) {
  int n = 0;
  for (const auto& r : m.rows) n += r.name.rfind(p, 0) == 0;
  return n;
}

SyncGen unit(const std::string& id, int bus, double pmin, double pmax, double cost) {
  SyncGen g;
  g.id = id;
  g.bus = bus;
  g.no_load_cost = 10;
  g.marginal_cost = cost;
  g.startup_cost = 5;
  g.shutdown_cost = 1;
  g.p_min = pmin;
  g.p_max = pmax;
  g.ramp_up = g.ramp_down = pmax;
  g.x_internal = 0.19;
  g.scc_injection = 1.0 / 0.19;
  return g;
}

NetworkCase one_sg() {
  NetworkCase c;
  c.name = "one";
  c.buses = {{1, true, 1.0, 0.0}};
  c.sgs = {unit("g", 1, 20, 50, 15)};
  c.demand = {20};
  return c;
}

}  // namespace

TEST_CASE("single unit at p_min is committed") {
  auto c = one_sg();
  auto m = build_competitive_model(c, {}, {});
  CHECK(m.vars.size() == 4);
  for (const char* f : {"u_g_1", "p_g_1", "cst_g_1", "csh_g_1"}) CHECK(m.has_var(f));
  CHECK(m.vars[m.var("u_g_1")].integer);
  auto r = solve_competitive(c, {}, {});
  CHECK(r.u[0][0] == 1);
  CHECK(r.P[0][0] == doctest::Approx(20));
  CHECK(r.cost == doctest::Approx(10 + 15 * 20 + 5));
}

TEST_CASE("no SCC rows without the SCC flag") {
  auto c = toy();
  MarketConfig cfg;
  cfg.include_scc = false;
  CHECK(count_prefix(build_competitive_model(c, cfg, toy_coefficients()), "scc_") == 0);
  cfg.include_scc = true;
  CHECK(count_prefix(build_competitive_model(c, cfg, toy_coefficients()), "scc_") == c.horizon());
}

TEST_CASE("IBR alone serves a small load at its bid") {
  NetworkCase c;
  c.name = "ibr";
  c.buses = {{1, true, 1.0, 0.0}, {2, true, 1.0, 0.0}};
  c.branches = {{1, 2, 0.1, 0.0}};
  c.sgs = {unit("g", 1, 30, 80, 20)};
  IbrUnit w;
  w.id = "w";
  w.bus = 2;
  w.p_max = 50;
  w.energy_bid = 3.0;
  w.alpha = {0.8, 0.6};
  c.ibrs = {w};
  c.demand = {10, 25};
  MarketConfig cfg;
  cfg.include_scc = false;
  auto r = solve_competitive(c, cfg, {});
  CHECK(r.u[0] == std::vector<int>{0, 0});
  CHECK(r.p_ibr[0][0] == doctest::Approx(10));
  CHECK(r.p_ibr[0][1] == doctest::Approx(25));
  CHECK(r.lambda_e[0] == doctest::Approx(3.0));
  CHECK(r.lambda_e[1] == doctest::Approx(3.0));
}

TEST_CASE("30-bus model size follows the count formulas") {
  auto c = load_case(std::string(SCCM_DATA_DIR) + "/ieee30_scc.json");
  const int G = 12, C = 3, T = 24;
  SccCoefficients k;
  for (int bus : {26, 29, 30}) {
    BusCoefficients b;
    b.bus = bus;
    b.i_lim = 5.0;
    b.k_g.assign(G, 1.0);
    b.k_c.assign(C, 0.1);
    k.buses.push_back(b);
  }
  auto m = build_competitive_model(c, {}, k);
  const int B = 3;
  CHECK(m.vars.size() == static_cast<size_t>(4 * G * T + C * T));
  CHECK(m.rows.size() == static_cast<size_t>(B * T + T + 6 * G * T + C * T));
  int ints = 0;
  for (const auto& v : m.vars) ints += v.integer;
  CHECK(ints == G * T);
}

TEST_CASE("toy clearing equals exhaustive enumeration") {
  auto c = toy();
  auto k = toy_coefficients();
  auto r = solve_competitive(c, {}, k);
  auto e = oracle::enumerate_uc(c, oracle::scc_rows(c, k, {3}), oracle::truthful_costs(c));
  REQUIRE(e.feasible);
  CHECK(r.cost == doctest::Approx(e.cost).epsilon(1e-9));
  CHECK(r.u == e.u);

  MarketConfig off;
  off.include_scc = false;
  auto r0 = solve_competitive(c, off, k);
  auto e0 = oracle::enumerate_uc(c, {}, oracle::truthful_costs(c));
  CHECK(r0.cost == doctest::Approx(e0.cost).epsilon(1e-9));
  CHECK(r0.cost < r.cost);
}

TEST_CASE("payment identity") {
  auto c = toy();
  auto r = solve_competitive(c, {}, toy_coefficients());
  double s = 0;
  for (const auto& a : r.agents) s += a.scc_revenue;
  CHECK(std::fabs(s - r.consumer_scc_payment) <= 1e-6);
  double h = 0;
  for (double v : r.hourly_cost) h += v;
  CHECK(h == doctest::Approx(r.operating_cost));
}

TEST_CASE("critical buses on the toy case") {
  auto c = toy();
  CHECK(identify_critical_buses(c, {}, {{3, 2.0}}) == std::vector<int>{3});
  CHECK(identify_critical_buses(c, {}, {{3, 0.0}}).empty());
  CHECK(identify_critical_buses(c, {}, {}) == std::vector<int>{3});
}

TEST_CASE("every bus with an SG that must run is never critical") {
  NetworkCase c;
  c.name = "all-on";
  c.buses = {{1, true, 2.0, 0.0}, {2, true, 2.0, 0.0}, {3, true, 2.0, 0.0}};
  c.branches = {{1, 2, 0.1, 0.0}, {2, 3, 0.1, 0.0}};
  c.sgs = {unit("a", 1, 10, 50, 10), unit("b", 2, 10, 50, 20), unit("c", 3, 10, 50, 30)};
  c.demand = {140, 145};
  MarketConfig cfg;
  cfg.include_scc = false;
  auto r = solve_competitive(c, cfg, {});
  for (const auto& u : r.u) CHECK(u == std::vector<int>{1, 1});
  auto ref = oracle::scc(c, {1, 1, 1}, {});
  for (double v : ref) CHECK(v >= 2.0);
  CHECK(identify_critical_buses(c, cfg, {}).empty());
}

TEST_CASE("audit of a forced schedule matches the dense reference") {
  auto c = toy();
  auto k = toy_coefficients();
  ClearingResult r;
  r.u = {{1, 1}, {0, 0}};
  auto a = audit_schedule(c, k, r, {{1, 1.0}, {2, 1.0}, {3, 2.0}});
  REQUIRE(a.rows.size() == 3);
  for (const auto& row : a.rows) {
    double m = kInf;
    for (int t = 0; t < c.horizon(); ++t) m = std::min(m, oracle::scc(c, {1, 0}, c.alpha_at(t))[c.bus_index(row.bus)]);
    CHECK(row.min_exact == doctest::Approx(m).epsilon(1e-9));
    CHECK(row.secure == (m >= row.i_lim));
  }
  const auto& r3 = a.rows[2];
  CHECK(r3.min_approx == doctest::Approx(2.2 + 0.5 * 0.3));
}

TEST_CASE("constrained toy schedule is secure under the exact model") {
  auto c = toy();
  auto a = min_scc_audit(c, toy_coefficients(), {}, {{3, 2.0}});
  CHECK(a.min_over({3}) >= 2.0);
}

TEST_CASE("toy offers equal enumeration") {
  auto c = toy();
  auto k = toy_coefficients();
  MarketConfig cfg;
  auto o = price_scc_offers(c, cfg, k);
  auto e = oracle::enumerate_offers(c, oracle::scc_rows(c, k, {3}), 2.0 * cfg.solver.mip_gap);
  CHECK(o.flags.empty());
  for (int g = 0; g < 2; ++g)
    for (int t = 0; t < 2; ++t) CHECK(o.at(3, g, t) == doctest::Approx(e.at(3, g, t)).epsilon(1e-9));
  CHECK(o.total() > 0);
}

TEST_CASE("a unit without SCC contribution never offers") {
  auto c = toy();
  auto k = toy_coefficients();
  k.buses[0].k_g[0] = 0.0;
  k.buses[0].k_g[1] = 5.0;
  auto o = price_scc_offers(c, {}, k);
  CHECK_FALSE(o.unit_has_offer(0));
}

TEST_CASE("offers enter the clearing as commitment costs") {
  auto c = toy();
  auto k = toy_coefficients();
  MarketConfig cfg;
  cfg.offers = price_scc_offers(c, cfg, k);
  auto r = solve_competitive(c, cfg, k);
  double paid = 0;
  for (int g = 0; g < 2; ++g)
    for (int t = 0; t < 2; ++t) paid += cfg.offers.at(3, g, t) * r.u[g][t];
  CHECK(r.cost == doctest::Approx(r.operating_cost + paid));
  CHECK(r.consumer_offer_payment == doctest::Approx(paid));
}

TEST_CASE("reporting rule removes revenue of units without offers") {
  ClearingResult r;
  r.agents.resize(2);
  r.agents[0].scc_revenue = 4;
  r.agents[1].scc_revenue = 6;
  SccOffers o;
  o.by_bus[3] = {{0, 0}, {0, 2}};
  apply_scc_reporting_rule(r, o);
  CHECK(r.agents[0].scc_revenue == 0);
  CHECK(r.consumer_scc_payment == 6);
}

TEST_CASE("market errors") {
  auto c = toy();
  auto k = toy_coefficients();
  MarketConfig cfg;
  cfg.scc_buses = {2};
  CHECK_THROWS_AS(build_competitive_model(c, cfg, k), MissingCoefficients);
  cfg.scc_buses = {};
  cfg.offers.by_bus[3] = {{0, 0, 0}, {0, 0, 0}};
  CHECK_THROWS_AS(build_competitive_model(c, cfg, k), HorizonMismatch);
  CHECK_THROWS_AS(solve_competitive(c, {}, toy_coefficients(50.0)), InfeasibleMarket);
}
