#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "sccm/case.hpp"
#include "sccm/solver.hpp"
#include "sccm/train.hpp"

namespace sccm {

using Matrix = std::vector<std::vector<double>>;

// O^SCC_{g,b,t}: commitment prices in EUR/h, keyed by bus id then [g][t]
struct SccOffers {
  std::map<int, Matrix> by_bus;
  std::vector<std::string> flags;

  double at(int bus, int g, int t) const;
  bool unit_has_offer(int g) const;
  double total() const;
};

struct MarketConfig {
  bool include_scc = true;
  std::map<int, double> i_lim;  // per-bus override of the trained limit
  std::vector<int> scc_buses;   // restrict SCC rows to these buses; empty means every critical bus
  SccOffers offers;
  double energy_price_floor = 0.0;
  SolveOptions solver{};
};

struct MissingCoefficients : Error {
  using Error::Error;
};
struct HorizonMismatch : Error {
  using Error::Error;
};
struct InfeasibleMarket : Error {
  using Error::Error;
};

struct AgentAccount {
  std::string id;
  double energy_revenue = 0;   // sum lambda^E P
  double scc_revenue = 0;      // sum lambda^SCC k u
  double scc_offer_payment = 0;  // sum O^SCC u, pay-as-offer
  double no_load_cost = 0, energy_cost = 0, startup_cost = 0, shutdown_cost = 0;
  double profit() const { return energy_revenue + scc_revenue - no_load_cost - energy_cost - startup_cost - shutdown_cost; }
};

struct ClearingResult {
  SolveStatus status = SolveStatus::Error;
  double mip_gap = 0;
  std::vector<std::vector<int>> u;
  Matrix P, c_st, c_sh, p_ibr;
  double cost = 0;            // LL objective including SCC offer terms
  double operating_cost = 0;  // same without SCC offer terms
  std::vector<double> hourly_cost;  // operating cost per hour
  std::vector<double> lambda_e;
  std::map<int, std::vector<double>> lambda_scc;
  std::vector<AgentAccount> agents;
  double consumer_scc_payment = 0;   // sum of reported SCC revenues
  double consumer_offer_payment = 0; // sum of pay-as-offer SCC payments
};

// Shared lower-level structure; indices into a ModelIR
struct LlIndex {
  int G = 0, C = 0, T = 0;
  std::vector<std::vector<int>> u, P, cst, csh, pc;
  std::vector<int> scc_buses;
  std::map<int, std::vector<int>> scc_row;
  std::map<int, std::vector<double>> scc_rhs;  // i_lim - sum k_c alpha
  std::map<int, double> scc_lim;
  std::vector<int> bal_row;
};

// Builds variables and rows of the lower-level primal; no objective is set.
// `zeroed` removes k_bg for the (bus id, SG index) pairs listed.
LlIndex add_ll_primal(ModelIR& m, const NetworkCase& c, const SccCoefficients& k, const MarketConfig& cfg,
                      bool relax_u = false, const std::set<std::pair<int, int>>& zeroed = {});

// effective (bus id, limit, k_g, k_c) triples the market enforces
struct SccRowSpec {
  int bus;
  double lim;
  const BusCoefficients* coef;
};
std::vector<SccRowSpec> scc_rows(const NetworkCase& c, const SccCoefficients& k, const MarketConfig& cfg);

ModelIR build_competitive_model(const NetworkCase& c, const MarketConfig& cfg, const SccCoefficients& k);

ClearingResult solve_competitive(const NetworkCase& c, const MarketConfig& cfg, const SccCoefficients& k);

// schedule and unit values read from a solved model that contains an LlIndex
ClearingResult clearing_from(const LlIndex& ix, const std::vector<double>& x);

// Hourly operating cost of a schedule (no SCC offer terms)
std::vector<double> hourly_operating_cost(const NetworkCase& c, const ClearingResult& r);

std::vector<int> identify_critical_buses(const NetworkCase& c, const MarketConfig& cfg_without_scc,
                                         const std::map<int, double>& i_lim);

struct AuditRow {
  int bus = 0;
  double min_exact = 0;
  int hour_exact = 0;
  double min_approx = 0;  // NaN when the bus has no surrogate
  int hour_approx = 0;
  bool secure = true;     // min_exact >= i_lim
  double i_lim = 0;
};

struct SccAudit {
  std::vector<AuditRow> rows;
  Matrix exact;  // [bus index][t]
  ClearingResult clearing;
  double min_over(const std::vector<int>& bus_ids) const;
};

// exact SCC of every bus/hour for a given schedule
Matrix schedule_scc(const NetworkCase& c, const std::vector<std::vector<int>>& u);

SccAudit min_scc_audit(const NetworkCase& c, const SccCoefficients& k, const MarketConfig& cfg,
                       const std::map<int, double>& i_lim);
SccAudit audit_schedule(const NetworkCase& c, const SccCoefficients& k, const ClearingResult& r,
                        const std::map<int, double>& i_lim);

SccOffers price_scc_offers(const NetworkCase& c, const MarketConfig& cfg, const SccCoefficients& k);

// units whose offers are zero at every critical bus earn no reported SCC revenue
void apply_scc_reporting_rule(ClearingResult& r, const SccOffers& offers);

}  // namespace sccm
