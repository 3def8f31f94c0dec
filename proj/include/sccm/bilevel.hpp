#pragma once

#include <map>
#include <string>
#include <vector>

#include "sccm/market.hpp"

namespace sccm {

enum class EnvelopeBounds {
  Printed,  // P in [p_min, p_max] in the lambda*P and O*beta*P envelopes; forces strategic units online
  Box       // P in [0, p_max]; valid whether or not the unit is committed
};

struct StrategicConfig {
  std::vector<int> strategic;  // SG indices
  double beta_m_cap = 2.0;
  double beta_scc_cap = 2.0;
  std::map<int, double> beta_m_cap_unit;    // per SG index override
  std::map<int, double> beta_scc_cap_unit;
  double W = 10.0;
  EnvelopeBounds envelope = EnvelopeBounds::Printed;

  bool is_strategic(int g) const;
  double cap_m(int g) const;
  double cap_scc(int g) const;
};

struct UnboundedCap : Error {
  using Error::Error;
};
struct ZeroPrimal : Error {
  using Error::Error;
};

// price caps used by the envelopes
struct PriceCaps {
  double lambda_e = 0;
  std::map<int, std::vector<double>> lambda_scc;  // bus -> [t]
};

PriceCaps price_caps(const NetworkCase& c, const MarketConfig& cfg, const SccCoefficients& k,
                     const StrategicConfig& s);

struct DualIndex {
  std::vector<int> lam_e;
  std::map<int, std::vector<int>> lam_scc;
  std::vector<std::vector<int>> mu_min, mu_max, pi_rd, pi_ru, sig_st, sig_sh, psi_max, zeta_max;
  std::vector<std::pair<int, double>> objective;  // linear part of the dual objective
  double objective_const = 0;
  int n_rows = 0;
};

// Dual of the lower level with u relaxed to [0,1]. beta_m[g][t] / beta_scc[g][bus][t] give variable indices for
// strategic units (-1 or missing: bid multiplier fixed at 1). caps == nullptr leaves prices unbounded above.
DualIndex build_dual_ll(ModelIR& m, const NetworkCase& c, const MarketConfig& cfg, const SccCoefficients& k,
                        const std::vector<std::vector<int>>& beta_m,
                        const std::map<int, std::map<int, std::vector<int>>>& beta_scc, const PriceCaps* caps);

// standalone dual model (all multipliers 1), maximize
ModelIR build_dual_model(const NetworkCase& c, const MarketConfig& cfg, const SccCoefficients& k);

struct BilevelIndex {
  LlIndex ll;
  DualIndex dual;
  std::vector<std::vector<int>> beta_m;                  // [g][t], -1 for non-strategic
  std::map<int, std::map<int, std::vector<int>>> beta_scc;  // g -> bus -> [t]
  std::vector<std::vector<int>> z_re_e, z_bid_e;          // [g][t]
  std::map<int, std::map<int, std::vector<int>>> z_re_scc, z_bid_scc;
  PriceCaps caps;
};

ModelIR build_primal_dual_model(const NetworkCase& c, const MarketConfig& cfg, const SccCoefficients& k,
                                const StrategicConfig& s, BilevelIndex* index = nullptr);

struct DualSolution {
  std::vector<double> lambda_e;
  std::map<int, std::vector<double>> lambda_scc;
  Matrix mu_min, mu_max, pi_rd, pi_ru, sig_st, sig_sh, psi_max, zeta_max;
};

struct BilevelSolution {
  SolveStatus status = SolveStatus::Error;
  bool optimal = false;
  double mip_gap = 0, seconds = 0, objective = 0, W = 0;
  ClearingResult ll;  // schedule, prices from the dual side, per-agent accounts
  DualSolution dual;
  Matrix beta_m;                                     // [g][t], 1 for non-strategic
  std::map<int, std::map<int, std::vector<double>>> beta_scc;  // g -> bus -> [t]
  std::vector<std::vector<double>> z_re_e, z_bid_e;
  std::map<int, std::map<int, std::vector<double>>> z_re_scc, z_bid_scc;
  double ul_objective = 0;        // strategic profit as modelled (z terms)
  double strategic_profit = 0;    // after the reporting rule
  double primal_value = 0;        // LL cost with exact bid products
  double dual_value = 0;
  double dg = 0, r_dg = 0;        // from exact products
  double dg_model = 0, r_dg_model = 0;  // from the envelope variables
  double max_binary_envelope_error = 0;  // relative, over z with a binary factor
  std::vector<int> strategic;
};

BilevelSolution solve_strategic(const NetworkCase& c, const MarketConfig& cfg, const SccCoefficients& k,
                                const StrategicConfig& s);

struct SweepRow {
  double W = 0;
  bool ok = false;
  std::string error;
  double r_dg = 0, r_dg_model = 0, profit = 0, ul_objective = 0, scc_payment = 0;
  BilevelSolution solution;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  bool abs_rdg_nonincreasing = true;
  bool profit_nonincreasing = true;
};

SweepResult sweep_penalty(const NetworkCase& c, const MarketConfig& cfg, const SccCoefficients& k,
                          const StrategicConfig& s, std::vector<double> W_list);

double compute_dg_ratio(double primal_value, double dual_value);

}  // namespace sccm
