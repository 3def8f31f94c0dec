#include "sccm/market.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "sccm/grid.hpp"

namespace sccm {

double SccOffers::at(int bus, int g, int t) const {
  auto it = by_bus.find(bus);
  if (it == by_bus.end()) return 0.0;
  return it->second.at(g).at(t);
}

bool SccOffers::unit_has_offer(int g) const {
  for (const auto& [b, m] : by_bus)
    for (double v : m.at(g))
      if (v > 0) return true;
  return false;
}

double SccOffers::total() const {
  double s = 0;
  for (const auto& [b, m] : by_bus)
    for (const auto& row : m)
      for (double v : row) s += v;
  return s;
}

std::vector<SccRowSpec> scc_rows(const NetworkCase& c, const SccCoefficients& k, const MarketConfig& cfg) {
  std::vector<SccRowSpec> out;
  if (!cfg.include_scc) return out;
  std::vector<int> wanted = cfg.scc_buses.empty() ? k.critical_buses() : cfg.scc_buses;
  for (int b : wanted) {
    const BusCoefficients* bc = k.find(b);
    if (!bc) throw MissingCoefficients("no SCC coefficients for bus " + std::to_string(b));
    if (!bc->critical) continue;
    if (bc->k_g.size() != c.sgs.size() || bc->k_c.size() != c.ibrs.size())
      throw MissingCoefficients("SCC coefficients for bus " + std::to_string(b) + " do not match the fleet");
    c.bus_index(b);
    auto it = cfg.i_lim.find(b);
    out.push_back({b, it != cfg.i_lim.end() ? it->second : bc->i_lim, bc});
  }
  return out;
}

static std::string tag(const std::string& fam, const std::string& id, int t) {
  return fam + "_" + id + "_" + std::to_string(t + 1);
}

LlIndex add_ll_primal(ModelIR& m, const NetworkCase& c, const SccCoefficients& k, const MarketConfig& cfg,
                      bool relax_u, const std::set<std::pair<int, int>>& zeroed) {
  LlIndex ix;
  ix.G = static_cast<int>(c.sgs.size());
  ix.C = static_cast<int>(c.ibrs.size());
  ix.T = c.horizon();
  for (const auto& u : c.ibrs)
    if (static_cast<int>(u.alpha.size()) != ix.T)
      throw HorizonMismatch("capacity factor series of " + u.id + " does not match the demand horizon");
  for (const auto& [b, mat] : cfg.offers.by_bus) {
    if (static_cast<int>(mat.size()) != ix.G) throw HorizonMismatch("SCC offer table has wrong unit count");
    for (const auto& row : mat)
      if (static_cast<int>(row.size()) != ix.T) throw HorizonMismatch("SCC offer table has wrong horizon");
  }
  auto specs = scc_rows(c, k, cfg);
  const int G = ix.G, C = ix.C, T = ix.T;
  ix.u.assign(G, std::vector<int>(T));
  ix.P = ix.cst = ix.csh = ix.u;
  ix.pc.assign(C, std::vector<int>(T));
  for (int g = 0; g < G; ++g)
    for (int t = 0; t < T; ++t) {
      const auto& id = c.sgs[g].id;
      ix.u[g][t] = m.add_var(tag("u", id, t), 0, 1, 0, !relax_u);
      ix.P[g][t] = m.add_var(tag("p", id, t), 0, kInf);
      ix.cst[g][t] = m.add_var(tag("cst", id, t), 0, kInf);
      ix.csh[g][t] = m.add_var(tag("csh", id, t), 0, kInf);
    }
  for (int j = 0; j < C; ++j)
    for (int t = 0; t < T; ++t) ix.pc[j][t] = m.add_var(tag("pc", c.ibrs[j].id, t), 0, kInf);

  for (const auto& s : specs) {
    ix.scc_buses.push_back(s.bus);
    ix.scc_lim[s.bus] = s.lim;
    for (int t = 0; t < T; ++t) {
      double rhs = s.lim;
      for (int j = 0; j < C; ++j) rhs -= s.coef->k_c[j] * c.ibrs[j].alpha[t];
      std::vector<std::pair<int, double>> row;
      for (int g = 0; g < G; ++g) {
        double kg = zeroed.count({s.bus, g}) ? 0.0 : s.coef->k_g[g];
        if (kg != 0.0) row.push_back({ix.u[g][t], kg});
      }
      ix.scc_row[s.bus].push_back(m.add_row("scc_b" + std::to_string(s.bus) + "_" + std::to_string(t + 1), row,
                                            RowSense::Ge, rhs));
      ix.scc_rhs[s.bus].push_back(rhs);
    }
  }
  for (int t = 0; t < T; ++t) {
    std::vector<std::pair<int, double>> row;
    for (int g = 0; g < G; ++g) row.push_back({ix.P[g][t], 1.0});
    for (int j = 0; j < C; ++j) row.push_back({ix.pc[j][t], 1.0});
    ix.bal_row.push_back(m.add_row("bal_" + std::to_string(t + 1), row, RowSense::Eq, c.demand[t]));
  }
  for (int g = 0; g < G; ++g) {
    const auto& s = c.sgs[g];
    for (int t = 0; t < T; ++t) {
      int u = ix.u[g][t], p = ix.P[g][t];
      m.add_row(tag("pmin", s.id, t), {{p, 1.0}, {u, -s.p_min}}, RowSense::Ge, 0.0);
      m.add_row(tag("pmax", s.id, t), {{u, s.p_max}, {p, -1.0}}, RowSense::Ge, 0.0);
      if (t == 0) {
        m.add_row(tag("rd", s.id, t), {{p, 1.0}}, RowSense::Ge, s.p0 - s.ramp_down);
        m.add_row(tag("ru", s.id, t), {{p, -1.0}}, RowSense::Ge, -s.p0 - s.ramp_up);
        m.add_row(tag("st", s.id, t), {{ix.cst[g][t], 1.0}, {u, -s.startup_cost}}, RowSense::Ge,
                  -s.startup_cost * s.u0);
        m.add_row(tag("sh", s.id, t), {{ix.csh[g][t], 1.0}, {u, s.shutdown_cost}}, RowSense::Ge,
                  s.shutdown_cost * s.u0);
      } else {
        int pp = ix.P[g][t - 1], up = ix.u[g][t - 1];
        m.add_row(tag("rd", s.id, t), {{p, 1.0}, {pp, -1.0}}, RowSense::Ge, -s.ramp_down);
        m.add_row(tag("ru", s.id, t), {{pp, 1.0}, {p, -1.0}}, RowSense::Ge, -s.ramp_up);
        m.add_row(tag("st", s.id, t), {{ix.cst[g][t], 1.0}, {u, -s.startup_cost}, {up, s.startup_cost}},
                  RowSense::Ge, 0.0);
        m.add_row(tag("sh", s.id, t), {{ix.csh[g][t], 1.0}, {u, s.shutdown_cost}, {up, -s.shutdown_cost}},
                  RowSense::Ge, 0.0);
      }
    }
  }
  for (int j = 0; j < C; ++j)
    for (int t = 0; t < T; ++t)
      m.add_row(tag("ibrmax", c.ibrs[j].id, t), {{ix.pc[j][t], 1.0}}, RowSense::Le,
                c.ibrs[j].alpha[t] * c.ibrs[j].p_max);
  return ix;
}

static void set_competitive_costs(ModelIR& m, const LlIndex& ix, const NetworkCase& c, const MarketConfig& cfg) {
  for (int g = 0; g < ix.G; ++g)
    for (int t = 0; t < ix.T; ++t) {
      double cu = c.sgs[g].no_load_cost;
      for (const auto& [b, mat] : cfg.offers.by_bus) cu += mat[g][t];
      m.vars[ix.u[g][t]].cost = cu;
      m.vars[ix.P[g][t]].cost = c.sgs[g].marginal_cost;
      m.vars[ix.cst[g][t]].cost = 1.0;
      m.vars[ix.csh[g][t]].cost = 1.0;
    }
  for (int j = 0; j < ix.C; ++j)
    for (int t = 0; t < ix.T; ++t) m.vars[ix.pc[j][t]].cost = c.ibrs[j].energy_bid;
}

static ModelIR build_model(const NetworkCase& c, const MarketConfig& cfg, const SccCoefficients& k, LlIndex& ix,
                           const std::set<std::pair<int, int>>& zeroed = {}) {
  ModelIR m;
  ix = add_ll_primal(m, c, k, cfg, false, zeroed);
  set_competitive_costs(m, ix, c, cfg);
  return m;
}

ModelIR build_competitive_model(const NetworkCase& c, const MarketConfig& cfg, const SccCoefficients& k) {
  LlIndex ix;
  return build_model(c, cfg, k, ix);
}

static std::string diagnose(const NetworkCase& c, const ModelIR& m, const LlIndex& ix) {
  std::ostringstream os;
  int bad = 0;
  for (int b : ix.scc_buses)
    for (int t = 0; t < ix.T; ++t) {
      const auto& row = m.rows[ix.scc_row.at(b)[t]];
      double best = 0;
      for (auto [j, a] : row.coefs) best += std::max(0.0, a);
      if (best < row.rhs - 1e-9) {
        os << (bad++ ? ", " : " ") << "bus " << b << " hour " << t + 1;
      }
    }
  if (bad) return "SCC requirement unattainable even with every SG online at:" + os.str();
  (void)c;
  return "no commitment satisfies the energy and unit constraints (binding SCC rows: " +
         std::to_string(ix.scc_buses.size()) + " buses)";
}

ClearingResult clearing_from(const LlIndex& ix, const std::vector<double>& x) {
  ClearingResult r;
  const int G = ix.G, C = ix.C, T = ix.T;
  r.u.assign(G, std::vector<int>(T));
  r.P.assign(G, std::vector<double>(T));
  r.c_st = r.c_sh = r.P;
  r.p_ibr.assign(C, std::vector<double>(T));
  for (int g = 0; g < G; ++g)
    for (int t = 0; t < T; ++t) {
      r.u[g][t] = static_cast<int>(std::lround(x[ix.u[g][t]]));
      r.P[g][t] = x[ix.P[g][t]];
      r.c_st[g][t] = x[ix.cst[g][t]];
      r.c_sh[g][t] = x[ix.csh[g][t]];
    }
  for (int j = 0; j < C; ++j)
    for (int t = 0; t < T; ++t) r.p_ibr[j][t] = x[ix.pc[j][t]];
  return r;
}

std::vector<double> hourly_operating_cost(const NetworkCase& c, const ClearingResult& r) {
  const int T = c.horizon();
  std::vector<double> h(T, 0.0);
  for (size_t g = 0; g < c.sgs.size(); ++g)
    for (int t = 0; t < T; ++t)
      h[t] += c.sgs[g].no_load_cost * r.u[g][t] + c.sgs[g].marginal_cost * r.P[g][t] + r.c_st[g][t] + r.c_sh[g][t];
  for (size_t j = 0; j < c.ibrs.size(); ++j)
    for (int t = 0; t < T; ++t) h[t] += c.ibrs[j].energy_bid * r.p_ibr[j][t];
  return h;
}

static ClearingResult clear(const NetworkCase& c, const MarketConfig& cfg, const SccCoefficients& k,
                            const std::set<std::pair<int, int>>& zeroed, bool with_duals) {
  c.validate();
  LlIndex ix;
  ModelIR m = build_model(c, cfg, k, ix, zeroed);
  auto res = solve(m, cfg.solver);
  if (res.status == SolveStatus::Infeasible) throw InfeasibleMarket(diagnose(c, m, ix));
  if (!res.has_solution) throw SolverFailure(std::string("market clearing: ") + to_string(res.status));

  ClearingResult r;
  std::vector<double> x = res.x;
  std::vector<double> duals;
  if (with_duals) {
    // restricted LP at the incumbent commitment for prices
    auto lp = solve(fix_integers(m, res.x), cfg.solver);
    if (lp.status != SolveStatus::Optimal) throw SolverFailure("restricted LP at fixed commitment did not solve");
    x = lp.x;
    duals = lp.duals;
  }
  r = clearing_from(ix, x);
  r.status = res.status;
  r.mip_gap = res.mip_gap;
  r.cost = m.objective(x);
  r.hourly_cost = hourly_operating_cost(c, r);
  r.operating_cost = 0;
  for (double v : r.hourly_cost) r.operating_cost += v;
  const int T = ix.T, G = ix.G;
  r.lambda_e.assign(T, 0.0);
  if (!duals.empty())
    for (int t = 0; t < T; ++t) r.lambda_e[t] = std::max(cfg.energy_price_floor, duals[ix.bal_row[t]]);
  for (int b : ix.scc_buses) {
    auto& v = r.lambda_scc[b];
    v.assign(T, 0.0);
    if (!duals.empty())
      for (int t = 0; t < T; ++t) v[t] = std::max(0.0, duals[ix.scc_row.at(b)[t]]);
  }
  for (int g = 0; g < G; ++g) {
    AgentAccount a;
    a.id = c.sgs[g].id;
    for (int t = 0; t < T; ++t) {
      a.energy_revenue += r.lambda_e[t] * r.P[g][t];
      for (int b : ix.scc_buses) a.scc_revenue += r.lambda_scc[b][t] * k.find(b)->k_g[g] * r.u[g][t];
      for (const auto& [b, mat] : cfg.offers.by_bus) a.scc_offer_payment += mat[g][t] * r.u[g][t];
      a.no_load_cost += c.sgs[g].no_load_cost * r.u[g][t];
      a.energy_cost += c.sgs[g].marginal_cost * r.P[g][t];
      a.startup_cost += r.c_st[g][t];
      a.shutdown_cost += r.c_sh[g][t];
    }
    r.consumer_scc_payment += a.scc_revenue;
    r.consumer_offer_payment += a.scc_offer_payment;
    r.agents.push_back(a);
  }
  return r;
}

ClearingResult solve_competitive(const NetworkCase& c, const MarketConfig& cfg, const SccCoefficients& k) {
  return clear(c, cfg, k, {}, true);
}

Matrix schedule_scc(const NetworkCase& c, const std::vector<std::vector<int>>& u) {
  const int T = c.horizon();
  const int n = static_cast<int>(c.buses.size());
  Matrix out(n, std::vector<double>(T));
  for (int t = 0; t < T; ++t) {
    std::vector<int> ut(c.sgs.size());
    for (size_t g = 0; g < c.sgs.size(); ++g) ut[g] = u[g][t];
    auto s = exact_scc_or_zero(c, ut, c.alpha_at(t));
    for (int b = 0; b < n; ++b) out[b][t] = s[b];
  }
  return out;
}

static std::map<int, double> limits_or_monitored(const NetworkCase& c, const std::map<int, double>& i_lim) {
  if (!i_lim.empty()) return i_lim;
  std::map<int, double> out;
  for (const auto& b : c.buses)
    if (b.monitored) out[b.id] = b.i_lim;
  return out;
}

std::vector<int> identify_critical_buses(const NetworkCase& c, const MarketConfig& cfg_without_scc,
                                         const std::map<int, double>& i_lim) {
  MarketConfig cfg = cfg_without_scc;
  cfg.include_scc = false;
  auto r = clear(c, cfg, SccCoefficients{}, {}, false);
  auto ex = schedule_scc(c, r.u);
  std::vector<int> out;
  for (const auto& [bus, lim] : limits_or_monitored(c, i_lim)) {
    const auto& row = ex[c.bus_index(bus)];
    if (*std::min_element(row.begin(), row.end()) < lim) out.push_back(bus);
  }
  return out;
}

double SccAudit::min_over(const std::vector<int>& bus_ids) const {
  double m = kInf;
  for (const auto& r : rows)
    if (bus_ids.empty() || std::find(bus_ids.begin(), bus_ids.end(), r.bus) != bus_ids.end())
      m = std::min(m, r.min_exact);
  return m;
}

SccAudit audit_schedule(const NetworkCase& c, const SccCoefficients& k, const ClearingResult& r,
                        const std::map<int, double>& i_lim) {
  SccAudit a;
  a.exact = schedule_scc(c, r.u);
  a.clearing = r;
  const int T = c.horizon();
  for (const auto& [bus, lim] : limits_or_monitored(c, i_lim)) {
    AuditRow row;
    row.bus = bus;
    row.i_lim = lim;
    const auto& ex = a.exact[c.bus_index(bus)];
    auto it = std::min_element(ex.begin(), ex.end());
    row.min_exact = *it;
    row.hour_exact = static_cast<int>(it - ex.begin());
    row.min_approx = std::nan("");
    const BusCoefficients* bc = k.find(bus);
    if (bc && bc->critical) {
      row.min_approx = kInf;
      for (int t = 0; t < T; ++t) {
        std::vector<int> ut(c.sgs.size());
        for (size_t g = 0; g < c.sgs.size(); ++g) ut[g] = r.u[g][t];
        double v = approx_scc(*bc, k.pairs, ut, c.alpha_at(t));
        if (v < row.min_approx) {
          row.min_approx = v;
          row.hour_approx = t;
        }
      }
    }
    row.secure = row.min_exact >= lim;
    a.rows.push_back(row);
  }
  return a;
}

SccAudit min_scc_audit(const NetworkCase& c, const SccCoefficients& k, const MarketConfig& cfg,
                       const std::map<int, double>& i_lim) {
  MarketConfig mc = cfg;
  mc.include_scc = true;
  auto r = solve_competitive(c, mc, k);
  return audit_schedule(c, k, r, i_lim);
}

SccOffers price_scc_offers(const NetworkCase& c, const MarketConfig& cfg, const SccCoefficients& k) {
  MarketConfig base_cfg = cfg;
  base_cfg.include_scc = true;
  base_cfg.offers = {};
  auto specs = scc_rows(c, k, base_cfg);
  auto base = clear(c, base_cfg, k, {}, false);
  const int G = static_cast<int>(c.sgs.size());
  const int T = c.horizon();
  const double noise = 2.0 * std::max(cfg.solver.mip_gap, 1e-9) * std::fabs(base.operating_cost);

  SccOffers offers;
  for (const auto& s : specs) {
    auto& mat = offers.by_bus[s.bus];
    mat.assign(G, std::vector<double>(T, 0.0));
    std::vector<double> rhs(T, s.lim);
    for (int t = 0; t < T; ++t)
      for (size_t j = 0; j < c.ibrs.size(); ++j) rhs[t] -= s.coef->k_c[j] * c.ibrs[j].alpha[t];
    for (int g = 0; g < G; ++g) {
      if (s.coef->k_g[g] <= 0.0) continue;
      // base schedule still secure without this contribution: the counterfactual optimum is the base
      bool still_ok = true;
      for (int t = 0; t < T && still_ok; ++t) {
        double lhs = 0;
        for (int h = 0; h < G; ++h)
          if (h != g) lhs += s.coef->k_g[h] * base.u[h][t];
        if (lhs < rhs[t] - 1e-9) still_ok = false;
      }
      if (still_ok) continue;

      ClearingResult cf;
      try {
        cf = clear(c, base_cfg, k, {{s.bus, g}}, false);
      } catch (const InfeasibleMarket&) {
        // cheapest recourse: the highest limit the remaining units can meet in every hour
        double attainable = kInf;
        for (int t = 0; t < T; ++t) {
          double best = 0;
          for (int h = 0; h < G; ++h)
            if (h != g) best += s.coef->k_g[h];
          attainable = std::min(attainable, best + (s.lim - rhs[t]));
        }
        MarketConfig rc = base_cfg;
        rc.i_lim[s.bus] = std::min(s.lim, attainable);
        try {
          cf = clear(c, rc, k, {{s.bus, g}}, false);
          offers.flags.push_back("unit " + c.sgs[g].id + " bus " + std::to_string(s.bus) +
                                 ": counterfactual infeasible, priced against relaxed limit " +
                                 std::to_string(rc.i_lim[s.bus]));
        } catch (const InfeasibleMarket&) {
          offers.flags.push_back("unit " + c.sgs[g].id + " bus " + std::to_string(s.bus) +
                                 ": no feasible recourse, offer left at zero");
          continue;
        }
      }
      if (cf.operating_cost - base.operating_cost <= noise) continue;
      for (int t = 0; t < T; ++t) mat[g][t] = std::max(0.0, cf.hourly_cost[t] - base.hourly_cost[t]);
    }
  }
  return offers;
}

void apply_scc_reporting_rule(ClearingResult& r, const SccOffers& offers) {
  r.consumer_scc_payment = 0;
  for (size_t g = 0; g < r.agents.size(); ++g) {
    if (!offers.unit_has_offer(static_cast<int>(g))) r.agents[g].scc_revenue = 0;
    r.consumer_scc_payment += r.agents[g].scc_revenue;
  }
}

}  // namespace sccm
