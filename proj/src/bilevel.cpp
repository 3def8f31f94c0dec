#include "sccm/bilevel.hpp"

#include <algorithm>
#include <cmath>

namespace sccm {

bool StrategicConfig::is_strategic(int g) const {
  return std::find(strategic.begin(), strategic.end(), g) != strategic.end();
}

double StrategicConfig::cap_m(int g) const {
  auto it = beta_m_cap_unit.find(g);
  return it != beta_m_cap_unit.end() ? it->second : beta_m_cap;
}

double StrategicConfig::cap_scc(int g) const {
  auto it = beta_scc_cap_unit.find(g);
  return it != beta_scc_cap_unit.end() ? it->second : beta_scc_cap;
}

double compute_dg_ratio(double primal_value, double dual_value) {
  if (primal_value == 0.0) throw ZeroPrimal("duality-gap ratio undefined for a zero primal value");
  return (primal_value - dual_value) / primal_value;
}

PriceCaps price_caps(const NetworkCase& c, const MarketConfig& cfg, const SccCoefficients& k,
                     const StrategicConfig& s) {
  PriceCaps caps;
  const int G = static_cast<int>(c.sgs.size());
  const int T = c.horizon();
  for (int g = 0; g < G; ++g) {
    double cap = s.is_strategic(g) ? s.cap_m(g) : 1.0;
    if (!std::isfinite(cap) || cap < 1.0) throw UnboundedCap("energy bid cap of " + c.sgs[g].id + " must be finite and >= 1");
    caps.lambda_e = std::max(caps.lambda_e, c.sgs[g].marginal_cost * cap);
  }
  for (const auto& spec : scc_rows(c, k, cfg)) {
    auto& v = caps.lambda_scc[spec.bus];
    v.assign(T, 0.0);
    for (int g = 0; g < G; ++g) {
      double kg = spec.coef->k_g[g];
      if (kg <= 0) continue;
      double cap = s.is_strategic(g) ? s.cap_scc(g) : 1.0;
      if (!std::isfinite(cap) || cap < 1.0) throw UnboundedCap("SCC bid cap of " + c.sgs[g].id + " must be finite and >= 1");
      for (int t = 0; t < T; ++t) v[t] = std::max(v[t], cap * cfg.offers.at(spec.bus, g, t) / kg);
    }
    for (double x : v)
      if (!std::isfinite(x)) throw UnboundedCap("SCC price cap at bus " + std::to_string(spec.bus) + " is not finite");
  }
  return caps;
}

static std::string nm(const std::string& fam, const std::string& id, int t) {
  return fam + "_" + id + "_" + std::to_string(t + 1);
}

DualIndex build_dual_ll(ModelIR& m, const NetworkCase& c, const MarketConfig& cfg, const SccCoefficients& k,
                        const std::vector<std::vector<int>>& beta_m,
                        const std::map<int, std::map<int, std::vector<int>>>& beta_scc, const PriceCaps* caps) {
  DualIndex d;
  const int G = static_cast<int>(c.sgs.size());
  const int C = static_cast<int>(c.ibrs.size());
  const int T = c.horizon();
  auto specs = scc_rows(c, k, cfg);

  for (int t = 0; t < T; ++t) {
    d.lam_e.push_back(m.add_var("lamE_" + std::to_string(t + 1), 0, caps ? caps->lambda_e : kInf));
    d.objective.push_back({d.lam_e[t], c.demand[t]});
  }
  for (const auto& s : specs) {
    auto& v = d.lam_scc[s.bus];
    for (int t = 0; t < T; ++t) {
      double ub = caps ? caps->lambda_scc.at(s.bus)[t] : kInf;
      v.push_back(m.add_var("lamS_b" + std::to_string(s.bus) + "_" + std::to_string(t + 1), 0, ub));
      double rhs = s.lim;
      for (int j = 0; j < C; ++j) rhs -= s.coef->k_c[j] * c.ibrs[j].alpha[t];
      d.objective.push_back({v[t], rhs});
    }
  }
  auto fam = [&](const char* name, std::vector<std::vector<int>>& out, int n, bool sg) {
    out.assign(n, std::vector<int>(T));
    for (int i = 0; i < n; ++i)
      for (int t = 0; t < T; ++t) out[i][t] = m.add_var(nm(name, sg ? c.sgs[i].id : c.ibrs[i].id, t), 0, kInf);
  };
  fam("mumin", d.mu_min, G, true);
  fam("mumax", d.mu_max, G, true);
  fam("pird", d.pi_rd, G, true);
  fam("piru", d.pi_ru, G, true);
  fam("sigst", d.sig_st, G, true);
  fam("sigsh", d.sig_sh, G, true);
  fam("psimax", d.psi_max, G, true);
  fam("zetamax", d.zeta_max, C, false);

  for (int g = 0; g < G; ++g) {
    const auto& s = c.sgs[g];
    for (int t = 0; t < T; ++t) {
      d.objective.push_back({d.psi_max[g][t], -1.0});
      d.objective.push_back({d.pi_rd[g][t], -s.ramp_down + (t == 0 ? s.p0 : 0.0)});
      d.objective.push_back({d.pi_ru[g][t], -s.ramp_up - (t == 0 ? s.p0 : 0.0)});
    }
    if (s.u0) {
      d.objective.push_back({d.sig_st[g][0], -s.startup_cost});
      d.objective.push_back({d.sig_sh[g][0], s.shutdown_cost});
    }
  }
  for (int j = 0; j < C; ++j)
    for (int t = 0; t < T; ++t) d.objective.push_back({d.zeta_max[j][t], -c.ibrs[j].alpha[t] * c.ibrs[j].p_max});

  // one dual row per primal variable: u, P, C^st, C^sh per SG-hour and P_c per IBR-hour
  for (int g = 0; g < G; ++g) {
    const auto& s = c.sgs[g];
    for (int t = 0; t < T; ++t) {
      const bool more = t + 1 < T;
      std::vector<std::pair<int, double>> r;
      double rhs = -s.no_load_cost;
      for (const auto& [bus, mat] : cfg.offers.by_bus) {
        double o = mat[g][t];
        if (o == 0.0) continue;
        int bv = -1;
        auto ig = beta_scc.find(g);
        if (ig != beta_scc.end()) {
          auto ib = ig->second.find(bus);
          if (ib != ig->second.end()) bv = ib->second[t];
        }
        if (bv >= 0) r.push_back({bv, o});
        else rhs -= o;
      }
      for (const auto& sp : specs) {
        double kg = sp.coef->k_g[g];
        if (kg != 0.0) r.push_back({d.lam_scc.at(sp.bus)[t], -kg});
      }
      r.push_back({d.mu_min[g][t], s.p_min});
      r.push_back({d.mu_max[g][t], -s.p_max});
      r.push_back({d.sig_st[g][t], s.startup_cost});
      r.push_back({d.sig_sh[g][t], -s.shutdown_cost});
      if (more) {
        r.push_back({d.sig_st[g][t + 1], -s.startup_cost});
        r.push_back({d.sig_sh[g][t + 1], s.shutdown_cost});
      }
      r.push_back({d.psi_max[g][t], 1.0});
      m.add_row(nm("du", s.id, t), r, RowSense::Ge, rhs);

      std::vector<std::pair<int, double>> p;
      double prhs = 0.0;
      int bm = (g < static_cast<int>(beta_m.size()) && !beta_m[g].empty()) ? beta_m[g][t] : -1;
      if (bm >= 0) p.push_back({bm, s.marginal_cost});
      else prhs = -s.marginal_cost;
      p.push_back({d.lam_e[t], -1.0});
      p.push_back({d.mu_min[g][t], -1.0});
      p.push_back({d.mu_max[g][t], 1.0});
      p.push_back({d.pi_rd[g][t], -1.0});
      p.push_back({d.pi_ru[g][t], 1.0});
      if (more) {
        p.push_back({d.pi_rd[g][t + 1], 1.0});
        p.push_back({d.pi_ru[g][t + 1], -1.0});
      }
      m.add_row(nm("dp", s.id, t), p, RowSense::Ge, prhs);
      m.add_row(nm("dcst", s.id, t), {{d.sig_st[g][t], -1.0}}, RowSense::Ge, -1.0);
      m.add_row(nm("dcsh", s.id, t), {{d.sig_sh[g][t], -1.0}}, RowSense::Ge, -1.0);
      d.n_rows += 4;
    }
  }
  for (int j = 0; j < C; ++j)
    for (int t = 0; t < T; ++t) {
      m.add_row(nm("dpc", c.ibrs[j].id, t), {{d.lam_e[t], -1.0}, {d.zeta_max[j][t], 1.0}}, RowSense::Ge,
                -c.ibrs[j].energy_bid);
      ++d.n_rows;
    }
  return d;
}

ModelIR build_dual_model(const NetworkCase& c, const MarketConfig& cfg, const SccCoefficients& k) {
  ModelIR m;
  m.maximize = true;
  auto d = build_dual_ll(m, c, cfg, k, {}, {}, nullptr);
  for (auto [v, a] : d.objective) m.vars[v].cost += a;
  m.obj_const = d.objective_const;
  return m;
}

ModelIR build_primal_dual_model(const NetworkCase& c, const MarketConfig& cfg, const SccCoefficients& k,
                                const StrategicConfig& s, BilevelIndex* index) {
  c.validate();
  const int G = static_cast<int>(c.sgs.size());
  const int T = c.horizon();
  for (int g : s.strategic)
    if (g < 0 || g >= G) throw Error("strategic unit index out of range");
  if (!(s.W > 0)) throw Error("penalty W must be > 0");

  BilevelIndex ix;
  ModelIR m;
  m.maximize = true;
  ix.ll = add_ll_primal(m, c, k, cfg, false);
  ix.caps = price_caps(c, cfg, k, s);

  ix.beta_m.assign(G, {});
  for (int g : s.strategic) {
    ix.beta_m[g].resize(T);
    for (int t = 0; t < T; ++t) ix.beta_m[g][t] = m.add_var(nm("betam", c.sgs[g].id, t), 1.0, s.cap_m(g));
    for (const auto& [bus, mat] : cfg.offers.by_bus) {
      bool any = false;
      for (int t = 0; t < T; ++t) any |= mat[g][t] > 0;
      if (!any) continue;
      auto& v = ix.beta_scc[g][bus];
      for (int t = 0; t < T; ++t)
        v.push_back(m.add_var(nm("betas_b" + std::to_string(bus), c.sgs[g].id, t), 1.0, s.cap_scc(g)));
    }
  }
  ix.dual = build_dual_ll(m, c, cfg, k, ix.beta_m, ix.beta_scc, &ix.caps);

  const double W = s.W;
  auto add_cost = [&](int v, double a) { m.vars[v].cost += a; };
  ix.z_re_e.assign(G, {});
  ix.z_bid_e.assign(G, {});
  const double lamE = ix.caps.lambda_e;
  const bool printed = s.envelope == EnvelopeBounds::Printed;

  for (int g = 0; g < G; ++g) {
    const auto& sg = c.sgs[g];
    const bool strat = s.is_strategic(g);
    for (int t = 0; t < T; ++t) {
      int u = ix.ll.u[g][t], P = ix.ll.P[g][t];
      // lower-level primal cost, weighted by -W
      double cu = sg.no_load_cost;
      for (const auto& [bus, mat] : cfg.offers.by_bus)
        if (!(strat && ix.beta_scc.count(g) && ix.beta_scc.at(g).count(bus))) cu += mat[g][t];
      add_cost(u, -W * cu);
      add_cost(ix.ll.cst[g][t], -W);
      add_cost(ix.ll.csh[g][t], -W);
      if (!strat) {
        add_cost(P, -W * sg.marginal_cost);
        continue;
      }
      // upper-level profit of the strategic unit
      add_cost(u, -sg.no_load_cost);
      add_cost(P, -sg.marginal_cost);
      add_cost(ix.ll.cst[g][t], -1.0);
      add_cost(ix.ll.csh[g][t], -1.0);

      const double xl = printed ? sg.p_min : 0.0;
      if (printed) m.vars[u].lb = 1.0;
      const double xu = sg.p_max;
      const std::string id = sg.id;
      int lam = ix.dual.lam_e[t];
      // z = lambda^E * P
      int z = m.add_var(nm("zReE", id, t), 0.0, lamE * xu);
      ix.z_re_e[g].push_back(z);
      add_cost(z, 1.0);
      m.add_row(nm("env1a_lo", id, t), {{z, 1.0}, {lam, -xl}}, RowSense::Ge, 0.0);
      m.add_row(nm("env1a_up", id, t), {{z, 1.0}, {P, -lamE}, {lam, -xl}}, RowSense::Le, -xl * lamE);
      m.add_row(nm("env1b_lo", id, t), {{z, 1.0}, {P, -lamE}, {lam, -xu}}, RowSense::Ge, -xu * lamE);
      m.add_row(nm("env1b_up", id, t), {{z, 1.0}, {lam, -xu}}, RowSense::Le, 0.0);

      // z = O^m * beta^m * P
      const double om = sg.marginal_cost;
      const double bc = s.cap_m(g);
      int bm = ix.beta_m[g][t];
      int zb = m.add_var(nm("zBidE", id, t), 0.0, om * bc * xu);
      ix.z_bid_e[g].push_back(zb);
      add_cost(zb, -W);
      m.add_row(nm("env4a", id, t), {{zb, 1.0}, {P, -om}, {bm, -om * xl}}, RowSense::Ge, -om * xl);
      m.add_row(nm("env4b", id, t), {{zb, 1.0}, {P, -om * bc}, {bm, -om * xu}}, RowSense::Ge, -om * xu * bc);
      m.add_row(nm("env4c", id, t), {{zb, 1.0}, {P, -om * bc}, {bm, -om * xl}}, RowSense::Le, -om * xl * bc);
      m.add_row(nm("env4d", id, t), {{zb, 1.0}, {P, -om}, {bm, -om * xu}}, RowSense::Le, -om * xu);

      // z = lambda^SCC * k * u
      for (int bus : ix.ll.scc_buses) {
        double kg = k.find(bus)->k_g[g];
        if (kg <= 0) continue;
        double cap = ix.caps.lambda_scc.at(bus)[t];
        int ls = ix.dual.lam_scc.at(bus)[t];
        std::string tg = "b" + std::to_string(bus);
        int zr = m.add_var(nm("zReS_" + tg, id, t), 0.0, cap * kg);
        ix.z_re_scc[g][bus].push_back(zr);
        add_cost(zr, 1.0);
        m.add_row(nm("env2a_" + tg, id, t), {{zr, 1.0}, {u, -cap * kg}}, RowSense::Le, 0.0);
        m.add_row(nm("env2b_lo_" + tg, id, t), {{zr, 1.0}, {ls, -kg}, {u, -cap * kg}}, RowSense::Ge, -cap * kg);
        m.add_row(nm("env2b_up_" + tg, id, t), {{zr, 1.0}, {ls, -kg}}, RowSense::Le, 0.0);
      }
      // z = O^SCC * beta^SCC * u
      if (ix.beta_scc.count(g))
        for (const auto& [bus, bv] : ix.beta_scc.at(g)) {
          double o = cfg.offers.at(bus, g, t);
          double cap = s.cap_scc(g);
          std::string tg = "b" + std::to_string(bus);
          int zs = m.add_var(nm("zBidS_" + tg, id, t), 0.0, o * cap);
          ix.z_bid_scc[g][bus].push_back(zs);
          add_cost(zs, -W);
          m.add_row(nm("env3a_" + tg, id, t), {{zs, 1.0}, {u, -o}}, RowSense::Ge, 0.0);
          m.add_row(nm("env3b_" + tg, id, t), {{zs, 1.0}, {u, -o * cap}, {bv[t], -o}}, RowSense::Ge, -o * cap);
          m.add_row(nm("env3c_" + tg, id, t), {{zs, 1.0}, {u, -o * cap}}, RowSense::Le, 0.0);
          m.add_row(nm("env3d_" + tg, id, t), {{zs, 1.0}, {u, -o}, {bv[t], -o}}, RowSense::Le, -o);
        }
    }
  }
  for (size_t j = 0; j < c.ibrs.size(); ++j)
    for (int t = 0; t < T; ++t) add_cost(ix.ll.pc[j][t], -W * c.ibrs[j].energy_bid);
  for (auto [v, a] : ix.dual.objective) add_cost(v, W * a);
  m.obj_const += W * ix.dual.objective_const;
  if (index) *index = ix;
  return m;
}

static double dual_objective(const DualIndex& d, const std::vector<double>& x) {
  double s = d.objective_const;
  for (auto [v, a] : d.objective) s += a * x[v];
  return s;
}

BilevelSolution solve_strategic(const NetworkCase& c, const MarketConfig& cfg, const SccCoefficients& k,
                                const StrategicConfig& s) {
  BilevelIndex ix;
  ModelIR m = build_primal_dual_model(c, cfg, k, s, &ix);
  auto res = solve(m, cfg.solver);
  if (!res.has_solution)
    throw SolverFailure(std::string("strategic model: ") + to_string(res.status));
  BilevelSolution out;
  out.status = res.status;
  out.optimal = res.status == SolveStatus::Optimal;
  out.mip_gap = res.mip_gap;
  out.seconds = res.seconds;
  out.W = s.W;
  out.strategic = s.strategic;
  std::vector<double> x = res.x;
  // polish at the incumbent commitment so that binary-factor products are exact
  auto lp = solve(fix_integers(m, res.x), cfg.solver);
  if (lp.status == SolveStatus::Optimal && lp.objective >= res.objective - 1e-9 * std::max(1.0, std::fabs(res.objective)))
    x = lp.x;
  out.objective = m.objective(x);

  const int G = ix.ll.G, T = ix.ll.T;
  out.ll = clearing_from(ix.ll, x);
  out.ll.status = res.status;
  out.ll.mip_gap = res.mip_gap;
  out.ll.hourly_cost = hourly_operating_cost(c, out.ll);
  out.ll.operating_cost = 0;
  for (double v : out.ll.hourly_cost) out.ll.operating_cost += v;

  auto grab = [&](const std::vector<std::vector<int>>& idx) {
    Matrix v(idx.size());
    for (size_t i = 0; i < idx.size(); ++i)
      for (int j : idx[i]) v[i].push_back(x[j]);
    return v;
  };
  for (int t = 0; t < T; ++t) out.dual.lambda_e.push_back(x[ix.dual.lam_e[t]]);
  for (const auto& [b, v] : ix.dual.lam_scc)
    for (int j : v) out.dual.lambda_scc[b].push_back(x[j]);
  out.dual.mu_min = grab(ix.dual.mu_min);
  out.dual.mu_max = grab(ix.dual.mu_max);
  out.dual.pi_rd = grab(ix.dual.pi_rd);
  out.dual.pi_ru = grab(ix.dual.pi_ru);
  out.dual.sig_st = grab(ix.dual.sig_st);
  out.dual.sig_sh = grab(ix.dual.sig_sh);
  out.dual.psi_max = grab(ix.dual.psi_max);
  out.dual.zeta_max = grab(ix.dual.zeta_max);
  out.ll.lambda_e = out.dual.lambda_e;
  out.ll.lambda_scc = out.dual.lambda_scc;

  out.beta_m.assign(G, std::vector<double>(T, 1.0));
  for (int g : s.strategic)
    for (int t = 0; t < T; ++t) out.beta_m[g][t] = x[ix.beta_m[g][t]];
  for (const auto& [g, mb] : ix.beta_scc)
    for (const auto& [b, v] : mb)
      for (int j : v) out.beta_scc[g][b].push_back(x[j]);
  out.z_re_e = grab(ix.z_re_e);
  out.z_bid_e = grab(ix.z_bid_e);
  auto grab3 = [&](const std::map<int, std::map<int, std::vector<int>>>& idx) {
    std::map<int, std::map<int, std::vector<double>>> r;
    for (const auto& [g, mb] : idx)
      for (const auto& [b, v] : mb)
        for (int j : v) r[g][b].push_back(x[j]);
    return r;
  };
  out.z_re_scc = grab3(ix.z_re_scc);
  out.z_bid_scc = grab3(ix.z_bid_scc);

  // accounts, exact lower-level cost, and the modelled cost
  double primal_exact = 0, primal_model = 0;
  out.ll.agents.clear();
  out.ll.consumer_scc_payment = out.ll.consumer_offer_payment = 0;
  double env_err = 0;
  auto rel = [](double a, double b) { return std::fabs(a - b) / std::max(1.0, std::fabs(b)); };
  for (int g = 0; g < G; ++g) {
    const auto& sg = c.sgs[g];
    const bool strat = s.is_strategic(g);
    AgentAccount a;
    a.id = sg.id;
    for (int t = 0; t < T; ++t) {
      int u = out.ll.u[g][t];
      double P = out.ll.P[g][t];
      a.no_load_cost += sg.no_load_cost * u;
      a.energy_cost += sg.marginal_cost * P;
      a.startup_cost += out.ll.c_st[g][t];
      a.shutdown_cost += out.ll.c_sh[g][t];
      a.energy_revenue += strat ? out.z_re_e[g][t] : out.dual.lambda_e[t] * P;
      for (int b : ix.ll.scc_buses) {
        double kg = k.find(b)->k_g[g];
        double exact = out.dual.lambda_scc[b][t] * kg * u;
        if (strat && kg > 0) {
          double z = out.z_re_scc.at(g).at(b)[t];
          env_err = std::max(env_err, rel(z, exact));
          a.scc_revenue += z;
        } else {
          a.scc_revenue += exact;
        }
      }
      double bid_exact = 0, bid_model = 0;
      for (const auto& [b, mat] : cfg.offers.by_bus) {
        double o = mat[g][t];
        bool var = strat && ix.beta_scc.count(g) && ix.beta_scc.at(g).count(b);
        double exact = o * (var ? out.beta_scc[g][b][t] : 1.0) * u;
        double model = var ? out.z_bid_scc[g][b][t] : exact;
        if (var) env_err = std::max(env_err, rel(model, exact));
        bid_exact += exact;
        bid_model += model;
      }
      a.scc_offer_payment += bid_exact;
      double common = sg.no_load_cost * u + out.ll.c_st[g][t] + out.ll.c_sh[g][t];
      double e_exact = sg.marginal_cost * out.beta_m[g][t] * P;
      double e_model = strat ? out.z_bid_e[g][t] : e_exact;
      primal_exact += common + bid_exact + e_exact;
      primal_model += common + bid_model + e_model;
    }
    out.ll.consumer_scc_payment += a.scc_revenue;
    out.ll.consumer_offer_payment += a.scc_offer_payment;
    out.ll.agents.push_back(a);
  }
  for (size_t j = 0; j < c.ibrs.size(); ++j)
    for (int t = 0; t < T; ++t) {
      primal_exact += c.ibrs[j].energy_bid * out.ll.p_ibr[j][t];
      primal_model += c.ibrs[j].energy_bid * out.ll.p_ibr[j][t];
    }
  out.max_binary_envelope_error = env_err;
  out.ll.cost = primal_exact;
  out.primal_value = primal_exact;
  out.dual_value = dual_objective(ix.dual, x);
  out.dg = out.primal_value - out.dual_value;
  out.r_dg = compute_dg_ratio(out.primal_value, out.dual_value);
  out.dg_model = primal_model - out.dual_value;
  out.r_dg_model = compute_dg_ratio(primal_model, out.dual_value);

  for (int g : s.strategic) out.ul_objective += out.ll.agents[g].profit();
  apply_scc_reporting_rule(out.ll, cfg.offers);
  for (int g : s.strategic) out.strategic_profit += out.ll.agents[g].profit();
  return out;
}

SweepResult sweep_penalty(const NetworkCase& c, const MarketConfig& cfg, const SccCoefficients& k,
                          const StrategicConfig& s, std::vector<double> W_list) {
  if (W_list.empty()) throw Error("empty penalty list");
  for (double w : W_list)
    if (!(w > 0)) throw Error("penalty values must be > 0");
  std::stable_sort(W_list.begin(), W_list.end());
  SweepResult out;
  for (double w : W_list) {
    SweepRow row;
    row.W = w;
    try {
      StrategicConfig sw = s;
      sw.W = w;
      row.solution = solve_strategic(c, cfg, k, sw);
      row.ok = true;
      row.r_dg = row.solution.r_dg;
      row.r_dg_model = row.solution.r_dg_model;
      row.profit = row.solution.strategic_profit;
      row.ul_objective = row.solution.ul_objective;
      row.scc_payment = row.solution.ll.consumer_scc_payment;
    } catch (const std::exception& e) {
      row.error = e.what();
    }
    out.rows.push_back(std::move(row));
  }
  const SweepRow* prev = nullptr;
  for (const auto& r : out.rows) {
    if (!r.ok) continue;
    if (prev) {
      double tol = 1e-6;
      if (std::fabs(r.r_dg) > std::fabs(prev->r_dg) + tol) out.abs_rdg_nonincreasing = false;
      if (r.ul_objective > prev->ul_objective + tol * std::max(1.0, std::fabs(prev->ul_objective)))
        out.profit_nonincreasing = false;
    }
    prev = &r;
  }
  return out;
}

}  // namespace sccm
