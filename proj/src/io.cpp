#include "sccm/io.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace sccm {

namespace fs = std::filesystem;

namespace {

// reads fields while recording problems instead of stopping at the first one
struct Reader {
  std::vector<std::string> issues;

  const json* field(const json& obj, const std::string& path, const char* key, bool required) {
    if (!obj.is_object()) {
      issues.push_back(path + ": expected an object");
      return nullptr;
    }
    auto it = obj.find(key);
    if (it == obj.end()) {
      if (required) issues.push_back(path + "/" + key + ": missing");
      return nullptr;
    }
    return &*it;
  }

  double num(const json& obj, const std::string& path, const char* key, double def, bool required = true) {
    const json* v = field(obj, path, key, required);
    if (!v) return def;
    if (!v->is_number()) {
      issues.push_back(path + "/" + key + ": expected a number");
      return def;
    }
    return v->get<double>();
  }

  int integer(const json& obj, const std::string& path, const char* key, int def, bool required = true) {
    const json* v = field(obj, path, key, required);
    if (!v) return def;
    if (!v->is_number_integer()) {
      issues.push_back(path + "/" + key + ": expected an integer");
      return def;
    }
    return v->get<int>();
  }

  bool boolean(const json& obj, const std::string& path, const char* key, bool def) {
    const json* v = field(obj, path, key, false);
    if (!v) return def;
    if (!v->is_boolean()) {
      issues.push_back(path + "/" + key + ": expected true or false");
      return def;
    }
    return v->get<bool>();
  }

  std::string str(const json& obj, const std::string& path, const char* key, bool required = true) {
    const json* v = field(obj, path, key, required);
    if (!v) return {};
    if (!v->is_string()) {
      issues.push_back(path + "/" + key + ": expected a string");
      return {};
    }
    return v->get<std::string>();
  }

  std::vector<double> series(const json& obj, const std::string& path, const char* key) {
    std::vector<double> out;
    const json* v = field(obj, path, key, true);
    if (!v) return out;
    if (!v->is_array()) {
      issues.push_back(path + "/" + key + ": expected an array of numbers");
      return out;
    }
    for (size_t i = 0; i < v->size(); ++i) {
      if (!(*v)[i].is_number()) {
        issues.push_back(path + "/" + key + "/" + std::to_string(i) + ": expected a number");
        out.push_back(0.0);
      } else {
        out.push_back((*v)[i].get<double>());
      }
    }
    return out;
  }

  const json* array(const json& obj, const std::string& path, const char* key) {
    const json* v = field(obj, path, key, true);
    if (v && !v->is_array()) {
      issues.push_back(path + "/" + key + ": expected an array");
      return nullptr;
    }
    return v;
  }
};

std::string fmt(double v) {
  if (v == 0.0) return "0";  // folds -0
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::string csv_head(const std::string& cols) { return "# schema_version=" + std::to_string(kSchemaVersion) + "\n" + cols + "\n"; }

double round_to(double v, double q) { return std::round(v / q) * q; }

}  // namespace

NetworkCase case_from_json(const json& j) {
  if (!j.is_object()) throw ValidationError({": case file must hold a JSON object"});
  auto sv = j.find("schema_version");
  if (sv == j.end()) throw SchemaVersionError("case file has no schema_version");
  if (!sv->is_number_integer() || sv->get<int>() != kSchemaVersion)
    throw SchemaVersionError("unsupported case schema_version " + sv->dump() + " (supported: " +
                             std::to_string(kSchemaVersion) + ")");
  Reader rd;
  NetworkCase c;
  c.name = rd.str(j, "", "name", false);
  c.base_mva = rd.num(j, "", "base_mva", 100.0, false);
  c.nominal_voltage = rd.num(j, "", "nominal_voltage", 1.0, false);
  c.demand = rd.series(j, "", "demand");

  if (const json* a = rd.array(j, "", "buses"))
    for (size_t i = 0; i < a->size(); ++i) {
      std::string p = "/buses/" + std::to_string(i);
      const json& o = (*a)[i];
      Bus b;
      b.id = rd.integer(o, p, "id", 0);
      b.monitored = rd.boolean(o, p, "monitored", true);
      b.i_lim = rd.num(o, p, "i_lim", 0.0, b.monitored);
      b.shunt_b = rd.num(o, p, "shunt_b", 0.0, false);
      c.buses.push_back(b);
    }
  if (const json* a = rd.array(j, "", "branches"))
    for (size_t i = 0; i < a->size(); ++i) {
      std::string p = "/branches/" + std::to_string(i);
      const json& o = (*a)[i];
      Branch b;
      b.from = rd.integer(o, p, "from", 0);
      b.to = rd.integer(o, p, "to", 0);
      b.x = rd.num(o, p, "x", 0.0);
      b.r = rd.num(o, p, "r", 0.0, false);
      c.branches.push_back(b);
    }
  if (const json* a = rd.array(j, "", "sync_gens"))
    for (size_t i = 0; i < a->size(); ++i) {
      std::string p = "/sync_gens/" + std::to_string(i);
      const json& o = (*a)[i];
      SyncGen g;
      g.id = rd.str(o, p, "id");
      g.bus = rd.integer(o, p, "bus", 0);
      g.no_load_cost = rd.num(o, p, "no_load_cost", 0.0);
      g.marginal_cost = rd.num(o, p, "marginal_cost", 0.0);
      g.startup_cost = rd.num(o, p, "startup_cost", 0.0);
      g.shutdown_cost = rd.num(o, p, "shutdown_cost", 0.0);
      g.p_min = rd.num(o, p, "p_min", 0.0);
      g.p_max = rd.num(o, p, "p_max", 0.0);
      g.ramp_down = rd.num(o, p, "ramp_down", 0.0);
      g.ramp_up = rd.num(o, p, "ramp_up", 0.0);
      g.u0 = rd.integer(o, p, "u0", 0);
      g.p0 = rd.num(o, p, "p0", 0.0);
      g.x_internal = rd.num(o, p, "x_internal", 0.0);
      g.scc_injection = rd.num(o, p, "scc_injection", -1.0, false);
      if (g.scc_injection < 0 && g.x_internal > 0) g.scc_injection = c.nominal_voltage / g.x_internal;
      else if (g.scc_injection < 0) g.scc_injection = 0.0;
      g.strategic = rd.boolean(o, p, "strategic", false);
      c.sgs.push_back(g);
    }
  if (const json* a = rd.array(j, "", "ibr_units"))
    for (size_t i = 0; i < a->size(); ++i) {
      std::string p = "/ibr_units/" + std::to_string(i);
      const json& o = (*a)[i];
      IbrUnit u;
      u.id = rd.str(o, p, "id");
      u.bus = rd.integer(o, p, "bus", 0);
      u.p_max = rd.num(o, p, "p_max", 0.0);
      u.energy_bid = rd.num(o, p, "energy_bid", 0.0);
      u.scc_injection = rd.num(o, p, "scc_injection", 1.0, false);
      u.alpha = rd.series(o, p, "capacity_factor");
      c.ibrs.push_back(u);
    }
  if (rd.issues.empty()) {
    auto more = c.check();
    rd.issues.insert(rd.issues.end(), more.begin(), more.end());
  }
  if (!rd.issues.empty()) throw ValidationError(rd.issues);
  return c;
}

json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ValidationError({path + ": " + e.what()});
  }
}

NetworkCase load_case(const std::string& path) { return case_from_json(read_json(path)); }

json case_to_json(const NetworkCase& c) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["name"] = c.name;
  j["base_mva"] = c.base_mva;
  j["nominal_voltage"] = c.nominal_voltage;
  j["buses"] = json::array();
  for (const auto& b : c.buses)
    j["buses"].push_back({{"id", b.id}, {"monitored", b.monitored}, {"i_lim", b.i_lim}, {"shunt_b", b.shunt_b}});
  j["branches"] = json::array();
  for (const auto& b : c.branches) j["branches"].push_back({{"from", b.from}, {"to", b.to}, {"x", b.x}, {"r", b.r}});
  j["sync_gens"] = json::array();
  for (const auto& g : c.sgs)
    j["sync_gens"].push_back({{"id", g.id},
                              {"bus", g.bus},
                              {"no_load_cost", g.no_load_cost},
                              {"marginal_cost", g.marginal_cost},
                              {"startup_cost", g.startup_cost},
                              {"shutdown_cost", g.shutdown_cost},
                              {"p_min", g.p_min},
                              {"p_max", g.p_max},
                              {"ramp_down", g.ramp_down},
                              {"ramp_up", g.ramp_up},
                              {"u0", g.u0},
                              {"p0", g.p0},
                              {"x_internal", g.x_internal},
                              {"scc_injection", g.scc_injection},
                              {"strategic", g.strategic}});
  j["ibr_units"] = json::array();
  for (const auto& u : c.ibrs)
    j["ibr_units"].push_back({{"id", u.id},
                              {"bus", u.bus},
                              {"p_max", u.p_max},
                              {"energy_bid", u.energy_bid},
                              {"scc_injection", u.scc_injection},
                              {"capacity_factor", u.alpha}});
  j["demand"] = c.demand;
  return j;
}

void write_atomic(const std::string& path, const std::string& text) {
  fs::path p(path);
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  fs::path tmp = p;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + tmp.string());
    out << text;
    out.flush();
    if (!out) throw Error("write failed for " + tmp.string());
  }
  fs::rename(tmp, p);
}

void write_json(const std::string& path, const json& j) { write_atomic(path, j.dump(1) + "\n"); }

json coefficients_to_json(const NetworkCase& c, const SccCoefficients& k) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["kind"] = "scc_coefficients";
  j["with_pairs"] = k.with_pairs;
  j["pairs"] = json::array();
  for (auto [a, b] : k.pairs) j["pairs"].push_back({c.sgs.at(a).id, c.sgs.at(b).id});
  j["warnings"] = k.warnings;
  j["buses"] = json::array();
  for (const auto& b : k.buses) {
    json kg = json::object(), kc = json::object();
    for (size_t g = 0; g < b.k_g.size(); ++g) kg[c.sgs[g].id] = b.k_g[g];
    for (size_t i = 0; i < b.k_c.size(); ++i) kc[c.ibrs[i].id] = b.k_c[i];
    j["buses"].push_back({{"bus", b.bus},
                          {"i_lim", b.i_lim},
                          {"critical", b.critical},
                          {"k_g", kg},
                          {"k_c", kc},
                          {"k_m", b.k_m},
                          {"objective", b.objective},
                          {"train_type1", b.train_type1},
                          {"train_type2", b.train_type2}});
  }
  return j;
}

static void check_kind(const json& j, const char* kind) {
  if (!j.contains("schema_version") || j["schema_version"] != kSchemaVersion)
    throw SchemaVersionError(std::string("unsupported or missing schema_version in ") + kind + " file");
  if (!j.contains("kind") || j["kind"] != kind) throw ValidationError({std::string("/kind: expected ") + kind});
}

SccCoefficients coefficients_from_json(const NetworkCase& c, const json& j) {
  check_kind(j, "scc_coefficients");
  SccCoefficients k;
  try {
    k.with_pairs = j.at("with_pairs").get<bool>();
    for (const auto& p : j.at("pairs"))
      k.pairs.push_back({c.sg_index(p.at(0).get<std::string>()), c.sg_index(p.at(1).get<std::string>())});
    for (const auto& w : j.at("warnings")) k.warnings.push_back(w.get<std::string>());
    for (const auto& o : j.at("buses")) {
      BusCoefficients b;
      b.bus = o.at("bus").get<int>();
      c.bus_index(b.bus);
      b.i_lim = o.at("i_lim").get<double>();
      b.critical = o.at("critical").get<bool>();
      b.k_g.assign(c.sgs.size(), 0.0);
      b.k_c.assign(c.ibrs.size(), 0.0);
      for (const auto& g : c.sgs)
        if (!o.at("k_g").contains(g.id))
          throw MissingCoefficients("bus " + std::to_string(b.bus) + " has no coefficient for " + g.id);
      for (const auto& u : c.ibrs)
        if (!o.at("k_c").contains(u.id))
          throw MissingCoefficients("bus " + std::to_string(b.bus) + " has no coefficient for " + u.id);
      for (auto it = o.at("k_g").begin(); it != o.at("k_g").end(); ++it) b.k_g[c.sg_index(it.key())] = it->get<double>();
      for (auto it = o.at("k_c").begin(); it != o.at("k_c").end(); ++it) {
        bool found = false;
        for (size_t i = 0; i < c.ibrs.size(); ++i)
          if (c.ibrs[i].id == it.key()) {
            b.k_c[i] = it->get<double>();
            found = true;
          }
        if (!found) throw Error("unknown IBR id " + it.key());
      }
      b.k_m = o.at("k_m").get<std::vector<double>>();
      if (b.k_m.size() != (k.with_pairs ? k.pairs.size() : 0)) throw Error("k_m length does not match pairs");
      b.objective = o.value("objective", 0.0);
      b.train_type1 = o.value("train_type1", 0);
      b.train_type2 = o.value("train_type2", 0);
      k.buses.push_back(b);
    }
  } catch (const json::exception& e) {
    throw ValidationError({std::string("coefficients: ") + e.what()});
  }
  return k;
}

json offers_to_json(const NetworkCase& c, const SccOffers& o) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["kind"] = "scc_offers";
  j["unit"] = "EUR/h";
  j["flags"] = o.flags;
  j["by_bus"] = json::object();
  for (const auto& [bus, mat] : o.by_bus) {
    json b = json::object();
    for (size_t g = 0; g < mat.size(); ++g) b[c.sgs[g].id] = mat[g];
    j["by_bus"][std::to_string(bus)] = b;
  }
  return j;
}

SccOffers offers_from_json(const NetworkCase& c, const json& j) {
  check_kind(j, "scc_offers");
  SccOffers o;
  const int T = c.horizon();
  try {
    for (const auto& f : j.at("flags")) o.flags.push_back(f.get<std::string>());
    for (auto it = j.at("by_bus").begin(); it != j.at("by_bus").end(); ++it) {
      int bus = std::stoi(it.key());
      c.bus_index(bus);
      Matrix mat(c.sgs.size(), std::vector<double>(T, 0.0));
      for (auto g = it->begin(); g != it->end(); ++g) {
        auto v = g->get<std::vector<double>>();
        if (static_cast<int>(v.size()) != T) throw HorizonMismatch("offer series of " + g.key() + " has wrong length");
        mat[c.sg_index(g.key())] = v;
      }
      o.by_bus[bus] = mat;
    }
  } catch (const json::exception& e) {
    throw ValidationError({std::string("offers: ") + e.what()});
  }
  return o;
}

json provenance(std::uint64_t seed, const SolveOptions& opt) {
  json p;
  p["seed"] = seed;
  p["solver"] = solver_version();
  p["feasibility_tol"] = opt.feasibility_tol;
  p["integrality_tol"] = opt.integrality_tol;
  p["mip_gap"] = opt.mip_gap;
  p["time_limit"] = std::isfinite(opt.time_limit) ? json(opt.time_limit) : json(nullptr);
  p["threads"] = opt.threads;
  return p;
}

StrategicConfig ScenarioSpec::config(const NetworkCase& c, double w) const {
  StrategicConfig s;
  for (const auto& id : strategic) s.strategic.push_back(c.sg_index(id));
  s.beta_m_cap = beta_m_cap;
  s.beta_scc_cap = beta_scc_cap;
  s.W = w;
  s.envelope = envelope;
  return s;
}

ScenarioSpec scenario_from_json(const json& j) {
  ScenarioSpec s;
  try {
    s.name = j.value("name", std::string("scenario"));
    s.strategic = j.at("strategic").get<std::vector<std::string>>();
    s.beta_m_cap = j.value("beta_m_cap", 2.0);
    s.beta_scc_cap = j.value("beta_scc_cap", 2.0);
    if (j.contains("W")) s.W = j["W"].get<std::vector<double>>();
    std::string env = j.value("envelope", std::string("printed"));
    if (env == "printed") s.envelope = EnvelopeBounds::Printed;
    else if (env == "box") s.envelope = EnvelopeBounds::Box;
    else throw ValidationError({"/envelope: expected \"printed\" or \"box\""});
  } catch (const json::exception& e) {
    throw ValidationError({std::string("scenario: ") + e.what()});
  }
  if (s.W.empty()) throw ValidationError({"/W: empty list"});
  return s;
}

json scenario_to_json(const ScenarioSpec& s) {
  return {{"name", s.name},
          {"strategic", s.strategic},
          {"beta_m_cap", s.beta_m_cap},
          {"beta_scc_cap", s.beta_scc_cap},
          {"W", s.W},
          {"envelope", s.envelope == EnvelopeBounds::Printed ? "printed" : "box"}};
}

std::string error_report_csv(const std::vector<ErrorReport>& reports) {
  std::string s = csv_head("i_lim,bus,critical,samples,type1_count,type1_error_pct,type2_count,type2_error_pct");
  for (const auto& rep : reports)
    for (const auto& r : rep.rows)
      s += fmt(r.i_lim) + "," + std::to_string(r.bus) + "," + (r.critical ? "1" : "0") + "," +
           std::to_string(r.samples) + "," + std::to_string(r.n_type1) + "," + fmt(r.err_type1) + "," +
           std::to_string(r.n_type2) + "," + fmt(r.err_type2) + "\n";
  return s;
}

std::string clearing_csv(const NetworkCase& c, const ClearingResult& r, const std::string& scenario) {
  std::string s = csv_head(
      "scenario,unit,hour,u,p_mw,startup_cost_eur,shutdown_cost_eur,lambda_e_eur_mwh,energy_revenue_eur");
  const int T = c.horizon();
  for (size_t g = 0; g < c.sgs.size(); ++g)
    for (int t = 0; t < T; ++t) {
      s += scenario + "," + c.sgs[g].id + "," + std::to_string(t + 1) + "," + std::to_string(r.u[g][t]) + "," +
           fmt(round_to(r.P[g][t], 1e-6)) + "," + fmt(round_to(r.c_st[g][t], 1e-6)) + "," +
           fmt(round_to(r.c_sh[g][t], 1e-6)) + "," + fmt(round_to(r.lambda_e[t], 1e-6)) + "," +
           fmt(round_to(r.lambda_e[t] * r.P[g][t], 1e-4)) + "\n";
    }
  for (size_t j = 0; j < c.ibrs.size(); ++j)
    for (int t = 0; t < T; ++t)
      s += scenario + "," + c.ibrs[j].id + "," + std::to_string(t + 1) + ",," + fmt(round_to(r.p_ibr[j][t], 1e-6)) +
           ",,," + fmt(round_to(r.lambda_e[t], 1e-6)) + "," + fmt(round_to(r.lambda_e[t] * r.p_ibr[j][t], 1e-4)) + "\n";
  return s;
}

std::string offers_csv(const NetworkCase& c, const SccOffers& o) {
  std::string s = csv_head("bus,unit,hour,offer_eur_h");
  for (const auto& [bus, mat] : o.by_bus)
    for (size_t g = 0; g < mat.size(); ++g)
      for (size_t t = 0; t < mat[g].size(); ++t)
        s += std::to_string(bus) + "," + c.sgs[g].id + "," + std::to_string(t + 1) + "," +
             fmt(round_to(mat[g][t], 1e-4)) + "\n";
  return s;
}

std::string uc_status_csv(const NetworkCase& c, const ClearingResult& r, const std::string& scenario) {
  std::string s = csv_head("scenario,unit,bus,hour,u");
  for (size_t g = 0; g < c.sgs.size(); ++g)
    for (int t = 0; t < c.horizon(); ++t)
      s += scenario + "," + c.sgs[g].id + "," + std::to_string(c.sgs[g].bus) + "," + std::to_string(t + 1) + "," +
           std::to_string(r.u[g][t]) + "\n";
  return s;
}

std::string sweep_csv(const NetworkCase& c, const std::string& scenario, const SweepResult& sw) {
  (void)c;
  std::string s = csv_head("scenario,W,ok,r_dg_pct,r_dg_model_pct,profit_keur,ul_objective_keur,scc_payment_keur,error");
  for (const auto& r : sw.rows)
    s += scenario + "," + fmt(r.W) + "," + (r.ok ? "1" : "0") + "," + fmt(round_to(100 * r.r_dg, 1e-6)) + "," +
         fmt(round_to(100 * r.r_dg_model, 1e-6)) + "," + fmt(round_to(r.profit / 1e3, 1e-6)) + "," +
         fmt(round_to(r.ul_objective / 1e3, 1e-6)) + "," + fmt(round_to(r.scc_payment / 1e3, 1e-6)) + "," +
         (r.ok ? "" : "\"" + r.error + "\"") + "\n";
  return s;
}

static json accounts(const NetworkCase& c, const ClearingResult& r) {
  json a = json::array();
  for (size_t g = 0; g < r.agents.size(); ++g) {
    const auto& x = r.agents[g];
    a.push_back({{"unit", x.id},
                 {"bus", c.sgs[g].bus},
                 {"energy_revenue_keur", x.energy_revenue / 1e3},
                 {"scc_revenue_keur", x.scc_revenue / 1e3},
                 {"scc_offer_payment_keur", x.scc_offer_payment / 1e3},
                 {"cost_keur", (x.no_load_cost + x.energy_cost + x.startup_cost + x.shutdown_cost) / 1e3},
                 {"profit_keur", x.profit() / 1e3}});
  }
  return a;
}

json clearing_summary(const NetworkCase& c, const ClearingResult& r) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["status"] = to_string(r.status);
  j["mip_gap"] = r.mip_gap;
  j["total_cost_keur"] = r.cost / 1e3;
  j["operating_cost_keur"] = r.operating_cost / 1e3;
  j["hourly_cost_eur"] = r.hourly_cost;
  j["lambda_e_eur_mwh"] = r.lambda_e;
  json ls = json::object();
  for (const auto& [b, v] : r.lambda_scc) ls[std::to_string(b)] = v;
  j["lambda_scc"] = ls;
  j["consumer_scc_payment_keur"] = r.consumer_scc_payment / 1e3;
  j["consumer_offer_payment_keur"] = r.consumer_offer_payment / 1e3;
  j["agents"] = accounts(c, r);
  return j;
}

json strategic_summary(const NetworkCase& c, const std::string& scenario, const BilevelSolution& s) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["scenario"] = scenario;
  json ids = json::array();
  for (int g : s.strategic) ids.push_back(c.sgs[g].id);
  j["strategic_units"] = ids;
  j["W"] = s.W;
  j["status"] = to_string(s.status);
  j["optimal"] = s.optimal;
  j["mip_gap"] = s.mip_gap;
  j["seconds"] = s.seconds;
  j["r_dg_pct"] = 100 * s.r_dg;
  j["r_dg_model_pct"] = 100 * s.r_dg_model;
  j["ll_primal_keur"] = s.primal_value / 1e3;
  j["ll_dual_keur"] = s.dual_value / 1e3;
  j["strategic_profit_keur"] = s.strategic_profit / 1e3;
  j["ul_objective_keur"] = s.ul_objective / 1e3;
  j["scc_payment_keur"] = s.ll.consumer_scc_payment / 1e3;
  j["scc_offer_payment_keur"] = s.ll.consumer_offer_payment / 1e3;
  j["max_binary_envelope_error"] = s.max_binary_envelope_error;
  double strat_scc = 0;
  for (int g : s.strategic) strat_scc += s.ll.agents[g].scc_revenue;
  j["strategic_scc_revenue_keur"] = strat_scc / 1e3;
  json beta = json::object();
  for (int g : s.strategic) {
    json b;
    b["beta_m"] = s.beta_m[g];
    json bs = json::object();
    if (s.beta_scc.count(g))
      for (const auto& [bus, v] : s.beta_scc.at(g)) bs[std::to_string(bus)] = v;
    b["beta_scc"] = bs;
    beta[c.sgs[g].id] = b;
  }
  j["bids"] = beta;
  j["lambda_e_eur_mwh"] = s.ll.lambda_e;
  json ls = json::object();
  for (const auto& [b, v] : s.ll.lambda_scc) ls[std::to_string(b)] = v;
  j["lambda_scc"] = ls;
  j["agents"] = accounts(c, s.ll);
  return j;
}

}  // namespace sccm
