#include "sccm/plan.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <future>
#include <algorithm>
#include <set>

namespace sccm {

namespace fs = std::filesystem;

const char* to_string(Stage s) {
  switch (s) {
    case Stage::Train: return "train";
    case Stage::Validate: return "validate";
    case Stage::Competitive: return "competitive";
    case Stage::Price: return "price";
    case Stage::Strategic: return "strategic";
    case Stage::Sweep: return "sweep";
  }
  return "?";
}

Stage stage_from_string(const std::string& s) {
  for (Stage st : {Stage::Train, Stage::Validate, Stage::Competitive, Stage::Price, Stage::Strategic, Stage::Sweep})
    if (s == to_string(st)) return st;
  throw ValidationError({"unknown stage \"" + s + "\""});
}

std::string coefficients_file(double limit) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "coefficients_%g.json", limit);
  return buf;
}

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const ValidationError*>(&e) || dynamic_cast<const SchemaVersionError*>(&e) ||
      dynamic_cast<const HorizonMismatch*>(&e) || dynamic_cast<const MissingCoefficients*>(&e))
    return 2;
  if (dynamic_cast<const InfeasibleMarket*>(&e)) return 4;
  if (dynamic_cast<const SolverFailure*>(&e) || dynamic_cast<const SolverUnavailable*>(&e) ||
      dynamic_cast<const NumericalError*>(&e))
    return 3;
  return 1;
}

int ReportBundle::exit_code() const {
  for (const auto& s : stages)
    if (!s.ok && !s.skipped) return s.exit_code;
  return 0;
}

bool ReportBundle::ok() const {
  for (const auto& s : stages)
    if (!s.ok) return false;
  return true;
}

static Stage prerequisite(Stage s, bool& has) {
  has = true;
  switch (s) {
    case Stage::Validate:
    case Stage::Competitive: return Stage::Train;
    case Stage::Price: return Stage::Competitive;
    case Stage::Strategic:
    case Stage::Sweep: return Stage::Price;
    default: has = false; return s;
  }
}

static std::string artifact_of(const ExperimentPlan& p, Stage s) {
  switch (s) {
    case Stage::Train: return coefficients_file(p.market_limit);
    case Stage::Competitive: return kCompetitiveFile;
    case Stage::Price: return kOffersFile;
    default: return "";
  }
}

void ExperimentPlan::check() const {
  std::vector<std::string> issues;
  if (case_path.empty()) issues.push_back("/case: missing");
  if (stages.empty()) issues.push_back("/stages: empty");
  std::set<Stage> in(stages.begin(), stages.end());
  for (Stage s : stages) {
    bool has = false;
    Stage pre = prerequisite(s, has);
    if (!has || in.count(pre)) continue;
    if (!fs::exists(fs::path(out_dir) / artifact_of(*this, pre)))
      issues.push_back(std::string("/stages: ") + to_string(s) + " requires " + to_string(pre) +
                       " in the plan or its persisted output " + artifact_of(*this, pre));
  }
  if (in.count(Stage::Validate) || in.count(Stage::Train))
    if (n_train < 1 || n_validate < 1) issues.push_back("/n_train: sample counts must be >= 1");
  if ((in.count(Stage::Strategic) || in.count(Stage::Sweep)) && scenarios.empty())
    issues.push_back("/scenarios: strategic stages need at least one scenario");
  if (!issues.empty()) throw ValidationError(issues);
}

ExperimentPlan plan_from_json(const json& j) {
  ExperimentPlan p;
  try {
    p.case_path = j.at("case").get<std::string>();
    for (const auto& s : j.at("stages")) p.stages.push_back(stage_from_string(s.get<std::string>()));
    p.out_dir = j.value("out_dir", p.out_dir);
    p.seed = j.value("seed", p.seed);
    p.hours = j.value("hours", 0);
    if (j.contains("train_limits")) p.train_limits = j["train_limits"].get<std::vector<double>>();
    p.n_train = j.value("n_train", p.n_train);
    p.n_validate = j.value("n_validate", p.n_validate);
    p.market_limit = j.value("market_limit", p.market_limit);
    p.solver.mip_gap = j.value("mip_gap", p.solver.mip_gap);
    p.solver.threads = j.value("threads", p.solver.threads);
    if (j.contains("time_limit")) p.solver.time_limit = j["time_limit"].get<double>();
    if (j.contains("scenarios"))
      for (const auto& s : j["scenarios"]) p.scenarios.push_back(scenario_from_json(s));
  } catch (const json::exception& e) {
    throw ValidationError({std::string("plan: ") + e.what()});
  }
  return p;
}

json plan_to_json(const ExperimentPlan& p) {
  json j;
  j["case"] = p.case_path;
  j["stages"] = json::array();
  for (Stage s : p.stages) j["stages"].push_back(to_string(s));
  j["out_dir"] = p.out_dir;
  j["seed"] = p.seed;
  j["hours"] = p.hours;
  j["train_limits"] = p.train_limits;
  j["n_train"] = p.n_train;
  j["n_validate"] = p.n_validate;
  j["market_limit"] = p.market_limit;
  j["mip_gap"] = p.solver.mip_gap;
  j["threads"] = p.solver.threads;
  j["scenarios"] = json::array();
  for (const auto& s : p.scenarios) j["scenarios"].push_back(scenario_to_json(s));
  return j;
}

namespace {

struct Runner {
  const ExperimentPlan& plan;
  NetworkCase c;
  ReportBundle bundle;
  fs::path out;

  std::string path(const std::string& name) const { return (out / name).string(); }
  void emit(const std::string& name, const std::string& text) {
    write_atomic(path(name), text);
    bundle.files.push_back(path(name));
  }
  void emit(const std::string& name, const json& j) {
    write_json(path(name), j);
    bundle.files.push_back(path(name));
  }

  SccCoefficients coefficients(double lim) const {
    return coefficients_from_json(c, read_json(path(coefficients_file(lim))));
  }

  std::vector<int> critical() const {
    auto j = read_json(path(kCompetitiveFile));
    return j.at("critical_buses").get<std::vector<int>>();
  }

  MarketConfig market(bool with_offers) const {
    MarketConfig m;
    m.solver = plan.solver;
    m.scc_buses = critical();
    if (with_offers) m.offers = offers_from_json(c, read_json(path(kOffersFile)));
    return m;
  }

  std::map<int, double> monitored(double lim) const {
    std::map<int, double> out;
    for (const auto& b : c.buses)
      if (b.monitored) out[b.id] = lim;
    return out;
  }

  void train() {
    auto samples = generate_samples(c, plan.n_train, {}, plan.seed);
    TrainConfig tc = plan.train;
    tc.solver = plan.solver;
    tc.solver.threads = 1;
    std::vector<std::future<SccCoefficients>> jobs;
    for (double lim : plan.train_limits)
      jobs.push_back(std::async(std::launch::async,
                                [&, lim] { return train_coefficients(c, samples, monitored(lim), tc); }));
    bool market_trained = false;
    for (size_t i = 0; i < jobs.size(); ++i) {
      auto k = jobs[i].get();
      emit(coefficients_file(plan.train_limits[i]), coefficients_to_json(c, k));
      market_trained |= plan.train_limits[i] == plan.market_limit;
    }
    if (!market_trained) {
      auto k = train_coefficients(c, samples, monitored(plan.market_limit), tc);
      emit(coefficients_file(plan.market_limit), coefficients_to_json(c, k));
    }
  }

  void validate() {
    auto val = generate_samples(c, plan.n_validate, {}, plan.seed + 1);
    std::vector<ErrorReport> reps;
    for (double lim : plan.train_limits) reps.push_back(classify_errors(c, coefficients(lim), val, lim));
    emit("error_report.csv", error_report_csv(reps));
  }

  void competitive() {
    MarketConfig base;
    base.solver = plan.solver;
    auto crit = identify_critical_buses(c, base, monitored(plan.market_limit));
    auto k = pairs_free(coefficients(plan.market_limit));
    MarketConfig m = base;
    m.scc_buses.clear();
    for (int b : crit) {
      const auto* bc = k.find(b);
      if (bc && bc->critical) m.scc_buses.push_back(b);
    }
    auto r = solve_competitive(c, m, k);
    auto audit = audit_schedule(c, k, r, monitored(plan.market_limit));
    json j = clearing_summary(c, r);
    j["critical_buses"] = m.scc_buses;
    j["min_exact_scc"] = audit.min_over({});
    json rows = json::array();
    for (const auto& a : audit.rows)
      rows.push_back({{"bus", a.bus}, {"min_exact", a.min_exact}, {"hour", a.hour_exact + 1}, {"secure", a.secure}});
    j["audit"] = rows;
    emit(kCompetitiveFile, j);
    emit("clearing.csv", clearing_csv(c, r, "competitive"));
    emit("uc_status_competitive.csv", uc_status_csv(c, r, "competitive"));
  }

  void price() {
    auto k = pairs_free(coefficients(plan.market_limit));
    auto offers = price_scc_offers(c, market(false), k);
    emit(kOffersFile, offers_to_json(c, offers));
    emit("offers.csv", offers_csv(c, offers));
  }

  void strategic() {
    auto k = pairs_free(coefficients(plan.market_limit));
    auto m = market(true);
    json all = json::array();
    std::string uc = "", clear = "";
    for (const auto& sc : plan.scenarios) {
      auto sol = solve_strategic(c, m, k, sc.config(c, sc.W.front()));
      all.push_back(strategic_summary(c, sc.name, sol));
      auto u = uc_status_csv(c, sol.ll, sc.name);
      auto cl = clearing_csv(c, sol.ll, sc.name);
      // keep a single header per file
      uc += uc.empty() ? u : u.substr(u.find('\n', u.find('\n') + 1) + 1);
      clear += clear.empty() ? cl : cl.substr(cl.find('\n', cl.find('\n') + 1) + 1);
    }
    json j;
    j["schema_version"] = kSchemaVersion;
    j["scenarios"] = all;
    emit("strategic_summary.json", j);
    emit("uc_status.csv", uc);
    emit("clearing_strategic.csv", clear);
  }

  void sweep() {
    auto k = pairs_free(coefficients(plan.market_limit));
    auto m = market(true);
    std::string all;
    for (const auto& sc : plan.scenarios) {
      auto r = sweep_penalty(c, m, k, sc.config(c, sc.W.front()), sc.W);
      auto s = sweep_csv(c, sc.name, r);
      all += all.empty() ? s : s.substr(s.find('\n', s.find('\n') + 1) + 1);
    }
    emit("sweep.csv", all);
  }
};

}  // namespace

ReportBundle run_plan(const ExperimentPlan& plan) {
  plan.check();
  Runner r{plan, slice_horizon(load_case(plan.case_path), plan.hours), {}, fs::path(plan.out_dir)};
  fs::create_directories(r.out);
  std::set<Stage> failed;
  // stages run in pipeline order regardless of the listed order
  std::vector<Stage> order;
  for (Stage s : {Stage::Train, Stage::Validate, Stage::Competitive, Stage::Price, Stage::Strategic, Stage::Sweep})
    if (std::find(plan.stages.begin(), plan.stages.end(), s) != plan.stages.end()) order.push_back(s);
  for (Stage s : order) {
    StageReport rep;
    rep.stage = s;
    bool has = false;
    Stage pre = prerequisite(s, has);
    if (has && failed.count(pre)) {
      rep.skipped = true;
      rep.error = std::string("skipped: ") + to_string(pre) + " failed";
      failed.insert(s);
      r.bundle.stages.push_back(rep);
      continue;
    }
    auto t0 = std::chrono::steady_clock::now();
    try {
      switch (s) {
        case Stage::Train: r.train(); break;
        case Stage::Validate: r.validate(); break;
        case Stage::Competitive: r.competitive(); break;
        case Stage::Price: r.price(); break;
        case Stage::Strategic: r.strategic(); break;
        case Stage::Sweep: r.sweep(); break;
      }
      rep.ok = true;
    } catch (const std::exception& e) {
      rep.error = e.what();
      rep.exit_code = exit_code_for(e);
      failed.insert(s);
    }
    rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    r.bundle.stages.push_back(rep);
  }
  json prov = provenance(plan.seed, plan.solver);
  prov["schema_version"] = kSchemaVersion;
  prov["case"] = plan.case_path;
  prov["hours"] = r.c.horizon();
  prov["plan"] = plan_to_json(plan);
  std::time_t now = std::time(nullptr);
  char ts[32];
  std::strftime(ts, sizeof ts, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  prov["timestamp"] = ts;
  json st = json::array();
  for (const auto& s : r.bundle.stages)
    st.push_back({{"stage", to_string(s.stage)}, {"ok", s.ok}, {"skipped", s.skipped}, {"error", s.error},
                  {"seconds", s.seconds}});
  prov["stages"] = st;
  r.emit("provenance.json", prov);
  return r.bundle;
}

}  // namespace sccm
