#include <CLI11.hpp>

#include <iostream>
#include <sstream>

#include "sccm/plan.hpp"

using namespace sccm;

namespace {

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(std::stod(item));
  return out;
}

std::vector<std::string> split(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

int report(const ReportBundle& b) {
  for (const auto& s : b.stages) {
    std::cout << to_string(s.stage) << ": " << (s.ok ? "ok" : (s.skipped ? "skipped" : "FAILED")) << " ("
              << s.seconds << " s)";
    if (!s.error.empty()) std::cout << "\n  " << s.error;
    std::cout << "\n";
  }
  for (const auto& f : b.files) std::cout << "wrote " << f << "\n";
  return b.exit_code();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"SCC-constrained unit commitment, SCC offer pricing and strategic bidding"};
  app.require_subcommand(1);

  ExperimentPlan plan;
  std::string case_path = std::string(SCCM_DATA_DIR) + "/ieee30_scc.json";
  double time_limit = -1;
  std::string limits = "3,4,5";
  std::string scenario_file, strategic_ids, w_list = "10";
  std::string name = "scenario";
  double beta_m_cap = 2.0, beta_scc_cap = 2.0;
  bool box = false;
  std::string plan_file;

  app.add_option("--seed", plan.seed, "RNG seed")->default_val(plan.seed);
  app.add_option("--out", plan.out_dir, "output directory")->default_val(plan.out_dir);
  app.add_option("--case", case_path, "case file")->default_val(case_path);
  app.add_option("--hours", plan.hours, "truncate the horizon to the first N hours (0: full)")->default_val(0);
  app.add_option("--time-limit", time_limit, "solver time limit per solve, seconds");
  app.add_option("--mip-gap", plan.solver.mip_gap, "relative MIP gap")->default_val(plan.solver.mip_gap);
  app.add_option("--threads", plan.solver.threads, "solver threads")->default_val(plan.solver.threads);
  app.add_flag("--verbose", plan.solver.verbose, "solver log to stdout");

  auto* train = app.add_subcommand("train-scc", "train SCC coefficients for every monitored bus");
  train->add_option("--limits", limits, "comma separated I_lim values, p.u.")->default_val(limits);
  train->add_option("--samples", plan.n_train, "training samples")->default_val(plan.n_train);
  train->add_option("--market-limit", plan.market_limit, "limit used by the market stages")->default_val(5.0);

  auto* validate = app.add_subcommand("validate-scc", "Type-I / Type-II errors on a fresh sample draw");
  validate->add_option("--limits", limits, "comma separated I_lim values, p.u.")->default_val(limits);
  validate->add_option("--samples", plan.n_validate, "validation samples")->default_val(plan.n_validate);

  auto* clear = app.add_subcommand("clear", "competitive SCC-constrained clearing");
  clear->add_option("--market-limit", plan.market_limit, "I_lim, p.u.")->default_val(5.0);
  auto* price = app.add_subcommand("price-scc", "marginal-unit SCC offers");
  price->add_option("--market-limit", plan.market_limit, "I_lim, p.u.")->default_val(5.0);

  auto add_scenario_opts = [&](CLI::App* sub) {
    sub->add_option("--scenario", scenario_file, "scenario JSON (strategic ids, caps, W list)");
    sub->add_option("--strategic", strategic_ids, "comma separated strategic SG ids");
    sub->add_option("--name", name, "scenario name")->default_val(name);
    sub->add_option("--beta-m-cap", beta_m_cap, "energy bid multiplier cap")->default_val(beta_m_cap);
    sub->add_option("--beta-scc-cap", beta_scc_cap, "SCC bid multiplier cap")->default_val(beta_scc_cap);
    sub->add_flag("--box-envelopes", box, "use [0, p_max] in the energy envelopes");
    sub->add_option("--market-limit", plan.market_limit, "I_lim, p.u.")->default_val(5.0);
  };
  auto* strat = app.add_subcommand("solve-strategic", "penalized primal-dual strategic bidding model");
  add_scenario_opts(strat);
  strat->add_option("--W", w_list, "penalty weight")->default_val(w_list);
  auto* sweep = app.add_subcommand("sweep-w", "solve a scenario for a list of penalty weights");
  add_scenario_opts(sweep);
  sweep->add_option("--W", w_list, "comma separated penalty weights")->default_val("1,10,100,1000");

  auto* run = app.add_subcommand("run-plan", "execute an experiment plan");
  run->add_option("plan", plan_file, "plan JSON")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (time_limit > 0) plan.solver.time_limit = time_limit;
    plan.case_path = case_path;
    plan.train_limits = parse_list(limits);
    if (*run) {
      ExperimentPlan p = plan_from_json(read_json(plan_file));
      // command-line solver flags override the plan when given
      if (app.count("--threads")) p.solver.threads = plan.solver.threads;
      if (app.count("--mip-gap")) p.solver.mip_gap = plan.solver.mip_gap;
      if (time_limit > 0) p.solver.time_limit = time_limit;
      if (app.count("--seed")) p.seed = plan.seed;
      if (app.count("--out")) p.out_dir = plan.out_dir;
      if (app.count("--hours")) p.hours = plan.hours;
      p.solver.verbose = plan.solver.verbose;
      return report(run_plan(p));
    }
    if (*train) plan.stages = {Stage::Train};
    if (*validate) plan.stages = {Stage::Validate};
    if (*clear) plan.stages = {Stage::Competitive};
    if (*price) plan.stages = {Stage::Price};
    if (*strat || *sweep) {
      plan.stages = {*strat ? Stage::Strategic : Stage::Sweep};
      ScenarioSpec sc;
      if (!scenario_file.empty()) {
        sc = scenario_from_json(read_json(scenario_file));
      } else {
        if (strategic_ids.empty()) throw ValidationError({"--strategic or --scenario is required"});
        sc.name = name;
        sc.strategic = split(strategic_ids);
        sc.beta_m_cap = beta_m_cap;
        sc.beta_scc_cap = beta_scc_cap;
        sc.W = parse_list(w_list);
        sc.envelope = box ? EnvelopeBounds::Box : EnvelopeBounds::Printed;
      }
      plan.scenarios = {sc};
    }
    return report(run_plan(plan));
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e);
  }
}
