#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sccm/io.hpp"

namespace sccm {

enum class Stage { Train, Validate, Competitive, Price, Strategic, Sweep };

const char* to_string(Stage s);
Stage stage_from_string(const std::string& s);

struct ExperimentPlan {
  std::string case_path;
  std::vector<Stage> stages;
  std::string out_dir = "out";
  std::uint64_t seed = 7;
  int hours = 0;  // 0 keeps the full horizon

  // train / validate
  std::vector<double> train_limits{3.0, 4.0, 5.0};
  int n_train = 4000;
  int n_validate = 500;
  TrainConfig train{};

  // market
  double market_limit = 5.0;  // coefficients used by the market stages
  SolveOptions solver{};

  // strategic / sweep
  std::vector<ScenarioSpec> scenarios;

  // throws ValidationError when a stage has neither its prerequisite stage nor persisted artifacts
  void check() const;
};

ExperimentPlan plan_from_json(const json& j);
json plan_to_json(const ExperimentPlan& p);

struct StageReport {
  Stage stage;
  bool ok = false;
  bool skipped = false;  // a prerequisite failed
  std::string error;
  int exit_code = 0;  // 2 validation, 3 solver failure, 4 infeasible, 1 other
  double seconds = 0;
};

int exit_code_for(const std::exception& e);

struct ReportBundle {
  std::vector<StageReport> stages;
  std::vector<std::string> files;  // paths written, in order
  bool ok() const;
  int exit_code() const;  // first failing stage's code, 0 when all succeeded
};

// file names inside the output directory
std::string coefficients_file(double limit);
inline constexpr const char* kOffersFile = "offers.json";
inline constexpr const char* kCompetitiveFile = "competitive_summary.json";

ReportBundle run_plan(const ExperimentPlan& plan);

}  // namespace sccm
