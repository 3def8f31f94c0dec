#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "sccm/bilevel.hpp"
#include "sccm/case.hpp"
#include "sccm/market.hpp"
#include "sccm/train.hpp"

namespace sccm {

using json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

// parses and validates; every problem is reported with its JSON pointer
NetworkCase case_from_json(const json& j);
NetworkCase load_case(const std::string& path);
json case_to_json(const NetworkCase& c);

json read_json(const std::string& path);
// temp file in the same directory, then rename
void write_atomic(const std::string& path, const std::string& text);
void write_json(const std::string& path, const json& j);

json coefficients_to_json(const NetworkCase& c, const SccCoefficients& k);
SccCoefficients coefficients_from_json(const NetworkCase& c, const json& j);

json offers_to_json(const NetworkCase& c, const SccOffers& o);
SccOffers offers_from_json(const NetworkCase& c, const json& j);

json provenance(std::uint64_t seed, const SolveOptions& opt);

struct ScenarioSpec {
  std::string name;
  std::vector<std::string> strategic;  // SG ids
  double beta_m_cap = 2.0;
  double beta_scc_cap = 2.0;
  std::vector<double> W{10.0};
  EnvelopeBounds envelope = EnvelopeBounds::Printed;

  StrategicConfig config(const NetworkCase& c, double W) const;
};
ScenarioSpec scenario_from_json(const json& j);
json scenario_to_json(const ScenarioSpec& s);

// Tables: each CSV starts with "# schema_version=1" then a header line
std::string error_report_csv(const std::vector<ErrorReport>& reports);
std::string clearing_csv(const NetworkCase& c, const ClearingResult& r, const std::string& scenario = "competitive");
std::string offers_csv(const NetworkCase& c, const SccOffers& o);
std::string uc_status_csv(const NetworkCase& c, const ClearingResult& r, const std::string& scenario);
std::string sweep_csv(const NetworkCase& c, const std::string& scenario, const SweepResult& s);

// k EUR per day for totals, EUR for per-hour values
json clearing_summary(const NetworkCase& c, const ClearingResult& r);
json strategic_summary(const NetworkCase& c, const std::string& scenario, const BilevelSolution& s);

}  // namespace sccm
