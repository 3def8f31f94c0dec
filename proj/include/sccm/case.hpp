#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace sccm {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ValidationError : Error {
  std::vector<std::string> issues;
  explicit ValidationError(std::vector<std::string> list);
};

struct SchemaVersionError : Error {
  using Error::Error;
};

struct DisconnectedNetwork : Error {
  using Error::Error;
};

struct NoGroundingPath : Error {
  using Error::Error;
};

struct NumericalError : Error {
  using Error::Error;
};

struct Bus {
  int id = 0;
  bool monitored = true;
  double i_lim = 0.0;     // p.u. current
  double shunt_b = 0.0;   // grounding admittance to reference, p.u.
};

struct Branch {
  int from = 0;
  int to = 0;
  double x = 0.0;
  double r = 0.0;
};

struct SyncGen {
  std::string id;
  int bus = 0;
  double no_load_cost = 0;   // EUR/h
  double marginal_cost = 0;  // EUR/MWh
  double startup_cost = 0;
  double shutdown_cost = 0;
  double p_min = 0, p_max = 0;
  double ramp_down = 0, ramp_up = 0;
  int u0 = 0;
  double p0 = 0;
  double x_internal = 0;     // subtransient reactance, p.u.
  double scc_injection = 0;  // nominal_voltage / x_internal unless given
  bool strategic = false;
};

struct IbrUnit {
  std::string id;
  int bus = 0;
  double p_max = 0;
  double energy_bid = 0;
  double scc_injection = 1.0;
  std::vector<double> alpha;
};

struct NetworkCase {
  std::string name;
  std::vector<Bus> buses;
  std::vector<Branch> branches;
  std::vector<SyncGen> sgs;
  std::vector<IbrUnit> ibrs;
  std::vector<double> demand;
  double base_mva = 100.0;
  double nominal_voltage = 1.0;

  int horizon() const { return static_cast<int>(demand.size()); }
  int bus_index(int bus_id) const;  // throws if unknown
  int sg_index(const std::string& id) const;
  std::vector<double> alpha_at(int t) const;

  // collects every invariant violation; empty means valid
  std::vector<std::string> check() const;
  void validate() const;
};

// first T hours of a case
NetworkCase slice_horizon(const NetworkCase& c, int T);

}  // namespace sccm
