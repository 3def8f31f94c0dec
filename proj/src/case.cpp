#include "sccm/case.hpp"

#include <queue>
#include <set>
#include <sstream>

namespace sccm {

static std::string join_issues(const std::vector<std::string>& list) {
  std::ostringstream os;
  os << list.size() << " validation error(s)";
  for (const auto& s : list) os << "\n  " << s;
  return os.str();
}

ValidationError::ValidationError(std::vector<std::string> list)
    : Error(join_issues(list)), issues(std::move(list)) {}

int NetworkCase::bus_index(int bus_id) const {
  for (size_t i = 0; i < buses.size(); ++i)
    if (buses[i].id == bus_id) return static_cast<int>(i);
  throw Error("unknown bus id " + std::to_string(bus_id));
}

int NetworkCase::sg_index(const std::string& id) const {
  for (size_t i = 0; i < sgs.size(); ++i)
    if (sgs[i].id == id) return static_cast<int>(i);
  throw Error("unknown generator id " + id);
}

std::vector<double> NetworkCase::alpha_at(int t) const {
  std::vector<double> a(ibrs.size());
  for (size_t c = 0; c < ibrs.size(); ++c) a[c] = ibrs[c].alpha.at(t);
  return a;
}

std::vector<std::string> NetworkCase::check() const {
  std::vector<std::string> out;
  auto add = [&](const std::string& path, const std::string& msg) { out.push_back(path + ": " + msg); };

  std::set<int> ids;
  for (size_t i = 0; i < buses.size(); ++i) {
    const auto& b = buses[i];
    std::string p = "/buses/" + std::to_string(i);
    if (!ids.insert(b.id).second) add(p + "/id", "duplicate bus id " + std::to_string(b.id));
    if (b.monitored && !(b.i_lim > 0)) add(p + "/i_lim", "must be > 0 for a monitored bus");
    if (b.shunt_b < 0) add(p + "/shunt_b", "must be >= 0");
  }
  if (buses.empty()) add("/buses", "no buses");
  if (!(base_mva > 0)) add("/base_mva", "must be > 0");
  if (!(nominal_voltage > 0)) add("/nominal_voltage", "must be > 0");

  for (size_t i = 0; i < branches.size(); ++i) {
    const auto& br = branches[i];
    std::string p = "/branches/" + std::to_string(i);
    if (!ids.count(br.from)) add(p + "/from", "unknown bus " + std::to_string(br.from));
    if (!ids.count(br.to)) add(p + "/to", "unknown bus " + std::to_string(br.to));
    if (br.from == br.to) add(p, "from and to are the same bus");
    if (!(br.x > 0)) add(p + "/x", "reactance must be > 0");
  }

  std::set<std::string> gids;
  for (size_t i = 0; i < sgs.size(); ++i) {
    const auto& g = sgs[i];
    std::string p = "/sync_gens/" + std::to_string(i);
    if (!gids.insert(g.id).second) add(p + "/id", "duplicate unit id " + g.id);
    if (!ids.count(g.bus)) add(p + "/bus", "unknown bus " + std::to_string(g.bus));
    if (!(g.p_min > 0)) add(p + "/p_min", "must be > 0");
    if (!(g.p_max >= g.p_min)) add(p + "/p_max", "must be >= p_min");
    if (!(g.ramp_up > 0)) add(p + "/ramp_up", "must be > 0");
    if (!(g.ramp_down > 0)) add(p + "/ramp_down", "must be > 0");
    if (g.u0 != 0 && g.u0 != 1) add(p + "/u0", "must be 0 or 1");
    if (g.p0 < g.u0 * g.p_min - 1e-9 || g.p0 > g.u0 * g.p_max + 1e-9)
      add(p + "/p0", "must lie in [u0*p_min, u0*p_max]");
    if (!(g.x_internal > 0)) add(p + "/x_internal", "must be > 0");
    if (g.scc_injection < 0) add(p + "/scc_injection", "must be >= 0");
    if (g.no_load_cost < 0 || g.marginal_cost < 0 || g.startup_cost < 0 || g.shutdown_cost < 0)
      add(p, "costs must be >= 0");
  }

  size_t T = demand.size();
  if (T == 0) add("/demand", "empty demand series");
  for (size_t t = 0; t < T; ++t)
    if (demand[t] < 0) add("/demand/" + std::to_string(t), "must be >= 0");

  for (size_t i = 0; i < ibrs.size(); ++i) {
    const auto& c = ibrs[i];
    std::string p = "/ibr_units/" + std::to_string(i);
    if (!gids.insert(c.id).second) add(p + "/id", "duplicate unit id " + c.id);
    if (!ids.count(c.bus)) add(p + "/bus", "unknown bus " + std::to_string(c.bus));
    if (!(c.p_max > 0)) add(p + "/p_max", "must be > 0");
    if (c.scc_injection < 0) add(p + "/scc_injection", "must be >= 0");
    if (c.alpha.size() != T)
      add(p + "/capacity_factor", "length " + std::to_string(c.alpha.size()) + " != horizon " + std::to_string(T));
    for (size_t t = 0; t < c.alpha.size(); ++t)
      if (!(c.alpha[t] >= 0 && c.alpha[t] <= 1))
        add(p + "/capacity_factor/" + std::to_string(t), "value " + std::to_string(c.alpha[t]) + " outside [0,1]");
  }

  // connectivity
  if (!buses.empty() && out.empty()) {
    std::vector<std::vector<int>> adj(buses.size());
    for (const auto& br : branches) {
      int a = bus_index(br.from), b = bus_index(br.to);
      adj[a].push_back(b);
      adj[b].push_back(a);
    }
    std::vector<char> seen(buses.size(), 0);
    std::queue<int> q;
    q.push(0);
    seen[0] = 1;
    size_t n = 1;
    while (!q.empty()) {
      int v = q.front();
      q.pop();
      for (int w : adj[v])
        if (!seen[w]) { seen[w] = 1; ++n; q.push(w); }
    }
    if (n != buses.size()) add("/branches", "network is not connected");
  }
  return out;
}

void NetworkCase::validate() const {
  auto issues = check();
  if (!issues.empty()) throw ValidationError(issues);
}

NetworkCase slice_horizon(const NetworkCase& c, int T) {
  if (T <= 0 || T >= c.horizon()) return c;
  NetworkCase out = c;
  out.demand.resize(T);
  for (auto& u : out.ibrs) u.alpha.resize(T);
  return out;
}

}  // namespace sccm
