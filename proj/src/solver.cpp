#include <Highs.h>

#include <chrono>
#include <cmath>

#include "sccm/solver.hpp"

namespace sccm {

int ModelIR::add_var(const std::string& name, double lb, double ub, double cost, bool integer) {
  if (var_ix_.count(name)) throw MalformedModel("duplicate variable name " + name);
  if (lb > ub) throw MalformedModel("variable " + name + " has lb > ub");
  int ix = static_cast<int>(vars.size());
  vars.push_back({name, lb, ub, integer, cost});
  var_ix_[name] = ix;
  return ix;
}

int ModelIR::add_row(const std::string& name, std::vector<std::pair<int, double>> coefs, RowSense sense,
                     double rhs) {
  if (row_ix_.count(name)) throw MalformedModel("duplicate row name " + name);
  int ix = static_cast<int>(rows.size());
  rows.push_back({name, std::move(coefs), sense, rhs});
  row_ix_[name] = ix;
  return ix;
}

int ModelIR::var(const std::string& name) const {
  auto it = var_ix_.find(name);
  if (it == var_ix_.end()) throw Error("no variable named " + name);
  return it->second;
}

int ModelIR::row(const std::string& name) const {
  auto it = row_ix_.find(name);
  if (it == row_ix_.end()) throw Error("no row named " + name);
  return it->second;
}

bool ModelIR::has_integers() const {
  for (const auto& v : vars)
    if (v.integer) return true;
  return false;
}

double ModelIR::objective(const std::vector<double>& x) const {
  double s = obj_const;
  for (size_t j = 0; j < vars.size(); ++j) s += vars[j].cost * x[j];
  return s;
}

double ModelIR::activity(int r, const std::vector<double>& x) const {
  double s = 0;
  for (auto [j, a] : rows[r].coefs) s += a * x[j];
  return s;
}

void ModelIR::validate() const {
  const int n = static_cast<int>(vars.size());
  for (const auto& v : vars) {
    if (v.lb > v.ub) throw MalformedModel("variable " + v.name + " has lb > ub");
    if (std::isnan(v.cost)) throw MalformedModel("variable " + v.name + " has NaN cost");
  }
  for (const auto& r : rows) {
    if (std::isnan(r.rhs) || std::isinf(r.rhs)) throw MalformedModel("row " + r.name + " has non-finite rhs");
    for (auto [j, a] : r.coefs) {
      if (j < 0 || j >= n) throw MalformedModel("row " + r.name + " references unknown variable");
      if (!std::isfinite(a)) throw MalformedModel("row " + r.name + " has a non-finite coefficient");
    }
  }
}

const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Optimal: return "Optimal";
    case SolveStatus::Infeasible: return "Infeasible";
    case SolveStatus::Unbounded: return "Unbounded";
    case SolveStatus::TimeLimit: return "TimeLimit";
    default: return "Error";
  }
}

std::string solver_version() {
  return "HiGHS " + std::to_string(HIGHS_VERSION_MAJOR) + "." + std::to_string(HIGHS_VERSION_MINOR) + "." +
         std::to_string(HIGHS_VERSION_PATCH);
}

static void apply_options(Highs& h, const SolveOptions& opt) {
  h.setOptionValue("output_flag", opt.verbose);
  h.setOptionValue("primal_feasibility_tolerance", opt.feasibility_tol);
  h.setOptionValue("dual_feasibility_tolerance", opt.feasibility_tol);
  h.setOptionValue("mip_feasibility_tolerance", opt.integrality_tol);
  h.setOptionValue("mip_rel_gap", opt.mip_gap);
  h.setOptionValue("mip_abs_gap", 1e-9);
  if (std::isfinite(opt.time_limit)) h.setOptionValue("time_limit", opt.time_limit);
  if (opt.threads > 0) h.setOptionValue("threads", opt.threads);
  h.setOptionValue("random_seed", opt.seed);
}

static SolveOutcome run_highs(Highs& h, bool is_mip, const SolveOptions& opt) {
  auto t0 = std::chrono::steady_clock::now();
  HighsStatus rs = h.run();
  SolveOutcome out;
  auto ms = h.getModelStatus();
  if (ms == HighsModelStatus::kUnboundedOrInfeasible) {
    h.setOptionValue("presolve", "off");
    rs = h.run();
    ms = h.getModelStatus();
  }
  out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (rs == HighsStatus::kError && ms != HighsModelStatus::kTimeLimit)
    throw SolverFailure("solver returned an error (model status " + h.modelStatusToString(ms) + ")");
  const auto& info = h.getInfo();
  switch (ms) {
    case HighsModelStatus::kOptimal: out.status = SolveStatus::Optimal; break;
    case HighsModelStatus::kInfeasible: out.status = SolveStatus::Infeasible; break;
    case HighsModelStatus::kUnbounded:
    case HighsModelStatus::kUnboundedOrInfeasible: out.status = SolveStatus::Unbounded; break;
    case HighsModelStatus::kTimeLimit:
    case HighsModelStatus::kIterationLimit:
    case HighsModelStatus::kSolutionLimit:
    case HighsModelStatus::kInterrupt: out.status = SolveStatus::TimeLimit; break;
    default: out.status = SolveStatus::Error;
  }
  out.has_solution = info.primal_solution_status == kSolutionStatusFeasible;
  if (out.has_solution) {
    const auto& sol = h.getSolution();
    out.x = sol.col_value;
    out.objective = info.objective_function_value;
    if (!is_mip && sol.dual_valid) {
      out.duals = sol.row_dual;  // d objective / d rhs in the model's own sense
    }
  }
  out.mip_gap = is_mip ? info.mip_gap : 0.0;
  (void)opt;
  return out;
}

SolveOutcome solve(const ModelIR& m, const SolveOptions& opt) {
  m.validate();
  const int n = static_cast<int>(m.vars.size());
  const int nr = static_cast<int>(m.rows.size());
  HighsModel hm;
  HighsLp& lp = hm.lp_;
  lp.num_col_ = n;
  lp.num_row_ = nr;
  lp.sense_ = m.maximize ? ObjSense::kMaximize : ObjSense::kMinimize;
  lp.offset_ = m.obj_const;
  lp.col_cost_.resize(n);
  lp.col_lower_.resize(n);
  lp.col_upper_.resize(n);
  bool is_mip = false;
  lp.integrality_.assign(n, HighsVarType::kContinuous);
  for (int j = 0; j < n; ++j) {
    const auto& v = m.vars[j];
    lp.col_cost_[j] = v.cost;
    lp.col_lower_[j] = std::isinf(v.lb) ? -kHighsInf : v.lb;
    lp.col_upper_[j] = std::isinf(v.ub) ? kHighsInf : v.ub;
    if (v.integer) {
      lp.integrality_[j] = HighsVarType::kInteger;
      is_mip = true;
    }
  }
  if (!is_mip) lp.integrality_.clear();
  lp.row_lower_.resize(nr);
  lp.row_upper_.resize(nr);
  auto& A = lp.a_matrix_;
  A.format_ = MatrixFormat::kRowwise;
  A.num_col_ = n;
  A.num_row_ = nr;
  A.start_.assign(1, 0);
  for (int i = 0; i < nr; ++i) {
    const auto& r = m.rows[i];
    switch (r.sense) {
      case RowSense::Le: lp.row_lower_[i] = -kHighsInf; lp.row_upper_[i] = r.rhs; break;
      case RowSense::Ge: lp.row_lower_[i] = r.rhs; lp.row_upper_[i] = kHighsInf; break;
      case RowSense::Eq: lp.row_lower_[i] = r.rhs; lp.row_upper_[i] = r.rhs; break;
    }
    for (auto [j, a] : r.coefs) {
      if (a == 0.0) continue;
      A.index_.push_back(j);
      A.value_.push_back(a);
    }
    A.start_.push_back(static_cast<HighsInt>(A.index_.size()));
  }
  Highs h;
  apply_options(h, opt);
  if (h.passModel(std::move(hm)) == HighsStatus::kError) throw MalformedModel("solver rejected the model");
  return run_highs(h, is_mip, opt);
}

SolveOutcome solve_lp_file(const std::string& path, const SolveOptions& opt) {
  Highs h;
  apply_options(h, opt);
  if (h.readModel(path) == HighsStatus::kError) throw Error("cannot read LP file " + path);
  const auto& lp = h.getLp();
  bool is_mip = false;
  for (auto t : lp.integrality_)
    if (t != HighsVarType::kContinuous) is_mip = true;
  return run_highs(h, is_mip, opt);
}

ModelIR dualize(const ModelIR& p) {
  if (p.has_integers()) throw MalformedModel("dualize requires a continuous model");
  p.validate();
  const int n = static_cast<int>(p.vars.size());
  const double s = p.maximize ? -1.0 : 1.0;  // work on min s*c x
  ModelIR d;
  d.maximize = true;
  std::vector<std::vector<std::pair<int, double>>> cols(n);
  for (size_t i = 0; i < p.rows.size(); ++i) {
    const auto& r = p.rows[i];
    double lb = -kInf, ub = kInf;
    if (r.sense == RowSense::Ge) lb = 0.0;
    if (r.sense == RowSense::Le) ub = 0.0;
    int y = d.add_var("y_" + r.name, lb, ub, r.rhs);
    for (auto [j, a] : r.coefs) cols[j].push_back({y, a});
  }
  for (int j = 0; j < n; ++j) {
    const auto& v = p.vars[j];
    if (v.lb == v.ub) {
      int w = d.add_var("fx_" + v.name, -kInf, kInf, v.lb);
      cols[j].push_back({w, 1.0});
      continue;
    }
    if (std::isfinite(v.lb)) {
      int w = d.add_var("lb_" + v.name, 0.0, kInf, v.lb);
      cols[j].push_back({w, 1.0});
    }
    if (std::isfinite(v.ub)) {
      int w = d.add_var("ub_" + v.name, 0.0, kInf, -v.ub);
      cols[j].push_back({w, -1.0});
    }
  }
  for (int j = 0; j < n; ++j) d.add_row("dual_" + p.vars[j].name, cols[j], RowSense::Eq, s * p.vars[j].cost);
  d.obj_const = s * p.obj_const;
  if (p.maximize) {
    d.maximize = false;
    for (auto& v : d.vars) v.cost = -v.cost;
    d.obj_const = -d.obj_const;
  }
  return d;
}

ModelIR fix_integers(const ModelIR& m, const std::vector<double>& x) {
  ModelIR out = m;
  for (size_t j = 0; j < out.vars.size(); ++j)
    if (out.vars[j].integer) {
      double v = std::round(x.at(j));
      out.vars[j].lb = out.vars[j].ub = v;
      out.vars[j].integer = false;
    }
  return out;
}

ModelIR relax_integers(const ModelIR& m) {
  ModelIR out = m;
  for (auto& v : out.vars) v.integer = false;
  return out;
}

}  // namespace sccm
