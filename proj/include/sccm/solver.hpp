#pragma once

#include <limits>
#include <map>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "sccm/case.hpp"

namespace sccm {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class RowSense { Le, Eq, Ge };

struct Var {
  std::string name;
  double lb = 0.0;
  double ub = kInf;
  bool integer = false;
  double cost = 0.0;
};

struct Row {
  std::string name;
  std::vector<std::pair<int, double>> coefs;
  RowSense sense = RowSense::Ge;
  double rhs = 0.0;
};

struct ModelIR {
  std::vector<Var> vars;
  std::vector<Row> rows;
  bool maximize = false;
  double obj_const = 0.0;

  int add_var(const std::string& name, double lb, double ub, double cost = 0.0, bool integer = false);
  int add_row(const std::string& name, std::vector<std::pair<int, double>> coefs, RowSense sense, double rhs);
  int var(const std::string& name) const;  // throws if absent
  int row(const std::string& name) const;
  bool has_var(const std::string& name) const { return var_ix_.count(name) > 0; }
  bool has_row(const std::string& name) const { return row_ix_.count(name) > 0; }
  bool has_integers() const;
  // objective value of an assignment
  double objective(const std::vector<double>& x) const;
  double activity(int r, const std::vector<double>& x) const;
  void validate() const;  // throws MalformedModel naming the offending row

 private:
  std::unordered_map<std::string, int> var_ix_;
  std::unordered_map<std::string, int> row_ix_;
};

struct MalformedModel : Error {
  using Error::Error;
};

struct SolverUnavailable : Error {
  using Error::Error;
};

struct SolverFailure : Error {
  using Error::Error;
};

enum class SolveStatus { Optimal, Infeasible, Unbounded, TimeLimit, Error };

const char* to_string(SolveStatus s);

struct SolveOptions {
  double feasibility_tol = 1e-7;
  double integrality_tol = 1e-6;
  double mip_gap = 1e-6;
  double time_limit = kInf;  // seconds
  int threads = 1;
  int seed = 0;
  bool verbose = false;
};

struct SolveOutcome {
  SolveStatus status = SolveStatus::Error;
  std::vector<double> x;
  std::vector<double> duals;  // d objective / d rhs, one per row, LP only
  double objective = 0.0;
  double mip_gap = 0.0;
  double seconds = 0.0;
  bool has_solution = false;
};

SolveOutcome solve(const ModelIR& m, const SolveOptions& opt = {});

std::string solver_version();

// LP-format text; names that are not legal LP identifiers are rewritten deterministically.
struct LpExport {
  std::string text;
  std::map<std::string, std::string> renamed;  // original -> written
};

LpExport to_lp_format(const ModelIR& m);
std::string sanitize_lp_name(const std::string& name);
// writes <path> and, if anything was renamed, <path>.names.csv
void export_lp(const ModelIR& m, const std::string& path);
// reads an LP file through the solver's own reader and solves it
SolveOutcome solve_lp_file(const std::string& path, const SolveOptions& opt = {});

// Dual of a continuous model (bounds turned into sign-constrained multipliers).
// The dual has the same optimal value when both are feasible.
ModelIR dualize(const ModelIR& lp);

// copy with every integer variable fixed to the rounded value in x
ModelIR fix_integers(const ModelIR& m, const std::vector<double>& x);
ModelIR relax_integers(const ModelIR& m);

}  // namespace sccm
