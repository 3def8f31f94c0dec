#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "sccm/solver.hpp"

namespace sccm {

std::string sanitize_lp_name(const std::string& name) {
  std::string s;
  for (char ch : name) {
    bool ok = (ch >= 'a' && ch <= 'z') || (ch >= 'A' && ch <= 'Z') || (ch >= '0' && ch <= '9') || ch == '_';
    s.push_back(ok ? ch : '_');
  }
  if (s.empty()) return "n_";
  bool digit0 = s[0] >= '0' && s[0] <= '9';
  bool exp_like = (s[0] == 'e' || s[0] == 'E') &&
                  (s.size() == 1 || (s[1] >= '0' && s[1] <= '9') || s[1] == 'e' || s[1] == 'E');
  if (digit0 || exp_like) s = "n_" + s;
  if (s.size() > 255) s.resize(255);
  return s;
}

static std::string num(double v) {
  if (std::isinf(v)) return v > 0 ? "+inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

static void write_terms(std::ostringstream& os, const std::vector<std::pair<int, double>>& terms,
                        const std::vector<std::string>& names) {
  int on_line = 0;
  bool first = true;
  for (auto [j, a] : terms) {
    if (a == 0.0) continue;
    if (!first) os << (a < 0 ? " - " : " + ");
    else if (a < 0) os << "-";
    double m = std::fabs(a);
    if (m != 1.0) os << num(m) << " ";
    os << names[j];
    first = false;
    if (++on_line == 8) {
      os << "\n   ";
      on_line = 0;
    }
  }
}

static std::vector<std::string> unique_names(const std::vector<std::string>& raw, const char* fallback,
                                             std::map<std::string, std::string>& renamed) {
  std::vector<std::string> out;
  std::set<std::string> used;
  for (size_t i = 0; i < raw.size(); ++i) {
    std::string base = raw[i].empty() ? fallback + std::to_string(i) : sanitize_lp_name(raw[i]);
    std::string s = base;
    for (int k = 2; used.count(s); ++k) s = base + "_" + std::to_string(k);
    used.insert(s);
    if (s != raw[i]) renamed[raw[i]] = s;
    out.push_back(s);
  }
  return out;
}

LpExport to_lp_format(const ModelIR& m) {
  m.validate();
  LpExport ex;
  std::vector<std::string> vraw, rraw;
  for (const auto& v : m.vars) vraw.push_back(v.name);
  for (const auto& r : m.rows) rraw.push_back(r.name);
  auto vn = unique_names(vraw, "x", ex.renamed);
  auto rn = unique_names(rraw, "c", ex.renamed);

  std::ostringstream os;
  os << "\\ sccm model, " << m.vars.size() << " columns, " << m.rows.size() << " rows\n";
  os << (m.maximize ? "Maximize\n" : "Minimize\n") << " obj: ";
  std::vector<std::pair<int, double>> obj;
  for (size_t j = 0; j < m.vars.size(); ++j)
    if (m.vars[j].cost != 0.0) obj.push_back({static_cast<int>(j), m.vars[j].cost});
  bool any = !obj.empty();
  if (any) write_terms(os, obj, vn);
  if (m.obj_const != 0.0 || !any) {
    if (any) os << (m.obj_const < 0 ? " - " : " + ") << num(std::fabs(m.obj_const));
    else os << num(m.obj_const);
  }
  os << "\n";

  if (!m.rows.empty()) {
    os << "Subject To\n";
    for (size_t i = 0; i < m.rows.size(); ++i) {
      const auto& r = m.rows[i];
      os << " " << rn[i] << ": ";
      bool nonzero = false;
      for (auto [j, a] : r.coefs)
        if (a != 0.0) nonzero = true;
      if (nonzero) write_terms(os, r.coefs, vn);
      else os << "0 " << vn.at(0);
      os << (r.sense == RowSense::Le ? " <= " : r.sense == RowSense::Ge ? " >= " : " = ") << num(r.rhs) << "\n";
    }
  }

  os << "Bounds\n";
  for (size_t j = 0; j < m.vars.size(); ++j) {
    const auto& v = m.vars[j];
    if (v.lb == 0.0 && std::isinf(v.ub)) continue;
    if (std::isinf(v.lb) && std::isinf(v.ub)) os << " " << vn[j] << " free\n";
    else if (v.lb == v.ub) os << " " << vn[j] << " = " << num(v.lb) << "\n";
    else os << " " << num(v.lb) << " <= " << vn[j] << " <= " << num(v.ub) << "\n";
  }
  bool has_int = false;
  for (const auto& v : m.vars) has_int |= v.integer;
  if (has_int) {
    os << "General\n";
    for (size_t j = 0; j < m.vars.size(); ++j)
      if (m.vars[j].integer) os << " " << vn[j] << "\n";
  }
  os << "End\n";
  ex.text = os.str();
  return ex;
}

void export_lp(const ModelIR& m, const std::string& path) {
  auto ex = to_lp_format(m);
  auto write_atomic = [](const std::string& p, const std::string& body) {
    std::string tmp = p + ".tmp";
    {
      std::ofstream f(tmp, std::ios::binary);
      if (!f) throw Error("cannot open " + tmp + " for writing");
      f << body;
      if (!f) throw Error("write failed for " + tmp);
    }
    std::error_code ec;
    std::filesystem::rename(tmp, p, ec);
    if (ec) throw Error("cannot rename " + tmp + ": " + ec.message());
  };
  write_atomic(path, ex.text);
  if (!ex.renamed.empty()) {
    std::ostringstream os;
    os << "original,written\n";
    for (const auto& [a, b] : ex.renamed) os << '"' << a << "\"," << b << "\n";
    write_atomic(path + ".names.csv", os.str());
  }
}

}  // namespace sccm
