#include "sccm/train.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "sccm/grid.hpp"

namespace sccm {

const BusCoefficients* SccCoefficients::find(int bus_id) const {
  for (const auto& b : buses)
    if (b.bus == bus_id) return &b;
  return nullptr;
}

std::vector<int> SccCoefficients::critical_buses() const {
  std::vector<int> out;
  for (const auto& b : buses)
    if (b.critical) out.push_back(b.bus);
  return out;
}

std::vector<SccSample> generate_samples(const NetworkCase& c, int n_samples, const SamplingConfig& cfg,
                                        std::uint64_t seed) {
  if (n_samples < 1) throw Error("n_samples must be >= 1");
  std::mt19937_64 rng(seed);
  const int G = static_cast<int>(c.sgs.size());
  const int T = c.horizon();
  std::uniform_int_distribution<int> hour(0, T - 1);
  std::uniform_int_distribution<int> bit(0, 1);
  std::uniform_real_distribution<double> unif(0.0, 1.0);

  auto draw_alpha = [&](int t) {
    if (cfg.alpha == AlphaSource::Series) return c.alpha_at(t);
    std::vector<double> a(c.ibrs.size());
    for (auto& v : a) v = unif(rng);
    return a;
  };
  auto label = [&](SccSample s) {
    s.scc = exact_scc_or_zero(c, s.u, s.alpha);
    return s;
  };

  std::vector<SccSample> out;
  if (cfg.anchors || cfg.policy == SamplingPolicy::AnchorsOnly) {
    int t = hour(rng);
    out.push_back(label({std::vector<int>(G, 1), draw_alpha(t), t, {}}));
    if (n_samples > 1) out.push_back(label({std::vector<int>(G, 0), draw_alpha(t), t, {}}));
    if (cfg.alpha == AlphaSource::Uniform) out[0].hour = -1;
  }
  if (cfg.policy == SamplingPolicy::AnchorsOnly) {
    out.resize(std::min<size_t>(out.size(), static_cast<size_t>(n_samples)));
    return out;
  }
  long attempts = 0;
  while (static_cast<int>(out.size()) < n_samples) {
    if (++attempts > 1000L * n_samples + 100000) throw Error("sampling policy rejects almost every draw");
    int t = hour(rng);
    std::vector<int> u(G);
    for (auto& b : u) b = bit(rng);
    auto a = draw_alpha(t);
    if (cfg.policy == SamplingPolicy::Feasible) {
      double pmax = 0, pmin = 0;
      for (int g = 0; g < G; ++g) {
        pmax += u[g] * c.sgs[g].p_max;
        pmin += u[g] * c.sgs[g].p_min;
      }
      for (size_t k = 0; k < c.ibrs.size(); ++k) pmax += a[k] * c.ibrs[k].p_max;
      if (pmax < c.demand[t] || pmin > c.demand[t]) continue;
    }
    out.push_back(label({u, a, cfg.alpha == AlphaSource::Series ? t : -1, {}}));
  }
  return out;
}

bool is_secure(const SccSample& s, int bus_index, double i_lim) { return s.scc.at(bus_index) >= i_lim; }

static std::vector<double> features(const std::vector<int>& u, const std::vector<double>& alpha,
                                    const std::vector<std::pair<int, int>>& pairs) {
  std::vector<double> f;
  f.reserve(u.size() + alpha.size() + pairs.size());
  for (int v : u) f.push_back(v);
  for (double a : alpha) f.push_back(a);
  for (auto [i, j] : pairs) f.push_back(u[i] * u[j]);
  return f;
}

double approx_scc(const BusCoefficients& k, const std::vector<std::pair<int, int>>& pairs,
                  const std::vector<int>& u, const std::vector<double>& alpha) {
  double s = 0;
  for (size_t g = 0; g < k.k_g.size(); ++g) s += k.k_g[g] * u[g];
  for (size_t c = 0; c < k.k_c.size(); ++c) s += k.k_c[c] * alpha[c];
  for (size_t m = 0; m < k.k_m.size(); ++m) s += k.k_m[m] * u[pairs[m].first] * u[pairs[m].second];
  return s;
}

SccCoefficients pairs_free(const SccCoefficients& k) {
  SccCoefficients out = k;
  out.with_pairs = false;
  out.pairs.clear();
  for (auto& b : out.buses) b.k_m.clear();
  return out;
}

double training_loss(const NetworkCase& c, const BusCoefficients& k, const std::vector<std::pair<int, int>>& pairs,
                     const std::vector<SccSample>& samples, const TrainConfig& cfg) {
  int bi = c.bus_index(k.bus);
  double loss = 0;
  for (const auto& s : samples) {
    double L = approx_scc(k, pairs, s.u, s.alpha);
    double y = s.scc[bi];
    if (y >= k.i_lim) loss += cfg.type2_weight * std::max(0.0, k.i_lim - L);
    else loss += cfg.type1_weight * std::max(0.0, L - (k.i_lim - cfg.margin));
    loss += cfg.fit_over * std::max(0.0, L - y) + cfg.fit_under * std::max(0.0, y - L);
  }
  return loss;
}

// Soft-margin LP: minimize weighted hinge on the classification side plus an asymmetric L1 fit.
static BusCoefficients fit_bus(const NetworkCase& c, const std::vector<SccSample>& samples, int bus_id, double lim,
                               const std::vector<std::pair<int, int>>& pairs, const TrainConfig& cfg) {
  const int bi = c.bus_index(bus_id);
  const int G = static_cast<int>(c.sgs.size());
  const int C = static_cast<int>(c.ibrs.size());
  const int M = static_cast<int>(pairs.size());
  BusCoefficients out;
  out.bus = bus_id;
  out.i_lim = lim;

  int n_sec = 0;
  for (const auto& s : samples) n_sec += is_secure(s, bi, lim);
  if (n_sec == static_cast<int>(samples.size())) {
    out.critical = false;
    out.k_g.assign(G, 0.0);
    out.k_c.assign(C, 0.0);
    if (M) out.k_m.assign(M, 0.0);
    return out;
  }
  if (n_sec == 0)
    throw DegenerateFit("bus " + std::to_string(bus_id) + " is insecure in every sample at I_lim=" +
                        std::to_string(lim));

  ModelIR m;
  const double lo = cfg.monotone ? 0.0 : -kInf;
  std::vector<int> kv;
  for (int g = 0; g < G; ++g) kv.push_back(m.add_var("k_g" + std::to_string(g), lo, kInf));
  for (int k = 0; k < C; ++k)
    kv.push_back(m.add_var("k_c" + std::to_string(k), lo, cfg.cap_ibr ? c.ibrs[k].scc_injection : kInf));
  for (int p = 0; p < M; ++p) kv.push_back(m.add_var("k_m" + std::to_string(p), -kInf, kInf));

  // fo*max(0,L-y) + fu*max(0,y-L) = fu*(y-L) + (fo+fu)*max(0,L-y); the linear part goes into the costs
  for (size_t i = 0; i < samples.size(); ++i) {
    const auto& s = samples[i];
    auto f = features(s.u, s.alpha, pairs);
    double y = s.scc[bi];
    bool sec = y >= lim;
    std::string id = std::to_string(i);
    int xi = m.add_var("xi" + id, 0, kInf, sec ? cfg.type2_weight : cfg.type1_weight);
    int ov = m.add_var("ov" + id, 0, kInf, cfg.fit_over + cfg.fit_under);
    m.obj_const += cfg.fit_under * y;
    std::vector<std::pair<int, double>> lhs;
    for (size_t j = 0; j < f.size(); ++j)
      if (f[j] != 0.0) {
        lhs.push_back({kv[j], f[j]});
        m.vars[kv[j]].cost -= cfg.fit_under * f[j];
      }
    auto with = [&](int v, double a) {
      auto r = lhs;
      r.push_back({v, a});
      return r;
    };
    if (sec) m.add_row("cls" + id, with(xi, 1.0), RowSense::Ge, lim);
    else m.add_row("cls" + id, with(xi, -1.0), RowSense::Le, lim - cfg.margin);
    if (!sec && M && cfg.pair_free_safe) {
      std::vector<std::pair<int, double>> lin;
      for (auto [v, a] : lhs)
        if (v < kv[G + C]) lin.push_back({v, a});
      int xf = m.add_var("xf" + id, 0, kInf, cfg.type1_weight);
      lin.push_back({xf, -1.0});
      m.add_row("clf" + id, lin, RowSense::Le, lim - cfg.margin);
    }
    m.add_row("ov" + id, with(ov, -1.0), RowSense::Le, y);
  }
  auto res = solve(m, cfg.solver);
  if (res.status != SolveStatus::Optimal)
    throw SolverFailure(std::string("SCC training LP for bus ") + std::to_string(bus_id) + ": " +
                        to_string(res.status));
  for (int g = 0; g < G; ++g) out.k_g.push_back(res.x[kv[g]]);
  for (int k = 0; k < C; ++k) out.k_c.push_back(res.x[kv[G + k]]);
  for (int p = 0; p < M; ++p) out.k_m.push_back(res.x[kv[G + C + p]]);
  // clean solver noise so that exported coefficients are stable
  auto clean = [](std::vector<double>& v) {
    for (auto& a : v)
      if (std::fabs(a) < 1e-10) a = 0.0;
  };
  clean(out.k_g);
  clean(out.k_c);
  clean(out.k_m);
  out.objective = training_loss(c, out, pairs, samples, cfg);
  for (const auto& s : samples) {
    double L = approx_scc(out, pairs, s.u, s.alpha);
    bool sec = s.scc[bi] >= lim;
    if (L >= lim && !sec) ++out.train_type1;
    if (L < lim && sec) ++out.train_type2;
  }
  return out;
}

SccCoefficients train_coefficients(const NetworkCase& c, const std::vector<SccSample>& samples,
                                   const std::map<int, double>& buses_to_fit, const TrainConfig& cfg) {
  if (samples.empty()) throw Error("no training samples");
  SccCoefficients out;
  out.with_pairs = cfg.use_pairs;
  if (cfg.use_pairs)
    for (int i = 0; i < static_cast<int>(c.sgs.size()); ++i)
      for (int j = i + 1; j < static_cast<int>(c.sgs.size()); ++j) out.pairs.push_back({i, j});
  for (const auto& [bus, lim] : buses_to_fit) {
    auto b = fit_bus(c, samples, bus, lim, out.pairs, cfg);
    if (!b.critical)
      out.warnings.push_back("bus " + std::to_string(bus) + " is secure in every sample; marked non-critical");
    out.buses.push_back(std::move(b));
  }
  return out;
}

int ErrorReport::total_type1() const {
  int n = 0;
  for (const auto& r : rows) n += r.n_type1;
  return n;
}

int ErrorReport::total_type2() const {
  int n = 0;
  for (const auto& r : rows) n += r.n_type2;
  return n;
}

double ErrorReport::mean_type2_error() const {
  double s = 0;
  int n = 0;
  for (const auto& r : rows) {
    s += r.err_type2 * r.n_type2;
    n += r.n_type2;
  }
  return n ? s / n : 0.0;
}

ErrorReport classify_errors(const NetworkCase& c, const SccCoefficients& k, const std::vector<SccSample>& validation,
                            double i_lim) {
  ErrorReport rep;
  for (const auto& b : k.buses) {
    int bi = c.bus_index(b.bus);
    ErrorRow r;
    r.bus = b.bus;
    r.i_lim = i_lim;
    r.samples = static_cast<int>(validation.size());
    r.critical = b.critical;
    double e1 = 0, e2 = 0;
    for (const auto& s : validation) {
      double y = s.scc[bi];
      // a non-critical bus carries no constraint, so the surrogate never declares it insecure
      double L = b.critical ? approx_scc(b, k.pairs, s.u, s.alpha) : kInf;
      if (L >= i_lim && y < i_lim) {
        ++r.n_type1;
        e1 += std::isfinite(L) && y > 0 ? (L - y) / y : 0.0;
      } else if (L < i_lim && y >= i_lim) {
        ++r.n_type2;
        e2 += (L - y) / y;
      }
    }
    if (r.n_type1) r.err_type1 = 100.0 * e1 / r.n_type1;
    if (r.n_type2) r.err_type2 = 100.0 * e2 / r.n_type2;
    rep.rows.push_back(r);
  }
  return rep;
}

}  // namespace sccm
