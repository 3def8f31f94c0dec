#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "sccm/case.hpp"
#include "sccm/solver.hpp"

namespace sccm {

struct SccSample {
  std::vector<int> u;
  std::vector<double> alpha;
  int hour = -1;             // hour the capacity factors came from, -1 when drawn uniformly
  std::vector<double> scc;   // exact SCC per bus (case bus order)
};

enum class SamplingPolicy {
  AnchorsOnly,  // all-on and all-off only
  Uniform,      // u uniform over {0,1}^G
  Feasible      // uniform u, rejected unless able to serve the drawn hour's demand
};

enum class AlphaSource { Series, Uniform };

struct SamplingConfig {
  SamplingPolicy policy = SamplingPolicy::Feasible;
  AlphaSource alpha = AlphaSource::Series;
  bool anchors = true;
};

std::vector<SccSample> generate_samples(const NetworkCase& c, int n_samples, const SamplingConfig& cfg,
                                        std::uint64_t seed);

bool is_secure(const SccSample& s, int bus_index, double i_lim);

struct BusCoefficients {
  int bus = 0;
  double i_lim = 0;
  bool critical = true;           // false: always secure in training, no constraint emitted
  std::vector<double> k_g;        // per SG
  std::vector<double> k_c;        // per IBR
  std::vector<double> k_m;        // per SG pair, empty unless trained with pairs
  double objective = 0;           // weighted training loss
  int train_type1 = 0, train_type2 = 0;
};

struct SccCoefficients {
  bool with_pairs = false;
  std::vector<std::pair<int, int>> pairs;  // SG index pairs m = (g, g')
  std::vector<BusCoefficients> buses;
  std::vector<std::string> warnings;

  const BusCoefficients* find(int bus_id) const;
  std::vector<int> critical_buses() const;
};

struct DegenerateFit : Error {
  using Error::Error;
};

struct TrainConfig {
  bool use_pairs = false;
  double type1_weight = 1e3;   // hinge weight on insecure samples
  double type2_weight = 1.0;   // hinge weight on secure samples
  double margin = 0.1;         // insecure samples must sit this far below the limit, p.u.
  double fit_under = 1e-3;     // L1 weight, surrogate below exact
  double fit_over = 2e-3;      // L1 weight, surrogate above exact
  bool monotone = true;        // k_g, k_c >= 0
  bool cap_ibr = false;        // k_bc <= the IBR's own injection (its largest possible contribution)
  bool pair_free_safe = true;  // with pairs: the surrogate without pair terms must also reject insecure samples
  SolveOptions solver{};
};

// bus ids with limits; all samples must carry SCC for the same case
SccCoefficients train_coefficients(const NetworkCase& c, const std::vector<SccSample>& samples,
                                   const std::map<int, double>& buses_to_fit, const TrainConfig& cfg = {});

// surrogate I_L for one bus (pairs used when present)
double approx_scc(const BusCoefficients& k, const std::vector<std::pair<int, int>>& pairs,
                  const std::vector<int>& u, const std::vector<double>& alpha);

// the surrogate with pair terms dropped, as consumed by the market models
SccCoefficients pairs_free(const SccCoefficients& k);

// recomputes the weighted loss the trainer minimizes
double training_loss(const NetworkCase& c, const BusCoefficients& k, const std::vector<std::pair<int, int>>& pairs,
                     const std::vector<SccSample>& samples, const TrainConfig& cfg);

struct ErrorRow {
  int bus = 0;
  double i_lim = 0;
  int samples = 0;
  int n_type1 = 0, n_type2 = 0;
  double err_type1 = 0, err_type2 = 0;  // mean signed relative error, %; 0 when count is 0
  bool critical = true;
};

struct ErrorReport {
  std::vector<ErrorRow> rows;
  int total_type1() const;
  int total_type2() const;
  double mean_type2_error() const;  // over all Type-II samples, %
};

ErrorReport classify_errors(const NetworkCase& c, const SccCoefficients& k, const std::vector<SccSample>& validation,
                            double i_lim);

}  // namespace sccm
