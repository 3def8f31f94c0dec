#include <doctest.h>

#include "sccm/grid.hpp"
#include "sccm/io.hpp"
#include "sccm/train.hpp"

using namespace sccm;

namespace {

NetworkCase two_bus() {
  NetworkCase c;
  c.name = "two";
  c.buses = {{1, true, 4.0, 0.0}, {2, true, 3.0, 0.0}};
  c.branches = {{1, 2, 0.1, 0.0}};
  SyncGen g;
  g.id = "g";
  g.bus = 1;
  g.p_min = 1;
  g.p_max = 10;
  g.ramp_up = g.ramp_down = 10;
  g.x_internal = 0.2;
  g.scc_injection = 5.0;
  c.sgs.push_back(g);
  c.demand = {1.0};
  return c;
}

NetworkCase toy() { return load_case(std::string(SCCM_DATA_DIR) + "/toy3.json"); }

SccSample labelled(const NetworkCase& c, std::vector<int> u) {
  SccSample s;
  s.u = std::move(u);
  s.alpha = {};
  s.scc = exact_scc_or_zero(c, s.u, s.alpha);
  return s;
}

}  // namespace

TEST_CASE("anchors-only sampling returns the two anchors") {
  auto c = toy();
  auto s = generate_samples(c, 2, {SamplingPolicy::AnchorsOnly, AlphaSource::Series, true}, 3);
  REQUIRE(s.size() == 2);
  CHECK(s[0].u == std::vector<int>{1, 1});
  CHECK(s[1].u == std::vector<int>{0, 0});
}

TEST_CASE("sampling is deterministic in the seed") {
  auto c = toy();
  SamplingConfig cfg{SamplingPolicy::Uniform, AlphaSource::Uniform, true};
  auto a = generate_samples(c, 50, cfg, 11);
  auto b = generate_samples(c, 50, cfg, 11);
  auto d = generate_samples(c, 50, cfg, 12);
  REQUIRE(a.size() == b.size());
  bool differs = false;
  for (size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].u == b[i].u);
    CHECK(a[i].alpha == b[i].alpha);
    CHECK(a[i].scc == b[i].scc);
    differs |= a[i].alpha != d[i].alpha;
  }
  CHECK(differs);
}

TEST_CASE("feasible sampling respects the drawn hour's demand") {
  auto c = toy();
  auto s = generate_samples(c, 200, {SamplingPolicy::Feasible, AlphaSource::Series, false}, 5);
  for (const auto& x : s) {
    REQUIRE(x.hour >= 0);
    double pmax = 0, pmin = 0;
    for (size_t g = 0; g < c.sgs.size(); ++g) {
      pmax += x.u[g] * c.sgs[g].p_max;
      pmin += x.u[g] * c.sgs[g].p_min;
    }
    for (size_t j = 0; j < c.ibrs.size(); ++j) pmax += x.alpha[j] * c.ibrs[j].p_max;
    CHECK(pmin <= c.demand[x.hour]);
    CHECK(pmax >= c.demand[x.hour]);
  }
}

TEST_CASE("affine-realizable samples are fitted exactly") {
  auto c = two_bus();
  auto s = generate_samples(c, 20, {SamplingPolicy::Uniform, AlphaSource::Uniform, true}, 1);
  auto k = train_coefficients(c, s, {{1, 4.0}, {2, 3.0}});
  REQUIRE(k.buses.size() == 2);
  CHECK(k.find(1)->k_g[0] == doctest::Approx(5.0).epsilon(1e-6));
  CHECK(k.find(2)->k_g[0] == doctest::Approx(1.0 / 0.3).epsilon(1e-6));
  auto v = generate_samples(c, 20, {SamplingPolicy::Uniform, AlphaSource::Uniform, true}, 2);
  for (double lim : {3.0, 4.0}) {
    auto rep = classify_errors(c, k, v, lim);
    CHECK(rep.total_type1() == 0);
    CHECK(rep.total_type2() == 0);
  }
}

TEST_CASE("two anchors are separated") {
  auto c = toy();
  auto s = generate_samples(c, 2, {SamplingPolicy::AnchorsOnly, AlphaSource::Series, true}, 9);
  auto k = train_coefficients(c, s, {{3, 2.0}});
  const auto& b = *k.find(3);
  REQUIRE(b.critical);
  int bi = c.bus_index(3);
  for (const auto& x : s) {
    double L = approx_scc(b, k.pairs, x.u, x.alpha);
    CHECK((L >= 2.0) == is_secure(x, bi, 2.0));
  }
}

TEST_CASE("an optimistic surrogate is counted as one Type-I error") {
  auto c = two_bus();
  std::vector<SccSample> v{labelled(c, {1}), labelled(c, {0}), labelled(c, {0})};
  SccCoefficients k;
  BusCoefficients b;
  b.bus = 2;
  b.i_lim = 3.5;
  b.k_g = {5.0};  // the true contribution at bus 2 is 1/0.3
  k.buses = {b};
  auto rep = classify_errors(c, k, v, 3.5);
  REQUIRE(rep.rows.size() == 1);
  CHECK(rep.rows[0].n_type1 == 1);
  CHECK(rep.rows[0].n_type2 == 0);
  CHECK(rep.rows[0].err_type1 == doctest::Approx(100.0 * (5.0 - 1.0 / 0.3) / (1.0 / 0.3)));
}

TEST_CASE("exact coefficients give no errors") {
  auto c = two_bus();
  std::vector<SccSample> v{labelled(c, {1}), labelled(c, {0})};
  SccCoefficients k;
  BusCoefficients b;
  b.bus = 1;
  b.i_lim = 4.0;
  b.k_g = {5.0};
  k.buses = {b};
  auto rep = classify_errors(c, k, v, 4.0);
  CHECK(rep.total_type1() == 0);
  CHECK(rep.total_type2() == 0);
}

TEST_CASE("training is deterministic and its loss is reproducible") {
  auto c = toy();
  auto s = generate_samples(c, 300, {SamplingPolicy::Uniform, AlphaSource::Uniform, true}, 4);
  TrainConfig cfg;
  auto a = train_coefficients(c, s, {{3, 2.0}}, cfg);
  auto b = train_coefficients(c, s, {{3, 2.0}}, cfg);
  CHECK(a.find(3)->k_g == b.find(3)->k_g);
  CHECK(a.find(3)->k_c == b.find(3)->k_c);
  double loss = training_loss(c, *a.find(3), a.pairs, s, cfg);
  CHECK(loss == doctest::Approx(a.find(3)->objective).epsilon(1e-6));
  for (double v : a.find(3)->k_g) CHECK(v >= 0.0);
}

TEST_CASE("training rejects every insecure training sample with enough weight") {
  auto c = toy();
  auto s = generate_samples(c, 300, {SamplingPolicy::Uniform, AlphaSource::Uniform, true}, 8);
  auto k = train_coefficients(c, s, {{3, 2.0}});
  CHECK(k.find(3)->train_type1 == 0);
  auto rep = classify_errors(c, k, s, 2.0);
  CHECK(rep.total_type1() == 0);
}

TEST_CASE("a bus that is always secure needs no constraint") {
  auto c = toy();
  auto s = generate_samples(c, 50, {SamplingPolicy::Uniform, AlphaSource::Uniform, false}, 3);
  std::vector<SccSample> on;
  for (auto& x : s)
    if (x.u[1] == 1) on.push_back(x);
  REQUIRE(!on.empty());
  auto k = train_coefficients(c, on, {{3, 2.0}});
  CHECK_FALSE(k.find(3)->critical);
  CHECK(k.critical_buses().empty());
}

TEST_CASE("pairs are fitted when requested and dropped on demand") {
  auto c = toy();
  auto s = generate_samples(c, 200, {SamplingPolicy::Uniform, AlphaSource::Uniform, true}, 6);
  TrainConfig cfg;
  cfg.use_pairs = true;
  auto k = train_coefficients(c, s, {{3, 2.0}}, cfg);
  CHECK(k.with_pairs);
  CHECK(k.pairs.size() == 1);
  CHECK(k.find(3)->k_m.size() == 1);
  auto f = pairs_free(k);
  CHECK_FALSE(f.with_pairs);
  CHECK(f.find(3)->k_m.empty());
}

TEST_CASE("30-bus bus 26 sees both classes under uniform sampling") {
  auto c = load_case(std::string(SCCM_DATA_DIR) + "/ieee30_scc.json");
  auto s = generate_samples(c, 2000, {SamplingPolicy::Uniform, AlphaSource::Series, true}, 7);
  int bi = c.bus_index(26), secure = 0;
  for (const auto& x : s) secure += is_secure(x, bi, 5.0);
  MESSAGE("bus 26 secure fraction " << double(secure) / s.size());
  CHECK(secure > 0);
  CHECK(secure < static_cast<int>(s.size()));
}
