#include <catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <random>

#include "effsel/ci.hpp"
#include "effsel/effect.hpp"
#include "effsel/error.hpp"
#include "effsel/numstats.hpp"
#include "fixtures.hpp"

using namespace effsel;
using Catch::Matchers::WithinAbs;
using effsel::testing::make_group;
using effsel::testing::normal_groups;
using effsel::testing::wdbc;

TEST_CASE("t statistics on a hand-worked pair") {
  const auto g = make_group({2, 4}, {0, 2});
  CHECK_THAT(t_stat(g), WithinAbs(std::sqrt(2.0), 1e-12));
  CHECK_THAT(welch_t_stat(g), WithinAbs(std::sqrt(2.0), 1e-12));
  const auto same = make_group({1, 2, 4}, {1, 2, 4});
  CHECK(t_stat(same) == 0.0);
  CHECK(welch_t_stat(same) == 0.0);
}

TEST_CASE("t statistic converts to d") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto g = normal_groups(10 + seed, 40 - seed, 0.1 * static_cast<double>(seed), seed);
    const double n1 = static_cast<double>(g.m.size()), n2 = static_cast<double>(g.b.size());
    CHECK_THAT(t_stat(g) * std::sqrt((n1 + n2) / (n1 * n2)), WithinAbs(cohens_d(g), 1e-12));
  }
}

TEST_CASE("Welch statistic and df") {
  // Equal spread and size: Welch t equals pooled t, df = N1 + N2 - 2.
  const auto g = make_group({1, 2, 3, 4}, {11, 12, 13, 14});
  CHECK_THAT(welch_t_stat(g), WithinAbs(t_stat(g), 1e-12));
  CHECK_THAT(welch_df(g), WithinAbs(6.0, 1e-12));

  const auto flat_b = make_group({1, 2, 3, 4, 5}, {7, 7, 7});
  CHECK_THAT(welch_df(flat_b), WithinAbs(4.0, 1e-12));

  const auto pair = make_group({0, std::sqrt(2.0)}, {5, 5 + std::sqrt(2.0)});  // sd 1 each
  CHECK_THAT(welch_df(pair), WithinAbs(2.0, 1e-12));

  CHECK_THROWS_AS(welch_df(make_group({3, 3}, {4, 4})), DegenerateFeature);
}

TEST_CASE("ncp_interval pivots") {
  const double level = 0.95;
  const auto zero = ncp_interval(0.0, 567.0, level);
  CHECK_THAT(zero.lo, WithinAbs(-zero.hi, 1e-6));

  for (double t : {-12.0, -1.0, 0.3, 2.0, 25.0, 31.0}) {
    for (double nu : {4.5, 60.0, 567.0}) {
      const auto b = ncp_interval(t, nu, level);
      CHECK(b.lo <= b.hi);
      CHECK_THAT(nct_cdf(t, nu, b.lo) - 0.975, WithinAbs(0.0, 1e-8));
      CHECK_THAT(nct_cdf(t, nu, b.hi) - 0.025, WithinAbs(0.0, 1e-8));
      // The ncp making t_obs the median lies inside.
      const double median = find_root([&](double ncp) { return nct_cdf(t, nu, ncp) - 0.5; }, t - 1, t + 1, 1e-10);
      CHECK(b.lo <= median);
      CHECK(median <= b.hi);
    }
  }
  CHECK_THROWS_AS(ncp_interval(1.0, 10.0, 1.5), DomainError);
  CHECK_THROWS_AS(ncp_interval(1.0, -1.0, 0.95), DomainError);
}

TEST_CASE("ci_cohens_d is the rescaled ncp interval") {
  const auto g = normal_groups(40, 55, 0.6, 5);
  const double n1 = 40, n2 = 55;
  const auto ci = ci_cohens_d(g, 0.95);
  const auto ncp = ncp_interval(t_stat(g), n1 + n2 - 2, 0.95);
  const double scale = std::sqrt((n1 + n2) / (n1 * n2));
  CHECK(ci.lo == ncp.lo * scale);
  CHECK(ci.hi == ncp.hi * scale);
  CHECK(ci.method == CiMethod::ncp);
  CHECK(ci.contains(cohens_d(g)));

  const auto same = make_group({1, 2, 4, 7}, {1, 2, 4, 7});
  const auto sym = ci_cohens_d(same);
  CHECK_THAT(sym.lo, WithinAbs(-sym.hi, 1e-6));
}

TEST_CASE("ci_cohens_dd reduces to ci_cohens_d for equal spread and size") {
  const auto g = make_group({1, 2, 3, 4, 6}, {3, 4, 5, 6, 8});
  const auto a = ci_cohens_d(g);
  const auto b = ci_cohens_dd(g);
  CHECK_THAT(a.lo, WithinAbs(b.lo, 1e-6));
  CHECK_THAT(a.hi, WithinAbs(b.hi, 1e-6));
}

TEST_CASE("intervals nest across confidence levels") {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const auto g = normal_groups(30, 45, 0.5 * static_cast<double>(seed), seed, 1.0, 1.7);
    const auto d90 = ci_cohens_d(g, 0.90), d95 = ci_cohens_d(g, 0.95), d99 = ci_cohens_d(g, 0.99);
    CHECK(d99.lo < d95.lo);
    CHECK(d95.lo < d90.lo);
    CHECK(d90.hi < d95.hi);
    CHECK(d95.hi < d99.hi);
    const auto w90 = ci_cohens_dd(g, 0.90), w95 = ci_cohens_dd(g, 0.95), w99 = ci_cohens_dd(g, 0.99);
    CHECK(w99.lo < w95.lo);
    CHECK(w95.lo < w90.lo);
    CHECK(w90.hi < w95.hi);
    CHECK(w95.hi < w99.hi);
  }
}

TEST_CASE("WDBC noncentral-t intervals for d and D") {
  const auto& ds = wdbc();
  auto ci_d = [&](const char* name) { return ci_cohens_d(oriented(group(ds, ds.index_of(name)))); };
  auto ci_dd = [&](const char* name) { return ci_cohens_dd(oriented(group(ds, ds.index_of(name)))); };
  auto near = [](const Interval& got, double lo, double hi) {
    CHECK_THAT(got.lo, WithinAbs(lo, 0.02));
    CHECK_THAT(got.hi, WithinAbs(hi, 0.02));
  };
  near(ci_d("radius mean"), 1.99, 2.41);
  near(ci_d("concave points worst"), 2.46, 2.92);
  near(ci_d("texture se"), -0.15, 0.18);
  near(ci_d("fractal dimension mean"), -0.14, 0.19);
  near(ci_dd("radius mean"), 1.81, 2.31);
  near(ci_dd("area mean"), 1.62, 2.12);
}

TEST_CASE("95% noncentral-t intervals cover a known d") {
  // 500 seeded simulations of two unit-variance normal groups with d = 0.8.
  int covered = 0;
  for (std::uint64_t s = 0; s < 500; ++s) {
    const auto g = normal_groups(30, 30, 0.8, 1000 + s);
    covered += ci_cohens_d(g).contains(0.8);
  }
  CHECK(covered >= 450);
}

TEST_CASE("bootstrap_t_interval does not depend on replicate order") {
  std::mt19937_64 rng(9);
  std::normal_distribution<double> z;
  std::vector<BootstrapReplicate> reps(400);
  for (auto& r : reps) r = {0.7 + 0.05 * z(rng), 0.04 + 0.01 * std::fabs(z(rng))};
  const auto base = bootstrap_t_interval(0.7, reps, 0.95);
  for (int k = 0; k < 5; ++k) {
    std::shuffle(reps.begin(), reps.end(), rng);
    const auto again = bootstrap_t_interval(0.7, reps, 0.95);
    CHECK(again.lo == base.lo);
    CHECK(again.hi == base.hi);
  }
  CHECK(base.method == CiMethod::bootstrap);
  CHECK(base.contains(0.7));
}

TEST_CASE("bootstrap_t_interval clamps to the unit interval") {
  std::vector<BootstrapReplicate> reps;
  for (int i = 0; i < 200; ++i) reps.push_back({0.99 - 0.001 * i, 0.001});
  const auto ci = bootstrap_t_interval(0.99, reps, 0.95);
  CHECK(ci.hi <= 1.0);
  CHECK(ci.lo >= 0.0);
}

TEST_CASE("bootstrap config validation") {
  const auto g = normal_groups(20, 20, 1.0, 1);
  CHECK_THROWS_AS(bootstrap_ci_u_all(g, BootstrapConfig{99, 25, 1}), DomainError);
  CHECK_THROWS_AS(bootstrap_ci_u_all(g, BootstrapConfig{100, 24, 1}), DomainError);
  CHECK_THROWS_AS(bootstrap_ci_u_all(g, BootstrapConfig{100, 25, 1}, 1.0), DomainError);
}

TEST_CASE("bootstrap is deterministic and independent of thread count") {
  const auto g = normal_groups(40, 60, 0.9, 17);
  BootstrapConfig one{200, 30, 123, 1};
  BootstrapConfig four{200, 30, 123, 4};
  const auto a = bootstrap_ci_u_all(g, one);
  const auto b = bootstrap_ci_u_all(g, one);
  const auto c = bootstrap_ci_u_all(g, four);
  for (auto m : {UMeasure::u1, UMeasure::u2, UMeasure::u3}) {
    CHECK(a.get(m).lo == b.get(m).lo);
    CHECK(a.get(m).hi == b.get(m).hi);
    CHECK(a.get(m).lo == c.get(m).lo);
    CHECK(a.get(m).hi == c.get(m).hi);
    const auto single = bootstrap_ci_u(g, m, one);
    CHECK(single.lo == a.get(m).lo);
    CHECK(single.hi == a.get(m).hi);
  }
  BootstrapConfig other = one;
  other.seed = 124;
  CHECK(bootstrap_ci_u_all(g, other).u3.lo != a.u3.lo);
}

TEST_CASE("bootstrap intervals contain the point estimate and stay in [0, 1]") {
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    const auto g = normal_groups(35, 50, 0.4 * static_cast<double>(seed) - 1.0, seed);
    const auto e = effect_sizes(g);
    const auto u = bootstrap_ci_u_all(g, BootstrapConfig{300, 40, seed});
    CHECK(u.u1.contains(e.u1));
    CHECK(u.u2.contains(e.u2));
    CHECK(u.u3.contains(e.u3));
    for (const auto* ci : {&u.u1, &u.u2, &u.u3}) {
      CHECK(ci->lo >= 0.0);
      CHECK(ci->hi <= 1.0);
      CHECK(ci->lo <= ci->hi);
    }
  }
}

TEST_CASE("degenerate resamples are redrawn, then abort past 10 * B1") {
  // Small groups produce constant resamples now and then.
  const auto some = make_group({0, 1, 2, 3, 4}, {1, 2, 3, 4.5});
  const auto u = bootstrap_ci_u_all(some, BootstrapConfig{100, 25, 5});
  CHECK(u.redraws > 0);
  CHECK(u.redraws <= 1000);

  // Two-point groups are constant half the time.
  const auto tiny = make_group({0, 1}, {2, 3});
  CHECK_THROWS_AS(bootstrap_ci_u_all(tiny, BootstrapConfig{100, 25, 5}), ConvergenceError);
}

TEST_CASE("feature_report orients the d and D intervals") {
  const auto g = make_group({1, 2, 3, 5, 4}, {6, 7, 9, 8, 10, 7.5});
  const auto r = feature_report(g, 0.95, BootstrapConfig{100, 25, 3});
  CHECK(r.point.direction == -1);
  CHECK(r.d.contains(r.point.d));
  CHECK(r.dd.contains(r.point.dd));
  const auto mirrored = ci_cohens_d(g);
  CHECK_THAT(r.d.lo, WithinAbs(-mirrored.hi, 1e-9));
  CHECK_THAT(r.d.hi, WithinAbs(-mirrored.lo, 1e-9));
}
