#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "effsel/data.hpp"
#include "effsel/effect.hpp"

namespace effsel {

enum class CiMethod { ncp, bootstrap };

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  double level = 0.95;
  CiMethod method = CiMethod::ncp;

  bool contains(double x) const noexcept { return lo <= x && x <= hi; }
};

struct BootstrapConfig {
  std::size_t b1 = 2000;  // outer resamples
  std::size_t b2 = 200;   // nested resamples per outer replicate, for its SD
  std::uint64_t seed = 42;
  // 0 picks std::thread::hardware_concurrency(). The result does not depend on it.
  unsigned threads = 0;

  // Throws DomainError unless b1 >= 100 and b2 >= 25.
  void validate() const;
};

// Pooled two-sample t statistic; estimates the noncentrality parameter.
double t_stat(const GroupedFeature& g);
// Unequal-variance (Welch) t statistic.
double welch_t_stat(const GroupedFeature& g);
// Welch-Satterthwaite degrees of freedom. Real-valued.
double welch_df(const GroupedFeature& g);

struct NcpBounds {
  double lo = 0.0;
  double hi = 0.0;
};

// Noncentrality parameters placing t_obs at the upper and lower alpha/2
// points: nct_cdf(t_obs, nu, lo) = 1 - alpha/2 and nct_cdf(t_obs, nu, hi) = alpha/2.
NcpBounds ncp_interval(double t_obs, double nu, double level);

// NCP interval for Cohen's d, nu = N1 + N2 - 2, rescaled by sqrt((N1+N2)/(N1 N2)).
Interval ci_cohens_d(const GroupedFeature& g, double level = 0.95);
// NCP interval for Cohen's D on the Welch statistic and Welch df, rescaled by
// sqrt(sd_m^2/N1 + sd_b^2/N2) / sqrt((sd_m^2 + sd_b^2) / 2).
Interval ci_cohens_dd(const GroupedFeature& g, double level = 0.95);

enum class UMeasure { u1, u2, u3 };
std::string_view to_string(UMeasure m) noexcept;

// Statistic of a resampled group pair for measure m, on the same scale as
// EffectSizes: u1, u2 from |d|, u3 from the signed d.
double u_statistic(UMeasure m, double signed_d);

struct BootstrapReplicate {
  double theta = 0.0;  // statistic on the outer resample
  double sd = 0.0;     // SD of the statistic over its nested resamples
};

// Bootstrap-t interval from finished replicates:
//   T_b = (theta_b - theta_hat) / sd_b,
//   [theta_hat - t_{1-a/2} * SD(theta*), theta_hat - t_{a/2} * SD(theta*)]
// with SD(theta*) the standard deviation of the outer statistics and the
// percentiles by linear interpolation between order statistics. Clamped to [0, 1].
// The result does not depend on the order of `reps`.
Interval bootstrap_t_interval(double theta_hat, std::span<const BootstrapReplicate> reps, double level);

struct UIntervals {
  Interval u1;
  Interval u2;
  Interval u3;
  std::size_t redraws = 0;  // degenerate resamples that were skipped

  const Interval& get(UMeasure m) const noexcept;
};

// Nested bootstrap-t for the three U measures on shared resamples. Each outer
// replicate draws N1 values from m and N2 from b with replacement, then B2
// nested resamples of that replicate give its SD. A resample with a constant
// group (or a zero nested SD) is redrawn; more than 10 * B1 redraws throws
// ConvergenceError. Replicate b uses its own stream seeded from
// (seed, feature index, b), so the result is identical for any thread count.
UIntervals bootstrap_ci_u_all(const GroupedFeature& g, const BootstrapConfig& cfg, double level = 0.95);

Interval bootstrap_ci_u(const GroupedFeature& g, UMeasure m, const BootstrapConfig& cfg, double level = 0.95);

// Point estimates plus all five intervals for one feature. The d and D
// intervals are on the magnitude scale of EffectSizes (computed on the
// oriented groups).
struct FeatureReport {
  EffectSizes point;
  Interval d;
  Interval dd;
  Interval u1;
  Interval u2;
  Interval u3;
  std::size_t redraws = 0;
};

FeatureReport feature_report(const GroupedFeature& g, double level, const BootstrapConfig& cfg);
std::vector<FeatureReport> effect_size_report(const Dataset& ds, double level, const BootstrapConfig& cfg);

}  // namespace effsel
