#include "effsel/ci.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <thread>

#include "effsel/error.hpp"
#include "effsel/numstats.hpp"
#include "effsel/random.hpp"

namespace effsel {

namespace {

void check_level(double level) {
  if (!(level > 0.0 && level < 1.0)) throw DomainError("confidence level must lie in (0, 1)");
}

double sample_sd(std::span<const double> v) {
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= static_cast<double>(v.size());
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

// R type 7 quantile of sorted data.
double quantile_sorted(std::span<const double> sorted, double p) {
  const double h = (static_cast<double>(sorted.size()) - 1.0) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

}  // namespace

void BootstrapConfig::validate() const {
  if (b1 < 100) throw DomainError("bootstrap b1 must be >= 100, got " + std::to_string(b1));
  if (b2 < 25) throw DomainError("bootstrap b2 must be >= 25, got " + std::to_string(b2));
}

double t_stat(const GroupedFeature& g) {
  const auto sm = stats(g.m);
  const auto sb = stats(g.b);
  const double n1 = static_cast<double>(sm.n);
  const double n2 = static_cast<double>(sb.n);
  const double pooled_var = ((n1 - 1.0) * sm.var + (n2 - 1.0) * sb.var) / (n1 + n2 - 2.0);
  if (!(pooled_var > 0.0)) throw DegenerateFeature(g.name);
  return (sm.mean - sb.mean) / (std::sqrt(pooled_var) * std::sqrt(1.0 / n1 + 1.0 / n2));
}

double welch_t_stat(const GroupedFeature& g) {
  const auto sm = stats(g.m);
  const auto sb = stats(g.b);
  const double se2 = sm.var / static_cast<double>(sm.n) + sb.var / static_cast<double>(sb.n);
  if (!(se2 > 0.0)) throw DegenerateFeature(g.name);
  return (sm.mean - sb.mean) / std::sqrt(se2);
}

double welch_df(const GroupedFeature& g) {
  const auto sm = stats(g.m);
  const auto sb = stats(g.b);
  const double n1 = static_cast<double>(sm.n);
  const double n2 = static_cast<double>(sb.n);
  const double a = sm.var / n1;
  const double b = sb.var / n2;
  if (!(a + b > 0.0)) throw DegenerateFeature(g.name);
  return (a + b) * (a + b) / (a * a / (n1 - 1.0) + b * b / (n2 - 1.0));
}

NcpBounds ncp_interval(double t_obs, double nu, double level) {
  check_level(level);
  if (!(nu > 0.0)) throw DomainError("ncp_interval: degrees of freedom must be positive");
  const double alpha = 1.0 - level;
  // Starting bracket about t_obs, sized by the approximate spread of T.
  const double spread = std::sqrt(1.0 + t_obs * t_obs / (2.0 * nu));
  const double width = 4.0 * spread;
  auto solve = [&](double target) {
    try {
      return find_root([&](double ncp) { return nct_cdf(t_obs, nu, ncp) - target; }, t_obs - width,
                       t_obs + width, 1e-12);
    } catch (const DomainError& e) {
      throw DomainError("ncp_interval: root search failed for t_obs=" + std::to_string(t_obs) +
                        ", nu=" + std::to_string(nu) + ": " + e.what());
    }
  };
  NcpBounds out{solve(1.0 - 0.5 * alpha), solve(0.5 * alpha)};
  if (out.lo > out.hi) std::swap(out.lo, out.hi);
  return out;
}

Interval ci_cohens_d(const GroupedFeature& g, double level) {
  const double n1 = static_cast<double>(g.m.size());
  const double n2 = static_cast<double>(g.b.size());
  const auto ncp = ncp_interval(t_stat(g), n1 + n2 - 2.0, level);
  const double scale = std::sqrt((n1 + n2) / (n1 * n2));
  return {ncp.lo * scale, ncp.hi * scale, level, CiMethod::ncp};
}

Interval ci_cohens_dd(const GroupedFeature& g, double level) {
  const auto sm = stats(g.m);
  const auto sb = stats(g.b);
  const auto ncp = ncp_interval(welch_t_stat(g), welch_df(g), level);
  const double scale = std::sqrt(sm.var / static_cast<double>(sm.n) + sb.var / static_cast<double>(sb.n)) /
                       std::sqrt(0.5 * (sm.var + sb.var));
  return {ncp.lo * scale, ncp.hi * scale, level, CiMethod::ncp};
}

std::string_view to_string(UMeasure m) noexcept {
  switch (m) {
    case UMeasure::u1: return "u1";
    case UMeasure::u2: return "u2";
    case UMeasure::u3: return "u3";
  }
  return "?";
}

double u_statistic(UMeasure m, double signed_d) {
  switch (m) {
    case UMeasure::u1: return u_measures(std::fabs(signed_d)).u1;
    case UMeasure::u2: return phi(0.5 * std::fabs(signed_d));
    case UMeasure::u3: return phi(signed_d);
  }
  return 0.0;
}

Interval bootstrap_t_interval(double theta_hat, std::span<const BootstrapReplicate> reps, double level) {
  check_level(level);
  if (reps.size() < 2) throw DomainError("bootstrap_t_interval needs at least two replicates");
  std::vector<double> thetas;
  std::vector<double> tstar;
  thetas.reserve(reps.size());
  tstar.reserve(reps.size());
  for (const auto& r : reps) {
    if (!(r.sd > 0.0)) throw DomainError("bootstrap replicate with non-positive SD");
    thetas.push_back(r.theta);
    tstar.push_back((r.theta - theta_hat) / r.sd);
  }
  std::sort(thetas.begin(), thetas.end());
  std::sort(tstar.begin(), tstar.end());
  const double alpha = 1.0 - level;
  const double t_lo = quantile_sorted(tstar, 0.5 * alpha);
  const double t_hi = quantile_sorted(tstar, 1.0 - 0.5 * alpha);
  const double sd = sample_sd(thetas);
  Interval out{theta_hat - t_hi * sd, theta_hat - t_lo * sd, level, CiMethod::bootstrap};
  out.lo = std::clamp(out.lo, 0.0, 1.0);
  out.hi = std::clamp(out.hi, 0.0, 1.0);
  return out;
}

const Interval& UIntervals::get(UMeasure m) const noexcept {
  switch (m) {
    case UMeasure::u1: return u1;
    case UMeasure::u2: return u2;
    case UMeasure::u3: return u3;
  }
  return u3;
}

namespace {

constexpr UMeasure kUMeasures[] = {UMeasure::u1, UMeasure::u2, UMeasure::u3};

// Running sums of one resampled group, shifted by a fixed centre for accuracy.
struct GroupSums {
  double sum = 0.0;
  double sumsq = 0.0;
  double min = 0.0;
  double max = 0.0;
};

GroupSums draw(std::span<const double> from, std::span<double> into, double centre, std::mt19937_64& rng) {
  GroupSums s;
  s.min = s.max = from[0];
  bool first = true;
  for (double& slot : into) {
    const double v = from[bounded(rng, from.size())];
    slot = v;
    const double c = v - centre;
    s.sum += c;
    s.sumsq += c * c;
    if (first) {
      s.min = s.max = v;
      first = false;
    } else {
      s.min = std::min(s.min, v);
      s.max = std::max(s.max, v);
    }
  }
  return s;
}

// Signed Cohen's d from resample sums; false when either group is constant.
bool resampled_d(const GroupSums& m, std::size_t n1, const GroupSums& b, std::size_t n2, double centre_gap,
                 double& d) {
  if (m.min == m.max || b.min == b.max) return false;
  const double f1 = static_cast<double>(n1);
  const double f2 = static_cast<double>(n2);
  const double ss1 = std::max(m.sumsq - m.sum * m.sum / f1, 0.0);
  const double ss2 = std::max(b.sumsq - b.sum * b.sum / f2, 0.0);
  const double pooled = (ss1 + ss2) / (f1 + f2 - 2.0);
  if (!(pooled > 0.0)) return false;
  d = (centre_gap + m.sum / f1 - b.sum / f2) / std::sqrt(pooled);
  return true;
}

struct ReplicateOut {
  BootstrapReplicate rep[3];
  std::size_t redraws = 0;
  bool exhausted = false;
};

class ReplicateRunner {
 public:
  ReplicateRunner(const GroupedFeature& g, const BootstrapConfig& cfg)
      : g_(g),
        cfg_(cfg),
        root_(derive_seed(cfg.seed, "bootstrap")),
        cm_(stats(g.m).mean),
        cb_(stats(g.b).mean),
        m_star_(g.m.size()),
        b_star_(g.b.size()),
        m_inner_(g.m.size()),
        b_inner_(g.b.size()),
        inner_(3 * cfg.b2) {}

  ReplicateOut run(std::size_t b, std::size_t redraw_cap) {
    ReplicateOut out;
    std::mt19937_64 rng(derive_seed(root_, g_.index, b));
    const std::size_t n1 = g_.m.size();
    const std::size_t n2 = g_.b.size();
    const double gap = cm_ - cb_;
    while (true) {
      if (out.redraws > redraw_cap) {
        out.exhausted = true;
        return out;
      }
      const auto sm = draw(g_.m, m_star_, cm_, rng);
      const auto sb = draw(g_.b, b_star_, cb_, rng);
      double d = 0.0;
      if (!resampled_d(sm, n1, sb, n2, gap, d)) {
        ++out.redraws;
        continue;
      }
      for (std::size_t k = 0; k < cfg_.b2;) {
        if (out.redraws > redraw_cap) {
          out.exhausted = true;
          return out;
        }
        const auto im = draw(m_star_, m_inner_, cm_, rng);
        const auto ib = draw(b_star_, b_inner_, cb_, rng);
        double dd = 0.0;
        if (!resampled_d(im, n1, ib, n2, gap, dd)) {
          ++out.redraws;
          continue;
        }
        for (std::size_t q = 0; q < 3; ++q) inner_[q * cfg_.b2 + k] = u_statistic(kUMeasures[q], dd);
        ++k;
      }
      bool ok = true;
      for (std::size_t q = 0; q < 3; ++q) {
        const double sd = sample_sd(std::span<const double>(inner_).subspan(q * cfg_.b2, cfg_.b2));
        out.rep[q] = {u_statistic(kUMeasures[q], d), sd};
        ok = ok && sd > 0.0;
      }
      if (ok) return out;
      ++out.redraws;
    }
  }

 private:
  const GroupedFeature& g_;
  const BootstrapConfig& cfg_;
  std::uint64_t root_;
  double cm_;
  double cb_;
  std::vector<double> m_star_, b_star_, m_inner_, b_inner_, inner_;
};

}  // namespace

UIntervals bootstrap_ci_u_all(const GroupedFeature& g, const BootstrapConfig& cfg, double level) {
  cfg.validate();
  check_level(level);
  const double d_hat = cohens_d(g);  // also rejects degenerate input

  const std::size_t b1 = cfg.b1;
  const std::size_t redraw_cap = 10 * b1;
  std::vector<ReplicateOut> outs(b1);
  unsigned threads = cfg.threads ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, b1));

  auto work = [&](std::size_t begin, std::size_t end) {
    ReplicateRunner runner(g, cfg);
    for (std::size_t b = begin; b < end; ++b) outs[b] = runner.run(b, redraw_cap);
  };
  if (threads <= 1) {
    work(0, b1);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) {
      pool.emplace_back(work, b1 * t / threads, b1 * (t + 1) / threads);
    }
  }

  UIntervals result;
  std::vector<BootstrapReplicate> reps[3];
  for (auto& r : reps) r.reserve(b1);
  for (const auto& o : outs) {
    result.redraws += o.redraws;
    if (o.exhausted || result.redraws > redraw_cap) {
      throw ConvergenceError("bootstrap for '" + g.name + "': more than " + std::to_string(redraw_cap) +
                             " degenerate resamples");
    }
    for (std::size_t q = 0; q < 3; ++q) reps[q].push_back(o.rep[q]);
  }
  result.u1 = bootstrap_t_interval(u_statistic(UMeasure::u1, d_hat), reps[0], level);
  result.u2 = bootstrap_t_interval(u_statistic(UMeasure::u2, d_hat), reps[1], level);
  result.u3 = bootstrap_t_interval(u_statistic(UMeasure::u3, d_hat), reps[2], level);
  return result;
}

Interval bootstrap_ci_u(const GroupedFeature& g, UMeasure m, const BootstrapConfig& cfg, double level) {
  return bootstrap_ci_u_all(g, cfg, level).get(m);
}

FeatureReport feature_report(const GroupedFeature& g, double level, const BootstrapConfig& cfg) {
  FeatureReport r;
  r.point = effect_sizes(g);
  const auto og = oriented(g);
  r.d = ci_cohens_d(og, level);
  r.dd = ci_cohens_dd(og, level);
  const auto u = bootstrap_ci_u_all(g, cfg, level);
  r.u1 = u.u1;
  r.u2 = u.u2;
  r.u3 = u.u3;
  r.redraws = u.redraws;
  return r;
}

std::vector<FeatureReport> effect_size_report(const Dataset& ds, double level, const BootstrapConfig& cfg) {
  std::vector<FeatureReport> out;
  out.reserve(ds.num_features());
  for (std::size_t i = 0; i < ds.num_features(); ++i) out.push_back(feature_report(group(ds, i), level, cfg));
  return out;
}

}  // namespace effsel
