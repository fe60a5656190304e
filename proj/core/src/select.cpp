#include "effsel/select.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "effsel/error.hpp"

namespace effsel {

std::string_view to_string(Measure m) noexcept {
  switch (m) {
    case Measure::d: return "d";
    case Measure::dd: return "D";
    case Measure::u1: return "u1";
    case Measure::u2: return "u2";
    case Measure::u3: return "u3";
    case Measure::common: return "common";
    case Measure::relief: return "relief";
  }
  return "?";
}

std::optional<Measure> parse_measure(std::string_view s) noexcept {
  if (s == "d") return Measure::d;
  if (s == "D" || s == "dd") return Measure::dd;
  if (s == "u1" || s == "U1") return Measure::u1;
  if (s == "u2" || s == "U2") return Measure::u2;
  if (s == "u3" || s == "U3") return Measure::u3;
  if (s == "common") return Measure::common;
  if (s == "relief") return Measure::relief;
  return std::nullopt;
}

Scores scores_for(std::span<const EffectSizes> effects, Measure m) {
  Scores out;
  out.reserve(effects.size());
  for (const auto& e : effects) {
    double v = 0.0;
    switch (m) {
      case Measure::d: v = e.d; break;
      case Measure::dd: v = e.dd; break;
      case Measure::u1: v = e.u1; break;
      case Measure::u2: v = e.u2; break;
      case Measure::u3: v = e.u3; break;
      default: throw DomainError("scores_for: not an effect-size measure");
    }
    out.push_back({e.feature, v});
  }
  return out;
}

bool SelectionResult::contains(std::string_view feature) const {
  return std::find(selected.begin(), selected.end(), feature) != selected.end();
}

SelectionResult select_by_threshold(const Scores& scores, double threshold, bool strict, Measure measure) {
  SelectionResult r;
  r.measure = measure;
  r.threshold = threshold;
  r.strict = strict;
  r.scores = scores;
  for (const auto& s : scores) {
    if (!std::isfinite(s.score)) throw DomainError("non-finite score for '" + s.feature + "'");
    if (strict ? s.score > threshold : s.score >= threshold) r.selected.push_back(s.feature);
  }
  return r;
}

double mean_score(const Scores& scores) {
  if (scores.empty()) throw DomainError("mean of empty scores");
  double sum = 0.0;
  for (const auto& s : scores) sum += s.score;
  return sum / static_cast<double>(scores.size());
}

double u_threshold(const Scores& scores) {
  // The 1e-9 nudge keeps values such as 0.7 from flooring to 0.6 through
  // representation error.
  return std::floor(10.0 * mean_score(scores) + 1e-9) / 10.0;
}

SelectionResult select_measure(std::span<const EffectSizes> effects, Measure m) {
  auto scores = scores_for(effects, m);
  if (m == Measure::d || m == Measure::dd) return select_by_threshold(scores, kLargeEffect, true, m);
  const double cut = mean_score(scores);
  return select_by_threshold(scores, cut, false, m);
}

SelectionResult common_features(std::span<const SelectionResult> results) {
  if (results.size() != 5) {
    throw DomainError("common_features needs the five effect-size selections, got " +
                      std::to_string(results.size()));
  }
  SelectionResult r;
  r.measure = Measure::common;
  r.threshold = std::numeric_limits<double>::quiet_NaN();
  for (const auto& f : results.front().selected) {
    if (std::all_of(results.begin() + 1, results.end(), [&](const SelectionResult& s) { return s.contains(f); })) {
      r.selected.push_back(f);
    }
  }
  return r;
}

Scores relief_weights(const Dataset& ds, std::uint64_t /*seed*/) {
  const std::size_t f = ds.num_features();
  const std::size_t n = ds.num_samples();

  // Sample-major normalized copy so a distance scan walks contiguous memory.
  std::vector<double> x(n * f, 0.0);
  for (std::size_t j = 0; j < f; ++j) {
    auto row = ds.values(j);
    const auto [mn, mx] = std::minmax_element(row.begin(), row.end());
    const double range = *mx - *mn;
    if (range == 0.0) continue;
    for (std::size_t s = 0; s < n; ++s) x[s * f + j] = (row[s] - *mn) / range;
  }

  const auto labels = ds.labels();
  std::vector<double> w(f, 0.0);
  const double inv_m = 1.0 / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double* xi = &x[i * f];
    std::size_t hit = n, miss = n;
    double best_hit = std::numeric_limits<double>::infinity();
    double best_miss = best_hit;
    for (std::size_t k = 0; k < n; ++k) {
      if (k == i) continue;
      const double* xk = &x[k * f];
      double dist = 0.0;
      for (std::size_t j = 0; j < f; ++j) {
        const double diff = xi[j] - xk[j];
        dist += diff * diff;
      }
      if (labels[k] == labels[i]) {
        if (dist < best_hit) best_hit = dist, hit = k;
      } else if (dist < best_miss) {
        best_miss = dist, miss = k;
      }
    }
    const double* xh = &x[hit * f];
    const double* xm = &x[miss * f];
    for (std::size_t j = 0; j < f; ++j) {
      const double dh = xi[j] - xh[j];
      const double dm = xi[j] - xm[j];
      w[j] += (dm * dm - dh * dh) * inv_m;
    }
  }

  Scores out;
  out.reserve(f);
  for (std::size_t j = 0; j < f; ++j) out.push_back({ds.names()[j], w[j]});
  return out;
}

SelectionResult select_relief(const Dataset& ds) {
  auto weights = relief_weights(ds);
  auto r = select_by_threshold(weights, mean_score(weights), true, Measure::relief);
  if (ds.num_features() == 1) {
    r.note = "degenerate: a single feature never exceeds its own mean weight";
  }
  return r;
}

}  // namespace effsel
