#pragma once

#include <string>
#include <vector>

#include "effsel/data.hpp"

namespace effsel {

// Cohen's d: mean difference (m - b) over the pooled, Bessel-corrected
// standard deviation. Signed; swapping the groups negates it.
// Throws DegenerateFeature when the pooled variance is zero.
double cohens_d(const GroupedFeature& g);

// Cohen's D (Welch variant): mean difference over sqrt((sd_m^2 + sd_b^2) / 2).
double cohens_dd(const GroupedFeature& g);

struct UMeasures {
  double u1 = 0.0;
  double u2 = 0.0;
  double u3 = 0.0;
};

// Cohen's non-overlap measures for a standardized difference d:
//   u3 = phi(d), u2 = phi(d / 2), u1 = (2 u2 - 1) / u2 clamped at 0.
UMeasures u_measures(double d);

// Per-feature effect-size summary as reported and used for selection.
//
// `d` and `dd` are magnitudes |d| and |D|: a feature separates the classes
// equally well whichever group has the larger mean. `u1` and `u2` measure
// symmetric non-overlap and are taken from |d|. `u3 = phi(d)` keeps the sign:
// it is the share of the negative group lying below the positive group's
// mean. `direction` is +1 when the positive group's mean is the larger one.
struct EffectSizes {
  std::string feature;
  double d = 0.0;
  double dd = 0.0;
  double u1 = 0.0;
  double u2 = 0.0;
  double u3 = 0.0;
  int direction = 1;
};

EffectSizes effect_sizes(const GroupedFeature& g);

// One entry per feature, in dataset order.
std::vector<EffectSizes> all_effect_sizes(const Dataset& ds);

// Copy of g with the groups swapped when mean(m) < mean(b), so that signed
// statistics of the result are nonnegative.
GroupedFeature oriented(const GroupedFeature& g);

}  // namespace effsel
