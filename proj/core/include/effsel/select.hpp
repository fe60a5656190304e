#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "effsel/data.hpp"
#include "effsel/effect.hpp"

namespace effsel {

enum class Measure { d, dd, u1, u2, u3, common, relief };

// "d", "D", "u1", "u2", "u3", "common", "relief".
std::string_view to_string(Measure m) noexcept;
// Accepts the names above, plus "dd" for D. Empty on anything else.
std::optional<Measure> parse_measure(std::string_view s) noexcept;

inline constexpr Measure kEffectMeasures[] = {Measure::d, Measure::dd, Measure::u1, Measure::u2, Measure::u3};

struct FeatureScore {
  std::string feature;
  double score = 0.0;
};
using Scores = std::vector<FeatureScore>;

// Column of `effects` for one of the five effect-size measures.
Scores scores_for(std::span<const EffectSizes> effects, Measure m);

struct SelectionResult {
  Measure measure = Measure::d;
  double threshold = 0.0;  // the cut actually applied
  bool strict = true;      // ">" when true, ">=" otherwise
  std::vector<std::string> selected;  // in input (feature) order
  Scores scores;
  std::string note;

  bool contains(std::string_view feature) const;
};

// Large-effect cut for d and D.
inline constexpr double kLargeEffect = 0.8;

// Features whose score passes `threshold`. Throws DomainError on a non-finite score.
SelectionResult select_by_threshold(const Scores& scores, double threshold, bool strict,
                                    Measure measure = Measure::d);

double mean_score(const Scores& scores);

// Decision-rule value for a U measure: the mean score rounded down to one
// decimal. Throws DomainError on empty input.
double u_threshold(const Scores& scores);

// Selection for one of the five measures: d and D keep features with a score
// above 0.8; U measures keep features at or above the mean score.
SelectionResult select_measure(std::span<const EffectSizes> effects, Measure m);

// Intersection of the five effect-size selections, in the order of the first.
// Throws DomainError unless exactly five results are given.
SelectionResult common_features(std::span<const SelectionResult> results);

// Binary Relief over every instance (m = N) on min-max normalized features:
// for each instance find its nearest hit and nearest miss (squared Euclidean,
// ties to the lowest index) and update
//   W[f] += (diff(f, x, miss)^2 - diff(f, x, hit)^2) / m.
// A constant feature contributes zero difference and keeps weight 0.
// `seed` only matters when sampling fewer than N instances, which this
// implementation never does; it is accepted for interface stability.
Scores relief_weights(const Dataset& ds, std::uint64_t seed = 0);

// Relief selection: features with weight strictly above the mean weight.
SelectionResult select_relief(const Dataset& ds);

}  // namespace effsel
