#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "effsel/data.hpp"

namespace effsel::testing {

inline const char* wdbc_path() { return EFFSEL_WDBC_PATH; }

inline const Dataset& wdbc() {
  static const Dataset ds = load_wdbc(wdbc_path());
  return ds;
}

inline GroupedFeature make_group(std::vector<double> m, std::vector<double> b, std::string name = "x") {
  GroupedFeature g;
  g.m = std::move(m);
  g.b = std::move(b);
  g.name = std::move(name);
  return g;
}

// Two normal groups with unit variance and the given mean shift.
inline GroupedFeature normal_groups(std::size_t n1, std::size_t n2, double shift, std::uint64_t seed,
                                    double sd_m = 1.0, double sd_b = 1.0) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> z;
  GroupedFeature g;
  g.name = "synthetic";
  for (std::size_t i = 0; i < n1; ++i) g.m.push_back(shift + sd_m * z(rng));
  for (std::size_t i = 0; i < n2; ++i) g.b.push_back(sd_b * z(rng));
  return g;
}

// Dataset from feature-major columns and labels.
inline Dataset make_dataset(std::vector<std::string> names, const std::vector<std::vector<double>>& columns,
                            std::vector<Label> labels) {
  std::vector<double> values;
  for (const auto& c : columns) values.insert(values.end(), c.begin(), c.end());
  return Dataset(std::move(names), std::move(values), std::move(labels));
}

}  // namespace effsel::testing
