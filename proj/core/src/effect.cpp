#include "effsel/effect.hpp"

#include <algorithm>
#include <cmath>

#include "effsel/error.hpp"
#include "effsel/numstats.hpp"

namespace effsel {

double cohens_d(const GroupedFeature& g) {
  const auto sm = stats(g.m);
  const auto sb = stats(g.b);
  const double n1 = static_cast<double>(sm.n);
  const double n2 = static_cast<double>(sb.n);
  const double pooled_var = ((n1 - 1.0) * sm.var + (n2 - 1.0) * sb.var) / (n1 + n2 - 2.0);
  if (!(pooled_var > 0.0)) throw DegenerateFeature(g.name);
  return (sm.mean - sb.mean) / std::sqrt(pooled_var);
}

double cohens_dd(const GroupedFeature& g) {
  const auto sm = stats(g.m);
  const auto sb = stats(g.b);
  const double mean_var = 0.5 * (sm.var + sb.var);
  if (!(mean_var > 0.0)) throw DegenerateFeature(g.name);
  return (sm.mean - sb.mean) / std::sqrt(mean_var);
}

UMeasures u_measures(double d) {
  UMeasures u;
  u.u3 = phi(d);
  u.u2 = phi(0.5 * d);
  u.u1 = u.u2 > 0.5 ? (2.0 * u.u2 - 1.0) / u.u2 : 0.0;
  return u;
}

EffectSizes effect_sizes(const GroupedFeature& g) {
  const double d = cohens_d(g);
  const double dd = cohens_dd(g);
  const auto sym = u_measures(std::fabs(d));
  EffectSizes e;
  e.feature = g.name;
  e.d = std::fabs(d);
  e.dd = std::fabs(dd);
  e.u1 = sym.u1;
  e.u2 = sym.u2;
  e.u3 = phi(d);
  e.direction = d < 0 ? -1 : 1;
  return e;
}

std::vector<EffectSizes> all_effect_sizes(const Dataset& ds) {
  std::vector<EffectSizes> out;
  out.reserve(ds.num_features());
  for (std::size_t i = 0; i < ds.num_features(); ++i) out.push_back(effect_sizes(group(ds, i)));
  return out;
}

GroupedFeature oriented(const GroupedFeature& g) {
  GroupedFeature out = g;
  if (stats(g.m).mean < stats(g.b).mean) std::swap(out.m, out.b);
  return out;
}

}  // namespace effsel
