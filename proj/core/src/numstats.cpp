#include "effsel/numstats.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "effsel/error.hpp"

namespace effsel {

namespace {

constexpr int kBetaMaxIterations = 10'000;
constexpr int kSeriesMaxTerms = 10'000;
constexpr double kSeriesTol = 1e-12;

// Continued fraction for I_x(a, b) (modified Lentz).
double beta_continued_fraction(double a, double b, double x) {
  constexpr double tiny = 1e-300;
  constexpr double eps = 1e-16;
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < tiny) d = tiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kBetaMaxIterations; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < tiny) d = tiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < tiny) d = tiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < eps) return h;
  }
  throw ConvergenceError("incomplete beta continued fraction did not converge (a=" + std::to_string(a) +
                         ", b=" + std::to_string(b) + ", x=" + std::to_string(x) + ")");
}

}  // namespace

SampleStats stats(std::span<const double> x) {
  if (x.size() < 2) throw DomainError("stats needs at least two values");
  double sum = 0.0;
  for (double v : x) {
    if (!std::isfinite(v)) throw DomainError("stats: non-finite value");
    sum += v;
  }
  const double n = static_cast<double>(x.size());
  const double mean = sum / n;
  double ss = 0.0;
  for (double v : x) ss += (v - mean) * (v - mean);
  const double var = ss / (n - 1.0);
  return {x.size(), mean, std::sqrt(var), var};
}

double phi(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

double incomplete_beta(double a, double b, double x) {
  if (!(a > 0.0) || !(b > 0.0)) throw DomainError("incomplete_beta: a and b must be positive");
  if (!(x >= 0.0 && x <= 1.0)) throw DomainError("incomplete_beta: x outside [0, 1]");
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;
  const double log_front =
      std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) + b * std::log1p(-x);
  const double front = std::exp(log_front);
  if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_continued_fraction(a, b, x) / a;
  return 1.0 - front * beta_continued_fraction(b, a, 1.0 - x) / b;
}

double t_cdf(double t, double nu) {
  if (!(nu > 0.0)) throw DomainError("t_cdf: degrees of freedom must be positive");
  if (t == 0.0) return 0.5;
  if (std::isinf(t)) return t > 0 ? 1.0 : 0.0;
  const double t2 = t * t;
  // Two algebraically equal forms; pick the one whose argument is away from 1.
  double tail;
  if (nu < t2) {
    tail = 0.5 * incomplete_beta(0.5 * nu, 0.5, nu / (nu + t2));
  } else {
    tail = 0.5 * (1.0 - incomplete_beta(0.5, 0.5 * nu, t2 / (nu + t2)));
  }
  return t > 0 ? 1.0 - tail : tail;
}

namespace {

// P(T <= t) for t >= 0. See the header for the series.
double nct_cdf_nonneg(double t, double nu, double ncp) {
  const double base = phi(-ncp);
  if (t == 0.0) return base;
  const double x = t * t / (t * t + nu);
  const double half_nu = 0.5 * nu;
  const double lambda = 0.5 * ncp * ncp;
  if (lambda == 0.0) return base + 0.5 * incomplete_beta(0.5, half_nu, x);

  const double log_lambda = std::log(lambda);
  const double log_q_scale = std::log(std::fabs(ncp)) - 0.5 * std::numbers::ln2;
  const double q_sign = ncp < 0 ? -1.0 : 1.0;

  // Poisson weight P_j and companion weight Q_j for term j.
  auto weights = [&](double j) {
    const double lp = -lambda + j * log_lambda;
    const double p = std::exp(lp - std::lgamma(j + 1.0));
    const double q = q_sign * std::exp(log_q_scale + lp - std::lgamma(j + 1.5));
    return std::pair{p, q};
  };
  auto term = [&](double j, double p, double q) {
    return p * incomplete_beta(j + 0.5, half_nu, x) + q * incomplete_beta(j + 1.0, half_nu, x);
  };

  const double mode = std::floor(lambda);
  double sum = 0.0;
  int used = 0;

  for (double j = mode;; j += 1.0) {
    if (++used > kSeriesMaxTerms) break;
    auto [p, q] = weights(j);
    sum += term(j, p, q);
    // Beyond the mode both weights shrink by at least lambda / (j + 1) per step.
    const double ratio = lambda / (j + 1.0);
    if (ratio < 1.0 && (p + std::fabs(q)) / (1.0 - ratio) < kSeriesTol) break;
  }
  for (double j = mode - 1.0; j >= 0.0; j -= 1.0) {
    if (++used > kSeriesMaxTerms) break;
    auto [p, q] = weights(j);
    sum += term(j, p, q);
    // Going down both weights shrink by at least j / lambda per step.
    const double ratio = j / lambda;
    if (ratio < 1.0 && (p + std::fabs(q)) / (1.0 - ratio) < kSeriesTol) break;
  }
  if (used > kSeriesMaxTerms) {
    throw ConvergenceError("nct_cdf: series did not converge within " + std::to_string(kSeriesMaxTerms) +
                           " terms (t=" + std::to_string(t) + ", nu=" + std::to_string(nu) +
                           ", ncp=" + std::to_string(ncp) + ")");
  }
  return base + 0.5 * sum;
}

double clamp01(double p) { return p < 0.0 ? 0.0 : (p > 1.0 ? 1.0 : p); }

}  // namespace

double nct_cdf(double t, double nu, double ncp) {
  if (!(nu > 0.0)) throw DomainError("nct_cdf: degrees of freedom must be positive");
  if (std::isnan(t) || !std::isfinite(ncp)) throw DomainError("nct_cdf: non-finite input");
  if (std::isinf(t)) return t > 0 ? 1.0 : 0.0;
  if (t >= 0.0) return clamp01(nct_cdf_nonneg(t, nu, ncp));
  return clamp01(1.0 - nct_cdf_nonneg(-t, nu, -ncp));
}

double find_root(const std::function<double(double)>& f, double lo, double hi, double tol,
                 int max_expansions) {
  if (!(lo < hi)) throw DomainError("find_root: need lo < hi");
  if (!(tol > 0.0)) throw DomainError("find_root: tolerance must be positive");
  double flo = f(lo);
  double fhi = f(hi);
  auto check = [](double v) {
    if (std::isnan(v)) throw DomainError("find_root: function returned NaN");
  };
  check(flo);
  check(fhi);
  for (int k = 0; (flo > 0) == (fhi > 0) && flo != 0.0 && fhi != 0.0; ++k) {
    if (k == max_expansions) {
      throw DomainError("find_root: no sign change in [" + std::to_string(lo) + ", " + std::to_string(hi) +
                        "]");
    }
    const double half = hi - lo;
    lo -= 0.5 * half;
    hi += 0.5 * half;
    flo = f(lo);
    fhi = f(hi);
    check(flo);
    check(fhi);
  }
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;

  const bool rising = fhi > 0;
  // Each halving shrinks the bracket; 2000 steps outlasts any double interval.
  for (int it = 0; it < 2000 && hi - lo > tol; ++it) {
    const double mid = lo + 0.5 * (hi - lo);
    if (mid <= lo || mid >= hi) break;
    const double fm = f(mid);
    check(fm);
    if (fm == 0.0) return mid;
    if ((fm > 0) == rising) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return lo + 0.5 * (hi - lo);
}

}  // namespace effsel
