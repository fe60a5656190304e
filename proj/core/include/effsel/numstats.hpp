#pragma once

#include <cstddef>
#include <functional>
#include <span>

namespace effsel {

// Count, mean and Bessel-corrected spread of a sample.
struct SampleStats {
  std::size_t n = 0;
  double mean = 0.0;
  double sd = 0.0;
  double var = 0.0;  // sd * sd, kept to avoid a sqrt round trip
};

// Throws DomainError for fewer than two values or a non-finite entry.
SampleStats stats(std::span<const double> x);

// Standard normal CDF. Saturates to exactly 0 / 1 far in the tails.
double phi(double z);

// Regularized incomplete beta I_x(a, b), a, b > 0, 0 <= x <= 1.
double incomplete_beta(double a, double b, double x);

// Student t CDF with real-valued degrees of freedom nu > 0.
double t_cdf(double t, double nu);

// Noncentral t CDF P(T <= t | nu, ncp).
//
// Poisson-weighted series in incomplete beta functions, summed outward from
// the largest Poisson weight in both directions; each direction stops once a
// geometric bound on the remaining tail drops below 1e-12. More than 10'000
// terms throws ConvergenceError.
double nct_cdf(double t, double nu, double ncp);

inline constexpr int kRootMaxExpansions = 60;

// Root of a continuous monotone function by bisection. When f(lo) and f(hi)
// share a sign the bracket is doubled about its centre, up to `max_expansions`
// times; no sign change after that throws DomainError. Returns the midpoint of
// a final bracket no wider than `tol`.
double find_root(const std::function<double(double)>& f, double lo, double hi, double tol,
                 int max_expansions = kRootMaxExpansions);

}  // namespace effsel
