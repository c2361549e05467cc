// Test-only helpers: independent closed forms and small function factories.
// Nothing here calls into the solver paths it is used to check.
#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <vector>

#include "cramerkit/convex_function.hpp"
#include "cramerkit/distributions.hpp"
#include "cramerkit/series.hpp"

namespace cramer::test {

inline constexpr double kLn2 = std::numbers::ln2;

inline ScalarConvexFunction quadratic() {
  return ScalarConvexFunction([](double s) { return 0.5 * s * s; }, [](double s) { return s; },
                              [](double) { return 1.0; }, Interval::real_line());
}

inline ScalarConvexFunction zero_function() {
  return ScalarConvexFunction([](double) { return 0.0; }, [](double) { return 0.0; }, {}, Interval::real_line());
}

/// ln cosh without asymptote metadata, so the solver must find the limit itself.
inline ScalarConvexFunction log_cosh_bare() {
  return ScalarConvexFunction(
      [](double s) {
        const double a = std::abs(s);
        return a + std::log1p(std::exp(-2 * a)) - kLn2;
      },
      [](double s) { return std::tanh(s); }, {}, Interval::real_line());
}

/// -ln(1 - s^2) that throws if evaluated at or beyond an open endpoint.
inline ScalarConvexFunction neg_log_guarded() {
  auto guard = [](double s) {
    if (!(std::abs(s) < 1.0)) throw std::logic_error("evaluated at an open endpoint");
  };
  return ScalarConvexFunction(
      [guard](double s) {
        guard(s);
        return -std::log(1 - s * s);
      },
      [guard](double s) {
        guard(s);
        return 2 * s / (1 - s * s);
      },
      [guard](double s) {
        guard(s);
        return 2 * (1 + s * s) / ((1 - s * s) * (1 - s * s));
      },
      Interval::open(-1, 1));
}

/// s^2 on the closed interval [-1, 1].
inline ScalarConvexFunction square_on_closed_unit() {
  return ScalarConvexFunction([](double s) { return s * s; }, [](double s) { return 2 * s; },
                              [](double) { return 2.0; }, Interval::closed(-1, 1));
}

// Closed forms written directly from their defining formulas.

inline double binary_entropy_rate(double a) {
  auto xlx = [](double x) { return x == 0 ? 0.0 : x * std::log(x); };
  return 0.5 * (xlx(1 + a) + xlx(1 - a));
}

inline double laplace_rate_direct(double a) {
  // Stationary point of a*s + ln(1 - s^2): a s^2 + 2 s - a = 0.
  if (a == 0) return 0.0;
  const double s = (std::sqrt(1 + a * a) - 1) / a;
  return a * s + std::log(1 - s * s);
}

inline double normal_upper_tail(double x) { return 0.5 * std::erfc(x / std::numbers::sqrt2); }

inline std::vector<double> grid(double lo, double hi, int n) {
  std::vector<double> g(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) g[static_cast<std::size_t>(k)] = lo + (hi - lo) * k / (n - 1);
  return g;
}

/// Seeded generator for property-style tests.
inline std::mt19937_64 rng(std::uint64_t seed) { return std::mt19937_64(seed); }

inline double uniform(std::mt19937_64& g, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(g);
}

inline DistributionModel catalog_pick(std::mt19937_64& g) {
  switch (std::uniform_int_distribution<int>(0, 2)(g)) {
    case 0: return make_gaussian();
    case 1: return make_laplace();
    default: return make_rademacher();
  }
}

/// Random series with weights in [-2, 2] bounded away from zero.
inline WeightedSeries random_series(std::mt19937_64& g, std::size_t dim, bool gaussian_only = false) {
  std::vector<double> t(dim);
  std::vector<DistributionModel> comps;
  for (auto& w : t) {
    do w = uniform(g, -2, 2);
    while (std::abs(w) < 1e-2);
    comps.push_back(gaussian_only ? make_gaussian() : catalog_pick(g));
  }
  return WeightedSeries(std::move(t), std::move(comps));
}

/// alpha = psi_t'(s) for s drawn inside the series CGF domain, which lands
/// in the interior of the rate's domain.
inline double interior_alpha(std::mt19937_64& g, const WeightedSeries& series) {
  const Interval d = series.cgf().domain();
  const double lo = std::max(d.lo, -2.0), hi = std::min(d.hi, 2.0);
  return series.cgf().deriv(0.95 * uniform(g, lo, hi));
}

}  // namespace cramer::test
