#pragma once

#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "cramerkit/conjugate.hpp"
#include "cramerkit/convex_function.hpp"
#include "cramerkit/extended_real.hpp"
#include "cramerkit/random.hpp"

namespace cramer {

/// A random variable described by its cumulant generating function.
///
/// `rate_closed_form` is optional; when empty, rates fall back to the numeric
/// conjugate of `cgf`. `sampler` draws one exact variate from the stream it
/// is handed and keeps no state of its own.
struct DistributionModel {
  std::string name;
  ScalarConvexFunction cgf;
  std::function<ExtendedReal(double)> rate_closed_form;
  double mean = 0.0;
  double variance = 1.0;
  std::function<double(RandomStream&)> sampler;

  bool has_closed_form() const noexcept { return static_cast<bool>(rate_closed_form); }

  /// Cramer transform at alpha: closed form when known, else numeric.
  ExtendedReal rate(double alpha, double tol = 1e-10) const;

  /// Numeric conjugate of the CGF, started from alpha / variance.
  ConjugateResult numeric_rate(double alpha, double tol = 1e-10) const;
};

/// Standard normal: cgf s^2/2, rate alpha^2/2.
DistributionModel make_gaussian();

/// Density exp(-|x|)/2: cgf -ln(1 - s^2) on (-1, 1), variance 2.
DistributionModel make_laplace();

/// Symmetric +-1: cgf ln cosh s, rate is half the binary entropy gap,
/// finite exactly on [-1, 1] with value ln 2 at the ends.
DistributionModel make_rademacher();

/// The model for `scale * X`. scale > 0.
DistributionModel scaled_model(const DistributionModel& base, double scale);

/// Catalog lookup by identifier ("gaussian", "laplace", "rademacher").
/// Throws Error(invalid_argument) for unknown names.
DistributionModel make_model(std::string_view name);

std::vector<std::string> catalog_names();

/// Binary-entropy form (1/2)[(1+a)ln(1+a) + (1-a)ln(1-a)], with 0 ln 0 = 0.
/// Requires |a| <= 1.
double rademacher_rate(double a) noexcept;

/// a^2/(sqrt(1+a^2)+1) + ln(2/(sqrt(1+a^2)+1)).
double laplace_rate(double a) noexcept;

}  // namespace cramer
