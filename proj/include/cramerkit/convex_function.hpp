#pragma once

#include <functional>
#include <limits>
#include <optional>

#include "cramerkit/extended_real.hpp"

namespace cramer {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Interval with independent open/closed endpoints. Infinite endpoints are
/// always treated as open.
struct Interval {
  double lo = -kInf;
  double hi = kInf;
  bool lo_closed = false;
  bool hi_closed = false;

  static Interval real_line() { return {}; }
  static Interval open(double lo, double hi) { return {lo, hi, false, false}; }
  static Interval closed(double lo, double hi) { return {lo, hi, true, true}; }

  bool contains(double s) const noexcept;
  bool contains_interior(double s) const noexcept { return s > lo && s < hi; }
  bool bounded_below() const noexcept { return lo > -kInf; }
  bool bounded_above() const noexcept { return hi < kInf; }
  double width() const noexcept { return hi - lo; }

  /// Intersection; endpoint flags follow the tighter bound, and an endpoint
  /// shared by both is closed only if closed in both.
  Interval intersect(const Interval& other) const noexcept;

  friend bool operator==(const Interval&, const Interval&) = default;
};

/// Affine asymptote in one direction: f(s) - slope*s -> -intercept. At
/// alpha == slope the conjugate equals `intercept`, attained only in the
/// limit.
struct Asymptote {
  double slope = 0.0;
  double intercept = 0.0;
};

/// A closed convex function of one real variable, described by callables.
///
/// `value` and `deriv` are only ever called at points of the domain (never at
/// an open endpoint). `deriv2` is optional and enables Newton steps in the
/// conjugate solver. Outside the domain `eval` reports +inf without calling
/// `value`.
class ScalarConvexFunction {
 public:
  using Fn = std::function<double(double)>;

  ScalarConvexFunction() = default;
  ScalarConvexFunction(Fn value, Fn deriv, Fn deriv2, Interval domain,
                       std::optional<Asymptote> left = std::nullopt,
                       std::optional<Asymptote> right = std::nullopt);

  ExtendedReal eval(double s) const;
  double deriv(double s) const { return deriv_(s); }
  double deriv2(double s) const { return deriv2_(s); }
  bool has_deriv2() const noexcept { return static_cast<bool>(deriv2_); }

  const Interval& domain() const noexcept { return domain_; }
  const std::optional<Asymptote>& left_asymptote() const noexcept { return left_; }
  const std::optional<Asymptote>& right_asymptote() const noexcept { return right_; }

  /// Limiting slopes of f at the domain ends, when known from metadata.
  /// A finite closed endpoint admits every slope beyond it (+/-inf).
  /// Returns +/-inf for steep or unknown ends.
  double slope_sup() const noexcept;
  double slope_inf() const noexcept;

  /// Copy with the argument scaled: g(s) = f(a*s). Throws ErrorCode::zero_scale
  /// for a == 0.
  ScalarConvexFunction scaled(double a) const;

 private:
  Fn value_;
  Fn deriv_;
  Fn deriv2_;
  Interval domain_;
  std::optional<Asymptote> left_;
  std::optional<Asymptote> right_;
};

/// g(s) = f(a*s), with domain, derivatives and asymptotes rescaled.
ScalarConvexFunction scale_argument(const ScalarConvexFunction& f, double a);

}  // namespace cramer
