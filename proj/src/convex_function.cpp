#include "cramerkit/convex_function.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "cramerkit/error.hpp"

namespace cramer {

std::string_view to_string(ValueKind kind) noexcept {
  switch (kind) {
    case ValueKind::interior: return "interior";
    case ValueKind::boundary_limit: return "boundary-limit";
    case ValueKind::infinite: return "infinite";
  }
  return "?";
}

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::invalid_argument: return "InvalidArgument";
    case ErrorCode::non_convex_detected: return "NonConvexDetected";
    case ErrorCode::no_convergence: return "NoConvergence";
    case ErrorCode::zero_scale: return "ZeroScale";
    case ErrorCode::non_positive_alpha: return "NonPositiveAlpha";
    case ErrorCode::length_mismatch: return "LengthMismatch";
    case ErrorCode::infeasible_start: return "InfeasibleStart";
    case ErrorCode::dimension_exceeded: return "DimensionExceeded";
  }
  return "?";
}

bool Interval::contains(double s) const noexcept {
  if (std::isnan(s)) return false;
  if (s < lo || s > hi) return false;
  if (s == lo) return lo_closed && std::isfinite(lo);
  if (s == hi) return hi_closed && std::isfinite(hi);
  return true;
}

Interval Interval::intersect(const Interval& other) const noexcept {
  Interval r;
  if (lo > other.lo) {
    r.lo = lo;
    r.lo_closed = lo_closed;
  } else if (other.lo > lo) {
    r.lo = other.lo;
    r.lo_closed = other.lo_closed;
  } else {
    r.lo = lo;
    r.lo_closed = lo_closed && other.lo_closed;
  }
  if (hi < other.hi) {
    r.hi = hi;
    r.hi_closed = hi_closed;
  } else if (other.hi < hi) {
    r.hi = other.hi;
    r.hi_closed = other.hi_closed;
  } else {
    r.hi = hi;
    r.hi_closed = hi_closed && other.hi_closed;
  }
  if (!std::isfinite(r.lo)) r.lo_closed = false;
  if (!std::isfinite(r.hi)) r.hi_closed = false;
  return r;
}

ScalarConvexFunction::ScalarConvexFunction(Fn value, Fn deriv, Fn deriv2, Interval domain,
                                           std::optional<Asymptote> left, std::optional<Asymptote> right)
    : value_(std::move(value)),
      deriv_(std::move(deriv)),
      deriv2_(std::move(deriv2)),
      domain_(domain),
      left_(left),
      right_(right) {
  if (!value_ || !deriv_) throw Error(ErrorCode::invalid_argument, "convex function needs value and derivative");
  if (!(domain_.lo < domain_.hi) && !(domain_.lo == domain_.hi && domain_.lo_closed && domain_.hi_closed))
    throw Error(ErrorCode::invalid_argument, "empty domain");
  if (!std::isfinite(domain_.lo)) domain_.lo_closed = false;
  if (!std::isfinite(domain_.hi)) domain_.hi_closed = false;
  // An asymptote only makes sense in an unbounded direction.
  if (left_ && domain_.bounded_below()) left_.reset();
  if (right_ && domain_.bounded_above()) right_.reset();
}

ExtendedReal ScalarConvexFunction::eval(double s) const {
  if (!domain_.contains(s)) return ExtendedReal::infinity();
  const double v = value_(s);
  if (std::isnan(v) || v == kInf) return ExtendedReal::infinity();
  return ExtendedReal::finite(v);
}

double ScalarConvexFunction::slope_sup() const noexcept { return right_ ? right_->slope : kInf; }

double ScalarConvexFunction::slope_inf() const noexcept { return left_ ? left_->slope : -kInf; }

ScalarConvexFunction ScalarConvexFunction::scaled(double a) const {
  if (a == 0.0) throw Error(ErrorCode::zero_scale, "argument scale must be nonzero");
  if (!std::isfinite(a)) throw Error(ErrorCode::invalid_argument, "argument scale must be finite");

  Interval dom;
  std::optional<Asymptote> left, right;
  if (a > 0) {
    dom = {domain_.lo / a, domain_.hi / a, domain_.lo_closed, domain_.hi_closed};
    if (left_) left = Asymptote{a * left_->slope, left_->intercept};
    if (right_) right = Asymptote{a * right_->slope, right_->intercept};
  } else {
    dom = {domain_.hi / a, domain_.lo / a, domain_.hi_closed, domain_.lo_closed};
    // s -> +inf maps to a*s -> -inf, so the right asymptote of g comes from
    // the left asymptote of f.
    if (right_) left = Asymptote{a * right_->slope, right_->intercept};
    if (left_) right = Asymptote{a * left_->slope, left_->intercept};
  }

  Fn value = [f = value_, a](double s) { return f(a * s); };
  Fn deriv = [d = deriv_, a](double s) { return a * d(a * s); };
  Fn deriv2;
  if (deriv2_) deriv2 = [d2 = deriv2_, a](double s) { return a * a * d2(a * s); };
  return ScalarConvexFunction(std::move(value), std::move(deriv), std::move(deriv2), dom, left, right);
}

ScalarConvexFunction scale_argument(const ScalarConvexFunction& f, double a) { return f.scaled(a); }

}  // namespace cramer
