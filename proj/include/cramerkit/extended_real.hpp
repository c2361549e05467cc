#pragma once

#include <cmath>
#include <limits>
#include <string_view>

namespace cramer {

/// How an extended-real value was obtained.
///  - interior: a finite value attained at an interior point.
///  - boundary_limit: a finite value reached only as a limit (domain endpoint
///    or affine asymptote).
///  - infinite: the value is +inf.
enum class ValueKind { interior, boundary_limit, infinite };

std::string_view to_string(ValueKind kind) noexcept;

/// A real number or +inf. Infinity is an explicit state; the stored double
/// is never used as a sentinel. -inf is not representable because every
/// conjugate in this library is of a function finite somewhere.
class ExtendedReal {
 public:
  constexpr ExtendedReal() noexcept = default;

  static constexpr ExtendedReal finite(double v, ValueKind kind = ValueKind::interior) noexcept {
    return ExtendedReal(v, kind == ValueKind::infinite ? ValueKind::interior : kind);
  }
  static constexpr ExtendedReal infinity() noexcept {
    return ExtendedReal(std::numeric_limits<double>::infinity(), ValueKind::infinite);
  }

  constexpr bool is_infinite() const noexcept { return kind_ == ValueKind::infinite; }
  constexpr bool is_finite() const noexcept { return kind_ != ValueKind::infinite; }
  constexpr ValueKind kind() const noexcept { return kind_; }

  /// Finite value, or +inf as an IEEE double when infinite. Arithmetic on
  /// the returned double is the caller's business.
  constexpr double value() const noexcept { return value_; }

  /// Same value, different provenance. Ignored for infinities.
  constexpr ExtendedReal with_kind(ValueKind kind) const noexcept {
    return is_infinite() ? *this : finite(value_, kind);
  }

  friend constexpr bool operator==(const ExtendedReal&, const ExtendedReal&) = default;

 private:
  constexpr ExtendedReal(double v, ValueKind k) noexcept : value_(v), kind_(k) {}

  double value_ = 0.0;
  ValueKind kind_ = ValueKind::interior;
};

/// Sum with provenance: infinity absorbs, a boundary limit taints the sum.
constexpr ExtendedReal operator+(const ExtendedReal& a, const ExtendedReal& b) noexcept {
  if (a.is_infinite() || b.is_infinite()) return ExtendedReal::infinity();
  const ValueKind k = (a.kind() == ValueKind::boundary_limit || b.kind() == ValueKind::boundary_limit)
                          ? ValueKind::boundary_limit
                          : ValueKind::interior;
  return ExtendedReal::finite(a.value() + b.value(), k);
}

/// Neumaier-compensated accumulator for extended reals.
class ExtendedSum {
 public:
  void add(const ExtendedReal& x) noexcept {
    if (x.is_infinite()) {
      infinite_ = true;
      return;
    }
    if (x.kind() == ValueKind::boundary_limit) boundary_ = true;
    add(x.value());
  }

  void add(double x) noexcept {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
  }

  ExtendedReal result() const noexcept {
    if (infinite_) return ExtendedReal::infinity();
    return ExtendedReal::finite(sum_ + comp_, boundary_ ? ValueKind::boundary_limit : ValueKind::interior);
  }

  double value() const noexcept { return infinite_ ? std::numeric_limits<double>::infinity() : sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
  bool infinite_ = false;
  bool boundary_ = false;
};

}  // namespace cramer
