#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cramerkit/convex_function.hpp"
#include "cramerkit/distributions.hpp"
#include "cramerkit/extended_real.hpp"

namespace cramer {

/// X_t = sum_i t_i X_i for a finite weight vector and independent components.
///
/// Infinite series must be truncated by the caller; finitely supported
/// weights are dense in l2, so truncation loses nothing in the limit.
/// Immutable; copies share state.
class WeightedSeries {
 public:
  /// Throws Error(length_mismatch) when the vectors differ in length and
  /// Error(invalid_argument) for non-finite weights or an overflowing sum t_i^2.
  WeightedSeries(std::vector<double> weights, std::vector<DistributionModel> components);

  std::size_t size() const noexcept { return data_->weights.size(); }
  std::span<const double> weights() const noexcept { return data_->weights; }
  const std::vector<DistributionModel>& components() const noexcept { return data_->components; }
  const DistributionModel& component(std::size_t i) const { return data_->components.at(i); }

  /// sum t_i^2, summed left to right.
  double l2_norm_sq() const noexcept { return data_->l2_norm_sq; }
  bool all_zero() const noexcept { return data_->all_zero; }

  /// s -> sum_i psi_i(s t_i) as a convex function; domain is the
  /// intersection of the component domains scaled by 1/t_i (zero weights
  /// impose nothing).
  const ScalarConvexFunction& cgf() const noexcept { return data_->cgf; }

  /// sum_i t_i^2 Var X_i.
  double variance() const noexcept { return data_->variance; }

 private:
  struct Data {
    std::vector<double> weights;
    std::vector<DistributionModel> components;
    double l2_norm_sq = 0.0;
    double variance = 0.0;
    bool all_zero = true;
    ScalarConvexFunction cgf;
  };
  std::shared_ptr<const Data> data_;
};

/// Outcome of a rate computation for a series, by any method.
struct RateResult {
  ExtendedReal value;
  std::optional<double> dual_point;               ///< maximizing s, when attained
  std::optional<std::vector<double>> minimizer;   ///< b with <t, b> = alpha
  double constraint_residual = 0.0;
  std::string method;
  int iterations = 0;
};

/// sum_i psi_i(s t_i), compensated, +inf if any argument leaves its domain.
ExtendedReal series_cgf(const WeightedSeries& series, double s);

/// Cramer transform of X_t at alpha via the 1-D conjugate of series_cgf.
/// For all-zero weights: 0 at alpha == 0, +inf elsewhere.
RateResult series_rate(const WeightedSeries& series, double alpha, double tol = 1e-10);

/// exp(-rate) for the upper tail Pr(X_t > alpha); 0 when the rate is +inf.
/// Throws Error(non_positive_alpha) for alpha <= 0.
double chernoff_bound(const WeightedSeries& series, double alpha, double tol = 1e-10);

/// sum_i psi_i*(b_i), closed forms where available. Throws
/// Error(length_mismatch) if b has the wrong length.
ExtendedReal functional_conjugate(const WeightedSeries& series, std::span<const double> b, double tol = 1e-10);

}  // namespace cramer
