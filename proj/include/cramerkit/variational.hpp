#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cramerkit/series.hpp"

namespace cramer {

/// inf { sum_i psi_i*(b_i) : <t, b> = alpha } for the series weights t.
struct VariationalProblem {
  WeightedSeries series;
  double alpha = 0.0;
};

/// Lagrangian-dual route: maximize s*alpha - series_cgf(s), recover
/// b_i = psi_i'(s* t_i), and evaluate sum psi_i*(b_i) independently.
///
/// When the supremum is not attained (alpha on the boundary of the rate's
/// domain) the result carries the boundary-limit value and no minimizer; when
/// alpha is outside, the value is +inf.
RateResult solve_dual(const VariationalProblem& problem, double tol = 1e-10);

struct DirectOptions {
  double tol = 1e-14;               ///< stop when a sweep improves the objective by less
  int max_sweeps = 20000;
  std::size_t dimension_cap = 64;
  double rate_tol = 1e-10;          ///< for numeric component rates
};

/// Primal route: start at the minimum-norm feasible point alpha*t/|t|^2 and
/// run golden-section line searches along the null-space directions
/// e_i t_j - e_j t_i, sweeping all pairs until a sweep stops improving.
/// Shares no code with the dual route beyond the component rates.
///
/// Throws Error(infeasible_start) when all weights are zero and alpha != 0,
/// Error(dimension_exceeded) above the dimension cap. Returns +inf (method
/// "direct/objective-infinite") when no finite feasible point exists.
RateResult solve_direct(const VariationalProblem& problem, const DirectOptions& options = {});
RateResult solve_direct(const VariationalProblem& problem, double tol, int budget);

/// Per-coordinate Fenchel equality gap |psi_i*(b_i) + psi_i(s t_i) - b_i s t_i|,
/// maximized over i. Zero exactly when b_i = psi_i'(s t_i).
double fenchel_gap(const WeightedSeries& series, double s, std::span<const double> b, double tol = 1e-10);

enum class AlphaClass { interior, boundary, outside };

std::string_view to_string(AlphaClass c) noexcept;

struct VerifyTolerances {
  double solver = 1e-10;
  double dual = 1e-8;         ///< |solve_dual - series_rate|
  double direct = 1e-4;       ///< |solve_direct - series_rate|
  double feasibility = 1e-8;  ///< |<t,b> - alpha| / (1 + |alpha|)
  double fenchel = 1e-8;
};

struct TheoremReport {
  double alpha = 0.0;
  AlphaClass classification = AlphaClass::interior;
  RateResult rate;
  RateResult dual;
  RateResult direct;
  double gap_dual = 0.0;    ///< |dual - rate|
  double gap_direct = 0.0;  ///< |direct - rate|
  double max_gap = 0.0;     ///< largest pairwise gap among the three values
  double fenchel = 0.0;
  bool pass = false;
  std::vector<std::string> notes;
};

/// Runs series_rate, solve_dual and solve_direct and compares them. Equality
/// is asserted only for interior alpha; boundary and outside rows are
/// informational. Never throws on solver failure; failures become notes.
TheoremReport verify_theorem(const VariationalProblem& problem, const VerifyTolerances& tol = {});

/// verify_theorem over many problems, OpenMP-parallel across problems.
/// Output order and content do not depend on `threads`.
std::vector<TheoremReport> verify_batch(std::span<const VariationalProblem> problems,
                                        const VerifyTolerances& tol = {}, int threads = 0);

/// Single-threaded reference for verify_batch.
std::vector<TheoremReport> verify_batch_serial(std::span<const VariationalProblem> problems,
                                               const VerifyTolerances& tol = {});

}  // namespace cramer
