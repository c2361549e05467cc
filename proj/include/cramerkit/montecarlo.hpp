#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "cramerkit/series.hpp"

namespace cramer {

/// Empirical Pr(X_t > alpha) next to the Chernoff bound exp(-rate).
struct TailEstimate {
  double alpha = 0.0;
  std::uint64_t n_samples = 0;
  std::uint64_t hits = 0;
  double p_hat = 0.0;   ///< hits / n_samples
  double std_error = 0.0;  ///< sqrt(p_hat (1 - p_hat) / n_samples)
  double bound = 1.0;
  double margin = 0.0;  ///< (bound - p_hat) / stderr; +-inf when stderr is 0

  /// p_hat <= bound + 3 stderr.
  bool pass() const noexcept { return p_hat <= bound + 3.0 * std_error; }
};

/// One draw of sum_i t_i x_i; x_i comes from the stream (seed, sample_index, i).
double sample_series(const WeightedSeries& series, std::uint64_t seed, std::uint64_t sample_index);

/// hits[j] = #{k < n : X_t^(k) > alphas[j]}, every sample compared against
/// every alpha (common random numbers). OpenMP-parallel over sample chunks;
/// `threads` <= 0 uses the runtime default. Counts are integers, so the
/// result is identical for any thread count.
std::vector<std::uint64_t> count_exceedances(const WeightedSeries& series, std::span<const double> alphas,
                                             std::uint64_t n, std::uint64_t seed, int threads = 0);

/// Single-threaded reference for count_exceedances.
std::vector<std::uint64_t> count_exceedances_serial(const WeightedSeries& series, std::span<const double> alphas,
                                                    std::uint64_t n, std::uint64_t seed);

/// Needs n >= 1000 and alpha > 0 (Error(invalid_argument) /
/// Error(non_positive_alpha) otherwise).
TailEstimate estimate_tail(const WeightedSeries& series, double alpha, std::uint64_t n, std::uint64_t seed,
                           int threads = 0);

struct BoundValidation {
  std::vector<TailEstimate> rows;
  bool pass = true;  ///< every row passes
};

/// One sample set shared by all alphas, one row per alpha in input order.
BoundValidation validate_bound(const WeightedSeries& series, std::span<const double> alphas, std::uint64_t n,
                               std::uint64_t seed, int threads = 0);

}  // namespace cramer
