#include "cramerkit/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>

#include "cramerkit/error.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace cramer {
namespace {

constexpr std::uint64_t kChunk = 1u << 14;

void count_range(const WeightedSeries& series, std::span<const double> alphas, std::uint64_t begin,
                 std::uint64_t end, std::uint64_t seed, std::uint64_t* hits) {
  for (std::uint64_t k = begin; k < end; ++k) {
    const double x = sample_series(series, seed, k);
    for (std::size_t j = 0; j < alphas.size(); ++j) hits[j] += x > alphas[j] ? 1u : 0u;
  }
}

TailEstimate make_estimate(double alpha, std::uint64_t n, std::uint64_t hits, double bound) {
  TailEstimate e;
  e.alpha = alpha;
  e.n_samples = n;
  e.hits = hits;
  e.p_hat = static_cast<double>(hits) / static_cast<double>(n);
  e.std_error = std::sqrt(e.p_hat * (1.0 - e.p_hat) / static_cast<double>(n));
  e.bound = bound;
  const double diff = bound - e.p_hat;
  if (e.std_error > 0)
    e.margin = diff / e.std_error;
  else
    e.margin = diff > 0 ? kInf : (diff < 0 ? -kInf : 0.0);
  return e;
}

void check_alphas(std::span<const double> alphas) {
  for (double a : alphas)
    if (!(a > 0)) throw Error(ErrorCode::non_positive_alpha, "tail estimation needs alpha > 0");
}

}  // namespace

double sample_series(const WeightedSeries& series, std::uint64_t seed, std::uint64_t sample_index) {
  const auto t = series.weights();
  ExtendedSum sum;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t[i] == 0.0) continue;
    RandomStream rng(seed, sample_index, static_cast<std::uint32_t>(i));
    sum.add(t[i] * series.component(i).sampler(rng));
  }
  return sum.value();
}

std::vector<std::uint64_t> count_exceedances_serial(const WeightedSeries& series, std::span<const double> alphas,
                                                    std::uint64_t n, std::uint64_t seed) {
  std::vector<std::uint64_t> hits(alphas.size(), 0);
  count_range(series, alphas, 0, n, seed, hits.data());
  return hits;
}

std::vector<std::uint64_t> count_exceedances(const WeightedSeries& series, std::span<const double> alphas,
                                             std::uint64_t n, std::uint64_t seed, int threads) {
  const std::size_t m = alphas.size();
  const auto chunks = static_cast<std::ptrdiff_t>((n + kChunk - 1) / kChunk);
  std::vector<std::uint64_t> per_chunk(static_cast<std::size_t>(chunks) * m, 0);
#ifdef _OPENMP
  const int nt = threads > 0 ? threads : omp_get_max_threads();
#pragma omp parallel for num_threads(nt) schedule(dynamic, 4)
#endif
  for (std::ptrdiff_t c = 0; c < chunks; ++c) {
    const std::uint64_t begin = static_cast<std::uint64_t>(c) * kChunk;
    const std::uint64_t end = std::min(n, begin + kChunk);
    count_range(series, alphas, begin, end, seed, per_chunk.data() + static_cast<std::size_t>(c) * m);
  }
  (void)threads;

  std::vector<std::uint64_t> hits(m, 0);
  for (std::ptrdiff_t c = 0; c < chunks; ++c)
    for (std::size_t j = 0; j < m; ++j) hits[j] += per_chunk[static_cast<std::size_t>(c) * m + j];
  return hits;
}

TailEstimate estimate_tail(const WeightedSeries& series, double alpha, std::uint64_t n, std::uint64_t seed,
                           int threads) {
  const double a[] = {alpha};
  const BoundValidation v = validate_bound(series, a, n, seed, threads);
  return v.rows.front();
}

BoundValidation validate_bound(const WeightedSeries& series, std::span<const double> alphas, std::uint64_t n,
                               std::uint64_t seed, int threads) {
  if (n < 1000) throw Error(ErrorCode::invalid_argument, "need at least 1000 samples");
  check_alphas(alphas);
  BoundValidation out;
  if (alphas.empty()) return out;

  const std::vector<std::uint64_t> hits = count_exceedances(series, alphas, n, seed, threads);
  out.rows.reserve(alphas.size());
  for (std::size_t j = 0; j < alphas.size(); ++j) {
    out.rows.push_back(make_estimate(alphas[j], n, hits[j], chernoff_bound(series, alphas[j])));
    out.pass = out.pass && out.rows.back().pass();
  }
  return out;
}

}  // namespace cramer
