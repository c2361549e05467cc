// Serial reference kernels against their OpenMP counterparts.
// Thread count is the second range argument (0 = serial reference).
#include <benchmark/benchmark.h>

#include "cramerkit/distributions.hpp"
#include "cramerkit/montecarlo.hpp"
#include "cramerkit/oracle.hpp"
#include "cramerkit/variational.hpp"

using namespace cramer;

namespace {

WeightedSeries mixed_series(std::size_t dim) {
  std::vector<double> t(dim);
  std::vector<DistributionModel> comps;
  for (std::size_t i = 0; i < dim; ++i) {
    t[i] = 1.0 / static_cast<double>(i + 1);
    comps.push_back(i % 3 == 0 ? make_gaussian() : i % 3 == 1 ? make_laplace() : make_rademacher());
  }
  return WeightedSeries(std::move(t), std::move(comps));
}

void BM_CountExceedances(benchmark::State& state) {
  const auto series = mixed_series(static_cast<std::size_t>(state.range(0)));
  const std::vector<double> alphas{0.5, 1, 2, 3};
  const int threads = static_cast<int>(state.range(1));
  constexpr std::uint64_t n = 200000;
  for (auto _ : state) {
    auto hits = threads == 0 ? count_exceedances_serial(series, alphas, n, 42)
                             : count_exceedances(series, alphas, n, 42, threads);
    benchmark::DoNotOptimize(hits);
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * n));
}
BENCHMARK(BM_CountExceedances)->ArgsProduct({{4, 16}, {0, 1, 2, 4, 8}})->Unit(benchmark::kMillisecond)->UseRealTime();

void BM_VerifyBatch(benchmark::State& state) {
  std::vector<VariationalProblem> problems;
  for (int k = 0; k < 64; ++k) {
    const auto series = mixed_series(2 + static_cast<std::size_t>(k % 5));
    problems.push_back({series, series.cgf().deriv(0.2 + 0.01 * k)});
  }
  const int threads = static_cast<int>(state.range(0));
  for (auto _ : state) {
    auto reports = threads == 0 ? verify_batch_serial(problems) : verify_batch(problems, {}, threads);
    benchmark::DoNotOptimize(reports);
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * 64));
}
BENCHMARK(BM_VerifyBatch)->Arg(0)->Arg(1)->Arg(2)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond)->UseRealTime();

void BM_Oracle2d(benchmark::State& state) {
  const auto f = make_rademacher().cgf, g = make_laplace().cgf;
  const GridSpec2d grid{-3, 3, -1, 1, 1e-3};
  const int threads = static_cast<int>(state.range(0));
  for (auto _ : state) {
    const double v = threads == 0 ? conjugate_sum_2d_oracle_serial(f, g, 0.4, 0.7, grid)
                                  : conjugate_sum_2d_oracle(f, g, 0.4, 0.7, grid, threads);
    benchmark::DoNotOptimize(v);
  }
}
BENCHMARK(BM_Oracle2d)->Arg(0)->Arg(1)->Arg(2)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond)->UseRealTime();

}  // namespace

BENCHMARK_MAIN();
