#include "cramerkit/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "cramerkit/error.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace cramer {
namespace {

std::size_t grid_count(double lo, double hi, double step) {
  if (!(lo < hi) || !(step > 0)) throw Error(ErrorCode::invalid_argument, "grid needs lo < hi and step > 0");
  return static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
}

struct Tabulated {
  std::vector<double> point;
  std::vector<double> value;  // +inf outside the domain
};

Tabulated tabulate(const ScalarConvexFunction& f, double lo, double hi, double step) {
  const std::size_t n = grid_count(lo, hi, step);
  Tabulated t;
  t.point.resize(n);
  t.value.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    t.point[k] = lo + static_cast<double>(k) * step;
    t.value[k] = f.eval(t.point[k]).value();
  }
  return t;
}

double row_max(double base, double a2, const Tabulated& v) {
  double best = -kInf;
  for (std::size_t j = 0; j < v.point.size(); ++j) {
    if (v.value[j] == kInf) continue;
    best = std::max(best, base + v.point[j] * a2 - v.value[j]);
  }
  return best;
}

}  // namespace

double conjugate_grid_oracle(const ScalarConvexFunction& f, double alpha, double s_lo, double s_hi, double step) {
  const std::size_t n = grid_count(s_lo, s_hi, step);
  double best = -kInf;
  for (std::size_t k = 0; k < n; ++k) {
    const double s = s_lo + static_cast<double>(k) * step;
    const ExtendedReal fs = f.eval(s);
    if (fs.is_infinite()) continue;
    best = std::max(best, s * alpha - fs.value());
  }
  return best;
}

double conjugate_sum_2d_oracle_serial(const ScalarConvexFunction& f, const ScalarConvexFunction& g, double a1,
                                      double a2, const GridSpec2d& grid) {
  const Tabulated u = tabulate(f, grid.u_lo, grid.u_hi, grid.step);
  const Tabulated v = tabulate(g, grid.v_lo, grid.v_hi, grid.step);
  double best = -kInf;
  for (std::size_t i = 0; i < u.point.size(); ++i) {
    if (u.value[i] == kInf) continue;
    best = std::max(best, row_max(u.point[i] * a1 - u.value[i], a2, v));
  }
  return best;
}

double conjugate_sum_2d_oracle(const ScalarConvexFunction& f, const ScalarConvexFunction& g, double a1, double a2,
                               const GridSpec2d& grid, int threads) {
  const Tabulated u = tabulate(f, grid.u_lo, grid.u_hi, grid.step);
  const Tabulated v = tabulate(g, grid.v_lo, grid.v_hi, grid.step);
  const auto n = static_cast<std::ptrdiff_t>(u.point.size());
  double best = -kInf;
#ifdef _OPENMP
  const int nt = threads > 0 ? threads : omp_get_max_threads();
#pragma omp parallel for num_threads(nt) reduction(max : best) schedule(static)
#endif
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    if (u.value[i] == kInf) continue;
    best = std::max(best, row_max(u.point[i] * a1 - u.value[i], a2, v));
  }
  (void)threads;
  return best;
}

}  // namespace cramer
