#pragma once

#include "cramerkit/convex_function.hpp"

namespace cramer {

/// Brute-force max of s*alpha - f(s) over {s_lo + k*step} within [s_lo, s_hi].
/// Points outside the domain of f are skipped; returns -inf if none remain.
/// Test oracle only: independent of the root-finding path in conjugate().
double conjugate_grid_oracle(const ScalarConvexFunction& f, double alpha, double s_lo, double s_hi, double step);

struct GridSpec2d {
  double u_lo = -5.0, u_hi = 5.0;
  double v_lo = -5.0, v_hi = 5.0;
  double step = 1e-3;
};

/// Brute-force sup over the product grid of u*a1 + v*a2 - f(u) - g(v).
/// OpenMP-parallel over u rows; `threads` <= 0 uses the runtime default.
/// The max-reduction is exact, so the result does not depend on thread count.
double conjugate_sum_2d_oracle(const ScalarConvexFunction& f, const ScalarConvexFunction& g, double a1, double a2,
                               const GridSpec2d& grid, int threads = 0);

/// Single-threaded reference for conjugate_sum_2d_oracle.
double conjugate_sum_2d_oracle_serial(const ScalarConvexFunction& f, const ScalarConvexFunction& g, double a1,
                                      double a2, const GridSpec2d& grid);

}  // namespace cramer
