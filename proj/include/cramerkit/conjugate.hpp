#pragma once

#include <optional>

#include "cramerkit/convex_function.hpp"
#include "cramerkit/extended_real.hpp"

namespace cramer {

struct ConjugateOptions {
  double tol = 1e-10;         ///< on |f'(s) - alpha|
  int max_iter = 200;         ///< refinement budget once a bracket is known
  double s_max = 700.0;       ///< classification point for unbounded domains without metadata
  std::optional<double> initial_guess;  ///< first Newton point, used if inside the bracket
};

struct ConjugateResult {
  ExtendedReal value;
  std::optional<double> argmax;  ///< absent when the supremum is only a limit
  int iterations = 0;
  double residual = 0.0;         ///< |f'(argmax) - alpha|, 0 when no argmax
};

/// sup_s { s*alpha - f(s) }.
///
/// Interior slopes are solved by bracketed bisection with Newton steps on
/// f'(s) = alpha. A slope equal to an asymptote slope yields the asymptote
/// intercept (boundary_limit); slopes beyond every achievable one yield +inf.
/// Open endpoints are approached to within 1e-12 of the interval width and
/// never evaluated.
///
/// Throws Error(non_convex_detected) when sampled derivatives are not
/// monotone, Error(no_convergence) when the budget runs out.
ConjugateResult conjugate(const ScalarConvexFunction& f, double alpha, const ConjugateOptions& options);
ConjugateResult conjugate(const ScalarConvexFunction& f, double alpha, double tol = 1e-10);

/// f* as a ScalarConvexFunction: each evaluation runs the conjugate solver.
/// The derivative is the maximizer (envelope theorem); its second derivative
/// is 1/f''(maximizer) when f has one.
ScalarConvexFunction conjugate_function(const ScalarConvexFunction& f, const ConjugateOptions& options = {});

/// f**(s), the conjugate of the numerically evaluated f*.
ExtendedReal biconjugate(const ScalarConvexFunction& f, double s, double tol = 1e-10);

}  // namespace cramer
