#include "cramerkit/conjugate.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <sstream>
#include <utility>

#include "cramerkit/error.hpp"

namespace cramer {
namespace {

constexpr double kEndpointFraction = 1e-12;
constexpr int kMaxSearchSteps = 2200;

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

/// Distance kept from an open endpoint.
double endpoint_epsilon(const Interval& dom, double endpoint) {
  if (std::isfinite(dom.width())) return kEndpointFraction * dom.width();
  return kEndpointFraction * std::max(1.0, std::abs(endpoint));
}

/// A starting point strictly inside the domain, 0 when possible.
double interior_origin(const Interval& dom) {
  if (dom.contains_interior(0.0)) return 0.0;
  if (dom.bounded_below() && dom.bounded_above()) return dom.lo + 0.5 * dom.width();
  if (dom.bounded_below()) return dom.lo + std::max(1.0, std::abs(dom.lo));
  return dom.hi - std::max(1.0, std::abs(dom.hi));
}

bool collapsed(double a, double b) {
  return (b - a) <= 4.0 * DBL_EPSILON * std::max(std::abs(a), std::abs(b)) || (b - a) <= DBL_MIN;
}

class Solver {
 public:
  Solver(const ScalarConvexFunction& f, double alpha, const ConjugateOptions& opt)
      : f_(f), alpha_(alpha), opt_(opt), dom_(f.domain()) {}

  ConjugateResult run() {
    if (const auto& a = f_.right_asymptote(); a && alpha_ >= a->slope)
      return alpha_ == a->slope ? boundary(a->intercept) : infinite();
    if (const auto& a = f_.left_asymptote(); a && alpha_ <= a->slope)
      return alpha_ == a->slope ? boundary(a->intercept) : infinite();

    // Degenerate single-point domain.
    if (dom_.lo == dom_.hi) return limit_at(dom_.lo);

    const double origin = interior_origin(dom_);
    const double g0 = g(origin);
    if (g0 == 0.0) return interior(origin, g0);
    return g0 < 0 ? search(origin, g0, +1) : search(origin, g0, -1);
  }

 private:
  double g(double s) {
    ++evals_;
    const double d = f_.deriv(s);
    if (std::isnan(d))
      throw Error(ErrorCode::non_convex_detected, "derivative is NaN at s=" + fmt(s));
    return d - alpha_;
  }

  double slack(double ga, double gb) const {
    return 1e-12 * (1.0 + std::abs(alpha_) + std::abs(ga) + std::abs(gb));
  }

  ConjugateResult infinite() const {
    ConjugateResult r;
    r.value = ExtendedReal::infinity();
    r.iterations = evals_;
    return r;
  }

  ConjugateResult boundary(double v) const {
    ConjugateResult r;
    r.value = ExtendedReal::finite(v, ValueKind::boundary_limit);
    r.iterations = evals_;
    return r;
  }

  ConjugateResult interior(double s, double gs) const {
    const ExtendedReal fs = f_.eval(s);
    if (fs.is_infinite()) throw Error(ErrorCode::non_convex_detected, "maximizer outside effective domain");
    ConjugateResult r;
    r.value = ExtendedReal::finite(alpha_ * s - fs.value(), ValueKind::interior);
    r.argmax = s;
    r.iterations = evals_;
    r.residual = std::abs(gs);
    return r;
  }

  /// Supremum reached only as s -> endpoint (or attained at a closed one).
  ConjugateResult limit_at(double s) const {
    const ExtendedReal fs = f_.eval(s);
    if (fs.is_infinite()) return infinite();
    return boundary(alpha_ * s - fs.value());
  }

  /// Walk from `origin` in direction `dir` until f' - alpha changes sign,
  /// then refine. If the domain runs out first, classify the limit.
  ConjugateResult search(double origin, double g_origin, int dir) {
    const bool bounded = dir > 0 ? dom_.bounded_above() : dom_.bounded_below();
    const double end = dir > 0 ? dom_.hi : dom_.lo;
    const bool end_closed = dir > 0 ? dom_.hi_closed : dom_.lo_closed;
    const double eps = bounded ? endpoint_epsilon(dom_, end) : 0.0;
    const double last = bounded ? (end_closed ? end : end - dir * eps) : 0.0;

    double prev = origin, g_prev = g_origin;
    double step = 1.0;
    for (int k = 0; k < kMaxSearchSteps; ++k) {
      double s;
      if (bounded) {
        s = end - dir * 0.5 * std::abs(end - prev);
        if (std::abs(end - s) <= eps || s == prev) s = last;
      } else {
        s = origin + dir * step;
        step *= 2.0;
        // s_max is always one of the sampled points on the way out.
        if (dir * s > opt_.s_max && dir * prev < opt_.s_max) s = dir * opt_.s_max;
        if (!std::isfinite(s)) return classify_unbounded(prev, g_prev);
      }

      const ExtendedReal fs = f_.eval(s);
      // f left its effective domain before f' reached alpha.
      if (fs.is_infinite()) return limit_at(prev);
      const double gs = g(s);
      if (dir * (gs - g_prev) < -slack(gs, g_prev))
        throw Error(ErrorCode::non_convex_detected,
                    "derivative decreases between s=" + fmt(prev) + " and s=" + fmt(s));

      if (gs == 0.0) return interior(s, gs);
      if ((dir > 0 && gs > 0) || (dir < 0 && gs < 0)) {
        return dir > 0 ? refine(prev, g_prev, s, gs) : refine(s, gs, prev, g_prev);
      }

      if (bounded && s == last) return limit_at(s);
      // From s_max on, the derivative has to keep growing to warrant more
      // doubling; a stalled slope means alpha sits at or beyond sup f'.
      if (!bounded && dir * s >= opt_.s_max && std::abs(gs - g_prev) <= 1e-12 * (1.0 + std::abs(alpha_)))
        return classify_unbounded(s, gs);
      prev = s;
      g_prev = gs;
    }
    return classify_unbounded(prev, g_prev);
  }

  ConjugateResult classify_unbounded(double s, double gs) const {
    const double gap = std::abs(gs);
    if (gap > std::max(opt_.tol, 1e-9) * (1.0 + std::abs(alpha_))) return infinite();
    return limit_at(s);
  }

  /// Safeguarded Newton on a bracket with g(a) < 0 < g(b).
  ConjugateResult refine(double a, double ga, double b, double gb) {
    double s = 0.5 * (a + b);
    if (opt_.initial_guess && *opt_.initial_guess > a && *opt_.initial_guess < b) s = *opt_.initial_guess;
    double gs = checked_g(s, ga, gb);
    int iter = 1;

    while (true) {
      if (std::abs(gs) <= opt_.tol) return interior(s, gs);
      if (gs < 0) {
        a = s;
        ga = gs;
      } else {
        b = s;
        gb = gs;
      }
      if (collapsed(a, b)) {
        return std::abs(ga) <= std::abs(gb) ? interior(a, ga) : interior(b, gb);
      }
      if (iter >= opt_.max_iter)
        throw Error(ErrorCode::no_convergence, "conjugate at alpha=" + fmt(alpha_) + " residual " + fmt(std::abs(gs)));

      bool moved = false;
      if (f_.has_deriv2()) {
        const double d2 = f_.deriv2(s);
        if (d2 > 0 && std::isfinite(d2)) {
          const double sn = s - gs / d2;
          if (sn > a && sn < b) {
            const double gn = checked_g(sn, ga, gb);
            ++iter;
            if (std::abs(gn) <= 0.5 * std::abs(gs)) {
              s = sn;
              gs = gn;
              moved = true;
            } else if (gn < 0) {
              a = sn;
              ga = gn;
            } else {
              b = sn;
              gb = gn;
            }
          }
        }
      }
      if (!moved) {
        s = 0.5 * (a + b);
        gs = checked_g(s, ga, gb);
        ++iter;
      }
    }
  }

  double checked_g(double s, double ga, double gb) {
    const double gs = g(s);
    const double sl = slack(ga, gb);
    if (gs < ga - sl || gs > gb + sl)
      throw Error(ErrorCode::non_convex_detected, "derivative not monotone inside bracket at s=" + fmt(s));
    return gs;
  }

  const ScalarConvexFunction& f_;
  double alpha_;
  const ConjugateOptions& opt_;
  const Interval& dom_;
  int evals_ = 0;
};

}  // namespace

ConjugateResult conjugate(const ScalarConvexFunction& f, double alpha, const ConjugateOptions& options) {
  if (!(options.tol > 0)) throw Error(ErrorCode::invalid_argument, "tol must be positive");
  if (!std::isfinite(alpha)) throw Error(ErrorCode::invalid_argument, "alpha must be finite");
  return Solver(f, alpha, options).run();
}

ConjugateResult conjugate(const ScalarConvexFunction& f, double alpha, double tol) {
  ConjugateOptions opt;
  opt.tol = tol;
  return conjugate(f, alpha, opt);
}

ScalarConvexFunction conjugate_function(const ScalarConvexFunction& f, const ConjugateOptions& options) {
  const auto& la = f.left_asymptote();
  const auto& ra = f.right_asymptote();
  Interval dom{f.slope_inf(), f.slope_sup(), la.has_value(), ra.has_value()};

  // A closed finite endpoint of f makes f* affine beyond it.
  std::optional<Asymptote> left, right;
  const Interval& fd = f.domain();
  if (fd.lo_closed) left = Asymptote{fd.lo, f.eval(fd.lo).value()};
  if (fd.hi_closed) right = Asymptote{fd.hi, f.eval(fd.hi).value()};

  ConjugateOptions opt = options;
  opt.initial_guess.reset();
  auto value = [f, opt](double alpha) { return conjugate(f, alpha, opt).value.value(); };
  auto deriv = [f, opt](double alpha) {
    const ConjugateResult r = conjugate(f, alpha, opt);
    if (r.argmax) return *r.argmax;
    // Boundary slope: the maximizer is the domain end on that side.
    return alpha >= 0 ? f.domain().hi : f.domain().lo;
  };
  ScalarConvexFunction::Fn deriv2;
  if (f.has_deriv2()) {
    deriv2 = [f, opt](double alpha) {
      const ConjugateResult r = conjugate(f, alpha, opt);
      if (!r.argmax) return std::nan("");
      return 1.0 / f.deriv2(*r.argmax);
    };
  }
  return ScalarConvexFunction(std::move(value), std::move(deriv), std::move(deriv2), dom, left, right);
}

ExtendedReal biconjugate(const ScalarConvexFunction& f, double s, double tol) {
  ConjugateOptions opt;
  opt.tol = tol;
  const ScalarConvexFunction fstar = conjugate_function(f, opt);
  return conjugate(fstar, s, opt).value;
}

}  // namespace cramer
