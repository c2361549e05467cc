#include "cramerkit/variational.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>
#include <utility>

#include "cramerkit/error.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace cramer {
namespace {

constexpr double kInvPhi = 0.6180339887498949;  // (sqrt 5 - 1) / 2

double dot_residual(std::span<const double> t, std::span<const double> b, double alpha) {
  ExtendedSum sum;
  for (std::size_t i = 0; i < t.size(); ++i) sum.add(t[i] * b[i]);
  sum.add(-alpha);
  return std::abs(sum.value());
}

/// One coordinate of the primal objective, as a plain double (+inf allowed).
class ComponentRates {
 public:
  ComponentRates(const WeightedSeries& series, double tol) : series_(series), tol_(tol) {}

  double operator()(std::size_t i, double b) const { return series_.component(i).rate(b, tol_).value(); }

  double total(std::span<const double> b) const {
    ExtendedSum sum;
    for (std::size_t i = 0; i < b.size(); ++i) {
      const double v = (*this)(i, b[i]);
      if (v == kInf) return kInf;
      sum.add(v);
    }
    return sum.value();
  }

 private:
  const WeightedSeries& series_;
  double tol_;
};

/// Minimize a convex phi on the line, phi(0) finite. Returns the step and
/// the value reached; (0, phi0) if no improvement was found.
template <class Phi>
std::pair<double, double> golden_line_search(const Phi& phi, double phi0, double h0) {
  // Shrink the probe until one side is finite.
  double h = h0;
  double fp = phi(h), fm = phi(-h);
  for (int k = 0; k < 80 && fp == kInf && fm == kInf; ++k) {
    h *= 0.5;
    fp = phi(h);
    fm = phi(-h);
  }
  if (fp == kInf && fm == kInf) return {0.0, phi0};

  double lo, hi;
  if (fp < phi0) {
    double mid = h, f_mid = fp, x = 2 * h, fx = phi(x);
    lo = 0.0;
    for (int k = 0; k < 200 && fx < f_mid; ++k) {
      lo = mid;
      mid = x;
      f_mid = fx;
      x *= 2;
      fx = phi(x);
    }
    hi = x;
  } else if (fm < phi0) {
    double mid = -h, f_mid = fm, x = -2 * h, fx = phi(x);
    hi = 0.0;
    for (int k = 0; k < 200 && fx < f_mid; ++k) {
      hi = mid;
      mid = x;
      f_mid = fx;
      x *= 2;
      fx = phi(x);
    }
    lo = x;
  } else {
    lo = -h;
    hi = h;
  }

  double c = hi - kInvPhi * (hi - lo);
  double d = lo + kInvPhi * (hi - lo);
  double fc = phi(c), fd = phi(d);
  const double scale = std::max(std::abs(lo), std::abs(hi));
  for (int k = 0; k < 200 && (hi - lo) > 1e-12 * scale; ++k) {
    if (fc <= fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - kInvPhi * (hi - lo);
      fc = phi(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + kInvPhi * (hi - lo);
      fd = phi(d);
    }
  }
  const auto [x, fx] = fc <= fd ? std::pair{c, fc} : std::pair{d, fd};
  if (fx < phi0) return {x, fx};
  return {0.0, phi0};
}

/// A feasible b with every coordinate inside the closed effective domain of
/// its rate: b_i = clamp(lambda t_i) with lambda solving <t, b> = alpha.
std::optional<std::vector<double>> clamped_feasible_point(const WeightedSeries& series, double alpha) {
  const auto t = series.weights();
  std::vector<double> lo(t.size()), hi(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) {
    lo[i] = series.component(i).cgf.slope_inf();
    hi[i] = series.component(i).cgf.slope_sup();
  }
  auto point = [&](double lambda) {
    std::vector<double> b(t.size());
    for (std::size_t i = 0; i < t.size(); ++i) b[i] = std::clamp(lambda * t[i], lo[i], hi[i]);
    return b;
  };
  auto h = [&](double lambda) {
    const auto b = point(lambda);
    double s = 0;
    for (std::size_t i = 0; i < t.size(); ++i) s += t[i] * b[i];
    return s;
  };

  double a = -1.0, c = 1.0;
  for (int k = 0; k < 1100 && h(c) < alpha; ++k) c *= 2;
  for (int k = 0; k < 1100 && h(a) > alpha; ++k) a *= 2;
  if (h(c) < alpha || h(a) > alpha) return std::nullopt;
  for (int k = 0; k < 200 && c - a > 1e-15 * std::max(1.0, std::abs(c)); ++k) {
    const double m = 0.5 * (a + c);
    (h(m) < alpha ? a : c) = m;
  }
  return point(0.5 * (a + c));
}

}  // namespace

std::string_view to_string(AlphaClass c) noexcept {
  switch (c) {
    case AlphaClass::interior: return "interior";
    case AlphaClass::boundary: return "boundary";
    case AlphaClass::outside: return "outside";
  }
  return "?";
}

RateResult solve_dual(const VariationalProblem& problem, double tol) {
  const WeightedSeries& series = problem.series;
  RateResult r = series_rate(series, problem.alpha, tol);
  r.method = "dual";
  if (!r.dual_point || r.value.kind() != ValueKind::interior) {
    r.dual_point.reset();
    return r;
  }

  const double s = *r.dual_point;
  const auto t = series.weights();
  std::vector<double> b(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) b[i] = series.component(i).cgf.deriv(s * t[i]);

  r.value = functional_conjugate(series, b, tol);
  r.constraint_residual = dot_residual(t, b, problem.alpha);
  r.minimizer = std::move(b);
  return r;
}

RateResult solve_direct(const VariationalProblem& problem, const DirectOptions& options) {
  const WeightedSeries& series = problem.series;
  const double alpha = problem.alpha;
  const std::size_t n = series.size();
  if (n > options.dimension_cap)
    throw Error(ErrorCode::dimension_exceeded,
                "dimension " + std::to_string(n) + " above cap " + std::to_string(options.dimension_cap));
  const auto t = series.weights();
  if (series.all_zero() && alpha != 0.0)
    throw Error(ErrorCode::infeasible_start, "all weights are zero but alpha != 0");

  const ComponentRates rate(series, options.rate_tol);
  RateResult r;
  r.method = "direct";

  std::vector<double> b(n, 0.0);
  if (!series.all_zero()) {
    for (std::size_t i = 0; i < n; ++i) b[i] = alpha * t[i] / series.l2_norm_sq();
  }
  double f = rate.total(b);
  if (f == kInf) {
    auto start = clamped_feasible_point(series, alpha);
    if (start) {
      b = std::move(*start);
      f = rate.total(b);
    }
    if (!start || f == kInf) {
      r.value = ExtendedReal::infinity();
      r.method = "direct/objective-infinite";
      r.constraint_residual = dot_residual(t, b, alpha);
      return r;
    }
  }

  std::vector<double> term(n);
  for (std::size_t i = 0; i < n; ++i) term[i] = rate(i, b[i]);

  int sweep = 0;
  for (; sweep < options.max_sweeps; ++sweep) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        if (t[i] == 0.0 && t[j] == 0.0) continue;
        // Moving along e_i t_j - e_j t_i keeps <t, b> fixed.
        const double di = t[j], dj = -t[i];
        const double bi = b[i], bj = b[j];
        const auto phi = [&](double lambda) {
          const double vi = rate(i, bi + lambda * di);
          if (vi == kInf) return kInf;
          const double vj = rate(j, bj + lambda * dj);
          if (vj == kInf) return kInf;
          return vi + vj;
        };
        const double dmax = std::max(std::abs(di), std::abs(dj));
        const double h0 = 0.1 * (std::abs(bi) + std::abs(bj) + 1e-2) / dmax;
        const auto [lambda, value] = golden_line_search(phi, term[i] + term[j], h0);
        if (lambda != 0.0) {
          b[i] = bi + lambda * di;
          b[j] = bj + lambda * dj;
          term[i] = rate(i, b[i]);
          term[j] = rate(j, b[j]);
        }
      }
    }
    const double f_new = rate.total(b);
    const double improvement = f - f_new;
    f = f_new;
    if (improvement < options.tol) {
      ++sweep;
      break;
    }
  }

  // Pairwise moves are exact in exact arithmetic; remove rounding drift.
  if (!series.all_zero()) {
    ExtendedSum dot;
    for (std::size_t i = 0; i < n; ++i) dot.add(t[i] * b[i]);
    const double shift = (alpha - dot.value()) / series.l2_norm_sq();
    std::vector<double> corrected(b);
    for (std::size_t i = 0; i < n; ++i) corrected[i] += shift * t[i];
    const double fc = rate.total(corrected);
    if (fc != kInf) {
      b = std::move(corrected);
      f = fc;
    }
  }

  r.value = functional_conjugate(series, b, options.rate_tol);
  r.constraint_residual = dot_residual(t, b, alpha);
  r.iterations = sweep;
  r.minimizer = std::move(b);
  return r;
}

RateResult solve_direct(const VariationalProblem& problem, double tol, int budget) {
  DirectOptions opt;
  opt.tol = tol;
  opt.max_sweeps = budget;
  return solve_direct(problem, opt);
}

double fenchel_gap(const WeightedSeries& series, double s, std::span<const double> b, double tol) {
  if (b.size() != series.size()) throw Error(ErrorCode::length_mismatch, "b length differs from series");
  const auto t = series.weights();
  double worst = 0.0;
  for (std::size_t i = 0; i < b.size(); ++i) {
    const DistributionModel& m = series.component(i);
    const ExtendedReal conj = m.rate(b[i], tol);
    const ExtendedReal psi = m.cgf.eval(s * t[i]);
    if (conj.is_infinite() || psi.is_infinite()) return kInf;
    worst = std::max(worst, std::abs(conj.value() + psi.value() - b[i] * s * t[i]));
  }
  return worst;
}

TheoremReport verify_theorem(const VariationalProblem& problem, const VerifyTolerances& tol) {
  TheoremReport rep;
  rep.alpha = problem.alpha;
  const double feas = tol.feasibility * (1.0 + std::abs(problem.alpha));

  try {
    rep.rate = series_rate(problem.series, problem.alpha, tol.solver);
  } catch (const Error& e) {
    rep.notes.emplace_back(std::string("series_rate: ") + e.what());
    return rep;
  }
  if (rep.rate.value.is_infinite())
    rep.classification = AlphaClass::outside;
  else if (rep.rate.value.kind() == ValueKind::boundary_limit)
    rep.classification = AlphaClass::boundary;

  bool ok = true;
  try {
    rep.dual = solve_dual(problem, tol.solver);
  } catch (const Error& e) {
    rep.notes.emplace_back(std::string("solve_dual: ") + e.what());
    ok = false;
  }
  try {
    rep.direct = solve_direct(problem);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::infeasible_start) {
      rep.direct.value = ExtendedReal::infinity();
      rep.direct.method = "direct/infeasible-start";
    } else {
      rep.notes.emplace_back(std::string("solve_direct: ") + e.what());
      ok = false;
    }
  }

  const double rv = rep.rate.value.value(), dv = rep.dual.value.value(), pv = rep.direct.value.value();
  auto gap = [](double x, double y) { return (x == kInf && y == kInf) ? 0.0 : std::abs(x - y); };
  rep.gap_dual = gap(dv, rv);
  rep.gap_direct = gap(pv, rv);
  rep.max_gap = std::max({rep.gap_dual, rep.gap_direct, gap(dv, pv)});

  switch (rep.classification) {
    case AlphaClass::interior: {
      if (!ok) break;
      if (rep.gap_dual > tol.dual) {
        ok = false;
        rep.notes.emplace_back("dual value differs from series rate");
      }
      if (rep.gap_direct > tol.direct) {
        ok = false;
        rep.notes.emplace_back("direct value differs from series rate");
      }
      if (!rep.dual.minimizer || rep.dual.constraint_residual > feas) {
        ok = false;
        rep.notes.emplace_back("dual minimizer infeasible");
      }
      if (!rep.direct.minimizer || rep.direct.constraint_residual > feas) {
        ok = false;
        rep.notes.emplace_back("direct minimizer infeasible");
      }
      if (pv < dv - tol.dual) {
        ok = false;
        rep.notes.emplace_back("direct value below dual value");
      }
      if (rep.dual.minimizer && rep.rate.dual_point) {
        rep.fenchel = fenchel_gap(problem.series, *rep.rate.dual_point, *rep.dual.minimizer, tol.solver);
        if (!(rep.fenchel <= tol.fenchel)) {
          ok = false;
          rep.notes.emplace_back("Fenchel equality violated");
        }
      }
      break;
    }
    case AlphaClass::boundary:
      rep.notes.emplace_back("alpha on the boundary of the rate domain; equality not asserted");
      break;
    case AlphaClass::outside:
      rep.notes.emplace_back("alpha outside the rate domain; rate is +inf");
      if (pv != kInf) rep.notes.emplace_back("direct solver found a finite value outside the domain");
      break;
  }
  rep.pass = ok;
  return rep;
}

std::vector<TheoremReport> verify_batch_serial(std::span<const VariationalProblem> problems,
                                               const VerifyTolerances& tol) {
  std::vector<TheoremReport> out;
  out.reserve(problems.size());
  for (const auto& p : problems) out.push_back(verify_theorem(p, tol));
  return out;
}

std::vector<TheoremReport> verify_batch(std::span<const VariationalProblem> problems, const VerifyTolerances& tol,
                                        int threads) {
  std::vector<TheoremReport> out(problems.size());
  const auto n = static_cast<std::ptrdiff_t>(problems.size());
#ifdef _OPENMP
  const int nt = threads > 0 ? threads : omp_get_max_threads();
#pragma omp parallel for num_threads(nt) schedule(dynamic, 1)
#endif
  for (std::ptrdiff_t i = 0; i < n; ++i) out[i] = verify_theorem(problems[i], tol);
  (void)threads;
  return out;
}

}  // namespace cramer
