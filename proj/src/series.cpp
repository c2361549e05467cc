#include "cramerkit/series.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "cramerkit/conjugate.hpp"
#include "cramerkit/error.hpp"

namespace cramer {
namespace {

/// Terms with nonzero weight, as functions of s: psi_i(t_i s).
struct Terms {
  std::vector<ScalarConvexFunction> scaled;
  std::vector<double> weight;
};

ScalarConvexFunction build_series_cgf(const std::vector<double>& weights,
                                      const std::vector<DistributionModel>& components) {
  auto terms = std::make_shared<Terms>();
  Interval dom = Interval::real_line();
  bool all_d2 = true;
  std::optional<Asymptote> left = Asymptote{0.0, 0.0}, right = Asymptote{0.0, 0.0};

  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (weights[i] == 0.0) continue;
    ScalarConvexFunction g = components[i].cgf.scaled(weights[i]);
    dom = dom.intersect(g.domain());
    all_d2 = all_d2 && g.has_deriv2();
    const auto& la = g.left_asymptote();
    const auto& ra = g.right_asymptote();
    if (left && la)
      left = Asymptote{left->slope + la->slope, left->intercept + la->intercept};
    else
      left.reset();
    if (right && ra)
      right = Asymptote{right->slope + ra->slope, right->intercept + ra->intercept};
    else
      right.reset();
    terms->scaled.push_back(std::move(g));
    terms->weight.push_back(weights[i]);
  }
  if (terms->scaled.empty()) {
    // Identically zero: any nonzero slope gives +inf, handled by the caller.
    left.reset();
    right.reset();
  }

  auto value = [terms](double s) {
    ExtendedSum sum;
    for (const auto& g : terms->scaled) sum.add(g.eval(s));
    return sum.value();
  };
  auto deriv = [terms](double s) {
    ExtendedSum sum;
    for (const auto& g : terms->scaled) sum.add(g.deriv(s));
    return sum.value();
  };
  ScalarConvexFunction::Fn deriv2;
  if (all_d2) {
    deriv2 = [terms](double s) {
      ExtendedSum sum;
      for (const auto& g : terms->scaled) sum.add(g.deriv2(s));
      return sum.value();
    };
  }
  return ScalarConvexFunction(std::move(value), std::move(deriv), std::move(deriv2), dom, left, right);
}

}  // namespace

WeightedSeries::WeightedSeries(std::vector<double> weights, std::vector<DistributionModel> components) {
  if (weights.size() != components.size())
    throw Error(ErrorCode::length_mismatch, "weights has " + std::to_string(weights.size()) +
                                                " entries, components has " + std::to_string(components.size()));
  auto d = std::make_shared<Data>();
  for (std::size_t i = 0; i < weights.size(); ++i) {
    const double t = weights[i];
    if (!std::isfinite(t)) throw Error(ErrorCode::invalid_argument, "weights must be finite");
    d->l2_norm_sq += t * t;
    d->variance += t * t * components[i].variance;
    if (t != 0.0) d->all_zero = false;
  }
  if (!std::isfinite(d->l2_norm_sq) || !std::isfinite(d->variance))
    throw Error(ErrorCode::invalid_argument, "sum of squared weights overflows");
  d->cgf = build_series_cgf(weights, components);
  d->weights = std::move(weights);
  d->components = std::move(components);
  data_ = std::move(d);
}

ExtendedReal series_cgf(const WeightedSeries& series, double s) { return series.cgf().eval(s); }

RateResult series_rate(const WeightedSeries& series, double alpha, double tol) {
  RateResult r;
  if (series.all_zero()) {
    r.method = "all-zero-weights";
    if (alpha == 0.0) {
      r.value = ExtendedReal::finite(0.0);
      r.dual_point = 0.0;
    } else {
      r.value = ExtendedReal::infinity();
    }
    return r;
  }
  ConjugateOptions opt;
  opt.tol = tol;
  if (series.variance() > 0) opt.initial_guess = alpha / series.variance();
  const ConjugateResult c = conjugate(series.cgf(), alpha, opt);
  r.value = c.value;
  r.dual_point = c.argmax;
  r.constraint_residual = c.residual;
  r.iterations = c.iterations;
  r.method = "conjugate";
  return r;
}

double chernoff_bound(const WeightedSeries& series, double alpha, double tol) {
  if (!(alpha > 0)) throw Error(ErrorCode::non_positive_alpha, "upper-tail bound needs alpha > 0");
  const RateResult r = series_rate(series, alpha, tol);
  if (r.value.is_infinite()) return 0.0;
  return std::exp(-r.value.value());
}

ExtendedReal functional_conjugate(const WeightedSeries& series, std::span<const double> b, double tol) {
  if (b.size() != series.size())
    throw Error(ErrorCode::length_mismatch, "b has " + std::to_string(b.size()) + " entries, series has " +
                                                std::to_string(series.size()));
  ExtendedSum sum;
  for (std::size_t i = 0; i < b.size(); ++i) {
    const ExtendedReal term = series.component(i).rate(b[i], tol);
    if (term.is_infinite()) return ExtendedReal::infinity();
    sum.add(term);
  }
  return sum.result();
}

}  // namespace cramer
