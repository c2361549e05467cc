#include "cramerkit/distributions.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <utility>

#include "cramerkit/error.hpp"

namespace cramer {
namespace {

constexpr double kLn2 = std::numbers::ln2;

// x ln x with 0 ln 0 = 0, for x = 1 + a computed as log1p(a).
double xlogx_1p(double a) noexcept {
  const double x = 1.0 + a;
  if (std::abs(x) < 1e-300) return 0.0;
  return x * std::log1p(a);
}

// ln cosh s without overflow: |s| + ln(1 + e^{-2|s|}) - ln 2.
double log_cosh(double s) noexcept {
  const double a = std::abs(s);
  return a + std::log1p(std::exp(-2.0 * a)) - kLn2;
}

}  // namespace

double rademacher_rate(double a) noexcept { return 0.5 * (xlogx_1p(a) + xlogx_1p(-a)); }

double laplace_rate(double a) noexcept {
  const double r = std::hypot(1.0, a);
  return a * a / (r + 1.0) + std::log(2.0 / (r + 1.0));
}

ExtendedReal DistributionModel::rate(double alpha, double tol) const {
  if (rate_closed_form) return rate_closed_form(alpha);
  return numeric_rate(alpha, tol).value;
}

ConjugateResult DistributionModel::numeric_rate(double alpha, double tol) const {
  ConjugateOptions opt;
  opt.tol = tol;
  if (variance > 0) opt.initial_guess = (alpha - mean) / variance;
  return conjugate(cgf, alpha, opt);
}

DistributionModel make_gaussian() {
  DistributionModel m;
  m.name = "gaussian";
  m.cgf = ScalarConvexFunction([](double s) { return 0.5 * s * s; }, [](double s) { return s; },
                               [](double) { return 1.0; }, Interval::real_line());
  m.rate_closed_form = [](double a) { return ExtendedReal::finite(0.5 * a * a); };
  m.mean = 0.0;
  m.variance = 1.0;
  m.sampler = [](RandomStream& rng) {
    const double u1 = rng.uniform();
    const double u2 = rng.uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  };
  return m;
}

DistributionModel make_laplace() {
  DistributionModel m;
  m.name = "laplace";
  m.cgf = ScalarConvexFunction([](double s) { return -std::log1p(-s * s); },
                               [](double s) { return 2.0 * s / (1.0 - s * s); },
                               [](double s) {
                                 const double q = 1.0 - s * s;
                                 return 2.0 * (1.0 + s * s) / (q * q);
                               },
                               Interval::open(-1.0, 1.0));
  m.rate_closed_form = [](double a) { return ExtendedReal::finite(laplace_rate(a)); };
  m.mean = 0.0;
  m.variance = 2.0;
  m.sampler = [](RandomStream& rng) {
    const double d = rng.uniform() - 0.5;
    if (d == 0.0) return 0.0;
    return -std::copysign(1.0, d) * std::log(1.0 - 2.0 * std::abs(d));
  };
  return m;
}

DistributionModel make_rademacher() {
  DistributionModel m;
  m.name = "rademacher";
  m.cgf = ScalarConvexFunction(log_cosh, [](double s) { return std::tanh(s); },
                               [](double s) {
                                 const double c = std::cosh(s);
                                 return std::isfinite(c) ? 1.0 / (c * c) : 0.0;
                               },
                               Interval::real_line(), Asymptote{-1.0, kLn2}, Asymptote{1.0, kLn2});
  m.rate_closed_form = [](double a) {
    if (std::abs(a) > 1.0) return ExtendedReal::infinity();
    return ExtendedReal::finite(rademacher_rate(a),
                                std::abs(a) == 1.0 ? ValueKind::boundary_limit : ValueKind::interior);
  };
  m.mean = 0.0;
  m.variance = 1.0;
  m.sampler = [](RandomStream& rng) { return rng.uniform() < 0.5 ? -1.0 : 1.0; };
  return m;
}

DistributionModel scaled_model(const DistributionModel& base, double scale) {
  if (!(scale > 0) || !std::isfinite(scale))
    throw Error(ErrorCode::invalid_argument, "model scale must be positive and finite");
  if (scale == 1.0) return base;
  DistributionModel m;
  std::ostringstream name;
  name << base.name << "[scale=" << scale << "]";
  m.name = name.str();
  m.cgf = base.cgf.scaled(scale);
  if (base.rate_closed_form) m.rate_closed_form = [r = base.rate_closed_form, scale](double a) { return r(a / scale); };
  m.mean = scale * base.mean;
  m.variance = scale * scale * base.variance;
  m.sampler = [s = base.sampler, scale](RandomStream& rng) { return scale * s(rng); };
  return m;
}

DistributionModel make_model(std::string_view name) {
  if (name == "gaussian") return make_gaussian();
  if (name == "laplace") return make_laplace();
  if (name == "rademacher") return make_rademacher();
  throw Error(ErrorCode::invalid_argument, "unknown model '" + std::string(name) + "'");
}

std::vector<std::string> catalog_names() { return {"gaussian", "laplace", "rademacher"}; }

}  // namespace cramer
