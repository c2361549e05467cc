#include "cramerkit/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

#include "CLI11.hpp"
#include "cramerkit/conjugate.hpp"
#include "cramerkit/error.hpp"
#include "cramerkit/montecarlo.hpp"
#include "cramerkit/problem_spec.hpp"
#include "cramerkit/series.hpp"
#include "cramerkit/variational.hpp"
#include "json.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace cramer::cli {
namespace {

using json = nlohmann::ordered_json;

constexpr std::uint64_t kDefaultSamples = 1000000;
constexpr std::uint64_t kDefaultSeed = 42;
constexpr double kDefaultTol = 1e-10;

// ---------------------------------------------------------------------------
// Tables

using Cell = std::variant<std::monostate, double, std::string, std::uint64_t, bool, std::vector<double>>;
using Row = std::vector<Cell>;

struct Table {
  std::string command;
  std::vector<std::string> columns;
  std::vector<Row> rows;
  std::optional<bool> verdict;
};

std::string number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

std::string csv_cell(const Cell& c) {
  struct {
    std::string operator()(std::monostate) const { return ""; }
    std::string operator()(double x) const { return number(x); }
    std::string operator()(const std::string& s) const { return s; }
    std::string operator()(std::uint64_t n) const { return std::to_string(n); }
    std::string operator()(bool b) const { return b ? "pass" : "fail"; }
    std::string operator()(const std::vector<double>& v) const {
      std::string s;
      for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ";" : "") + number(v[i]);
      return s;
    }
  } visit;
  return std::visit(visit, c);
}

json json_number(double x) {
  if (std::isfinite(x)) return x;
  return number(x);
}

json json_cell(const Cell& c) {
  struct {
    json operator()(std::monostate) const { return nullptr; }
    json operator()(double x) const { return json_number(x); }
    json operator()(const std::string& s) const { return s; }
    json operator()(std::uint64_t n) const { return n; }
    json operator()(bool b) const { return b; }
    json operator()(const std::vector<double>& v) const {
      json a = json::array();
      for (double x : v) a.push_back(json_number(x));
      return a;
    }
  } visit;
  return std::visit(visit, c);
}

void write_table(const Table& t, bool as_json, std::ostream& out) {
  if (as_json) {
    json doc;
    doc["command"] = t.command;
    json rows = json::array();
    for (const Row& r : t.rows) {
      json o;
      for (std::size_t i = 0; i < t.columns.size(); ++i) o[t.columns[i]] = json_cell(r[i]);
      rows.push_back(std::move(o));
    }
    doc["rows"] = std::move(rows);
    if (t.verdict) doc["verdict"] = *t.verdict ? "pass" : "fail";
    out << doc.dump(2) << "\n";
    return;
  }
  for (std::size_t i = 0; i < t.columns.size(); ++i) out << (i ? "," : "") << t.columns[i];
  out << "\n";
  for (const Row& r : t.rows) {
    for (std::size_t i = 0; i < r.size(); ++i) out << (i ? "," : "") << csv_cell(r[i]);
    out << "\n";
  }
  if (t.verdict) out << "# verdict: " << (*t.verdict ? "pass" : "fail") << "\n";
}

Cell value_cell(const ExtendedReal& v) { return v.is_infinite() ? Cell{std::string("inf")} : Cell{v.value()}; }

std::string kind_name(const ExtendedReal& v) {
  switch (v.kind()) {
    case ValueKind::interior: return "interior";
    case ValueKind::boundary_limit: return "boundary";
    case ValueKind::infinite: return "infinite";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Row-parallel evaluation

/// Evaluates rows[i] = f(i) in parallel; the first error (by index) wins.
template <class F>
std::optional<std::string> parallel_rows(std::size_t n, int threads, std::vector<Row>& rows, F&& f) {
  rows.assign(n, Row{});
  std::vector<std::string> errors(n);
  const auto count = static_cast<std::ptrdiff_t>(n);
#ifdef _OPENMP
  const int nt = threads > 0 ? threads : omp_get_max_threads();
#pragma omp parallel for num_threads(nt) schedule(dynamic, 1)
#endif
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    try {
      rows[static_cast<std::size_t>(i)] = f(static_cast<std::size_t>(i));
    } catch (const std::exception& e) {
      errors[static_cast<std::size_t>(i)] = e.what();
      if (errors[static_cast<std::size_t>(i)].empty()) errors[static_cast<std::size_t>(i)] = "unknown error";
    }
  }
  (void)threads;
  for (std::size_t i = 0; i < n; ++i)
    if (!errors[i].empty()) return "row " + std::to_string(i) + ": " + errors[i];
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Commands

struct Options {
  std::string spec_path;
  std::string format = "csv";
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> samples;
  std::optional<double> tol;
  bool dump_spec = false;
  // conjugate only
  std::string model;
  std::vector<double> alpha;
};

struct Context {
  Options opt;
  ProblemSpec spec;
  int threads = 0;
  std::ostream& out;
  std::ostream& err;

  bool json() const { return opt.format == "json"; }
  double tol() const { return spec.tolerances.conjugate.value_or(kDefaultTol); }
};

int solver_failure(Context& ctx, const std::string& what) {
  ctx.err << "solver error: " << what << "\n";
  return kSolverError;
}

int spec_failure(std::ostream& err, const std::string& path, const SpecError& e) {
  err << "spec error";
  if (!path.empty()) err << " in " << path;
  if (e.line() > 0) err << " (line " << e.line() << ")";
  if (!e.field().empty()) err << " at field '" << e.field() << "'";
  err << ": " << e.what() << "\n";
  return kSpecError;
}

int cmd_rate(Context& ctx) {
  const WeightedSeries series = ctx.spec.build_series();
  const std::vector<double> alphas = ctx.spec.alpha_values();
  const double tol = ctx.tol();
  Table t{"rate", {"alpha", "rate", "kind", "s_star", "residual"}, {}, std::nullopt};
  if (auto e = parallel_rows(alphas.size(), ctx.threads, t.rows, [&](std::size_t i) {
        const RateResult r = series_rate(series, alphas[i], tol);
        Row row{alphas[i], value_cell(r.value), kind_name(r.value), std::monostate{}, std::monostate{}};
        if (r.dual_point) {
          row[3] = *r.dual_point;
          row[4] = r.constraint_residual;
        }
        return row;
      }))
    return solver_failure(ctx, *e);
  write_table(t, ctx.json(), ctx.out);
  return kOk;
}

int cmd_variational(Context& ctx) {
  const WeightedSeries series = ctx.spec.build_series();
  if (series.size() > DirectOptions{}.dimension_cap) {
    ctx.err << "spec error at field 'weights': dimension " << series.size() << " exceeds the direct-solver cap "
            << DirectOptions{}.dimension_cap << "\n";
    return kSpecError;
  }
  const std::vector<double> alphas = ctx.spec.alpha_values();
  VerifyTolerances tol;
  const auto& o = ctx.spec.tolerances;
  tol.solver = ctx.tol();
  tol.dual = o.dual.value_or(tol.dual);
  tol.direct = o.direct.value_or(tol.direct);
  tol.feasibility = o.feasibility.value_or(tol.feasibility);
  tol.fenchel = o.fenchel.value_or(tol.fenchel);

  Table t{"variational",
          {"alpha", "class", "rate", "dual", "direct", "max_gap", "b", "residual", "pass"},
          {},
          true};
  std::vector<char> passed(alphas.size(), 0);
  if (auto e = parallel_rows(alphas.size(), ctx.threads, t.rows, [&](std::size_t i) {
        const TheoremReport rep = verify_theorem({series, alphas[i]}, tol);
        passed[i] = rep.pass;
        Cell b = std::monostate{};
        double residual = 0.0;
        if (rep.dual.minimizer) {
          b = *rep.dual.minimizer;
          residual = rep.dual.constraint_residual;
        } else if (rep.direct.minimizer) {
          b = *rep.direct.minimizer;
        }
        if (rep.direct.minimizer) residual = std::max(residual, rep.direct.constraint_residual);
        return Row{alphas[i],
                   std::string(to_string(rep.classification)),
                   value_cell(rep.rate.value),
                   value_cell(rep.dual.value),
                   value_cell(rep.direct.value),
                   rep.max_gap,
                   b,
                   residual,
                   rep.pass};
      }))
    return solver_failure(ctx, *e);
  for (char p : passed) t.verdict = *t.verdict && p != 0;
  write_table(t, ctx.json(), ctx.out);
  return *t.verdict ? kOk : kCheckFailed;
}

int cmd_validate(Context& ctx) {
  const WeightedSeries series = ctx.spec.build_series();
  const std::vector<double> alphas = ctx.spec.alpha_values();
  for (std::size_t i = 0; i < alphas.size(); ++i) {
    if (!(alphas[i] > 0)) {
      ctx.err << "spec error at field 'alphas[" << i << "]': tail validation needs alpha > 0\n";
      return kSpecError;
    }
  }
  const std::uint64_t n = ctx.spec.n_samples.value_or(kDefaultSamples);
  const std::uint64_t seed = ctx.spec.seed.value_or(kDefaultSeed);
  if (n < 1000) {
    ctx.err << "spec error at field 'n_samples': need at least 1000 samples\n";
    return kSpecError;
  }
  BoundValidation v;
  try {
    v = validate_bound(series, alphas, n, seed, ctx.threads);
  } catch (const Error& e) {
    return solver_failure(ctx, e.what());
  }
  Table t{"validate", {"alpha", "n", "hits", "p_hat", "stderr", "bound", "margin", "pass"}, {}, v.pass};
  for (const TailEstimate& e : v.rows)
    t.rows.push_back(Row{e.alpha, e.n_samples, e.hits, e.p_hat, e.std_error, e.bound, e.margin, e.pass()});
  write_table(t, ctx.json(), ctx.out);
  return v.pass ? kOk : kCheckFailed;
}

/// Closed-form rate of the whole series when one is known: all-Gaussian
/// series, or a single nonzero weight on a model with a closed form.
std::optional<std::function<ExtendedReal(double)>> series_closed_form(const WeightedSeries& series,
                                                                      const ProblemSpec& spec) {
  bool all_gaussian = true;
  double var = 0.0;
  for (std::size_t i = 0; i < series.size(); ++i) {
    all_gaussian = all_gaussian && spec.components[i].model == "gaussian";
    var += series.weights()[i] * series.weights()[i] * series.component(i).variance;
  }
  if (all_gaussian) {
    return [var](double a) {
      if (var == 0.0) return a == 0.0 ? ExtendedReal::finite(0.0) : ExtendedReal::infinity();
      return ExtendedReal::finite(a * a / (2.0 * var));
    };
  }
  std::optional<std::size_t> only;
  for (std::size_t i = 0; i < series.size(); ++i) {
    if (series.weights()[i] == 0.0) continue;
    if (only) return std::nullopt;
    only = i;
  }
  if (!only || !series.component(*only).has_closed_form()) return std::nullopt;
  const double w = series.weights()[*only];
  return [m = series.component(*only), w](double a) { return m.rate_closed_form(a / w); };
}

int cmd_curve(Context& ctx) {
  if (!ctx.spec.alphas_are_range()) {
    ctx.err << "spec error at field 'alphas': curve needs a range {from, to, steps}\n";
    return kSpecError;
  }
  const WeightedSeries series = ctx.spec.build_series();
  const std::vector<double> alphas = ctx.spec.alpha_values();
  const double tol = ctx.tol();
  const auto closed = series_closed_form(series, ctx.spec);
  Table t{"curve", {"alpha", "rate"}, {}, std::nullopt};
  if (closed) t.columns.push_back("closed_form");
  if (auto e = parallel_rows(alphas.size(), ctx.threads, t.rows, [&](std::size_t i) {
        Row row{alphas[i], value_cell(series_rate(series, alphas[i], tol).value)};
        if (closed) row.push_back(value_cell((*closed)(alphas[i])));
        return row;
      }))
    return solver_failure(ctx, *e);
  write_table(t, ctx.json(), ctx.out);
  return kOk;
}

int cmd_conjugate(Context& ctx, const DistributionModel& model, const std::vector<double>& alphas) {
  const double tol = ctx.tol();
  Table t{"conjugate", {"alpha", "value", "kind", "argmax", "iterations", "residual", "closed_form"}, {}, std::nullopt};
  if (auto e = parallel_rows(alphas.size(), ctx.threads, t.rows, [&](std::size_t i) {
        const ConjugateResult r = model.numeric_rate(alphas[i], tol);
        Row row{alphas[i],        value_cell(r.value), kind_name(r.value), std::monostate{},
                static_cast<std::uint64_t>(r.iterations), std::monostate{}, std::monostate{}};
        if (r.argmax) {
          row[3] = *r.argmax;
          row[5] = r.residual;
        }
        if (model.has_closed_form()) row[6] = value_cell(model.rate_closed_form(alphas[i]));
        return row;
      }))
    return solver_failure(ctx, *e);
  write_table(t, ctx.json(), ctx.out);
  return kOk;
}

void add_common(CLI::App* sub, Options& o, bool spec_required) {
  auto* spec = sub->add_option("--spec", o.spec_path, "Problem spec file (JSON)");
  if (spec_required) spec->required();
  sub->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  sub->add_option("--seed", o.seed, "Random seed (overrides the problem file)");
  sub->add_option("--samples", o.samples, "Monte Carlo sample count (overrides the problem file)");
  sub->add_option("--tol", o.tol, "Conjugate solver tolerance (overrides the problem file)")
      ->check(CLI::PositiveNumber);
  sub->add_flag("--dump-spec", o.dump_spec, "Print the canonical spec and exit");
}

}  // namespace

int thread_cap_from_env() {
  const char* v = std::getenv("CRAMERKIT_THREADS");
  if (!v || !*v) return 0;
  char* end = nullptr;
  const long n = std::strtol(v, &end, 10);
  if (*end != '\0' || n <= 0 || n > 4096) return 0;
  return static_cast<int>(n);
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Cramer transforms, Chernoff bounds and variational checks for weighted series", "cramerkit"};
  app.require_subcommand(1);
  Options o;
  auto* rate = app.add_subcommand("rate", "Rate function of the series at each alpha");
  auto* variational = app.add_subcommand("variational", "Compare 1-D rate, dual and direct minimization");
  auto* validate = app.add_subcommand("validate", "Monte Carlo tail estimates against the Chernoff bound");
  auto* curve = app.add_subcommand("curve", "Rate curve points over an alpha range");
  auto* conj = app.add_subcommand("conjugate", "Numeric conjugate of one model's CGF");
  for (auto* sub : {rate, variational, validate, curve}) add_common(sub, o, true);
  add_common(conj, o, false);
  conj->add_option("--model", o.model, "Catalog model (instead of --spec)");
  conj->add_option("--alpha", o.alpha, "Alpha value(s) (with --model)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return kSpecError;
  }

  Context ctx{o, {}, thread_cap_from_env(), out, err};
  try {
    if (!o.spec_path.empty()) {
      ctx.spec = load_problem_spec(o.spec_path);
    } else if (conj->parsed()) {
      if (o.model.empty()) {
        err << "usage error: conjugate needs --spec or --model\n";
        return kSpecError;
      }
      ComponentSpec c{o.model, {}};
      const auto names = catalog_names();
      if (std::find(names.begin(), names.end(), c.model) == names.end())
        throw SpecError("model", 0, "unknown model '" + o.model + "'");
      ctx.spec.components = {c};
      ctx.spec.weights = {1.0};
      ctx.spec.alphas = o.alpha;
    }
  } catch (const SpecError& e) {
    return spec_failure(err, o.spec_path, e);
  }
  if (o.seed) ctx.spec.seed = o.seed;
  if (o.samples) ctx.spec.n_samples = o.samples;
  if (o.tol) ctx.spec.tolerances.conjugate = o.tol;
  if (conj->parsed() && !o.alpha.empty()) ctx.spec.alphas = o.alpha;

  if (o.dump_spec) {
    out << dump_problem_spec(ctx.spec);
    return kOk;
  }

  try {
    if (rate->parsed()) return cmd_rate(ctx);
    if (variational->parsed()) return cmd_variational(ctx);
    if (validate->parsed()) return cmd_validate(ctx);
    if (curve->parsed()) return cmd_curve(ctx);
    if (conj->parsed()) {
      if (ctx.spec.components.size() != 1) {
        err << "spec error at field 'components': conjugate needs exactly one component\n";
        return kSpecError;
      }
      return cmd_conjugate(ctx, build_model(ctx.spec.components.front()), ctx.spec.alpha_values());
    }
  } catch (const SpecError& e) {
    return spec_failure(err, o.spec_path, e);
  } catch (const Error& e) {
    return solver_failure(ctx, e.what());
  }
  return kUsage;
}

}  // namespace cramer::cli
