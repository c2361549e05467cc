#include "cramerkit/problem_spec.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "cramerkit/error.hpp"
#include "json.hpp"

namespace cramer {
namespace {

using json = nlohmann::ordered_json;

[[noreturn]] void fail(const std::string& field, const std::string& what) { throw SpecError(field, 0, what); }

std::size_t line_of(std::string_view text, std::size_t byte) {
  byte = std::min(byte, text.size());
  return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(byte), '\n'));
}

double finite_number(const json& j, const std::string& field) {
  if (!j.is_number()) fail(field, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) fail(field, "expected a finite number");
  return v;
}

std::uint64_t count_value(const json& j, const std::string& field) {
  if (!j.is_number_unsigned()) fail(field, "expected a non-negative integer");
  return j.get<std::uint64_t>();
}

void check_keys(const json& obj, const std::string& field, std::initializer_list<std::string_view> allowed) {
  for (const auto& [key, _] : obj.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
      fail(field.empty() ? key : field + "." + key, "unknown key");
  }
}

ComponentSpec parse_component(const json& j, const std::string& field) {
  ComponentSpec c;
  if (j.is_string()) {
    c.model = j.get<std::string>();
  } else if (j.is_object()) {
    check_keys(j, field, {"model", "params"});
    if (!j.contains("model") || !j["model"].is_string()) fail(field + ".model", "expected a model name");
    c.model = j["model"].get<std::string>();
    if (j.contains("params")) {
      const json& p = j["params"];
      if (!p.is_object()) fail(field + ".params", "expected an object");
      for (const auto& [key, value] : p.items()) {
        if (key != "scale") fail(field + ".params." + key, "unknown parameter (only 'scale' is supported)");
        const double v = finite_number(value, field + ".params." + key);
        if (!(v > 0)) fail(field + ".params." + key, "scale must be positive");
        c.params[key] = v;
      }
    }
  } else {
    fail(field, "expected a model name or an object");
  }
  const auto names = catalog_names();
  if (std::find(names.begin(), names.end(), c.model) == names.end())
    fail(field + ".model", "unknown model '" + c.model + "'");
  return c;
}

std::optional<double> positive_tol(const json& t, const char* key) {
  if (!t.contains(key)) return std::nullopt;
  const std::string field = std::string("tolerances.") + key;
  const double v = finite_number(t[key], field);
  if (!(v > 0)) fail(field, "tolerance must be positive");
  return v;
}

}  // namespace

SpecError::SpecError(std::string field, std::size_t line, const std::string& what)
    : std::runtime_error(what), field_(std::move(field)), line_(line) {}

std::vector<double> AlphaRange::expand() const {
  std::vector<double> out(static_cast<std::size_t>(steps));
  const double n = static_cast<double>(steps - 1);
  for (int k = 0; k < steps; ++k) out[static_cast<std::size_t>(k)] = from + (to - from) * (static_cast<double>(k) / n);
  out.back() = to;
  return out;
}

std::vector<double> ProblemSpec::alpha_values() const {
  if (const auto* r = std::get_if<AlphaRange>(&alphas)) return r->expand();
  return std::get<std::vector<double>>(alphas);
}

DistributionModel build_model(const ComponentSpec& component) {
  DistributionModel m = make_model(component.model);
  if (auto it = component.params.find("scale"); it != component.params.end()) m = scaled_model(m, it->second);
  return m;
}

WeightedSeries ProblemSpec::build_series() const {
  std::vector<DistributionModel> models;
  models.reserve(components.size());
  for (const auto& c : components) models.push_back(build_model(c));
  try {
    return WeightedSeries(weights, std::move(models));
  } catch (const Error& e) {
    throw SpecError("weights", 0, e.what());
  }
}

ProblemSpec parse_problem_spec(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw SpecError("", line_of(text, e.byte == 0 ? 0 : e.byte - 1), e.what());
  }
  if (!doc.is_object()) fail("", "top level must be an object");
  check_keys(doc, "", {"components", "weights", "alphas", "tolerances", "seed", "n_samples"});

  ProblemSpec spec;
  if (!doc.contains("weights") || !doc["weights"].is_array()) fail("weights", "expected an array of numbers");
  for (std::size_t i = 0; i < doc["weights"].size(); ++i)
    spec.weights.push_back(finite_number(doc["weights"][i], "weights[" + std::to_string(i) + "]"));

  if (!doc.contains("components")) fail("components", "missing");
  const json& comps = doc["components"];
  if (comps.is_string() || comps.is_object()) {
    // One model for every weight.
    const ComponentSpec c = parse_component(comps, "components");
    spec.components.assign(spec.weights.size(), c);
  } else if (comps.is_array()) {
    for (std::size_t i = 0; i < comps.size(); ++i)
      spec.components.push_back(parse_component(comps[i], "components[" + std::to_string(i) + "]"));
  } else {
    fail("components", "expected a model name, an object, or an array");
  }
  if (spec.components.size() != spec.weights.size())
    fail("weights", "has " + std::to_string(spec.weights.size()) + " entries but there are " +
                        std::to_string(spec.components.size()) + " components");

  if (!doc.contains("alphas")) {
    spec.alphas = std::vector<double>{};
  } else if (const json& a = doc["alphas"]; a.is_array()) {
    std::vector<double> v;
    for (std::size_t i = 0; i < a.size(); ++i) v.push_back(finite_number(a[i], "alphas[" + std::to_string(i) + "]"));
    spec.alphas = std::move(v);
  } else if (a.is_object()) {
    check_keys(a, "alphas", {"from", "to", "steps"});
    for (const char* key : {"from", "to", "steps"})
      if (!a.contains(key)) fail(std::string("alphas.") + key, "missing");
    AlphaRange r;
    r.from = finite_number(a["from"], "alphas.from");
    r.to = finite_number(a["to"], "alphas.to");
    if (!a["steps"].is_number_integer() || a["steps"].get<long long>() < 2 || a["steps"].get<long long>() > 10000000)
      fail("alphas.steps", "expected an integer >= 2");
    r.steps = a["steps"].get<int>();
    spec.alphas = r;
  } else {
    fail("alphas", "expected an array or {from, to, steps}");
  }

  if (doc.contains("tolerances")) {
    const json& t = doc["tolerances"];
    if (!t.is_object()) fail("tolerances", "expected an object");
    check_keys(t, "tolerances", {"conjugate", "dual", "direct", "feasibility", "fenchel"});
    spec.tolerances.conjugate = positive_tol(t, "conjugate");
    spec.tolerances.dual = positive_tol(t, "dual");
    spec.tolerances.direct = positive_tol(t, "direct");
    spec.tolerances.feasibility = positive_tol(t, "feasibility");
    spec.tolerances.fenchel = positive_tol(t, "fenchel");
  }
  if (doc.contains("seed")) spec.seed = count_value(doc["seed"], "seed");
  if (doc.contains("n_samples")) {
    spec.n_samples = count_value(doc["n_samples"], "n_samples");
    if (*spec.n_samples == 0) fail("n_samples", "must be positive");
  }
  return spec;
}

ProblemSpec load_problem_spec(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SpecError("", 0, "cannot open spec file '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_problem_spec(buf.str());
}

std::string dump_problem_spec(const ProblemSpec& spec) {
  json doc;
  json comps = json::array();
  for (const auto& c : spec.components) {
    json o;
    o["model"] = c.model;
    if (!c.params.empty()) {
      json p;
      for (const auto& [k, v] : c.params) p[k] = v;
      o["params"] = p;
    }
    comps.push_back(o);
  }
  doc["components"] = comps;
  doc["weights"] = spec.weights;
  if (const auto* r = std::get_if<AlphaRange>(&spec.alphas)) {
    doc["alphas"] = {{"from", r->from}, {"to", r->to}, {"steps", r->steps}};
  } else {
    doc["alphas"] = std::get<std::vector<double>>(spec.alphas);
  }
  json tol = json::object();
  const auto& t = spec.tolerances;
  if (t.conjugate) tol["conjugate"] = *t.conjugate;
  if (t.dual) tol["dual"] = *t.dual;
  if (t.direct) tol["direct"] = *t.direct;
  if (t.feasibility) tol["feasibility"] = *t.feasibility;
  if (t.fenchel) tol["fenchel"] = *t.fenchel;
  if (!tol.empty()) doc["tolerances"] = tol;
  if (spec.seed) doc["seed"] = *spec.seed;
  if (spec.n_samples) doc["n_samples"] = *spec.n_samples;
  return doc.dump(2) + "\n";
}

}  // namespace cramer
