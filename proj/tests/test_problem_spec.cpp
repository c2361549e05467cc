#include <filesystem>

#include "cramerkit/problem_spec.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace cramer;

namespace {

SpecError spec_error(std::string_view text) {
  try {
    parse_problem_spec(text);
  } catch (const SpecError& e) {
    return e;
  }
  FAIL("expected SpecError for: " << text);
  return SpecError("", 0, "");
}

const std::filesystem::path kData = CRAMERKIT_TEST_DATA;

}  // namespace

TEST_SUITE("problem spec") {
  TEST_CASE("shorthand components expand to every weight") {
    const ProblemSpec s = parse_problem_spec(R"({"components": "gaussian", "weights": [3, 4], "alphas": [5]})");
    REQUIRE(s.components.size() == 2);
    CHECK(s.components[1].model == "gaussian");
    CHECK(s.alpha_values() == std::vector<double>{5});
    CHECK_FALSE(s.seed);
    CHECK_FALSE(s.n_samples);
  }

  TEST_CASE("full form with params, range and overrides") {
    const ProblemSpec s = parse_problem_spec(R"({
      "components": [{"model": "laplace", "params": {"scale": 2}}, "rademacher"],
      "weights": [1, -0.5],
      "alphas": {"from": -1, "to": 1, "steps": 5},
      "tolerances": {"conjugate": 1e-12, "direct": 1e-5},
      "seed": 7,
      "n_samples": 5000
    })");
    CHECK(s.components[0].params.at("scale") == 2.0);
    CHECK(s.alphas_are_range());
    CHECK(s.alpha_values() == std::vector<double>{-1, -0.5, 0, 0.5, 1});
    CHECK(*s.tolerances.conjugate == 1e-12);
    CHECK(*s.tolerances.direct == 1e-5);
    CHECK_FALSE(s.tolerances.dual);
    CHECK(*s.seed == 7);
    CHECK(*s.n_samples == 5000);
    const WeightedSeries series = s.build_series();
    CHECK(series.component(0).variance == doctest::Approx(8.0));
  }

  TEST_CASE("missing alphas mean an empty list") {
    CHECK(parse_problem_spec(R"({"components": "laplace", "weights": [1]})").alpha_values().empty());
  }

  TEST_CASE("range hits the endpoint exactly") {
    for (int steps : {2, 3, 7, 49, 121, 1001}) {
      const AlphaRange r{-1.2, 1.7, steps};
      const auto v = r.expand();
      REQUIRE(v.size() == static_cast<std::size_t>(steps));
      CHECK(v.front() == -1.2);
      CHECK(v.back() == 1.7);
      for (std::size_t k = 1; k < v.size(); ++k) CHECK(v[k] > v[k - 1]);
    }
  }

  TEST_CASE("syntax errors carry a line") {
    const SpecError e = spec_error("{\n  \"weights\": [1,\n  ,2]\n}");
    CHECK(e.line() == 3);
  }

  TEST_CASE("semantic errors carry a field") {
    CHECK(spec_error(R"({"components": "gaussian", "weights": [1], "extra": 1})").field() == "extra");
    CHECK(spec_error(R"({"components": "cauchy", "weights": [1]})").field() == "components.model");
    CHECK(spec_error(R"({"components": ["gaussian", "nope"], "weights": [1, 2]})").field() ==
          "components[1].model");
    CHECK(spec_error(R"({"components": ["gaussian"], "weights": [1, 2]})").field() == "weights");
    CHECK(spec_error(R"({"components": "gaussian", "weights": [1, "x"]})").field() == "weights[1]");
    CHECK(spec_error(R"({"components": "gaussian"})").field() == "weights");
    CHECK(spec_error(R"({"weights": [1]})").field() == "components");
    CHECK(spec_error(R"({"components": "gaussian", "weights": [1], "alphas": {"from": 0, "to": 1, "steps": 1}})")
              .field() == "alphas.steps");
    CHECK(spec_error(R"({"components": "gaussian", "weights": [1], "alphas": {"from": 0, "steps": 3}})").field() ==
          "alphas.to");
    CHECK(spec_error(R"({"components": "gaussian", "weights": [1], "tolerances": {"dual": -1}})").field() ==
          "tolerances.dual");
    CHECK(spec_error(R"({"components": "gaussian", "weights": [1], "tolerances": {"foo": 1}})").field() ==
          "tolerances.foo");
    CHECK(spec_error(R"({"components": {"model": "laplace", "params": {"shape": 1}}, "weights": [1]})").field() ==
          "components.params.shape");
    CHECK(spec_error(R"({"components": {"model": "laplace", "params": {"scale": 0}}, "weights": [1]})").field() ==
          "components.params.scale");
    CHECK(spec_error(R"({"components": "gaussian", "weights": [1], "seed": -3})").field() == "seed");
    CHECK(spec_error(R"({"components": "gaussian", "weights": [1], "n_samples": 0})").field() == "n_samples");
    CHECK(spec_error(R"([1, 2])").field().empty());
  }

  TEST_CASE("dump round-trips") {
    const char* texts[] = {
        R"({"components": "gaussian", "weights": [3, 4], "alphas": [5, 0.1, -2.5]})",
        R"({"components": [{"model": "laplace", "params": {"scale": 0.3}}, "rademacher"], "weights": [0.1, 1e-7],
            "alphas": {"from": -1.2, "to": 1.2, "steps": 49}, "tolerances": {"fenchel": 3e-9, "feasibility": 1e-7},
            "seed": 18446744073709551615, "n_samples": 1000000})",
        R"({"components": "rademacher", "weights": [0.30000000000000004]})",
    };
    for (const char* text : texts) {
      const ProblemSpec s = parse_problem_spec(text);
      const std::string dumped = dump_problem_spec(s);
      CHECK(parse_problem_spec(dumped) == s);
      CHECK(dump_problem_spec(parse_problem_spec(dumped)) == dumped);
    }
  }

  TEST_CASE("fixture files load") {
    CHECK(load_problem_spec(kData / "gaussian_34.json").weights == std::vector<double>{3, 4});
    CHECK(load_problem_spec(kData / "mixed_variational.json").components.size() == 3);
    CHECK_THROWS_AS(load_problem_spec(kData / "bad_syntax.json"), SpecError);
    CHECK_THROWS_AS(load_problem_spec(kData / "does_not_exist.json"), SpecError);
  }

  TEST_CASE("overflowing weights are a spec error") {
    const ProblemSpec s = parse_problem_spec(R"({"components": "gaussian", "weights": [1e300, 1]})");
    try {
      s.build_series();
      FAIL("expected SpecError");
    } catch (const SpecError& e) {
      CHECK(e.field() == "weights");
    }
  }
}
