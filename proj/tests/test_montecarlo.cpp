#include <algorithm>
#include <cmath>

#include "cramerkit/error.hpp"
#include "cramerkit/montecarlo.hpp"
#include "cramerkit/random.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace cramer;

namespace {

WeightedSeries uniform_series(std::vector<double> t, const DistributionModel& m) {
  std::vector<DistributionModel> comps(t.size(), m);
  return WeightedSeries(std::move(t), std::move(comps));
}

}  // namespace

TEST_SUITE("philox") {
  TEST_CASE("known-answer vectors") {
    using C = std::array<std::uint32_t, 4>;
    using K = std::array<std::uint32_t, 2>;
    CHECK(philox4x32_10(C{0, 0, 0, 0}, K{0, 0}) == C{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
    CHECK(philox4x32_10(C{0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, K{0xffffffff, 0xffffffff}) ==
          C{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
    CHECK(philox4x32_10(C{0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, K{0xa4093822, 0x299f31d0}) ==
          C{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
  }

  TEST_CASE("streams are reproducible and distinct") {
    RandomStream a(42, 7, 1), b(42, 7, 1), c(42, 7, 2), d(42, 8, 1), e(43, 7, 1);
    const std::uint64_t x = a.next_u64();
    CHECK(x == b.next_u64());
    CHECK(x != c.next_u64());
    CHECK(x != d.next_u64());
    CHECK(x != e.next_u64());
  }

  TEST_CASE("uniforms lie in the open unit interval") {
    RandomStream s(0, 0, 0);
    for (int k = 0; k < 100000; ++k) {
      const double u = s.uniform();
      REQUIRE(u > 0.0);
      REQUIRE(u < 1.0);
    }
  }
}

TEST_SUITE("sample_series") {
  TEST_CASE("zero weights give zero") {
    const auto s = uniform_series({0, 0, 0}, make_laplace());
    for (std::uint64_t k = 0; k < 100; ++k) CHECK(sample_series(s, 1, k) == 0.0);
  }

  TEST_CASE("rademacher (1, 1) takes -2, 0, 2 with 1/4, 1/2, 1/4") {
    const auto s = uniform_series({1, 1}, make_rademacher());
    constexpr std::uint64_t n = 100000;
    std::array<double, 3> counts{};
    for (std::uint64_t k = 0; k < n; ++k) {
      const double x = sample_series(s, 3, k);
      REQUIRE((x == -2.0 || x == 0.0 || x == 2.0));
      counts[static_cast<std::size_t>(x / 2 + 1)] += 1;
    }
    const std::array<double, 3> p{0.25, 0.5, 0.25};
    double chi2 = 0;
    for (std::size_t j = 0; j < 3; ++j) chi2 += std::pow(counts[j] - n * p[j], 2) / (n * p[j]);
    // Upper 0.001 quantile of chi-square with 2 degrees of freedom: -2 ln 0.001.
    CHECK(chi2 < -2 * std::log(0.001));
  }

  TEST_CASE("gaussian (3, 4) has variance 25") {
    const auto s = uniform_series({3, 4}, make_gaussian());
    constexpr std::uint64_t n = 1'000'000;
    double s1 = 0, s2 = 0;
    for (std::uint64_t k = 0; k < n; ++k) {
      const double x = sample_series(s, 5, k);
      s1 += x;
      s2 += x * x;
    }
    const double mean = s1 / n;
    CHECK(std::abs((s2 / n - mean * mean) - 25.0) <= 0.05 * 25.0);
  }
}

TEST_SUITE("estimate_tail") {
  TEST_CASE("gaussian unit norm at 2") {
    const auto s = uniform_series({0.6, 0.8}, make_gaussian());
    const TailEstimate e = estimate_tail(s, 2.0, 1'000'000, 42);
    CHECK(e.n_samples == 1'000'000);
    CHECK(e.p_hat == static_cast<double>(e.hits) / 1e6);
    CHECK(e.std_error == doctest::Approx(std::sqrt(e.p_hat * (1 - e.p_hat) / 1e6)));
    CHECK(std::abs(e.p_hat - test::normal_upper_tail(2.0)) <= 3 * e.std_error);
    CHECK(std::abs(e.bound - 0.135335283236612692) <= 1e-12);
    CHECK(e.margin > 0);
    CHECK(e.pass());
  }

  TEST_CASE("rademacher beyond the support") {
    const TailEstimate e = estimate_tail(uniform_series({1, 1}, make_rademacher()), 3.0, 10000, 1);
    CHECK(e.p_hat == 0.0);
    CHECK(e.bound == 0.0);
    CHECK(e.pass());
  }

  TEST_CASE("just above zero: half the mass, bound near one") {
    for (const auto& m : {make_gaussian(), make_laplace()}) {
      const TailEstimate e = estimate_tail(uniform_series({1, 0.5}, m), 1e-6, 1'000'000, 9);
      CHECK(std::abs(e.p_hat - 0.5) <= 3 * e.std_error + 1e-6);
      CHECK(e.bound == doctest::Approx(1.0).epsilon(1e-6));
    }
  }

  TEST_CASE("argument checks") {
    const auto s = uniform_series({1}, make_gaussian());
    CHECK_THROWS_AS(estimate_tail(s, 1.0, 999, 1), Error);
    CHECK_THROWS_AS(estimate_tail(s, 0.0, 1000, 1), Error);
  }
}

TEST_SUITE("validate_bound") {
  TEST_CASE("gaussian quarter weights") {
    const auto s = uniform_series({0.5, 0.5, 0.5, 0.5}, make_gaussian());
    const std::vector<double> alphas{1, 2, 3};
    const BoundValidation v = validate_bound(s, alphas, 1'000'000, 42);
    REQUIRE(v.rows.size() == 3);
    CHECK(v.pass);
    for (const auto& r : v.rows) CHECK(std::abs(r.p_hat - test::normal_upper_tail(r.alpha)) <= 4 * r.std_error);
  }

  TEST_CASE("empty alphas") {
    const BoundValidation v = validate_bound(uniform_series({1}, make_gaussian()), {}, 1000, 1);
    CHECK(v.rows.empty());
    CHECK(v.pass);
  }

  TEST_CASE("laplace (1, 0.5)") {
    const std::vector<double> alphas{1, 2, 4};
    CHECK(validate_bound(uniform_series({1, 0.5}, make_laplace()), alphas, 1'000'000, 42).pass);
  }

  TEST_CASE("p_hat is nonincreasing in alpha") {
    auto g = test::rng(8);
    const auto s = test::random_series(g, 5);
    std::vector<double> alphas = test::grid(0.05, 4, 40);
    const BoundValidation v = validate_bound(s, alphas, 100000, 17);
    for (std::size_t j = 1; j < v.rows.size(); ++j) CHECK(v.rows[j].hits <= v.rows[j - 1].hits);
    CHECK(v.pass);
  }
}

TEST_SUITE("parallel counting") {
  TEST_CASE("identical counts for any thread count") {
    auto g = test::rng(3);
    const auto s = test::random_series(g, 4);
    const std::vector<double> alphas{-1, 0, 0.5, 1, 2, 3};
    // Not a multiple of the chunk size, so the ragged tail is exercised.
    constexpr std::uint64_t n = 123457;
    const auto serial = count_exceedances_serial(s, alphas, n, 77);
    for (int threads : {0, 1, 2, 3, 8}) CHECK(count_exceedances(s, alphas, n, 77, threads) == serial);
  }

  TEST_CASE("estimate is bit-identical across thread counts") {
    const auto s = uniform_series({1, 0.5}, make_laplace());
    const TailEstimate ref = estimate_tail(s, 1.5, 200000, 5, 1);
    for (int threads : {2, 8}) {
      const TailEstimate e = estimate_tail(s, 1.5, 200000, 5, threads);
      CHECK(e.hits == ref.hits);
      CHECK(e.p_hat == ref.p_hat);
      CHECK(e.bound == ref.bound);
      CHECK(e.margin == ref.margin);
    }
  }
}
