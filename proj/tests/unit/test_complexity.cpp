#include <doctest.h>

#include <cmath>
#include <random>

#include "ncsverify/complexity.hpp"
#include "ncsverify/errors.hpp"
#include "oracles.hpp"

using namespace ncsverify;
using doctest::Approx;

TEST_CASE("MarginSpec") {
  const auto s = MarginSpec::from_radius(0.9, 2.0, 1e-3);
  CHECK(s.threshold() == 0.75);
  CHECK(s.margin() == Approx(0.15));
  CHECK_THROWS_AS(MarginSpec(0.75, 0.75, 0.1), InputError);
  CHECK_THROWS_AS(MarginSpec(0.9, 0.75, 1.0), InputError);
  CHECK_THROWS_AS(MarginSpec::from_radius(0.9, 0.0, 0.1), InputError);
}

TEST_CASE("correctness_bound") {
  const auto s = MarginSpec::from_radius(0.9, 2.0, 1e-3);
  CHECK(correctness_bound(s, 500) == Approx(0.988597050568072).epsilon(1e-12));
  CHECK(correctness_bound(s, 10) == 0.0);
  CHECK(correctness_bound(s, 2000) >= 1.0 - 1e-20);
  CHECK(correctness_bound(MarginSpec::from_radius(0.9, 2.0, 0.01), 410) == Approx(0.990145584425975).epsilon(1e-12));
}

TEST_CASE("correctness_bound is zero below the projection point and monotone") {
  std::mt19937_64 rng(31);
  for (int i = 0; i < 100; ++i) {
    const double q = std::uniform_real_distribution<>(0.0, 1.0)(rng);
    const double t = std::uniform_real_distribution<>(-0.5, 1.0)(rng);
    const double delta = std::uniform_real_distribution<>(1e-4, 0.3)(rng);
    if (std::abs(q - t) < 1e-3) continue;
    const MarginSpec s(q, t, delta);
    const double cutoff = std::log(1.0 / delta) / (2.0 * s.margin() * s.margin());
    double prev = 0.0;
    for (std::uint64_t n = 1; n < 20000; n = n * 3 / 2 + 1) {
      const double b = correctness_bound(s, n);
      if (static_cast<double>(n) <= cutoff) CHECK(b == 0.0);
      CHECK(b >= prev);
      prev = b;
    }
    const MarginSpec wider(q > t ? std::min(1.0, q + 0.01) : std::max(0.0, q - 0.01), t, delta);
    CHECK(correctness_bound(wider, 300) >= correctness_bound(s, 300));
  }
}

TEST_CASE("hoeffding_sample_size") {
  CHECK(hoeffding_sample_size(MarginSpec::from_radius(0.9, 2.0, 0.01)) == 410);
  CHECK(hoeffding_sample_size(MarginSpec::from_radius(0.9, 2.0, 1e-3)) == 615);
  CHECK(hoeffding_sample_size(MarginSpec(1.0, 0.0, std::exp(-1.0))) == 2);
  CHECK(hoeffding_sample_size(MarginSpec::from_radius(0.99, 2.0, 0.01)) == 160);
}

TEST_CASE("hoeffding_sample_size is minimal and sufficient") {
  std::mt19937_64 rng(37);
  for (int i = 0; i < 200; ++i) {
    const double q = std::uniform_real_distribution<>(0.0, 1.0)(rng);
    const double t = std::uniform_real_distribution<>(0.0, 1.0)(rng);
    const double delta = std::uniform_real_distribution<>(1e-5, 0.5)(rng);
    if (std::abs(q - t) < 1e-3) continue;
    const MarginSpec s(q, t, delta);
    const auto n = hoeffding_sample_size(s);
    const auto meets = [&](std::uint64_t m) {
      return s.margin() >= 2.0 * std::sqrt(std::log(1.0 / delta) / (2.0 * static_cast<double>(m)));
    };
    CHECK(meets(n));
    if (n > 1) CHECK_FALSE(meets(n - 1));
    CHECK(correctness_bound(s, n) >= 1.0 - delta - 1e-12);
  }
}

TEST_CASE("halving the margin quadruples the Hoeffding sample size") {
  for (double m : {0.4, 0.2, 0.1, 0.05, 0.013}) {
    const auto n1 = hoeffding_sample_size(MarginSpec(0.5 + m, 0.5, 0.01));
    const auto n2 = hoeffding_sample_size(MarginSpec(0.5 + m / 2, 0.5, 0.01));
    CHECK(n2 + 3 >= 4 * n1);
    CHECK(n2 <= 4 * n1);
  }
}

TEST_CASE("bernstein_sample_size matches the linear scan") {
  SUBCASE("near-perfect channel") {
    const auto s = MarginSpec::from_radius(0.999, 2.0, 0.01);
    const auto n = bernstein_sample_size(s);
    CHECK(n == oracle::bernstein_scan(0.999, s.margin(), 0.01));
    CHECK(oracle::bernstein_holds(0.999, s.margin(), 0.01, n));
    CHECK_FALSE(oracle::bernstein_holds(0.999, s.margin(), 0.01, n - 1));
  }
  SUBCASE("large delta") {
    const MarginSpec s(1.0, 0.75, 0.5);
    CHECK(bernstein_sample_size(s) == oracle::bernstein_scan(1.0, 0.25, 0.5));
    CHECK(bernstein_sample_size(s) < 20);
  }
  SUBCASE("random specs") {
    std::mt19937_64 rng(41);
    for (int i = 0; i < 100; ++i) {
      const double q = std::uniform_real_distribution<>(0.0, 1.0)(rng);
      const double t = std::uniform_real_distribution<>(-0.2, 1.0)(rng);
      const double delta = std::uniform_real_distribution<>(1e-4, 0.5)(rng);
      if (std::abs(q - t) < 5e-3) continue;
      const MarginSpec s(q, t, delta);
      CHECK(bernstein_sample_size(s) == oracle::bernstein_scan(q, s.margin(), delta));
      CHECK(bernstein_condition(s, bernstein_sample_size(s)));
    }
  }
}

TEST_CASE("Bernstein beats Hoeffding in the low-variance regime") {
  for (double q = 0.76; q <= 1.0; q += 0.01) {
    const auto s = MarginSpec::from_radius(q, 2.0, 0.01);
    if (q * (1 - q) <= s.margin() / 12) CHECK(bernstein_sample_size(s) <= hoeffding_sample_size(s));
  }
}

TEST_CASE("low_variance_regime") {
  CHECK(low_variance_regime(MarginSpec::from_radius(0.999, 2.0, 0.01), 1.0));
  CHECK_FALSE(low_variance_regime(MarginSpec::from_radius(0.5, 2.0, 0.01), 0.5));
  for (double c : {1e-9, 0.1, 10.0}) CHECK(low_variance_regime(MarginSpec::from_radius(1.0, 2.0, 0.01), c));
  CHECK_THROWS_AS(low_variance_regime(MarginSpec::from_radius(0.9, 2.0, 0.01), 0.0), InputError);
}
