#include <doctest.h>

#include <random>

#include <json.hpp>

#include "ncsverify/errors.hpp"
#include "ncsverify/verify.hpp"
#include "random_plants.hpp"

using namespace ncsverify;
using Eigen::MatrixXd;

namespace {
constexpr auto kHoeffding = IntervalMethod::Hoeffding;
}

TEST_CASE("stability_test examples") {
  const auto rho2 = PlantModel::scalar(2.0);
  const auto affirm = stability_test(rho2, SuccessCount{1800, 2000}, 1e-3, kHoeffding);
  CHECK(affirm.decision == Decision::Affirm);
  CHECK(affirm.threshold_or_target == 0.75);
  CHECK(affirm.interval.lo == doctest::Approx(0.858443546593272));

  CHECK(stability_test(rho2, SuccessCount{9, 10}, 1e-3, kHoeffding).decision == Decision::Undetermined);

  const auto deny = stability_test(PlantModel::scalar(4.0), SuccessCount{1000, 2000}, 1e-3, kHoeffding);
  CHECK(deny.decision == Decision::Deny);
  CHECK(deny.interval.hi == doctest::Approx(0.541556453406728));
}

TEST_CASE("stability_test short-circuits stable open loops") {
  const auto v = stability_test(PlantModel::scalar(0.5), SuccessCount{0, 10}, 1e-3, kHoeffding);
  CHECK(v.decision == Decision::Affirm);
  CHECK(v.has_flag("trivially_stable"));
}

TEST_CASE("stability_test treats a bound equal to the threshold as undetermined") {
  // rho = 1 puts the threshold at 0; an all-failure trace clips lo and hi to 0.
  const auto v = stability_test(PlantModel::scalar(1.0), SuccessCount{0, 50}, 0.1, IntervalMethod::NormalApprox);
  CHECK(v.interval.lo == 0.0);
  CHECK(v.interval.hi == 0.0);
  CHECK(v.decision == Decision::Undetermined);
}

TEST_CASE("stability_test rejects the switched model") {
  const MatrixXd one = MatrixXd::Identity(1, 1);
  CHECK_THROWS_AS(stability_test(PlantModel(2 * one, 0.5 * one, one, one), SuccessCount{5, 10}, 0.1, kHoeffding),
                  InputError);
}

TEST_CASE("cost_test examples") {
  const auto plant = PlantModel::scalar(2.0);
  // Exact intervals via synthetic counts: bernstein-fast with delta chosen so
  // the half-width is 0.05 at n = 100 (log(1/delta)/n = 0.05).
  const double delta = std::exp(-5.0);
  const auto affirm = cost_test(plant, SuccessCount{95, 100}, delta, 2.0, IntervalMethod::BernsteinFast);
  CHECK(affirm.interval.lo == doctest::Approx(0.9));
  CHECK(affirm.decision == Decision::Affirm);

  const auto deny = cost_test(plant, SuccessCount{75, 100}, delta, 2.0, IntervalMethod::BernsteinFast);
  CHECK(deny.interval.hi == doctest::Approx(0.8));
  CHECK(deny.decision == Decision::Deny);

  const auto mid = cost_test(plant, SuccessCount{90, 100}, delta, 2.0, IntervalMethod::BernsteinFast);
  CHECK(mid.interval.lo == doctest::Approx(0.85));
  CHECK(mid.interval.hi == doctest::Approx(0.95));
  CHECK(mid.decision == Decision::Undetermined);

  CHECK_THROWS_AS(cost_test(plant, SuccessCount{90, 100}, delta, 0.0, kHoeffding), InputError);
}

TEST_CASE("cost_test never affirms and denies at once") {
  std::mt19937_64 rng(17);
  for (int i = 0; i < 40; ++i) {
    const auto plant = testing_support::random_simple_plant(rng);
    const double q = testing_support::random_stable_rate(rng, plant);
    const double j_req = lyapunov_cost(plant, q) * std::uniform_real_distribution<>(0.8, 1.3)(rng);
    const std::uint64_t n = 20 + rng() % 500;
    const auto k = draw_trace(q, n, rng()).count();
    const auto v = cost_test(plant, k, 0.01, j_req, kHoeffding);
    const double j_lo = lyapunov_cost_capped(plant, v.interval.lo, 1e300);
    const double j_hi = lyapunov_cost_capped(plant, v.interval.hi, 1e300);
    CHECK(j_lo >= j_hi);
    if (v.decision == Decision::Affirm) CHECK(j_lo <= j_req);
    if (v.decision == Decision::Deny) CHECK(j_hi >= j_req);
  }
}

TEST_CASE("general_test") {
  const MatrixXd one = MatrixXd::Identity(1, 1);
  SUBCASE("both modes contractive") {
    const MatrixXd eye = MatrixXd::Identity(2, 2);
    const PlantModel plant(0.5 * eye, 0.5 * eye, eye, eye);
    for (std::uint64_t k : {0u, 30u, 100u}) {
      const auto v = general_test(plant, SuccessCount{k, 100}, 1e-3, kHoeffding);
      CHECK(v.decision == Decision::Affirm);
      CHECK(v.has_flag("grid_certified"));
    }
  }
  SUBCASE("interval straddling the critical rate") {
    const PlantModel plant(2.0 * one, 0.5 * one, one, one);
    const double delta = std::exp(-10.0);  // half-width 0.1 at n = 100
    const auto v = general_test(plant, SuccessCount{80, 100}, delta, IntervalMethod::BernsteinFast, 1e-3);
    CHECK(v.interval.lo == doctest::Approx(0.7));
    CHECK(v.interval.hi == doctest::Approx(0.9));
    CHECK(v.decision == Decision::Undetermined);
    CHECK(general_test(plant, SuccessCount{95, 100}, std::exp(-5.0), IntervalMethod::BernsteinFast).decision ==
          Decision::Affirm);
    CHECK(general_test(plant, SuccessCount{50, 100}, std::exp(-5.0), IntervalMethod::BernsteinFast).decision ==
          Decision::Deny);
  }
  CHECK_THROWS_AS(general_test(PlantModel::scalar(2.0), SuccessCount{5, 10}, 0.1, kHoeffding, 0.01), InputError);
}

TEST_CASE("general_test agrees with stability_test when A_closed = 0") {
  std::mt19937_64 rng(23);
  const IntervalMethod methods[] = {IntervalMethod::Hoeffding, IntervalMethod::ExactBinomial,
                                    IntervalMethod::NormalApprox, IntervalMethod::BernsteinFast};
  for (int i = 0; i < 60; ++i) {
    const auto plant = testing_support::random_simple_plant(rng);
    const double q = std::uniform_real_distribution<>(0.0, 1.0)(rng);
    const std::uint64_t n = 5 + rng() % 2000;
    const auto counts = draw_trace(q, n, rng()).count();
    const auto m = methods[i % 4];
    CAPTURE(i);
    CHECK(general_test(plant, counts, 1e-2, m).decision == stability_test(plant, counts, 1e-2, m).decision);
  }
}

TEST_CASE("verdict JSON") {
  const auto v = stability_test(PlantModel::scalar(2.0), SuccessCount{1800, 2000}, 1e-3, kHoeffding);
  const auto doc = nlohmann::json::parse(verdict_to_json(v, false));
  CHECK(doc.at("decision") == "affirm");
  CHECK(doc.at("method") == "hoeffding");
  CHECK(doc.at("n") == 2000);
  CHECK(doc.at("q_hat") == 0.9);
  CHECK(doc.at("threshold") == 0.75);
  CHECK(doc.at("flags").empty());
  for (const char* key : {"delta", "lo", "hi"}) CHECK(doc.contains(key));

  const auto c = cost_test(PlantModel::scalar(2.0), SuccessCount{1800, 2000}, 1e-3, 2.0, kHoeffding);
  const auto cdoc = nlohmann::json::parse(verdict_to_json(c, true));
  CHECK(cdoc.at("j_req") == 2.0);
  CHECK_FALSE(cdoc.contains("threshold"));
}
