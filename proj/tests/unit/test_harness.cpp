#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "ncsverify/errors.hpp"
#include "ncsverify/harness.hpp"

using namespace ncsverify;

namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::filesystem::path scratch(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("ncsverify_test_" + name);
  std::filesystem::remove_all(dir);
  return dir;
}

}  // namespace

TEST_CASE("ledger cells sum to the trial count") {
  ExperimentConfig cfg;
  cfg.trials = 200;
  cfg.methods = {IntervalMethod::Hoeffding, IntervalMethod::ExactBinomial, IntervalMethod::NormalApprox,
                 IntervalMethod::BernsteinFast};
  cfg.seed = 5;
  const auto ledger = run_stability_experiment(cfg);
  CHECK(ledger.cells.size() == 4 * cfg.n_grid.size());
  for (const auto& [key, cell] : ledger.cells) {
    CHECK(cell.total() == cfg.trials);
    CHECK(cell.correct + cell.wrong <= cfg.trials);
    CHECK(cell.correct == cell.affirm);  // stable configuration
    CHECK(cell.wrong == cell.deny);
  }
  CHECK(ledger.truth_affirm);
  CHECK(ledger.bound.size() == cfg.n_grid.size());
}

TEST_CASE("single trial, single sample") {
  ExperimentConfig cfg;
  cfg.trials = 1;
  cfg.n_grid = {1};
  const auto ledger = run_stability_experiment(cfg);
  REQUIRE(ledger.cells.size() == 1);
  CHECK(ledger.cells.begin()->second.total() == 1);
}

TEST_CASE("results do not depend on the thread count") {
  ExperimentConfig cfg;
  cfg.trials = 97;
  cfg.methods = {IntervalMethod::Hoeffding, IntervalMethod::NormalApprox};
  cfg.threads = 1;
  const auto a = run_stability_experiment(cfg);
  cfg.threads = 7;
  const auto b = run_stability_experiment(cfg);
  for (const auto& [key, cell] : a.cells) {
    const auto& other = b.at(key.first, key.second);
    CHECK(cell.affirm == other.affirm);
    CHECK(cell.deny == other.deny);
    CHECK(cell.undetermined == other.undetermined);
  }
}

TEST_CASE("perfect channel is never wrong") {
  ExperimentConfig cfg;
  cfg.true_rate = 1.0;
  cfg.trials = 50;
  const auto ledger = run_wrong_answer_experiment(cfg);
  for (auto n : cfg.n_grid) CHECK(ledger.wrong_rate(IntervalMethod::Hoeffding, n) == 0.0);
}

TEST_CASE("unstable configuration labels Deny as correct") {
  ExperimentConfig cfg;
  cfg.plant = PlantModel::scalar(4.0);
  cfg.true_rate = 0.5;
  cfg.trials = 50;
  const auto ledger = run_stability_experiment(cfg);
  CHECK_FALSE(ledger.truth_affirm);
  CHECK(ledger.correct_rate(IntervalMethod::Hoeffding, 2000) == 1.0);
  CHECK(ledger.at(IntervalMethod::Hoeffding, 2000).deny == 50);
}

TEST_CASE("cost experiment reports the critical rate and sufficient sample size") {
  ExperimentConfig cfg;
  cfg.kind = ExperimentKind::Cost;
  cfg.true_rate = 0.95;
  cfg.delta = 0.01;
  cfg.j_req = 2.0;
  cfg.trials = 20;
  const auto ledger = run_experiment(cfg);
  REQUIRE(ledger.critical_rate);
  CHECK(std::abs(*ledger.critical_rate - 0.875) < 1e-8);
  REQUIRE(ledger.required_n);
  CHECK(*ledger.required_n == 1638);
  CHECK(ledger.truth_affirm);

  cfg.j_req = 100.0;  // loose target
  const auto loose = run_experiment(cfg);
  CHECK(loose.truth_affirm);

  cfg.j_req = 0.5;
  CHECK_THROWS_AS(run_experiment(cfg), InputError);
}

TEST_CASE("config validation") {
  ExperimentConfig cfg;
  cfg.n_grid = {10, 10};
  CHECK_THROWS_AS(cfg.validate(), InputError);
  cfg.n_grid = {10, 20};
  cfg.trials = 0;
  CHECK_THROWS_AS(cfg.validate(), InputError);
  cfg.trials = 1;
  cfg.kind = ExperimentKind::Cost;
  CHECK_THROWS_AS(cfg.validate(), InputError);

  CHECK_THROWS_AS(parse_config_json(R"({"trials": 5, "colour": "red"})"), InputError);
  CHECK_THROWS_AS(parse_config_json(R"({"rho": 2, "plant": {"n": 1, "a_open": [2]}})"), InputError);
  CHECK_THROWS_AS(parse_config_json(R"({"methods": ["wilson"]})"), InputError);
  CHECK_THROWS_AS(parse_config_json(R"({"n_grid": "ten"})"), InputError);

  const auto parsed = parse_config_json(R"({"experiment": "wrong_answer", "rho": 1.4002800840280099,
      "true_rate": 0.5, "delta": 0.001, "n_grid": [10, 100], "trials": 3, "methods": ["hoeffding", "exact"],
      "seed": 9, "output": "out", "grid": [1.5, 2.0]})");
  CHECK(parsed.kind == ExperimentKind::WrongAnswer);
  CHECK(parsed.plant.open_radius() == doctest::Approx(1.4002800840280099));
  CHECK(parsed.methods.size() == 2);
  CHECK(parsed.n_grid == std::vector<std::uint64_t>{10, 100});
  CHECK(parsed.sweep_grid.size() == 2);

  const auto inline_plant = parse_config_json(R"({"plant": {"n": 1, "a_open": [3]}})");
  CHECK(inline_plant.plant.open_radius() == 3.0);
}

TEST_CASE("CSV output is reproducible byte for byte") {
  ExperimentConfig cfg;
  cfg.trials = 64;
  cfg.seed = 11;
  cfg.methods = {IntervalMethod::NormalApprox, IntervalMethod::Hoeffding};
  const auto d1 = scratch("csv1"), d2 = scratch("csv2");
  write_ledger_csvs(run_experiment(cfg), d1);
  cfg.threads = 3;
  write_ledger_csvs(run_experiment(cfg), d2);
  for (const char* f : {"correct_rate.csv", "wrong_rate.csv", "bound.csv"}) {
    CAPTURE(f);
    const auto a = slurp(d1 / f);
    CHECK(a == slurp(d2 / f));
    CHECK(a.find('\r') == std::string::npos);
  }
  const auto correct = slurp(d1 / "correct_rate.csv");
  CHECK(correct.rfind("method,n,rate\nhoeffding,10,", 0) == 0);
  CHECK(correct.find("normal,2000,") != std::string::npos);
  CHECK(slurp(d1 / "bound.csv").rfind("n,bound\n10,0\n", 0) == 0);
}

TEST_CASE("sample complexity sweeps") {
  const auto rows = sweep_sample_complexity(SweepAxis::Rate, 0.0, 2.0, 0.01, {0.9, 0.99});
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].n_hoeffding == 410);
  CHECK(rows[1].n_hoeffding == 160);
  CHECK(rows[1].n_bernstein < rows[1].n_hoeffding);

  // Radius sweep at q = 0.9: critical radius is 1/sqrt(0.1).
  const double critical = 1.0 / std::sqrt(0.1);
  CHECK_THROWS_AS(sweep_sample_complexity(SweepAxis::SpectralRadius, 0.9, 0.0, 0.01, {critical}), InputError);
  std::vector<double> radii;
  for (double r = 1.5; r < 5.0; r += 0.25) radii.push_back(r);
  const auto sweep = sweep_sample_complexity(SweepAxis::SpectralRadius, 0.9, 0.0, 0.01, radii);
  std::size_t argmax = 0;
  for (std::size_t i = 0; i < sweep.size(); ++i) {
    if (sweep[i].n_hoeffding > sweep[argmax].n_hoeffding) argmax = i;
  }
  std::size_t nearest = 0;
  for (std::size_t i = 0; i < radii.size(); ++i) {
    if (std::abs(radii[i] - critical) < std::abs(radii[nearest] - critical)) nearest = i;
  }
  CHECK(argmax == nearest);

  const auto file = scratch("sweep") / "complexity.csv";
  write_complexity_csv(rows, file);
  CHECK(slurp(file) == "x,n_hoeffding,n_bernstein\n0.9,410," + std::to_string(rows[0].n_bernstein) + "\n0.99,160," +
                           std::to_string(rows[1].n_bernstein) + "\n");
  CHECK_THROWS_AS(parse_axis("sigma"), InputError);
}
