#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ncsverify/intervals.hpp"
#include "ncsverify/sysmodel.hpp"
#include "ncsverify/verify.hpp"

namespace ncsverify {

enum class ExperimentKind { Stability, WrongAnswer, Cost };

std::vector<std::uint64_t> default_n_grid();

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::Stability;
  PlantModel plant = PlantModel::scalar(2.0);
  double true_rate = 0.9;
  double delta = 1e-3;
  std::vector<std::uint64_t> n_grid = default_n_grid();
  std::uint64_t trials = 1000;
  std::vector<IntervalMethod> methods{IntervalMethod::Hoeffding};
  std::uint64_t seed = 0;
  std::optional<double> j_req;
  std::string output;
  /// Values for `sweep` (spectral radii or rates).
  std::vector<double> sweep_grid;
  /// Worker threads; 0 picks the hardware concurrency. Results do not depend
  /// on it.
  unsigned threads = 0;

  /// Throws InputError on an empty or non-increasing grid, zero trials, ...
  void validate() const;
};

/// Parses the JSON config. Keys: experiment, plant (path or inline plant
/// object), rho (scalar plant shortcut), true_rate, delta, n_grid, trials,
/// methods, seed, j_req, output, grid, threads. Relative plant paths resolve
/// against `base_dir`. Unknown keys are rejected.
ExperimentConfig parse_config_json(const std::string& text, const std::filesystem::path& base_dir = {});
ExperimentConfig load_config_file(const std::string& path);

struct LedgerCell {
  std::uint64_t affirm = 0;
  std::uint64_t deny = 0;
  std::uint64_t undetermined = 0;
  std::uint64_t correct = 0;
  std::uint64_t wrong = 0;

  std::uint64_t total() const { return affirm + deny + undetermined; }
  LedgerCell& operator+=(const LedgerCell& o);
};

using LedgerKey = std::pair<IntervalMethod, std::uint64_t>;

/// Verdict counts per (method, n) over all trials.
struct TrialLedger {
  std::uint64_t trials = 0;
  std::map<LedgerKey, LedgerCell> cells;
  /// Analytic lower bound on the correct rate per n (Hoeffding method).
  std::map<std::uint64_t, double> bound;
  /// Ground truth: does the queried property hold at the true rate?
  bool truth_affirm = false;
  /// Cost experiments: critical rate and the sufficient sample size
  /// ceil(2 log(1/delta) / (q - q*)^2).
  std::optional<double> critical_rate;
  std::optional<std::uint64_t> required_n;

  const LedgerCell& at(IntervalMethod m, std::uint64_t n) const;
  double correct_rate(IntervalMethod m, std::uint64_t n) const;
  double wrong_rate(IntervalMethod m, std::uint64_t n) const;
  double affirm_rate(IntervalMethod m, std::uint64_t n) const;
};

/// Monte Carlo run of the stability test. Each trial draws one trace of
/// length max(n_grid) and evaluates every prefix in the grid.
TrialLedger run_stability_experiment(const ExperimentConfig& cfg);
/// Same tallies as the stability run; callers read wrong_rate.
TrialLedger run_wrong_answer_experiment(const ExperimentConfig& cfg);
/// Monte Carlo run of the cost test against cfg.j_req.
TrialLedger run_cost_experiment(const ExperimentConfig& cfg);
/// Dispatches on cfg.kind.
TrialLedger run_experiment(const ExperimentConfig& cfg);

/// Writes correct_rate.csv, wrong_rate.csv (method,n,rate) and bound.csv
/// (n,bound) into `dir`, 12 significant digits, LF line endings.
void write_ledger_csvs(const TrialLedger& ledger, const std::filesystem::path& dir);

enum class SweepAxis { SpectralRadius, Rate };
SweepAxis parse_axis(const std::string& name);

struct ComplexityRow {
  double x = 0.0;
  std::uint64_t n_hoeffding = 0;
  std::uint64_t n_bernstein = 0;
};

/// Sample sizes along one axis. For the radius axis q is held fixed; for the
/// rate axis rho is. Grid points within 1e-6 of the critical point are
/// rejected.
std::vector<ComplexityRow> sweep_sample_complexity(SweepAxis axis, double q, double rho, double delta,
                                                   const std::vector<double>& grid);

/// complexity.csv: header x,n_hoeffding,n_bernstein.
void write_complexity_csv(const std::vector<ComplexityRow>& rows, const std::filesystem::path& file);

/// %.12g formatting used by every CSV writer.
std::string format_number(double v);

}  // namespace ncsverify
