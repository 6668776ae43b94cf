#include <cstdio>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "ncsverify/channel.hpp"
#include "ncsverify/complexity.hpp"
#include "ncsverify/errors.hpp"
#include "ncsverify/harness.hpp"
#include "ncsverify/sysmodel.hpp"
#include "ncsverify/verify.hpp"

namespace nv = ncsverify;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInputError = 1;
constexpr int kExitUndetermined = 2;

int verdict_exit(const nv::Verdict& v) {
  return v.decision == nv::Decision::Undetermined ? kExitUndetermined : kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sample-based stability and cost verification for control over packet-dropping channels"};
  app.require_subcommand(1);

  std::string plant_path, trace_src, method_name = "hoeffding", config_path, out_dir, axis, bound = "hoeffding";
  double delta = 1e-3, j_req = 0.0, q = 0.0, rho = 0.0, grid_step = nv::kDefaultGridStep;
  std::uint64_t horizon = 0, seed = 0;

  auto* stab = app.add_subcommand("verify-stability", "Three-valued stability verdict from channel samples");
  stab->add_option("--plant", plant_path, "Plant JSON file")->required();
  stab->add_option("--trace", trace_src, "Trace file or gen:q,n,seed")->required();
  stab->add_option("--delta", delta, "Confidence parameter in (0,1)");
  stab->add_option("--method", method_name, "hoeffding|bernstein-fast|exact|normal");
  stab->add_option("--grid-step", grid_step, "q-grid spacing for plants with A_closed != 0");

  auto* cost = app.add_subcommand("verify-cost", "Three-valued verdict on J(q) <= J_req from channel samples");
  cost->add_option("--plant", plant_path, "Plant JSON file")->required();
  cost->add_option("--trace", trace_src, "Trace file or gen:q,n,seed")->required();
  cost->add_option("--delta", delta, "Confidence parameter in (0,1)");
  cost->add_option("--method", method_name, "hoeffding|bernstein-fast|exact|normal");
  cost->add_option("--jreq", j_req, "Cost target")->required();

  auto* crit = app.add_subcommand("critical-rate", "Minimum success rate meeting a cost target");
  crit->add_option("--plant", plant_path, "Plant JSON file")->required();
  crit->add_option("--jreq", j_req, "Cost target")->required();

  auto* size = app.add_subcommand("sample-size", "Sufficient number of channel samples");
  size->add_option("--q", q, "True success rate")->required();
  size->add_option("--rho", rho, "Spectral radius of A")->required();
  size->add_option("--delta", delta, "Confidence parameter in (0,1)");
  size->add_option("--bound", bound, "hoeffding|bernstein");

  auto* exp = app.add_subcommand("experiment", "Monte Carlo verdict rates; writes CSV files");
  exp->add_option("--config", config_path, "Experiment JSON config")->required();
  exp->add_option("--out", out_dir, "Output directory")->required();

  auto* sim = app.add_subcommand("simulate", "Simulate the closed loop and compare with the Lyapunov cost");
  sim->add_option("--plant", plant_path, "Plant JSON file")->required();
  sim->add_option("--q", q, "Channel success rate")->required();
  sim->add_option("--horizon", horizon, "Number of steps")->required();
  sim->add_option("--seed", seed, "Random seed");

  auto* sweep = app.add_subcommand("sweep", "Sample complexity along the radius or rate axis");
  sweep->add_option("--axis", axis, "rho|q")->required();
  sweep->add_option("--config", config_path, "Config with true_rate, rho, delta, grid, output")->required();
  sweep->add_option("--out", out_dir, "Output directory (default: config output or .)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitInputError;
  }

  try {
    if (*stab) {
      const auto plant = nv::load_plant_file(plant_path);
      const auto trace = nv::resolve_trace(trace_src);
      const auto method = nv::parse_method(method_name);
      const auto v = plant.is_simple() ? nv::stability_test(plant, trace, delta, method)
                                       : nv::general_test(plant, trace, delta, method, grid_step);
      std::cout << nv::verdict_to_json(v, false) << '\n';
      return verdict_exit(v);
    }
    if (*cost) {
      const auto plant = nv::load_plant_file(plant_path);
      const auto trace = nv::resolve_trace(trace_src);
      const auto v = nv::cost_test(plant, trace, delta, j_req, nv::parse_method(method_name));
      std::cout << nv::verdict_to_json(v, true) << '\n';
      return verdict_exit(v);
    }
    if (*crit) {
      const auto q_star = nv::critical_rate(nv::load_plant_file(plant_path), j_req);
      std::cout << (q_star ? nv::format_number(*q_star) : "infeasible") << '\n';
      return kExitOk;
    }
    if (*size) {
      const auto spec = nv::MarginSpec::from_radius(q, rho, delta);
      if (bound == "hoeffding") {
        std::cout << nv::hoeffding_sample_size(spec) << '\n';
      } else if (bound == "bernstein") {
        std::cout << nv::bernstein_sample_size(spec) << '\n';
      } else {
        throw nv::InputError("--bound must be hoeffding or bernstein");
      }
      return kExitOk;
    }
    if (*exp) {
      const auto cfg = nv::load_config_file(config_path);
      const auto ledger = nv::run_experiment(cfg);
      nv::write_ledger_csvs(ledger, out_dir);
      if (ledger.required_n) {
        std::cout << "critical_rate=" << nv::format_number(*ledger.critical_rate)
                  << " required_n=" << *ledger.required_n << '\n';
      }
      return kExitOk;
    }
    if (*sim) {
      if (horizon == 0) throw nv::InputError("--horizon must be positive");
      const auto plant = nv::load_plant_file(plant_path);
      const auto trace = nv::draw_trace(q, horizon, nv::split_seed(seed, 0));
      const auto traj = nv::simulate(plant, trace, nv::split_seed(seed, 1));
      std::cout << "running_cost=" << nv::format_number(traj.running_cost);
      if (plant.is_simple()) std::cout << " lyapunov_cost=" << nv::format_number(nv::lyapunov_cost(plant, q));
      std::cout << '\n';
      return kExitOk;
    }
    if (*sweep) {
      const auto cfg = nv::load_config_file(config_path);
      const double radius = cfg.plant.open_radius();
      const auto rows =
          nv::sweep_sample_complexity(nv::parse_axis(axis), cfg.true_rate, radius, cfg.delta, cfg.sweep_grid);
      std::string dir = !out_dir.empty() ? out_dir : (!cfg.output.empty() ? cfg.output : ".");
      nv::write_complexity_csv(rows, std::filesystem::path(dir) / "complexity.csv");
      return kExitOk;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInputError;
  }
  return kExitInputError;
}
