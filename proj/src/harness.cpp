#include "ncsverify/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <fstream>
#include <set>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "ncsverify/channel.hpp"
#include "ncsverify/complexity.hpp"
#include "ncsverify/errors.hpp"

namespace ncsverify {

namespace {

using nlohmann::json;

constexpr double kCriticalExclusion = 1e-6;

ExperimentKind parse_kind(const std::string& s) {
  if (s == "stability") return ExperimentKind::Stability;
  if (s == "wrong_answer") return ExperimentKind::WrongAnswer;
  if (s == "cost") return ExperimentKind::Cost;
  throw InputError("unknown experiment kind '" + s + "'");
}

template <typename T>
T get_field(const json& doc, const char* key) {
  try {
    return doc.at(key).get<T>();
  } catch (const json::exception&) {
    throw InputError(std::string("config field '") + key + "' has the wrong type");
  }
}

// Decision for one (method, n, k) cell, computed on first use. Verdicts
// depend on a trace only through its counts, so caching is exact.
class VerdictCache {
 public:
  VerdictCache(std::size_t methods, const std::vector<std::uint64_t>& n_grid) : slots_(methods) {
    for (auto& per_method : slots_) {
      per_method.reserve(n_grid.size());
      for (auto n : n_grid) per_method.emplace_back(n + 1, kUnknown);
    }
  }

  template <typename Eval>
  Decision get(std::size_t method, std::size_t grid_index, std::uint64_t k, Eval&& eval) {
    auto& slot = slots_[method][grid_index][k];
    if (slot == kUnknown) slot = static_cast<std::int8_t>(eval());
    return static_cast<Decision>(slot);
  }

 private:
  static constexpr std::int8_t kUnknown = -1;
  std::vector<std::vector<std::vector<std::int8_t>>> slots_;
};

using Evaluator = std::function<Decision(IntervalMethod, SuccessCount)>;

TrialLedger run_trials(const ExperimentConfig& cfg, const Evaluator& evaluate, bool truth_affirm) {
  cfg.validate();
  const std::uint64_t max_n = cfg.n_grid.back();
  unsigned workers = cfg.threads ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::uint64_t>(workers, cfg.trials));

  const Decision right = truth_affirm ? Decision::Affirm : Decision::Deny;
  const Decision wrong = truth_affirm ? Decision::Deny : Decision::Affirm;

  std::vector<std::map<LedgerKey, LedgerCell>> partial(workers);
  std::vector<std::exception_ptr> errors(workers);
  const auto work = [&](unsigned w) {
    try {
      VerdictCache cache(cfg.methods.size(), cfg.n_grid);
      auto& cells = partial[w];
      for (std::uint64_t trial = w; trial < cfg.trials; trial += workers) {
        const ChannelTrace trace = draw_trace(cfg.true_rate, max_n, split_seed(cfg.seed, trial));
        const auto& outcomes = trace.outcomes();
        std::uint64_t k = 0;
        std::size_t pos = 0;
        for (std::size_t g = 0; g < cfg.n_grid.size(); ++g) {
          const auto n = cfg.n_grid[g];
          for (; pos < n; ++pos) k += outcomes[pos];
          for (std::size_t m = 0; m < cfg.methods.size(); ++m) {
            const auto method = cfg.methods[m];
            const Decision d = cache.get(m, g, k, [&] { return evaluate(method, {k, n}); });
            auto& cell = cells[{method, n}];
            switch (d) {
              case Decision::Affirm: ++cell.affirm; break;
              case Decision::Deny: ++cell.deny; break;
              case Decision::Undetermined: ++cell.undetermined; break;
            }
            if (d == right) ++cell.correct;
            if (d == wrong) ++cell.wrong;
          }
        }
      }
    } catch (...) {
      errors[w] = std::current_exception();
    }
  };

  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
    for (auto& t : pool) t.join();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  TrialLedger ledger;
  ledger.trials = cfg.trials;
  ledger.truth_affirm = truth_affirm;
  for (auto m : cfg.methods) {
    for (auto n : cfg.n_grid) ledger.cells[{m, n}];
  }
  for (const auto& cells : partial) {
    for (const auto& [key, cell] : cells) ledger.cells[key] += cell;
  }
  return ledger;
}

}  // namespace

std::vector<std::uint64_t> default_n_grid() { return {10, 20, 50, 100, 200, 300, 500, 1000, 1500, 2000}; }

void ExperimentConfig::validate() const {
  if (n_grid.empty()) throw InputError("n_grid must not be empty");
  if (n_grid.front() == 0) throw InputError("n_grid entries must be positive");
  for (std::size_t i = 1; i < n_grid.size(); ++i) {
    if (n_grid[i] <= n_grid[i - 1]) throw InputError("n_grid must be strictly increasing");
  }
  if (trials == 0) throw InputError("trials must be at least 1");
  if (methods.empty()) throw InputError("at least one interval method is required");
  if (!(true_rate >= 0.0 && true_rate <= 1.0)) throw InputError("true_rate must lie in [0, 1]");
  if (!(delta > 0.0 && delta < 1.0)) throw InputError("delta must lie in (0, 1)");
  if (kind == ExperimentKind::Cost && !j_req) throw InputError("cost experiments need j_req");
  if (j_req && !(*j_req > 0.0)) throw InputError("j_req must be positive");
}

ExperimentConfig parse_config_json(const std::string& text, const std::filesystem::path& base_dir) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw InputError("config must hold a JSON object");
  static const std::set<std::string> known{"experiment", "plant", "rho",    "true_rate", "delta",
                                           "n_grid",     "trials", "methods", "seed",     "j_req",
                                           "output",     "grid",  "threads"};
  for (const auto& [key, _] : doc.items()) {
    if (!known.count(key)) throw InputError("unknown config key '" + key + "'");
  }

  ExperimentConfig cfg;
  if (doc.contains("experiment")) cfg.kind = parse_kind(get_field<std::string>(doc, "experiment"));
  if (doc.contains("plant") && doc.contains("rho")) throw InputError("config may set plant or rho, not both");
  if (doc.contains("plant")) {
    const auto& p = doc.at("plant");
    if (p.is_string()) {
      std::filesystem::path path = p.get<std::string>();
      if (path.is_relative() && !base_dir.empty()) path = base_dir / path;
      cfg.plant = load_plant_file(path.string());
    } else if (p.is_object()) {
      cfg.plant = parse_plant_json(p.dump());
    } else {
      throw InputError("config field 'plant' must be a path or a plant object");
    }
  }
  if (doc.contains("rho")) cfg.plant = PlantModel::scalar(get_field<double>(doc, "rho"));
  if (doc.contains("true_rate")) cfg.true_rate = get_field<double>(doc, "true_rate");
  if (doc.contains("delta")) cfg.delta = get_field<double>(doc, "delta");
  if (doc.contains("n_grid")) cfg.n_grid = get_field<std::vector<std::uint64_t>>(doc, "n_grid");
  if (doc.contains("trials")) cfg.trials = get_field<std::uint64_t>(doc, "trials");
  if (doc.contains("methods")) {
    cfg.methods.clear();
    for (const auto& name : get_field<std::vector<std::string>>(doc, "methods")) {
      cfg.methods.push_back(parse_method(name));
    }
  }
  if (doc.contains("seed")) cfg.seed = get_field<std::uint64_t>(doc, "seed");
  if (doc.contains("j_req")) cfg.j_req = get_field<double>(doc, "j_req");
  if (doc.contains("output")) cfg.output = get_field<std::string>(doc, "output");
  if (doc.contains("grid")) cfg.sweep_grid = get_field<std::vector<double>>(doc, "grid");
  if (doc.contains("threads")) cfg.threads = get_field<unsigned>(doc, "threads");
  cfg.validate();
  return cfg;
}

ExperimentConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_json(ss.str(), std::filesystem::path(path).parent_path());
}

LedgerCell& LedgerCell::operator+=(const LedgerCell& o) {
  affirm += o.affirm;
  deny += o.deny;
  undetermined += o.undetermined;
  correct += o.correct;
  wrong += o.wrong;
  return *this;
}

const LedgerCell& TrialLedger::at(IntervalMethod m, std::uint64_t n) const {
  const auto it = cells.find({m, n});
  if (it == cells.end()) {
    throw InputError("ledger has no cell for method " + std::string(method_name(m)) + " at n=" + std::to_string(n));
  }
  return it->second;
}

double TrialLedger::correct_rate(IntervalMethod m, std::uint64_t n) const {
  return static_cast<double>(at(m, n).correct) / static_cast<double>(trials);
}

double TrialLedger::wrong_rate(IntervalMethod m, std::uint64_t n) const {
  return static_cast<double>(at(m, n).wrong) / static_cast<double>(trials);
}

double TrialLedger::affirm_rate(IntervalMethod m, std::uint64_t n) const {
  return static_cast<double>(at(m, n).affirm) / static_cast<double>(trials);
}

TrialLedger run_stability_experiment(const ExperimentConfig& cfg) {
  const double t = stability_threshold(cfg.plant);
  if (cfg.true_rate == t) throw InputError("true_rate sits exactly at the stability threshold");
  const auto evaluate = [&](IntervalMethod m, SuccessCount c) {
    return stability_test(cfg.plant, c, cfg.delta, m).decision;
  };
  TrialLedger ledger = run_trials(cfg, evaluate, cfg.true_rate > t);
  for (auto n : cfg.n_grid) {
    ledger.bound[n] = std::isfinite(t) ? correctness_bound(MarginSpec(cfg.true_rate, t, cfg.delta), n) : 1.0;
  }
  return ledger;
}

TrialLedger run_wrong_answer_experiment(const ExperimentConfig& cfg) { return run_stability_experiment(cfg); }

TrialLedger run_cost_experiment(const ExperimentConfig& cfg) {
  if (!cfg.j_req) throw InputError("cost experiments need j_req");
  const double j_req = *cfg.j_req;
  const auto q_star = critical_rate(cfg.plant, j_req);
  if (!q_star) throw InputError("j_req is infeasible: even a perfect channel exceeds it");
  const bool truth = lyapunov_cost_capped(cfg.plant, cfg.true_rate, j_req) <= j_req;
  const auto evaluate = [&](IntervalMethod m, SuccessCount c) {
    return cost_test(cfg.plant, c, cfg.delta, j_req, m).decision;
  };
  TrialLedger ledger = run_trials(cfg, evaluate, truth);
  ledger.critical_rate = *q_star;
  const MarginSpec gap(cfg.true_rate, *q_star, cfg.delta);
  ledger.required_n = hoeffding_sample_size(gap);
  for (auto n : cfg.n_grid) ledger.bound[n] = correctness_bound(gap, n);
  return ledger;
}

TrialLedger run_experiment(const ExperimentConfig& cfg) {
  switch (cfg.kind) {
    case ExperimentKind::Stability: return run_stability_experiment(cfg);
    case ExperimentKind::WrongAnswer: return run_wrong_answer_experiment(cfg);
    case ExperimentKind::Cost: return run_cost_experiment(cfg);
  }
  throw InputError("unknown experiment kind");
}

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

void write_ledger_csvs(const TrialLedger& ledger, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  const auto open = [&](const char* name) {
    std::ofstream out(dir / name, std::ios::binary);
    if (!out) throw InputError("cannot write " + (dir / name).string());
    return out;
  };
  auto correct = open("correct_rate.csv");
  auto wrong = open("wrong_rate.csv");
  correct << "method,n,rate\n";
  wrong << "method,n,rate\n";
  for (const auto& [key, cell] : ledger.cells) {
    const auto trials = static_cast<double>(ledger.trials);
    correct << method_name(key.first) << ',' << key.second << ',' << format_number(cell.correct / trials) << '\n';
    wrong << method_name(key.first) << ',' << key.second << ',' << format_number(cell.wrong / trials) << '\n';
  }
  auto bound = open("bound.csv");
  bound << "n,bound\n";
  for (const auto& [n, b] : ledger.bound) bound << n << ',' << format_number(b) << '\n';
}

SweepAxis parse_axis(const std::string& name) {
  if (name == "rho") return SweepAxis::SpectralRadius;
  if (name == "q") return SweepAxis::Rate;
  throw InputError("sweep axis must be 'rho' or 'q'");
}

std::vector<ComplexityRow> sweep_sample_complexity(SweepAxis axis, double q, double rho, double delta,
                                                   const std::vector<double>& grid) {
  if (grid.empty()) throw InputError("sweep grid must not be empty");
  std::vector<ComplexityRow> rows;
  rows.reserve(grid.size());
  for (double x : grid) {
    const double rate = axis == SweepAxis::Rate ? x : q;
    const double radius = axis == SweepAxis::SpectralRadius ? x : rho;
    if (!(radius > 0.0)) throw InputError("spectral radius must be positive");
    const double threshold = 1.0 - 1.0 / (radius * radius);
    if (std::abs(rate - threshold) < kCriticalExclusion) {
      throw InputError("sweep grid point " + format_number(x) + " touches the critical point");
    }
    const MarginSpec spec(rate, threshold, delta);
    rows.push_back({x, hoeffding_sample_size(spec), bernstein_sample_size(spec)});
  }
  return rows;
}

void write_complexity_csv(const std::vector<ComplexityRow>& rows, const std::filesystem::path& file) {
  if (file.has_parent_path()) std::filesystem::create_directories(file.parent_path());
  std::ofstream out(file, std::ios::binary);
  if (!out) throw InputError("cannot write " + file.string());
  out << "x,n_hoeffding,n_bernstein\n";
  for (const auto& r : rows) out << format_number(r.x) << ',' << r.n_hoeffding << ',' << r.n_bernstein << '\n';
}

}  // namespace ncsverify
