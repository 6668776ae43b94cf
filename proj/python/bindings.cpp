#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "ncsverify/channel.hpp"
#include "ncsverify/complexity.hpp"
#include "ncsverify/errors.hpp"
#include "ncsverify/harness.hpp"
#include "ncsverify/intervals.hpp"
#include "ncsverify/sysmodel.hpp"
#include "ncsverify/verify.hpp"

namespace py = pybind11;
namespace nv = ncsverify;

PYBIND11_MODULE(_core, m) {
  m.doc() = "C++ core of ncsverify";

  py::register_exception<nv::InputError>(m, "InputError", PyExc_ValueError);
  py::register_exception<nv::ConvergenceError>(m, "ConvergenceError", PyExc_RuntimeError);

  py::class_<nv::ChannelTrace>(m, "ChannelTrace")
      .def(py::init<std::vector<std::uint8_t>, std::uint64_t, std::optional<double>>(), py::arg("outcomes"),
           py::arg("seed") = 0, py::arg("true_rate") = py::none())
      .def_property_readonly("outcomes", &nv::ChannelTrace::outcomes)
      .def_property_readonly("seed", &nv::ChannelTrace::seed)
      .def_property_readonly("true_rate", &nv::ChannelTrace::true_rate)
      .def("successes", [](const nv::ChannelTrace& t) { return t.count().successes; })
      .def("prefix", &nv::ChannelTrace::prefix, py::arg("n"))
      .def("__len__", &nv::ChannelTrace::size);

  m.def("draw_trace", &nv::draw_trace, py::arg("q"), py::arg("n"), py::arg("seed"));
  m.def("sample_mean", py::overload_cast<const nv::ChannelTrace&>(&nv::sample_mean), py::arg("trace"));

  py::enum_<nv::IntervalMethod>(m, "IntervalMethod")
      .value("Hoeffding", nv::IntervalMethod::Hoeffding)
      .value("BernsteinFast", nv::IntervalMethod::BernsteinFast)
      .value("ExactBinomial", nv::IntervalMethod::ExactBinomial)
      .value("NormalApprox", nv::IntervalMethod::NormalApprox);

  py::class_<nv::RateInterval>(m, "RateInterval")
      .def_readonly("lo", &nv::RateInterval::lo)
      .def_readonly("hi", &nv::RateInterval::hi)
      .def_readonly("method", &nv::RateInterval::method)
      .def_readonly("delta", &nv::RateInterval::delta)
      .def_readonly("n", &nv::RateInterval::n)
      .def_readonly("q_hat", &nv::RateInterval::q_hat)
      .def("__repr__", [](const nv::RateInterval& r) {
        return "RateInterval(lo=" + nv::format_number(r.lo) + ", hi=" + nv::format_number(r.hi) + ")";
      });

  m.def("hoeffding_tail", &nv::hoeffding_tail, py::arg("n"), py::arg("eps"));
  m.def("bernstein_tail", &nv::bernstein_tail, py::arg("n"), py::arg("eps"), py::arg("q"));
  m.def("normal_quantile", &nv::normal_quantile, py::arg("p"));
  m.def("hoeffding_interval", py::overload_cast<const nv::ChannelTrace&, double>(&nv::hoeffding_interval),
        py::arg("trace"), py::arg("delta"));
  m.def("bernstein_fast_interval",
        py::overload_cast<const nv::ChannelTrace&, double>(&nv::bernstein_fast_interval), py::arg("trace"),
        py::arg("delta"));
  m.def("exact_interval", py::overload_cast<const nv::ChannelTrace&, double>(&nv::exact_interval),
        py::arg("trace"), py::arg("delta"));
  m.def("normal_interval", py::overload_cast<const nv::ChannelTrace&, double>(&nv::normal_interval),
        py::arg("trace"), py::arg("delta"));

  py::class_<nv::PlantModel>(m, "PlantModel")
      .def(py::init<Eigen::MatrixXd, Eigen::MatrixXd, Eigen::MatrixXd, Eigen::MatrixXd>(), py::arg("a_open"),
           py::arg("a_closed"), py::arg("q_weight"), py::arg("w_cov"))
      .def_static("simple", &nv::PlantModel::simple, py::arg("a_open"))
      .def_static("scalar", &nv::PlantModel::scalar, py::arg("a"), py::arg("q_weight") = 1.0,
                  py::arg("w_cov") = 1.0)
      .def_static("from_json", &nv::parse_plant_json, py::arg("text"))
      .def("to_json", &nv::plant_to_json)
      .def_property_readonly("a_open", &nv::PlantModel::a_open)
      .def_property_readonly("a_closed", &nv::PlantModel::a_closed)
      .def_property_readonly("q_weight", &nv::PlantModel::q_weight)
      .def_property_readonly("w_cov", &nv::PlantModel::w_cov)
      .def_property_readonly("is_simple", &nv::PlantModel::is_simple)
      .def_property_readonly("open_radius", &nv::PlantModel::open_radius);

  m.def("spectral_radius", &nv::spectral_radius, py::arg("m"));
  m.def("stability_threshold", &nv::stability_threshold, py::arg("plant"));
  m.def("kronecker_stable", &nv::kronecker_stable, py::arg("plant"), py::arg("q"));
  m.def("lyapunov_cost", &nv::lyapunov_cost, py::arg("plant"), py::arg("q"));
  m.def("critical_rate", &nv::critical_rate, py::arg("plant"), py::arg("j_req"));
  m.def(
      "simulate",
      [](const nv::PlantModel& plant, const nv::ChannelTrace& trace, std::uint64_t seed) {
        return nv::simulate(plant, trace, seed).running_cost;
      },
      py::arg("plant"), py::arg("trace"), py::arg("seed"), "Returns the trajectory's running average cost.");

  py::enum_<nv::Decision>(m, "Decision")
      .value("Affirm", nv::Decision::Affirm)
      .value("Deny", nv::Decision::Deny)
      .value("Undetermined", nv::Decision::Undetermined);

  py::class_<nv::Verdict>(m, "Verdict")
      .def_readonly("decision", &nv::Verdict::decision)
      .def_readonly("interval", &nv::Verdict::interval)
      .def_readonly("threshold_or_target", &nv::Verdict::threshold_or_target)
      .def_readonly("flags", &nv::Verdict::flags)
      .def("to_json", [](const nv::Verdict& v, bool cost_query) { return nv::verdict_to_json(v, cost_query); },
           py::arg("cost_query") = false);

  const auto method_arg = py::arg("method") = nv::IntervalMethod::Hoeffding;
  m.def("stability_test",
        py::overload_cast<const nv::PlantModel&, const nv::ChannelTrace&, double, nv::IntervalMethod>(
            &nv::stability_test),
        py::arg("plant"), py::arg("trace"), py::arg("delta"), method_arg);
  m.def("cost_test",
        py::overload_cast<const nv::PlantModel&, const nv::ChannelTrace&, double, double, nv::IntervalMethod>(
            &nv::cost_test),
        py::arg("plant"), py::arg("trace"), py::arg("delta"), py::arg("j_req"), method_arg);
  m.def("general_test",
        py::overload_cast<const nv::PlantModel&, const nv::ChannelTrace&, double, nv::IntervalMethod, double>(
            &nv::general_test),
        py::arg("plant"), py::arg("trace"), py::arg("delta"), method_arg, py::arg("grid_step") = nv::kDefaultGridStep);

  py::class_<nv::MarginSpec>(m, "MarginSpec")
      .def(py::init<double, double, double>(), py::arg("q"), py::arg("threshold"), py::arg("delta"))
      .def_static("from_radius", &nv::MarginSpec::from_radius, py::arg("q"), py::arg("rho"), py::arg("delta"))
      .def_property_readonly("margin", &nv::MarginSpec::margin);
  m.def("correctness_bound", &nv::correctness_bound, py::arg("spec"), py::arg("n"));
  m.def("hoeffding_sample_size", &nv::hoeffding_sample_size, py::arg("spec"));
  m.def("bernstein_sample_size", &nv::bernstein_sample_size, py::arg("spec"));
  m.def("low_variance_regime", &nv::low_variance_regime, py::arg("spec"), py::arg("c"));

  py::class_<nv::ExperimentConfig>(m, "ExperimentConfig")
      .def(py::init<>())
      .def_static("from_json", [](const std::string& text) { return nv::parse_config_json(text); })
      .def_readwrite("plant", &nv::ExperimentConfig::plant)
      .def_readwrite("true_rate", &nv::ExperimentConfig::true_rate)
      .def_readwrite("delta", &nv::ExperimentConfig::delta)
      .def_readwrite("n_grid", &nv::ExperimentConfig::n_grid)
      .def_readwrite("trials", &nv::ExperimentConfig::trials)
      .def_readwrite("methods", &nv::ExperimentConfig::methods)
      .def_readwrite("seed", &nv::ExperimentConfig::seed)
      .def_readwrite("j_req", &nv::ExperimentConfig::j_req)
      .def_readwrite("threads", &nv::ExperimentConfig::threads);

  py::class_<nv::TrialLedger>(m, "TrialLedger")
      .def_readonly("trials", &nv::TrialLedger::trials)
      .def_readonly("bound", &nv::TrialLedger::bound)
      .def_readonly("critical_rate", &nv::TrialLedger::critical_rate)
      .def_readonly("required_n", &nv::TrialLedger::required_n)
      .def("correct_rate", &nv::TrialLedger::correct_rate, py::arg("method"), py::arg("n"))
      .def("wrong_rate", &nv::TrialLedger::wrong_rate, py::arg("method"), py::arg("n"))
      .def("affirm_rate", &nv::TrialLedger::affirm_rate, py::arg("method"), py::arg("n"));

  m.def(
      "run_experiment",
      [](const nv::ExperimentConfig& cfg, const std::string& kind) {
        nv::ExperimentConfig c = cfg;
        if (kind == "stability") c.kind = nv::ExperimentKind::Stability;
        else if (kind == "wrong_answer") c.kind = nv::ExperimentKind::WrongAnswer;
        else if (kind == "cost") c.kind = nv::ExperimentKind::Cost;
        else throw nv::InputError("unknown experiment kind '" + kind + "'");
        py::gil_scoped_release release;
        return nv::run_experiment(c);
      },
      py::arg("config"), py::arg("kind") = "stability");

  m.def(
      "sweep_sample_complexity",
      [](const std::string& axis, double q, double rho, double delta, const std::vector<double>& grid) {
        std::vector<std::tuple<double, std::uint64_t, std::uint64_t>> rows;
        for (const auto& r : nv::sweep_sample_complexity(nv::parse_axis(axis), q, rho, delta, grid)) {
          rows.emplace_back(r.x, r.n_hoeffding, r.n_bernstein);
        }
        return rows;
      },
      py::arg("axis"), py::arg("q"), py::arg("rho"), py::arg("delta"), py::arg("grid"));
}
