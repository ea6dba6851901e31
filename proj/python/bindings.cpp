// Python bindings for the fingerprinting core.  The surface mirrors the C++
// headers: analytic optics, the referee decision rule, information
// accounting, the Toeplitz encoder, and the experiment driver.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qfp/bitstring.hpp"
#include "qfp/config.hpp"
#include "qfp/decision.hpp"
#include "qfp/info.hpp"
#include "qfp/optics.hpp"
#include "qfp/simulator.hpp"
#include "qfp/toeplitz.hpp"

namespace py = pybind11;
using namespace qfp;

PYBIND11_MODULE(_qfp, mod) {
  mod.doc() =
      "Coherent-state fingerprinting: encoder, detection model, decision "
      "rule, information bounds, and experiment driver";

  py::class_<BitString>(mod, "BitString")
      .def(py::init<std::uint64_t>(), py::arg("length"))
      .def_static("from_string", &BitString::from_string, py::arg("bits"))
      .def_static("from_file", &BitString::from_file, py::arg("path"),
                  py::arg("max_bits"))
      .def_static("random", &BitString::random, py::arg("seed"),
                  py::arg("length"))
      .def("size", &BitString::size)
      .def("bit", &BitString::bit, py::arg("i"))
      .def("set_bit", &BitString::set_bit, py::arg("i"), py::arg("value"))
      .def("weight", &BitString::weight)
      .def("to_string", &BitString::to_string)
      .def("to_file", &BitString::to_file, py::arg("path"))
      .def("__xor__",
           [](const BitString& a, const BitString& b) { return a ^ b; })
      .def("__eq__",
           [](const BitString& a, const BitString& b) { return a == b; })
      .def("__len__", &BitString::size);

  mod.def("hamming_distance", &hamming_distance, py::arg("a"), py::arg("b"));
  mod.def("codeword_length", &codeword_length, py::arg("n"), py::arg("rate"));

  py::class_<ToeplitzCode>(mod, "ToeplitzCode")
      .def_static("new_code", &ToeplitzCode::new_code, py::arg("n"),
                  py::arg("rate"), py::arg("design_distance"), py::arg("seed"))
      .def_static("from_descriptor", &ToeplitzCode::from_descriptor,
                  py::arg("line"))
      .def("n", &ToeplitzCode::n)
      .def("m", &ToeplitzCode::m)
      .def("rate", &ToeplitzCode::rate)
      .def("design_distance", &ToeplitzCode::design_distance)
      .def("encode", &ToeplitzCode::encode, py::arg("x"))
      .def("encode_weight", &ToeplitzCode::encode_weight, py::arg("x"),
           py::arg("memory_budget_bytes") = ToeplitzCode::kDefaultMemoryBudget)
      .def("descriptor", &ToeplitzCode::descriptor);

  py::class_<SystemParams>(mod, "SystemParams")
      .def(py::init<>())
      .def_readwrite("mu_total", &SystemParams::mu_total)
      .def_readwrite("rep_rate_hz", &SystemParams::rep_rate_hz)
      .def_readwrite("dark_rate_hz", &SystemParams::dark_rate_hz)
      .def_readwrite("window_s", &SystemParams::window_s)
      .def_readwrite("det_efficiency", &SystemParams::det_efficiency)
      .def_readwrite("visibility", &SystemParams::visibility)
      .def_readwrite("arm_loss_db_a", &SystemParams::arm_loss_db_a)
      .def_readwrite("arm_loss_db_b", &SystemParams::arm_loss_db_b)
      .def_readwrite("bs_transmittance_a", &SystemParams::bs_transmittance_a)
      .def_readwrite("bs_transmittance_b", &SystemParams::bs_transmittance_b)
      .def("validate", &SystemParams::validate)
      .def("detected_mu_a", &SystemParams::detected_mu_a)
      .def("detected_mu_b", &SystemParams::detected_mu_b);

  py::class_<DetectionMeans>(mod, "DetectionMeans")
      .def_readonly("lambda_d1", &DetectionMeans::lambda_d1)
      .def_readonly("lambda_d0", &DetectionMeans::lambda_d0)
      .def_readonly("dark_component", &DetectionMeans::dark_component)
      .def_readonly("signal_component", &DetectionMeans::signal_component)
      .def_readonly("signal_photons_d1", &DetectionMeans::signal_photons_d1)
      .def_readonly("signal_photons_d0", &DetectionMeans::signal_photons_d0);

  mod.def("db_to_transmittance", &db_to_transmittance, py::arg("loss_db"));
  mod.def("per_pulse_lambda_d1", &per_pulse_lambda_d1, py::arg("mu_a"),
          py::arg("mu_b"), py::arg("visibility"), py::arg("phase_equal"));
  mod.def("expected_counts", &expected_counts, py::arg("params"), py::arg("m"),
          py::arg("distance_fraction"));

  py::enum_<Verdict>(mod, "Verdict")
      .value("Equal", Verdict::Equal)
      .value("Different", Verdict::Different);

  py::class_<DecisionRule>(mod, "DecisionRule")
      .def_readonly("threshold", &DecisionRule::threshold)
      .def_readonly("err_equal", &DecisionRule::err_equal)
      .def_readonly("err_diff", &DecisionRule::err_diff)
      .def_readonly("epsilon", &DecisionRule::epsilon);

  mod.def("poisson_cdf", &poisson_cdf, py::arg("k"), py::arg("lam"));
  mod.def("poisson_sf", &poisson_sf, py::arg("k"), py::arg("lam"));
  mod.def("choose_threshold", &choose_threshold, py::arg("lambda_equal"),
          py::arg("lambda_diff"));
  mod.def("decide", &decide, py::arg("counts_d1"), py::arg("rule"));
  mod.def("protocol_error_bound", &protocol_error_bound, py::arg("params"),
          py::arg("m"), py::arg("delta"));

  py::class_<InfoReport>(mod, "InfoReport")
      .def_readonly("n", &InfoReport::n)
      .def_readonly("m", &InfoReport::m)
      .def_readonly("mu", &InfoReport::mu)
      .def_readonly("q_bits", &InfoReport::q_bits)
      .def_readonly("q_bits_low", &InfoReport::q_bits_low)
      .def_readonly("q_bits_high", &InfoReport::q_bits_high)
      .def_readonly("c_limit_bits", &InfoReport::c_limit_bits)
      .def_readonly("c_best_known_bits", &InfoReport::c_best_known_bits)
      .def_readonly("gamma", &InfoReport::gamma);

  mod.def("quantum_info_bound", &quantum_info_bound, py::arg("mu"),
          py::arg("m"));
  mod.def("classical_limit", &classical_limit, py::arg("n"),
          py::arg("epsilon"));
  mod.def("best_known_classical", &best_known_classical, py::arg("n"));
  mod.def("advantage_report", &advantage_report, py::arg("n"), py::arg("mu"),
          py::arg("mu_rel_uncertainty"), py::arg("rate"), py::arg("epsilon"));

  py::enum_<CaseKind>(mod, "CaseKind")
      .value("Equal", CaseKind::Equal)
      .value("WorstCase", CaseKind::WorstCase)
      .value("RandomPair", CaseKind::RandomPair)
      .value("FilePair", CaseKind::FilePair);

  py::enum_<SamplingMode>(mod, "SamplingMode")
      .value("Aggregate", SamplingMode::Aggregate)
      .value("PerPulse", SamplingMode::PerPulse);

  py::class_<ExperimentConfig>(mod, "ExperimentConfig")
      .def(py::init<>())
      .def_readwrite("n", &ExperimentConfig::n)
      .def_readwrite("rate", &ExperimentConfig::rate)
      .def_readwrite("delta", &ExperimentConfig::delta)
      .def_readwrite("params", &ExperimentConfig::params)
      .def_readwrite("case_kind", &ExperimentConfig::case_kind)
      .def_readwrite("path_a", &ExperimentConfig::path_a)
      .def_readwrite("path_b", &ExperimentConfig::path_b)
      .def_readwrite("repetitions", &ExperimentConfig::repetitions)
      .def_readwrite("master_seed", &ExperimentConfig::master_seed)
      .def_readwrite("sampling_mode", &ExperimentConfig::sampling_mode)
      .def_readwrite("mu_rel_uncertainty",
                     &ExperimentConfig::mu_rel_uncertainty)
      .def_readwrite("epsilon_target", &ExperimentConfig::epsilon_target)
      .def("validate", &ExperimentConfig::validate);

  py::class_<RunSummary>(mod, "RunSummary")
      .def_readonly("mean_d1", &RunSummary::mean_d1)
      .def_readonly("std_d1", &RunSummary::std_d1)
      .def_readonly("error_rate", &RunSummary::error_rate)
      .def_readonly("threshold", &RunSummary::threshold)
      .def_readonly("rule", &RunSummary::rule)
      .def_readonly("info", &RunSummary::info);

  py::class_<FileCompareResult>(mod, "FileCompareResult")
      .def_readonly("verdict", &FileCompareResult::verdict)
      .def_readonly("summary", &FileCompareResult::summary)
      .def_readonly("distance_fraction", &FileCompareResult::distance_fraction);

  mod.def("run_experiment", &run_experiment, py::arg("config"));
  mod.def("compare_files", &compare_files, py::arg("path_a"), py::arg("path_b"),
          py::arg("config"));
  mod.def("parse_config", &parse_config, py::arg("text"),
          py::arg("overrides") = std::vector<std::string>{});
  mod.def("load_config", &load_config, py::arg("path"),
          py::arg("overrides") = std::vector<std::string>{});
}
