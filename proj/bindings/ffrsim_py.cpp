#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "ffrsim/analysis.hpp"
#include "ffrsim/experiments.hpp"
#include "ffrsim/ffr.hpp"
#include "ffrsim/pathloss.hpp"
#include "ffrsim/simulator.hpp"
#include "ffrsim/version.hpp"

namespace py = pybind11;
using namespace ffrsim;

PYBIND11_MODULE(_core, m) {
    m.doc() = "Stochastic-geometry simulator and analytical toolkit for "
              "threshold-based frequency reuse in ultra-dense networks";
    m.attr("__version__") = FFRSIM_VERSION;

    // ---- units and path loss ----
    m.def("db_to_linear", &ffr::db_to_linear, py::arg("db"));
    m.def("linear_to_db", &ffr::linear_to_db, py::arg("linear"));

    py::class_<pathloss::PathLossParams>(m, "PathLossParams")
        .def(py::init<>())
        .def(py::init([](double alpha, double beta) {
                 pathloss::PathLossParams p{alpha, beta};
                 p.validate();
                 return p;
             }),
             py::arg("alpha"), py::arg("beta"))
        .def_readwrite("alpha", &pathloss::PathLossParams::alpha)
        .def_readwrite("beta", &pathloss::PathLossParams::beta)
        .def("validate", &pathloss::PathLossParams::validate)
        .def("__repr__", [](const pathloss::PathLossParams& p) {
            return "PathLossParams(alpha=" + std::to_string(p.alpha) +
                   ", beta=" + std::to_string(p.beta) + ")";
        });

    m.def("loss", &pathloss::loss, py::arg("r"), py::arg("params"),
          "Attenuation exp(-alpha * r^beta); 1 at r = 0.");

    // ---- user classification ----
    py::enum_<ffr::UserClass>(m, "UserClass")
        .value("CCU", ffr::UserClass::CCU)
        .value("CEU", ffr::UserClass::CEU);

    py::class_<ffr::FfrConfig>(m, "FfrConfig")
        .def(py::init<>())
        .def_static("from_db", &ffr::FfrConfig::from_db, py::arg("threshold_T_db"),
                    py::arg("power_ratio_a") = 10.0, py::arg("base_power_P") = 1.0,
                    py::arg("subbands_N") = 10)
        .def_readwrite("threshold_T", &ffr::FfrConfig::threshold_T)
        .def_readwrite("power_ratio_a", &ffr::FfrConfig::power_ratio_a)
        .def_readwrite("base_power_P", &ffr::FfrConfig::base_power_P)
        .def_readwrite("subbands_N", &ffr::FfrConfig::subbands_N)
        .def("validate", &ffr::FfrConfig::validate);

    m.def("classify", &ffr::classify, py::arg("g1"), py::arg("g2"), py::arg("L1"), py::arg("L2"),
          py::arg("T"), "CEU iff g1*L1 < T*g2*L2; boundary equality stays CCU.");
    m.def("ceu_prob_conditional", &ffr::ceu_prob_conditional, py::arg("L1"), py::arg("L2"),
          py::arg("T"), "P(CEU | L1, L2) = T*L2 / (L1 + T*L2).");
    m.def("tx_power", &ffr::tx_power, py::arg("user_class"), py::arg("config"));

    // ---- analytical toolkit ----
    m.def("joint_nearest_pdf", &analysis::joint_nearest_pdf, py::arg("r1"), py::arg("r2"),
          py::arg("lambda_"), "Joint density of the two nearest-point distances of a PPP.");
    m.def(
        "average_ceu_probability",
        [](double threshold_T, const pathloss::PathLossParams& pl, double lambda) {
            return analysis::average_ceu_probability(threshold_T, pl, lambda);
        },
        py::arg("threshold_T"), py::arg("pathloss"), py::arg("lambda_"),
        "Edge-user probability averaged over the nearest-distance law (threshold linear).");

    // ---- simulator ----
    py::class_<geometry::Window>(m, "Window")
        .def(py::init<>())
        .def_readwrite("half_width", &geometry::Window::half_width)
        .def("area", &geometry::Window::area);

    py::class_<simulator::SimConfig>(m, "SimConfig")
        .def(py::init<>())
        .def_readwrite("lambda_bs", &simulator::SimConfig::lambda_bs)
        .def_readwrite("lambda_user", &simulator::SimConfig::lambda_user)
        .def_readwrite("window", &simulator::SimConfig::window)
        .def_readwrite("ffr", &simulator::SimConfig::ffr)
        .def_readwrite("pathloss", &simulator::SimConfig::pathloss)
        .def_readwrite("coverage_threshold_That", &simulator::SimConfig::coverage_threshold_That)
        .def_readwrite("n_drops", &simulator::SimConfig::n_drops)
        .def_readwrite("master_seed", &simulator::SimConfig::master_seed)
        .def_readwrite("reuse_broadcast_fade", &simulator::SimConfig::reuse_broadcast_fade)
        .def_readwrite("max_regen_attempts", &simulator::SimConfig::max_regen_attempts)
        .def("validate", &simulator::SimConfig::validate);

    py::class_<simulator::EstimateResult>(m, "EstimateResult")
        .def_readonly("coverage", &simulator::EstimateResult::coverage)
        .def_readonly("coverage_ci", &simulator::EstimateResult::coverage_ci)
        .def_readonly("ceu_density", &simulator::EstimateResult::ceu_density)
        .def_readonly("ceu_density_ci", &simulator::EstimateResult::ceu_density_ci)
        .def_readonly("n_drops", &simulator::EstimateResult::n_drops)
        .def("__repr__", [](const simulator::EstimateResult& r) {
            return "EstimateResult(coverage=" + std::to_string(r.coverage) +
                   ", ceu_density=" + std::to_string(r.ceu_density) + ")";
        });

    py::class_<simulator::CeuFractionResult>(m, "CeuFractionResult")
        .def_readonly("ceu_fraction", &simulator::CeuFractionResult::ceu_fraction)
        .def_readonly("ci", &simulator::CeuFractionResult::ci)
        .def_readonly("n_drops", &simulator::CeuFractionResult::n_drops);

    m.def("estimate", &simulator::estimate, py::arg("config"), py::arg("n_threads") = 1,
          py::call_guard<py::gil_scoped_release>(),
          "Coverage probability and edge-user density over config.n_drops drops.");
    m.def("estimate_ceu_fraction", &simulator::estimate_ceu_fraction, py::arg("config"),
          py::arg("n_threads") = 1, py::call_guard<py::gil_scoped_release>(),
          "Classification-only edge-user density estimator.");

    // ---- experiments ----
    py::enum_<experiments::Axis>(m, "Axis")
        .value("threshold_T_dB", experiments::Axis::threshold_T_dB)
        .value("beta", experiments::Axis::beta)
        .value("alpha", experiments::Axis::alpha)
        .value("power_ratio_a", experiments::Axis::power_ratio_a);

    py::class_<experiments::SweepSpec>(m, "SweepSpec")
        .def(py::init<>())
        .def_readwrite("base", &experiments::SweepSpec::base)
        .def_readwrite("axis", &experiments::SweepSpec::axis)
        .def_readwrite("grid", &experiments::SweepSpec::grid)
        .def_readwrite("overlay_axis", &experiments::SweepSpec::overlay_axis)
        .def_readwrite("overlay_values", &experiments::SweepSpec::overlay_values)
        .def_readwrite("n_threads", &experiments::SweepSpec::n_threads)
        .def_readwrite("parallel_points", &experiments::SweepSpec::parallel_points)
        .def("validate", &experiments::SweepSpec::validate);

    py::class_<experiments::SweepRow>(m, "SweepRow")
        .def_readonly("axis_value", &experiments::SweepRow::axis_value)
        .def_readonly("overlay_value", &experiments::SweepRow::overlay_value)
        .def_readonly("coverage", &experiments::SweepRow::coverage)
        .def_readonly("coverage_ci", &experiments::SweepRow::coverage_ci)
        .def_readonly("ceu_density", &experiments::SweepRow::ceu_density)
        .def_readonly("ceu_density_ci", &experiments::SweepRow::ceu_density_ci)
        .def_readonly("analytical_pe", &experiments::SweepRow::analytical_pe)
        .def_readonly("analytical_ok", &experiments::SweepRow::analytical_ok)
        .def_readonly("n_drops", &experiments::SweepRow::n_drops)
        .def_readonly("seed", &experiments::SweepRow::seed);

    py::class_<experiments::SweepResult>(m, "SweepResult")
        .def_readonly("spec", &experiments::SweepResult::spec)
        .def_readonly("rows", &experiments::SweepResult::rows);

    m.def("run_sweep", &experiments::run_sweep, py::arg("spec"),
          py::call_guard<py::gil_scoped_release>());
    m.def("to_csv", &experiments::to_csv, py::arg("result"));
    m.def("to_plot_csv", &experiments::to_plot_csv, py::arg("result"), py::arg("figure_label"));
    m.def("to_json_text", &experiments::to_json_text, py::arg("result"));
    m.def("spec_from_json_text", &experiments::spec_from_json_text, py::arg("json_text"));

    py::class_<experiments::CalibrationRecord>(m, "CalibrationRecord");
    m.def("default_calibration", &experiments::default_calibration);
    m.def("load_calibration", &experiments::load_calibration, py::arg("path"));
    m.def("fig3_spec", &experiments::fig3_spec, py::arg("record"), py::arg("n_drops") = 100000,
          py::arg("n_threads") = 1, py::arg("step_db") = 1.0);
    m.def("fig4_spec", &experiments::fig4_spec, py::arg("record"), py::arg("n_drops") = 100000,
          py::arg("n_threads") = 1, py::arg("step_db") = 1.0);
    m.def("fig5_spec", &experiments::fig5_spec, py::arg("record"), py::arg("n_drops") = 100000,
          py::arg("n_threads") = 1, py::arg("beta_step") = 0.1);
}
