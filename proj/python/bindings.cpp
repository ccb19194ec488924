#include "ringwave/commands.hpp"
#include "ringwave/config.hpp"
#include "ringwave/dispersion.hpp"
#include "ringwave/errors.hpp"
#include "ringwave/parametric.hpp"
#include "ringwave/ring.hpp"

#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace ringwave;

namespace {

using release = py::call_guard<py::gil_scoped_release>;

CommandRequest make_request(const std::string& name, const std::string& config, const std::string& figure,
                            const py::dict& knobs) {
    CommandRequest req;
    req.name = name;
    req.figure = figure;
    req.config = parse_config_text(config);
    for (const auto& [key, value] : knobs) {
        const auto k = key.cast<std::string>();
        if (k == "mode") {
            req.mode = value.cast<std::string>();
        } else if (k == "paths") {
            req.paths = value.cast<int>();
        } else if (k == "points") {
            req.points = value.cast<int>();
        } else if (k == "threads") {
            req.threads = value.cast<int>();
        } else if (k == "f_in") {
            req.f_in = value.cast<double>();
        } else if (k == "p_in") {
            req.p_in = value.cast<double>();
        } else if (k == "f_start") {
            req.f_start = value.cast<double>();
        } else if (k == "f_stop") {
            req.f_stop = value.cast<double>();
        } else if (k == "vp0") {
            req.vp0 = value.cast<double>();
        } else {
            throw ConfigError(k, "unknown option");
        }
    }
    return req;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "ringwave C++ core";
    m.attr("__version__") = RINGWAVE_VERSION;

    auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
    py::register_exception<DomainError>(m, "DomainError", base.ptr());
    py::register_exception<NumericError>(m, "NumericError", base.ptr());
    py::register_exception<UnderdeterminedError>(m, "UnderdeterminedError", base.ptr());
    py::register_exception<TopologyError>(m, "TopologyError", base.ptr());
    py::register_exception<ConfigError>(m, "ConfigError", base.ptr());

    py::class_<Varactor>(m, "Varactor")
        .def(py::init<>())
        .def_readwrite("c0", &Varactor::c0)
        .def_readwrite("vj", &Varactor::vj)
        .def_readwrite("m", &Varactor::m)
        .def_readwrite("v_bias", &Varactor::v_bias)
        .def_readwrite("r_s", &Varactor::r_s)
        .def("validate", &Varactor::validate);

    py::class_<TaylorCoeffs>(m, "TaylorCoeffs")
        .def_readonly("c0", &TaylorCoeffs::c0)
        .def_readonly("c1", &TaylorCoeffs::c1)
        .def_readonly("c2", &TaylorCoeffs::c2)
        .def("evaluate", &TaylorCoeffs::evaluate);

    py::class_<LineSpec>(m, "LineSpec")
        .def(py::init<>())
        .def_readwrite("z0", &LineSpec::z0)
        .def_readwrite("eps_eff", &LineSpec::eps_eff)
        .def_readwrite("alpha", &LineSpec::alpha)
        .def_readwrite("alpha_ref_freq", &LineSpec::alpha_ref_freq);

    py::class_<UnitCell>(m, "UnitCell")
        .def(py::init<>())
        .def_readwrite("d", &UnitCell::d)
        .def_readwrite("line", &UnitCell::line)
        .def_readwrite("varactor", &UnitCell::varactor);

    py::class_<RingSpec>(m, "RingSpec")
        .def(py::init<>())
        .def_readwrite("n_cells", &RingSpec::n_cells)
        .def_readwrite("cell", &RingSpec::cell)
        .def_readwrite("node_m", &RingSpec::node_m)
        .def_readwrite("node_d", &RingSpec::node_d)
        .def("validate", &RingSpec::validate);

    py::class_<PortNetwork>(m, "PortNetwork")
        .def_readwrite("l1", &PortNetwork::l1)
        .def_readwrite("c1", &PortNetwork::c1)
        .def_readwrite("l2", &PortNetwork::l2)
        .def_readwrite("l3", &PortNetwork::l3)
        .def_readwrite("return_l", &PortNetwork::return_l)
        .def_readwrite("return_f", &PortNetwork::return_f)
        .def_readwrite("z_ref", &PortNetwork::z_ref)
        .def_readwrite("inductor_q", &PortNetwork::inductor_q)
        .def_readwrite("q_ref_freq", &PortNetwork::q_ref_freq);

    py::class_<PortPair>(m, "PortPair")
        .def(py::init<>())
        .def_readwrite("doubler", &PortPair::doubler)
        .def_readwrite("divider", &PortPair::divider);

    py::class_<CalibrationAnchors>(m, "CalibrationAnchors")
        .def(py::init<>())
        .def_readwrite("beta_d", &CalibrationAnchors::beta_d)
        .def_readwrite("f_beta", &CalibrationAnchors::f_beta)
        .def_readwrite("f_cutoff", &CalibrationAnchors::f_cutoff);

    py::class_<LoadedPhase>(m, "LoadedPhase")
        .def_readonly("beta_d", &LoadedPhase::beta_d)
        .def_readonly("alpha_d", &LoadedPhase::alpha_d)
        .def_readonly("evanescent", &LoadedPhase::evanescent);

    py::enum_<ResonanceKind>(m, "ResonanceKind")
        .value("zero", ResonanceKind::zero)
        .value("pole", ResonanceKind::pole);
    py::class_<Resonance>(m, "Resonance")
        .def_readonly("freq", &Resonance::freq)
        .def_readonly("kind", &Resonance::kind)
        .def_readonly("q_estimate", &Resonance::q_estimate)
        .def("__repr__", [](const Resonance& r) {
            return std::string("<Resonance ") + (r.kind == ResonanceKind::zero ? "zero " : "pole ") +
                   format_number(r.freq) + " Hz>";
        });

    py::class_<PumpState>(m, "PumpState")
        .def_readwrite("v_p0", &PumpState::v_p0)
        .def_readwrite("f_pump", &PumpState::f_pump)
        .def_readwrite("beta2_d", &PumpState::beta2_d);

    py::class_<NltlSpec>(m, "NltlSpec")
        .def(py::init<>())
        .def_readwrite("beta1_d", &NltlSpec::beta1_d)
        .def_readwrite("beta2_d", &NltlSpec::beta2_d)
        .def_readwrite("alpha2_d", &NltlSpec::alpha2_d)
        .def_readwrite("k_nl", &NltlSpec::k_nl)
        .def_readwrite("d", &NltlSpec::d);

    py::class_<CoupledLineSpec>(m, "CoupledLineSpec")
        .def(py::init<>())
        .def_readwrite("z_even", &CoupledLineSpec::z_even)
        .def_readwrite("z_odd", &CoupledLineSpec::z_odd)
        .def_readwrite("f_design", &CoupledLineSpec::f_design);

    py::class_<SimSettings>(m, "SimSettings")
        .def(py::init<>())
        .def_readwrite("steps_per_cycle", &SimSettings::steps_per_cycle)
        .def_readwrite("cycles", &SimSettings::cycles)
        .def_readwrite("seed_voltage", &SimSettings::seed_voltage)
        .def_readwrite("newton_tol", &SimSettings::newton_tol)
        .def_readwrite("threads", &SimSettings::threads);

    py::class_<OperatingPoint>(m, "OperatingPoint")
        .def_readonly("f_in", &OperatingPoint::f_in)
        .def_readonly("p_in_dbm", &OperatingPoint::p_in_dbm)
        .def_readonly("f_out", &OperatingPoint::f_out)
        .def_readonly("p_out_dbm", &OperatingPoint::p_out_dbm)
        .def_readonly("p_feedthrough_dbm", &OperatingPoint::p_feedthrough_dbm)
        .def_readonly("noise_floor_dbm", &OperatingPoint::noise_floor_dbm)
        .def_readonly("detected", &OperatingPoint::detected);

    py::class_<SweepResult>(m, "SweepResult")
        .def_readonly("points", &SweepResult::points)
        .def_readonly("p_th_dbm", &SweepResult::p_th_dbm)
        .def_readonly("p_sat_dbm", &SweepResult::p_sat_dbm)
        .def_readonly("conversion_loss_db", &SweepResult::conversion_loss_db);

    py::class_<FrequencyResponse>(m, "FrequencyResponse")
        .def_readonly("points", &FrequencyResponse::points)
        .def_readonly("bandwidth_hz", &FrequencyResponse::bandwidth_hz)
        .def_readonly("f_peak", &FrequencyResponse::f_peak)
        .def_readonly("p_peak_dbm", &FrequencyResponse::p_peak_dbm);

    py::class_<VarianceResult>(m, "VarianceResult")
        .def_readonly("single_band", &VarianceResult::single_band)
        .def_readonly("dual_band", &VarianceResult::dual_band);

    py::enum_<DriveMode>(m, "DriveMode")
        .value("divider", DriveMode::divider)
        .value("doubler", DriveMode::doubler);

    py::class_<ScenarioConfig>(m, "ScenarioConfig")
        .def_readwrite("ports", &ScenarioConfig::ports)
        .def_readwrite("sim", &ScenarioConfig::sim)
        .def_readonly("line_from_anchors", &ScenarioConfig::line_from_anchors)
        .def("resolved_ring", &ScenarioConfig::resolved_ring);

    m.def("capacitance", &capacitance, py::arg("v"), py::arg("varactor"));
    m.def("taylor_coefficients", &taylor_coefficients, py::arg("varactor"));
    m.def("calibrate_line", &calibrate_line, py::arg("anchors"), py::arg("c0"), py::arg("d"));
    m.def("loaded_phase", &loaded_phase, py::arg("f"), py::arg("cell"));
    m.def("cutoff_frequency", &cutoff_frequency, py::arg("cell"));
    m.def("ring_input_impedance", &ring_input_impedance, py::arg("f"), py::arg("ring"));
    m.def("find_resonances", &find_resonances, py::arg("ring"), py::arg("f_lo"), py::arg("f_hi"));
    m.def("make_pump_state", &make_pump_state, py::arg("ring"), py::arg("v_p0"), py::arg("f_pump"));
    m.def("node_pump_amplitude", &node_pump_amplitude, py::arg("n"), py::arg("pump"));
    m.def("optimal_stage_count", &optimal_stage_count, py::arg("spec"), py::arg("n_max"));
    m.def("rejection_estimate", &rejection_estimate, py::arg("f"), py::arg("spec"), py::arg("z_ref") = 50.0,
          py::arg("stopband_db") = 40.0);
    m.def("passband_edges", [](const CoupledLineSpec& s) {
        const PassbandEdges e = passband_edges(s);
        return py::make_tuple(e.theta_lo, e.theta_hi);
    });

    m.def("run_point", [](const RingSpec& ring, const PortPair& ports, DriveMode mode, double f_in, double p_in,
                          const SimSettings& s) { return run_point(ring, ports, mode, f_in, p_in, s); },
          py::arg("ring"), py::arg("ports"), py::arg("mode"), py::arg("f_in"), py::arg("p_in_dbm"),
          py::arg("settings") = SimSettings{}, release());
    m.def("power_grid", &power_grid, py::arg("p_lo"), py::arg("p_hi"), py::arg("step"));
    m.def("divider_sweep", &divider_sweep, py::arg("ring"), py::arg("ports"), py::arg("f_in"), py::arg("p_in_dbm"),
          py::arg("settings") = SimSettings{}, release());
    m.def("doubler_sweep", &doubler_sweep, py::arg("ring"), py::arg("ports"), py::arg("f_in"), py::arg("p_in_dbm"),
          py::arg("settings") = SimSettings{}, release());
    m.def("output_slope", &output_slope, py::arg("sweep"), py::arg("lo"), py::arg("hi"));
    m.def("frequency_response", &frequency_response, py::arg("ring"), py::arg("ports"), py::arg("mode"),
          py::arg("p_in_dbm"), py::arg("f_center"), py::arg("span"), py::arg("points"),
          py::arg("settings") = SimSettings{}, release());
    m.def("monte_carlo_variance",
          [](double f_base, int n_paths, int trials, std::uint64_t seed, int threads) {
              return monte_carlo_variance(f_base, n_paths, trials, seed, ChannelModel{}, threads);
          },
          py::arg("f_base"), py::arg("n_paths"), py::arg("trials"), py::arg("seed"), py::arg("threads") = 1,
          release());

    m.def("parse_config", [](const std::string& text) { return parse_config_text(text); }, py::arg("text"));
    m.def("emit_config", &emit_config, py::arg("config"));
    m.def("_run_command", [](const std::string& name, const std::string& config, const std::string& figure,
                             const py::dict& knobs) {
        const CommandRequest req = make_request(name, config, figure, knobs);
        CommandOutput out;
        {
            py::gil_scoped_release unlocked;
            out = run_command(req);
        }
        py::dict files;
        for (const auto& f : out.files) files[py::str(f.name)] = py::str(f.content);
        return files;
    });
}
