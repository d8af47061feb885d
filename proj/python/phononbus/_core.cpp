// python bindings for the junction/resonator simulator core
#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "phononbus/composite.hpp"
#include "phononbus/config.hpp"
#include "phononbus/dynamics.hpp"
#include "phononbus/junction.hpp"
#include "phononbus/protocols.hpp"
#include "phononbus/resonator.hpp"
#include "phononbus/rwa.hpp"
#include "phononbus/units.hpp"

namespace py = pybind11;
using namespace pbus;

namespace {

resonator::Gate gate_from_string(const std::string& name) {
    if (name == "full") return resonator::Gate::full;
    if (name == "split") return resonator::Gate::split;
    throw DomainError("gate must be 'full' or 'split'");
}

py::dict resonance_dict(const protocols::ResonanceInfo& info) {
    py::dict d;
    d["s_star"] = info.s_star;
    d["s_harmonic"] = info.s_harmonic;
    d["x01"] = info.x01;
    d["omega_rabi"] = info.omega_rabi;
    d["period_ns"] = info.period_ns;
    return d;
}

py::dict report_dict(const protocols::FidelityReport& rep) {
    py::dict d;
    d["fidelity"] = rep.fidelity;
    d["norm_drift"] = rep.norm_drift;
    d["leakage"] = rep.leakage;
    d["max_leakage"] = rep.max_leakage;
    py::dict occ, fin;
    for (size_t a = 0; a < rep.labels.size(); ++a) {
        occ[py::str(rep.labels[a])] = rep.occupations[a];
        fin[py::str(rep.labels[a])] = rep.final_amplitudes[static_cast<int>(a)];
    }
    d["occupations"] = occ;
    d["final_amplitudes"] = fin;
    d["resonance"] = resonance_dict(rep.resonance);
    d["windows_ns"] = rep.windows;
    return d;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "coupled josephson-junction / acoustic-resonator simulator";

    // unit constants: values are in internal units (energy and frequency rad/ns)
    m.attr("ueV") = ueV;
    m.attr("meV") = meV;
    m.attr("neV") = neV;
    m.attr("GHz") = GHz;

    py::register_exception<Error>(m, "SimulatorError");

    py::class_<junction::JunctionParams>(m, "JunctionParams")
        .def_static("from_device", &junction::JunctionParams::from_device,
                    py::arg("critical_current_uA"), py::arg("capacitance_pF"))
        .def_static("from_energies", &junction::JunctionParams::from_energies,
                    py::arg("EJ_radns"), py::arg("Ec_radns"))
        .def_readonly("critical_current_uA", &junction::JunctionParams::critical_current_uA)
        .def_readonly("capacitance_pF", &junction::JunctionParams::capacitance_pF)
        .def_readonly("EJ", &junction::JunctionParams::EJ)
        .def_readonly("Ec", &junction::JunctionParams::Ec)
        .def_readonly("ratio_warning", &junction::JunctionParams::ratio_warning);

    m.def("plasma_frequency", &junction::plasma_frequency, py::arg("params"), py::arg("s"));
    m.def("barrier_height", &junction::barrier_height, py::arg("params"), py::arg("s"));

    m.def(
        "diagonalize",
        [](const junction::JunctionParams& p, double s, int basis, bool with_dds) {
            junction::BasisPolicy pol;
            pol.explicit_count = basis;
            pol.with_dds = with_dds;
            const auto spec = junction::diagonalize(p, s, pol);
            py::dict d;
            d["s"] = spec.s;
            d["energies"] = spec.energies;
            d["dipole"] = spec.dipole;
            if (with_dds) d["dds"] = spec.dds;
            d["omega_p"] = spec.omega_p;
            d["length"] = spec.length;
            d["basis_size"] = spec.basis_size;
            d["states_below_barrier"] = spec.states_below_barrier;
            return d;
        },
        py::arg("params"), py::arg("s"), py::arg("basis") = 0, py::arg("with_dds") = false,
        "tilted-well eigenvalues (rad/ns) and dipole matrix at bias s");

    py::class_<resonator::ResonatorParams>(m, "ResonatorParams")
        .def_static("aln", &resonator::ResonatorParams::aln, py::arg("radius_um"),
                    py::arg("thickness_nm"))
        .def_static("aln_with_frequency", &resonator::ResonatorParams::aln_with_frequency,
                    py::arg("radius_um"), py::arg("f0_GHz"))
        .def_readonly("radius_um", &resonator::ResonatorParams::radius_um)
        .def_readonly("thickness_nm", &resonator::ResonatorParams::thickness_nm);

    m.def(
        "resonator_derive",
        [](const resonator::ResonatorParams& p) {
            const auto d = resonator::derive(p);
            py::dict out;
            out["omega0"] = d.omega0;
            out["C_res_fF"] = d.C_res_fF;
            out["C_tilde_fF"] = d.C_tilde_fF;
            out["g_full_gate"] = d.g_full_gate;
            out["mass_kg"] = d.mass;
            return out;
        },
        py::arg("params"), "mode frequency, capacitances, and interaction energy");

    m.def(
        "coupling_strength",
        [](const resonator::ResonatorParams& p, const std::string& gate) {
            return resonator::coupling_strength(p, gate_from_string(gate));
        },
        py::arg("params"), py::arg("gate") = "full");

    m.def(
        "thermal_excited_probability",
        [](double omega0, double T_K) {
            const auto th = resonator::thermal_excited_probability(omega0, T_K);
            py::dict d;
            d["p1"] = th.p1;
            d["n_bose"] = th.n_bose;
            return d;
        },
        py::arg("omega0_radns"), py::arg("T_K"));

    m.def(
        "resonant_bias",
        [](const junction::JunctionParams& p, double omega0) {
            const auto b = composite::resonant_bias(p, omega0);
            py::dict d;
            d["s_exact"] = b.s_exact;
            d["s_harmonic"] = b.s_harmonic;
            return d;
        },
        py::arg("params"), py::arg("omega0_radns"));

    m.def(
        "resonance_info",
        [](const junction::JunctionParams& p, double omega0, double g) {
            return resonance_dict(protocols::resonance_info(p, omega0, g));
        },
        py::arg("params"), py::arg("omega0_radns"), py::arg("g_radns"));

    m.def(
        "rabi_frequency",
        [](double g, double x01, double omega_d) {
            const auto r = rwa::rabi_frequency({g, x01, omega_d});
            py::dict d;
            d["on_resonance"] = r.on_resonance;
            d["detuned"] = r.detuned;
            d["period_ns"] = r.period_ns;
            return d;
        },
        py::arg("g"), py::arg("x01"), py::arg("omega_d") = 0.0);

    m.def(
        "rwa_amplitudes",
        [](std::complex<double> alpha, std::complex<double> beta, double g, double x01,
           double omega_d, double t_ns) {
            const auto a = rwa::rwa_amplitudes(alpha, beta, {g, x01, omega_d}, t_ns);
            py::dict d;
            d["c00"] = a.c00;
            d["c01"] = a.c01;
            d["c10"] = a.c10;
            d["c11"] = a.c11;
            return d;
        },
        py::arg("alpha"), py::arg("beta"), py::arg("g"), py::arg("x01"),
        py::arg("omega_d") = 0.0, py::arg("t_ns") = 0.0,
        "closed-form single-quantum exchange amplitudes");

    m.def(
        "pulse_phase",
        [](const std::string& op) { return rwa::pulse_plan(rwa::operation_from_string(op)); },
        py::arg("operation"));

    m.def(
        "canonical_config",
        [](const std::string& text) { return config::serialize(config::parse_string(text)); },
        py::arg("text"), "parse a config and return its canonical serialization");

    m.def(
        "simulate_config",
        [](const std::string& text, double dt_fs) {
            const auto sc = config::parse_string(text);
            auto setup = config::to_simulation(sc);
            if (dt_fs > 0) setup.integrator.dt_fs = dt_fs;
            const auto tr =
                dynamics::integrate(setup.system, setup.schedule, setup.c0, setup.integrator);
            py::dict d;
            d["duration_ns"] = tr.duration_ns;
            d["rows"] = tr.rows();
            d["norm_drift"] = tr.norm_drift;
            py::dict fin;
            for (size_t a = 0; a < tr.labels.size(); ++a)
                fin[py::str(tr.labels[a])] = tr.final_c[static_cast<int>(a)];
            d["final_amplitudes"] = fin;
            d["t_ns"] = tr.t;
            d["norm"] = tr.norm;
            return d;
        },
        py::arg("text"), py::arg("dt_fs") = 0.0,
        "run a 'simulate' config and return the trajectory summary");

    m.def(
        "protocol_config",
        [](const std::string& text) {
            const auto sc = config::parse_string(text);
            const auto spec = config::to_protocol_spec(sc);
            protocols::FidelityReport rep;
            if (sc.protocol == "storage")
                rep = protocols::storage(spec);
            else if (sc.protocol == "retrieve")
                rep = protocols::retrieve(spec);
            else if (sc.protocol == "transfer")
                rep = protocols::transfer(spec);
            else
                rep = protocols::entangle(spec);
            return report_dict(rep);
        },
        py::arg("text"), "run a 'protocol' config and return the fidelity report");
}
