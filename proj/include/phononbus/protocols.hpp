#pragma once
#include <complex>
#include <string>
#include <vector>
#include <Eigen/Dense>
#include "phononbus/dynamics.hpp"
#include "phononbus/junction.hpp"
#include "phononbus/rwa.hpp"
#include "phononbus/units.hpp"

namespace pbus::protocols {

enum class RampKind { trapezoid, gaussian, arctangent };

RampKind ramp_from_string(const std::string& name);
const char* to_string(RampKind r);

// bias value and Rabi arithmetic at the junction-resonator resonance
struct ResonanceInfo {
    double s_star = 0;        // exact resonant bias
    double s_harmonic = 0;    // closed-form estimate
    double x01 = 0;           // dipole element at s_star
    double omega_rabi = 0;    // Omega(0) = 2 g x01, rad/ns
    double period_ns = 0;     // 2 pi / Omega(0)
};
ResonanceInfo resonance_info(const junction::JunctionParams& p, double omega0, double g);

struct ProtocolSpec {
    junction::JunctionParams junction_params; // identical junctions
    double omega0 = 0;                        // resonator frequency, rad/ns
    double g = 0;                             // per-junction interaction energy, rad/ns

    std::complex<double> alpha{0, 0}, beta{1, 0}; // initial qubit state
    Eigen::VectorXcd initial_amplitudes;          // optional full-state override

    double s_off = 0.40;       // off-resonant hold bias (0.180 suits equator states)
    RampKind ramp = RampKind::trapezoid;
    double crossover_ns = 1.0;
    double pre_hold_ns = 5.0;  // initial hold duration
    double gap_ns = 1.0;       // spacing after ramps / between windows
    double window_override_ns = -1; // replaces the planned window length when >= 0
    // second resonance window for transfer (pi pure / 3 pi general) and
    // entangle (pi -> minus Bell state, 3 pi -> plus Bell state)
    rwa::Operation second_window = rwa::Operation::transfer_pure_excitation;

    int junction_levels = 4, phonon_levels = 4;
    dynamics::IntegratorConfig integrator;
};

struct FidelityReport {
    std::vector<std::string> labels;
    Eigen::VectorXcd final_amplitudes; // interaction representation
    Eigen::VectorXcd target;
    double fidelity = 0;               // |<target|psi>|^2
    std::vector<double> occupations;   // |c_a|^2
    double leakage = 0;                // final probability outside m,n <= 1
    double max_leakage = 0;            // max over sampled trajectory
    double norm_drift = 0;
    double wall_seconds = 0;

    ResonanceInfo resonance;
    std::vector<std::pair<double, double>> windows; // absolute window intervals, ns
    dynamics::Trajectory trajectory;

    double occupation(const std::string& label) const;
};

// hold at s_off -> ramp to s_star -> swap window (pi) -> ramp off
FidelityReport storage(const ProtocolSpec& spec);
// resonator state back onto the junction; window from spec.second_window
// (3 pi general, pi for a pure |1> where the phase is irrelevant)
FidelityReport retrieve(const ProtocolSpec& spec);
// two junctions: J1 window pi, then J2 window per spec.second_window
FidelityReport transfer(const ProtocolSpec& spec);
// two junctions: J1 window pi/2, then J2 window pi (or 3 pi for the + Bell state)
FidelityReport entangle(const ProtocolSpec& spec);

} // namespace pbus::protocols
