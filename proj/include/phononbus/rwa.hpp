#pragma once
#include <complex>
#include <string>
#include "phononbus/units.hpp"

namespace pbus::rwa {

// single-excitation rotating-wave model of one junction two-level system
// exchanging a quantum with one resonator mode
struct RwaParams {
    double g = 0;       // interaction energy, rad/ns
    double x01 = 0;     // off-diagonal junction dipole element
    double omega_d = 0; // detuning omega0 - dE, rad/ns
};

struct RabiFrequencies {
    double on_resonance = 0; // Omega(0) = 2 g x01
    double detuned = 0;      // Omega = sqrt(Omega(0)^2 + omega_d^2)
    double period_ns = 0;    // 2 pi / Omega
};

RabiFrequencies rabi_frequency(const RwaParams& p);

// amplitudes over {|00>, |01>, |10>, |11>} = |junction, phonon>
struct Amplitudes {
    std::complex<double> c00, c01, c10, c11;
};

// closed-form solution for the initial state (alpha|0> + beta|1>)_J (x) |0>_res,
// in the interaction representation
Amplitudes rwa_amplitudes(std::complex<double> alpha, std::complex<double> beta,
                          const RwaParams& p, double t_ns);

enum class Operation {
    entangle_plus,                // Omega dt = pi/2
    swap,                         // pi
    entangle_minus,               // 3 pi/2
    retrieve_or_transfer_general, // 3 pi
    transfer_pure_excitation      // pi
};

Operation operation_from_string(const std::string& name);
const char* to_string(Operation op);

double pulse_plan(Operation op);                          // phase Omega * dt
double pulse_duration(Operation op, double omega_rabi);   // ns

// RF bias drive s(t) = s + s_rf cos(w_rf t) acting on a held junction
struct DriveParams {
    double s_rf = 0;
    double omega_rf = 0; // rad/ns
};
// dE = junction splitting e1 - e0 (rad/ns), EJ in rad/ns
double rf_rabi_frequency(const DriveParams& d, double x01, double EJ, double dE);

} // namespace pbus::rwa
