#include "phononbus/rwa.hpp"

#include <cmath>

namespace pbus::rwa {

RabiFrequencies rabi_frequency(const RwaParams& p) {
    if (p.g <= 0 || p.x01 <= 0)
        throw DomainError("rabi_frequency: g and x01 must be positive");
    RabiFrequencies f;
    f.on_resonance = 2.0 * p.g * p.x01;
    f.detuned = std::hypot(f.on_resonance, p.omega_d);
    f.period_ns = 2.0 * pi / f.detuned;
    return f;
}

Amplitudes rwa_amplitudes(std::complex<double> alpha, std::complex<double> beta,
                          const RwaParams& p, double t_ns) {
    const double W0 = 2.0 * p.g * p.x01;
    const double W = std::hypot(W0, p.omega_d);
    if (W <= 0) throw DomainError("rwa_amplitudes: zero Rabi frequency");
    const double half = 0.5 * W * t_ns;
    const double c = std::cos(half), s = std::sin(half);
    const std::complex<double> i(0.0, 1.0);
    Amplitudes a;
    a.c00 = alpha;
    a.c01 = beta * (W0 / W) * s * std::exp(i * (0.5 * p.omega_d * t_ns));
    a.c10 = beta * (c + i * (p.omega_d / W) * s) * std::exp(-i * (0.5 * p.omega_d * t_ns));
    a.c11 = 0.0;
    return a;
}

Operation operation_from_string(const std::string& name) {
    if (name == "entangle_plus") return Operation::entangle_plus;
    if (name == "swap") return Operation::swap;
    if (name == "entangle_minus") return Operation::entangle_minus;
    if (name == "retrieve_or_transfer_general") return Operation::retrieve_or_transfer_general;
    if (name == "transfer_pure_excitation") return Operation::transfer_pure_excitation;
    throw DomainError("unknown pulse operation: " + name);
}

const char* to_string(Operation op) {
    switch (op) {
        case Operation::entangle_plus: return "entangle_plus";
        case Operation::swap: return "swap";
        case Operation::entangle_minus: return "entangle_minus";
        case Operation::retrieve_or_transfer_general: return "retrieve_or_transfer_general";
        case Operation::transfer_pure_excitation: return "transfer_pure_excitation";
    }
    throw DomainError("unknown pulse operation");
}

double pulse_plan(Operation op) {
    switch (op) {
        case Operation::entangle_plus: return 0.5 * pi;
        case Operation::swap: return pi;
        case Operation::entangle_minus: return 1.5 * pi;
        case Operation::retrieve_or_transfer_general: return 3.0 * pi;
        case Operation::transfer_pure_excitation: return pi;
    }
    throw DomainError("unknown pulse operation");
}

double pulse_duration(Operation op, double omega_rabi) {
    if (omega_rabi <= 0) throw DomainError("pulse_duration: Rabi frequency must be positive");
    return pulse_plan(op) / omega_rabi;
}

double rf_rabi_frequency(const DriveParams& d, double x01, double EJ, double dE) {
    return std::hypot(d.s_rf * x01 * EJ, d.omega_rf - dE);
}

} // namespace pbus::rwa
