#pragma once
#include <complex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "phononbus/dynamics.hpp"
#include "phononbus/junction.hpp"
#include "phononbus/protocols.hpp"
#include "phononbus/resonator.hpp"
#include "phononbus/units.hpp"

namespace pbus::config {

// parse one "value unit" string (e.g. "21 uA", "15 GHz") into internal units:
// current -> uA, capacitance -> pF, energy -> rad/ns, frequency -> rad/ns (angular),
// length -> m, time -> ns, dt -> fs, temperature -> K
double parse_quantity(const std::string& text, const std::string& dimension);

struct ResonatorConfig {
    resonator::ResonatorParams params; // thickness always resolved
    bool from_frequency = false;       // thickness was derived from a requested frequency
    double frequency_GHz = 0;
    resonator::Gate gate = resonator::Gate::full;
    double temperature_K = -1; // < 0 means unspecified
};

double resonator_omega0(const ResonatorConfig& rc); // rad/ns
double resonator_g(const ResonatorConfig& rc);      // per junction, rad/ns

struct LevelsConfig {
    int junction = 4;
    int phonon = 4;
};

struct InitialState {
    bool has_qubit = false; // alpha/beta form
    std::complex<double> alpha{0, 0}, beta{1, 0};
    // explicit amplitudes by basis label, normalized on use
    std::vector<std::pair<std::string, std::complex<double>>> amplitudes;
};

struct Scenario {
    std::string kind; // spectrum | simulate | protocol | sweep

    junction::JunctionParams junction{};
    bool junction_as_energies = false;

    // spectrum
    std::vector<double> bias_grid;
    int spectrum_levels = 4;

    // devices
    std::optional<ResonatorConfig> resonator;
    int num_junctions = 1;

    // simulate / sweep
    std::optional<dynamics::BiasSchedule> schedule;
    InitialState initial;

    LevelsConfig levels;
    dynamics::IntegratorConfig integrator;

    // protocol
    std::string protocol; // storage | retrieve | transfer | entangle
    double s_off = 0.40;
    protocols::RampKind ramp = protocols::RampKind::trapezoid;
    double crossover_ns = 1.0;
    double pre_hold_ns = 5.0;
    double gap_ns = 1.0;
    double window_override_ns = -1;
    std::string second_window; // empty = protocol default

    // sweep
    std::vector<double> steps_fs;
};

Scenario parse_string(const std::string& text);
Scenario parse_file(const std::string& path);
std::string serialize(const Scenario& sc); // canonical form; parse(serialize(x)) == x

protocols::ProtocolSpec to_protocol_spec(const Scenario& sc);

struct SimulationSetup {
    dynamics::CoupledSystem system;
    dynamics::BiasSchedule schedule;
    Eigen::VectorXcd c0;
    dynamics::IntegratorConfig integrator;
};
SimulationSetup to_simulation(const Scenario& sc);

} // namespace pbus::config
