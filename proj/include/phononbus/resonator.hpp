#pragma once
#include "phononbus/units.hpp"

namespace pbus::resonator {

struct ResonatorParams {
    double density = 0;        // kg/m^3
    double dielectric_rel = 0; // epsilon_33 / epsilon_0
    double stiffness_GPa = 0;  // c_33
    double piezo_modulus = 0;  // e_33, C/m^2
    double radius_um = 0;
    double thickness_nm = 0;

    // aluminum nitride film with the thickness chosen directly
    static ResonatorParams aln(double radius_um, double thickness_nm);
    // aluminum nitride film with the thickness solved from a target mode frequency
    static ResonatorParams aln_with_frequency(double radius_um, double f0_GHz);
};

// gamma = e33^2 / (eps33 c33), dimensionless electromechanical efficiency
double piezo_efficiency(const ResonatorParams& p);
double enhanced_stiffness_GPa(const ResonatorParams& p); // (1 + gamma) c33
double sound_speed(const ResonatorParams& p);            // m/s
double mass_kg(const ResonatorParams& p);                // rho pi R^2 b

// fundamental thickness-mode angular frequency pi v / b, rad/ns
double dilatational_frequency(const ResonatorParams& p);

struct Capacitances {
    double C_res_fF = 0;   // eps33 pi R^2 / b
    double C_tilde_fF = 0; // C_res / (1 - gamma - gamma^2)
};
Capacitances resonator_capacitance(const ResonatorParams& p);

enum class Gate { full, split };

// junction-resonator interaction energy, rad/ns; split gates halve it per junction
double coupling_strength(const ResonatorParams& p, Gate gate);

struct ThermalOccupation {
    double p1 = 0;     // probability of the first excited phonon state
    double n_bose = 0; // bose occupation at hbar omega0
};
ThermalOccupation thermal_excited_probability(double omega0_radns, double T_K);

// thickness-mode profile f_n(z) = sqrt((2 - delta_n0)/b) cos(n pi z / b), 1/sqrt(nm)
double mode_function(int n, double z_nm, double b_nm);

struct ResonatorDerived {
    double omega0 = 0; // rad/ns
    double C_res_fF = 0;
    double C_tilde_fF = 0;
    double g_full_gate = 0; // rad/ns
    double mass = 0;        // kg
};
ResonatorDerived derive(const ResonatorParams& p);

} // namespace pbus::resonator
