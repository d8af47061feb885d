#include "phononbus/resonator.hpp"
#include <cmath>

namespace pbus::resonator {

namespace {
constexpr double aln_density = 3260.0;   // kg/m^3
constexpr double aln_dielectric = 10.7;  // ratio to eps0
constexpr double aln_stiffness = 395.0;  // GPa
constexpr double aln_piezo = 1.46;       // C/m^2

void check_geometry(double R_um, double b_nm) {
    if (R_um <= 0 || b_nm <= 0)
        throw DomainError("resonator radius and thickness must be positive");
}
} // namespace

ResonatorParams ResonatorParams::aln(double radius_um, double thickness_nm) {
    check_geometry(radius_um, thickness_nm);
    ResonatorParams p;
    p.density = aln_density;
    p.dielectric_rel = aln_dielectric;
    p.stiffness_GPa = aln_stiffness;
    p.piezo_modulus = aln_piezo;
    p.radius_um = radius_um;
    p.thickness_nm = thickness_nm;
    return p;
}

ResonatorParams ResonatorParams::aln_with_frequency(double radius_um, double f0_GHz) {
    if (f0_GHz <= 0) throw DomainError("mode frequency must be positive");
    ResonatorParams p = aln(radius_um, 1.0);
    // b = pi v / omega0
    const double omega0_SI = 2.0 * pi * f0_GHz * 1e9;
    p.thickness_nm = pi * sound_speed(p) / omega0_SI * 1e9;
    return p;
}

double piezo_efficiency(const ResonatorParams& p) {
    const double eps = p.dielectric_rel * eps0_SI;
    return p.piezo_modulus * p.piezo_modulus / (eps * p.stiffness_GPa * 1e9);
}

double enhanced_stiffness_GPa(const ResonatorParams& p) {
    return (1.0 + piezo_efficiency(p)) * p.stiffness_GPa;
}

double sound_speed(const ResonatorParams& p) {
    return std::sqrt(enhanced_stiffness_GPa(p) * 1e9 / p.density);
}

double mass_kg(const ResonatorParams& p) {
    const double R = p.radius_um * 1e-6;
    const double b = p.thickness_nm * 1e-9;
    return p.density * pi * R * R * b;
}

double dilatational_frequency(const ResonatorParams& p) {
    const double b = p.thickness_nm * 1e-9;
    return pi * sound_speed(p) / b * 1e-9; // rad/s -> rad/ns
}

Capacitances resonator_capacitance(const ResonatorParams& p) {
    const double eps = p.dielectric_rel * eps0_SI;
    const double R = p.radius_um * 1e-6;
    const double b = p.thickness_nm * 1e-9;
    const double C = eps * pi * R * R / b;
    const double gamma = piezo_efficiency(p);
    Capacitances out;
    out.C_res_fF = C * 1e15;
    out.C_tilde_fF = C / (1.0 - gamma - gamma * gamma) * 1e15;
    return out;
}

double coupling_strength(const ResonatorParams& p, Gate gate) {
    const double eps = p.dielectric_rel * eps0_SI;
    const double R = p.radius_um * 1e-6;
    const double b = p.thickness_nm * 1e-9;
    const double omega0_SI = dilatational_frequency(p) * 1e9;
    const double C_tilde = resonator_capacitance(p).C_tilde_fF * 1e-15;
    const double g_J = std::pow(hbar_SI, 1.5) * p.piezo_modulus * C_tilde *
                       std::sqrt(omega0_SI) /
                       (e_charge_SI * eps * std::sqrt(p.density * pi * R * R * b));
    const double g = g_J / hbar_SI * 1e-9; // J -> rad/ns
    return gate == Gate::split ? 0.5 * g : g;
}

ThermalOccupation thermal_excited_probability(double omega0_radns, double T_K) {
    if (T_K <= 0) throw DomainError("temperature must be positive");
    const double x = hbar_SI * (omega0_radns * 1e9) / (k_B_SI * T_K);
    ThermalOccupation out;
    out.p1 = 2.0 * std::sinh(0.5 * x) * std::exp(-1.5 * x);
    out.n_bose = 1.0 / std::expm1(x);
    return out;
}

double mode_function(int n, double z_nm, double b_nm) {
    if (n < 0) throw DomainError("mode index must be >= 0");
    if (b_nm <= 0 || z_nm < 0 || z_nm > b_nm)
        throw DomainError("position must lie within the film thickness");
    const double norm = std::sqrt((n == 0 ? 1.0 : 2.0) / b_nm);
    return norm * std::cos(n * pi * z_nm / b_nm);
}

ResonatorDerived derive(const ResonatorParams& p) {
    ResonatorDerived d;
    d.omega0 = dilatational_frequency(p);
    const Capacitances c = resonator_capacitance(p);
    d.C_res_fF = c.C_res_fF;
    d.C_tilde_fF = c.C_tilde_fF;
    d.g_full_gate = coupling_strength(p, Gate::full);
    d.mass = mass_kg(p);
    return d;
}

} // namespace pbus::resonator
