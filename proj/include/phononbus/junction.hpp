#pragma once
#include <Eigen/Dense>
#include "phononbus/units.hpp"

namespace pbus::junction {

struct JunctionParams {
    double critical_current_uA = 0; // 0 when constructed from energies directly
    double capacitance_pF = 0;
    double EJ = 0; // josephson energy, rad/ns
    double Ec = 0; // charging energy (2e)^2/2C, rad/ns
    bool ratio_warning = false; // set when Ec/EJ > 1e-3

    static JunctionParams from_device(double I0_uA, double C_pF);
    static JunctionParams from_energies(double EJ_radns, double Ec_radns);
};

// washboard potential u(delta) = -EJ(cos delta + s delta), rad/ns
double potential(const JunctionParams& p, double s, double delta);

// barrier height dU = 2 EJ [sqrt(1-s^2) - s acos s]
double barrier_height(const JunctionParams& p, double s);

// cubic-limit asymptote (4 sqrt2 / 3) EJ (1-s)^{3/2}
double barrier_height_cubic(const JunctionParams& p, double s);

double delta_min(double s); // arcsin s
double delta_max(double s); // pi - arcsin s

// omega_p = sqrt(2 Ec EJ) (1-s^2)^{1/4}, rad/ns (hbar = 1)
double plasma_frequency(const JunctionParams& p, double s);
double plasma_frequency0(const JunctionParams& p);

// dimensionless oscillator length l_s = (2Ec/EJ)^{1/4} (1-s^2)^{-1/8}
double length_scale(const JunctionParams& p, double s);
double length_scale_derivative(const JunctionParams& p, double s); // dl/ds = s l / 4(1-s^2)

struct BasisPolicy {
    int explicit_count = 0;  // 0 selects the below-barrier rule, else >= 8
    bool with_dds = false;   // fill JunctionSpectrum::dds (extra eigensolves)
    int dds_levels = 4;
};

struct JunctionSpectrum {
    double s = 0;
    Eigen::VectorXd energies;  // relative to u(delta_min), rad/ns
    Eigen::MatrixXd dipole;    // x_{mm'} = <m|delta|m'>, dimensionless
    Eigen::MatrixXd dds;       // <m|d/ds|m'> for the lowest levels (finite difference)
    double omega_p = 0;
    double length = 0;   // l_s
    double dmin = 0;     // delta_min
    int basis_size = 0;
    int states_below_barrier = 0;
};

// oscillator-basis diagonalization. basis count: all states with harmonic-basis
// energy expectation below the barrier top (minimum 8), or an explicit count.
// throws ConvergenceError when fewer than 4 eigenstates sit below the barrier.
JunctionSpectrum diagonalize(const JunctionParams& p, double s, BasisPolicy policy = {});

enum class DdsMethod { analytic_harmonic, finite_difference };

// nonadiabatic matrix <m|d/ds|m'> for the lowest `levels` states.
// finite_difference: central differences of sign-fixed eigenvectors, adaptive step
// (default 1e-5, halved until change < 1e-6); basis_count 0 = below-barrier rule.
// analytic_harmonic: closed form, bands at |m-m'| = 1 (center drift) and 2 (breathing).
Eigen::MatrixXd dds_matrix(const JunctionParams& p, double s, DdsMethod method,
                           int levels = 4, int basis_count = 0);

// internal pieces exposed for tests
namespace detail {
// harmonic-basis diagonal <phi_m|H|phi_m> in closed form (laguerre recurrence)
Eigen::VectorXd ho_diagonal(const JunctionParams& p, double s, int count);
// below-barrier basis count
int basis_count(const JunctionParams& p, double s);
// H and dipole in the oscillator basis (gauss-hermite quadrature, 2K+8 nodes)
void build_matrices(const JunctionParams& p, double s, int K,
                    Eigen::MatrixXd& H, Eigen::MatrixXd& X);
} // namespace detail

} // namespace pbus::junction
