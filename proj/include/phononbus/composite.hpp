#pragma once
#include <complex>
#include <string>
#include <vector>
#include <Eigen/Dense>
#include "phononbus/junction.hpp"
#include "phononbus/units.hpp"

namespace pbus::composite {

// product basis |m1 ... mJ ; n1 ... nI> with the resonator indices varying fastest
// (the last resonator fastest of all). labels join the digits with underscores,
// e.g. "1_0" for |m=1,n=0> or "0_1_0" for |m1=0,m2=1,n=0>.
struct ProductBasis {
    std::vector<int> junction_levels; // M_J, default 4 each
    std::vector<int> phonon_cutoffs;  // N_I, default 4 each

    int dim() const;
    int index(const std::vector<int>& m, const std::vector<int>& n) const;
    void decode(int idx, std::vector<int>& m, std::vector<int>& n) const;
    std::string label(int idx) const;

    static ProductBasis single(int levels = 4, int phonons = 4);
    static ProductBasis pair(int levels = 4, int phonons = 4); // two junctions, one resonator
};

// g_{IJ} interaction energies (rad/ns), resonator I x junction J.
// every junction must couple to one resonator (computational) or two (bus).
struct CouplingGraph {
    Eigen::MatrixXd g;
    void validate(int junctions, int resonators) const;
    static CouplingGraph single(double g_value);
    static CouplingGraph pair(double g_per_junction); // both junctions on one resonator
};

// snapshot of the uncoupled-eigenbasis hamiltonian at fixed bias values.
// deltaH = -i W_int (purely imaginary, hermitian); the nonadiabatic generator
// D = sum_J <.|d/ds_J|.> sdot_J is real antisymmetric (anti-hermitian).
struct InstantaneousHamiltonian {
    ProductBasis basis;
    Eigen::VectorXd E;     // diagonal energies, rad/ns
    Eigen::MatrixXd W_int; // deltaH = -i W_int
    Eigen::MatrixXd D;     // nonadiabatic generator

    Eigen::MatrixXcd deltaH() const;
    Eigen::MatrixXcd full() const; // diag(E) + deltaH
};

// assemble the network hamiltonian from per-junction spectra and resonator
// frequencies. spectra[J].dipole must cover junction_levels[J]; dds blocks are
// taken from spectra[J].dds when any sdot is nonzero.
InstantaneousHamiltonian assemble(const std::vector<junction::JunctionSpectrum>& spectra,
                                  const std::vector<double>& omega0,
                                  const CouplingGraph& graph, const ProductBasis& basis,
                                  const std::vector<double>& sdot = {});

// two-level (m = 0,1) x two-phonon (n = 0,1) reductions, basis {00,01,10,11}
struct TwoLevelForms {
    Eigen::Matrix4cd matrix_form;     // exact dipole block
    Eigen::Matrix4cd pauli_form;      // x00 = x11 approximation
    Eigen::Matrix4cd jaynes_cummings; // rotating-wave form
    double pauli_x_error = 0;         // |x00 - x11|
    bool jc_valid = false;            // |dE - hbar w0| <= 0.1 hbar w0
    double doublet_splitting = 0;     // 2 g x01 = hbar Omega(0)
};
TwoLevelForms two_level_forms(const junction::JunctionSpectrum& spec, double omega0,
                              double g);

// bias where the qubit splitting meets the resonator, by bisection on exact
// spectra (tolerance 1e-6 relative) plus the harmonic closed form.
struct ResonantBias {
    double s_exact = 0;
    double s_harmonic = 0;
};
ResonantBias resonant_bias(const junction::JunctionParams& p, double omega0);

// dense precomputed junction spectrum vs bias for the integrator hot path:
// grid step 1e-3, fixed 48-state basis, local 4-point cubic interpolation.
class SpectrumTable {
public:
    static SpectrumTable build(const junction::JunctionParams& p, double s_lo,
                               double s_hi, int levels = 4, double ds = 1e-3,
                               int basis = 48);

    int levels() const { return L_; }
    double s_lo() const { return lo_; }
    double s_hi() const { return hi_; }

    // fill E (levels), X (levels^2, row-major), D (levels^2, row-major) at bias s
    void evaluate(double s, double* E, double* X, double* D) const;

    double energy(int m, double s) const;
    double dipole(int i, int j, double s) const;
    double dds(int i, int j, double s) const;

private:
    int L_ = 0, n_ = 0;
    double lo_ = 0, hi_ = 0, ds_ = 0;
    std::vector<double> tE_, tX_, tD_; // n x L, n x L^2, n x L^2
    void weights(double s, int& i0, double w[4]) const;
};

} // namespace pbus::composite
