#include "phononbus/composite.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace pbus::composite {

namespace {

// strides for mixed-radix encoding, junction slots slowest, resonators fastest
void strides(const ProductBasis& b, std::vector<long>& sj, std::vector<long>& si) {
    const int J = static_cast<int>(b.junction_levels.size());
    const int I = static_cast<int>(b.phonon_cutoffs.size());
    sj.assign(J, 0);
    si.assign(I, 0);
    long acc = 1;
    for (int i = I - 1; i >= 0; --i) {
        si[i] = acc;
        acc *= b.phonon_cutoffs[i];
    }
    for (int j = J - 1; j >= 0; --j) {
        sj[j] = acc;
        acc *= b.junction_levels[j];
    }
}

} // namespace

int ProductBasis::dim() const {
    long d = 1;
    for (int m : junction_levels) d *= m;
    for (int n : phonon_cutoffs) d *= n;
    if (d <= 0 || d > (1 << 24)) throw StructuralError("product basis dimension out of range");
    return static_cast<int>(d);
}

int ProductBasis::index(const std::vector<int>& m, const std::vector<int>& n) const {
    if (m.size() != junction_levels.size() || n.size() != phonon_cutoffs.size())
        throw StructuralError("index: quantum-number count mismatch");
    std::vector<long> sj, si;
    strides(*this, sj, si);
    long idx = 0;
    for (size_t j = 0; j < m.size(); ++j) {
        if (m[j] < 0 || m[j] >= junction_levels[j]) throw StructuralError("index: junction level out of range");
        idx += m[j] * sj[j];
    }
    for (size_t i = 0; i < n.size(); ++i) {
        if (n[i] < 0 || n[i] >= phonon_cutoffs[i]) throw StructuralError("index: phonon number out of range");
        idx += n[i] * si[i];
    }
    return static_cast<int>(idx);
}

void ProductBasis::decode(int idx, std::vector<int>& m, std::vector<int>& n) const {
    const int J = static_cast<int>(junction_levels.size());
    const int I = static_cast<int>(phonon_cutoffs.size());
    m.resize(J);
    n.resize(I);
    long rem = idx;
    for (int i = I - 1; i >= 0; --i) {
        n[i] = static_cast<int>(rem % phonon_cutoffs[i]);
        rem /= phonon_cutoffs[i];
    }
    for (int j = J - 1; j >= 0; --j) {
        m[j] = static_cast<int>(rem % junction_levels[j]);
        rem /= junction_levels[j];
    }
}

std::string ProductBasis::label(int idx) const {
    std::vector<int> m, n;
    decode(idx, m, n);
    std::ostringstream os;
    bool first = true;
    for (int v : m) {
        if (!first) os << '_';
        os << v;
        first = false;
    }
    for (int v : n) {
        if (!first) os << '_';
        os << v;
        first = false;
    }
    return os.str();
}

ProductBasis ProductBasis::single(int levels, int phonons) {
    return ProductBasis{{levels}, {phonons}};
}

ProductBasis ProductBasis::pair(int levels, int phonons) {
    return ProductBasis{{levels, levels}, {phonons}};
}

void CouplingGraph::validate(int junctions, int resonators) const {
    if (g.rows() != resonators || g.cols() != junctions)
        throw StructuralError("coupling matrix shape does not match device counts");
    for (int j = 0; j < g.cols(); ++j) {
        int nonzero = 0;
        for (int i = 0; i < g.rows(); ++i)
            if (g(i, j) != 0.0) ++nonzero;
        if (nonzero != 1 && nonzero != 2)
            throw StructuralError("junction " + std::to_string(j) +
                                  " couples to " + std::to_string(nonzero) +
                                  " resonators; expected 1 (computational) or 2 (bus)");
    }
}

CouplingGraph CouplingGraph::single(double g_value) {
    CouplingGraph c;
    c.g = Eigen::MatrixXd::Constant(1, 1, g_value);
    return c;
}

CouplingGraph CouplingGraph::pair(double g_per_junction) {
    CouplingGraph c;
    c.g = Eigen::MatrixXd::Constant(1, 2, g_per_junction);
    return c;
}

Eigen::MatrixXcd InstantaneousHamiltonian::deltaH() const {
    return std::complex<double>(0.0, -1.0) * W_int.cast<std::complex<double>>();
}

Eigen::MatrixXcd InstantaneousHamiltonian::full() const {
    Eigen::MatrixXcd H = deltaH();
    H.diagonal() += E.cast<std::complex<double>>();
    return H;
}

InstantaneousHamiltonian assemble(const std::vector<junction::JunctionSpectrum>& spectra,
                                  const std::vector<double>& omega0,
                                  const CouplingGraph& graph, const ProductBasis& basis,
                                  const std::vector<double>& sdot) {
    const int J = static_cast<int>(basis.junction_levels.size());
    const int I = static_cast<int>(basis.phonon_cutoffs.size());
    if (static_cast<int>(spectra.size()) != J)
        throw StructuralError("assemble: need one junction spectrum per junction slot");
    if (static_cast<int>(omega0.size()) != I)
        throw StructuralError("assemble: need one frequency per resonator slot");
    if (!sdot.empty() && static_cast<int>(sdot.size()) != J)
        throw StructuralError("assemble: sdot must have one entry per junction");
    graph.validate(J, I);
    for (int j = 0; j < J; ++j) {
        if (spectra[j].basis_size < basis.junction_levels[j])
            throw StructuralError("assemble: junction spectrum has fewer levels than requested");
        if (!sdot.empty() && sdot[j] != 0.0 &&
            spectra[j].dds.rows() < basis.junction_levels[j])
            throw StructuralError("assemble: nonzero sdot requires dds blocks in the spectrum");
    }

    const int dim = basis.dim();
    InstantaneousHamiltonian H;
    H.basis = basis;
    H.E.setZero(dim);
    H.W_int.setZero(dim, dim);
    H.D.setZero(dim, dim);

    std::vector<long> sj, si;
    strides(basis, sj, si);

    std::vector<int> m, n;
    for (int a = 0; a < dim; ++a) {
        basis.decode(a, m, n);
        double e = 0;
        for (int j = 0; j < J; ++j) e += spectra[j].energies[m[j]];
        for (int i = 0; i < I; ++i) e += omega0[i] * n[i];
        H.E[a] = e;

        // interaction: for each coupled (resonator, junction) pair, the phonon
        // number steps by one while the junction level changes arbitrarily
        for (int i = 0; i < I; ++i) {
            for (int j = 0; j < J; ++j) {
                const double gij = graph.g(i, j);
                if (gij == 0.0) continue;
                for (int dn = -1; dn <= 1; dn += 2) {
                    const int np = n[i] + dn;
                    if (np < 0 || np >= basis.phonon_cutoffs[i]) continue;
                    // B = a - adag: B(n, n+1) = sqrt(n+1), B(n, n-1) = -sqrt(n)
                    const double B = (dn == 1) ? std::sqrt(double(np)) : -std::sqrt(double(n[i]));
                    for (int mp = 0; mp < basis.junction_levels[j]; ++mp) {
                        const long b = a + (mp - m[j]) * sj[j] + dn * si[i];
                        H.W_int(a, b) += gij * spectra[j].dipole(m[j], mp) * B;
                    }
                }
            }
        }

        if (!sdot.empty()) {
            for (int j = 0; j < J; ++j) {
                if (sdot[j] == 0.0) continue;
                for (int mp = 0; mp < basis.junction_levels[j]; ++mp) {
                    if (mp == m[j]) continue;
                    const long b = a + (mp - m[j]) * sj[j];
                    H.D(a, b) += sdot[j] * spectra[j].dds(m[j], mp);
                }
            }
        }
    }
    return H;
}

TwoLevelForms two_level_forms(const junction::JunctionSpectrum& spec, double omega0,
                              double g) {
    if (spec.basis_size < 2) throw StructuralError("two_level_forms: need at least two junction levels");
    const double e0 = spec.energies[0];
    const double e1 = spec.energies[1];
    const double dE = e1 - e0;
    const double x00 = spec.dipole(0, 0);
    const double x01 = spec.dipole(0, 1);
    const double x11 = spec.dipole(1, 1);

    TwoLevelForms out;
    out.pauli_x_error = std::abs(x00 - x11);
    out.jc_valid = std::abs(dE - omega0) <= 0.1 * omega0;
    out.doublet_splitting = 2.0 * g * x01;

    const std::complex<double> mi(0.0, -1.0);
    // basis {|m n>} = {00, 01, 10, 11}; B(n,n') = sqrt(n')d(n,n'-1) - sqrt(n)d(n,n'+1)
    auto Bn = [](int n, int np) -> double {
        if (np == n + 1) return std::sqrt(double(np));
        if (np == n - 1) return -std::sqrt(double(n));
        return 0.0;
    };

    out.matrix_form.setZero();
    out.pauli_form.setZero();
    out.jaynes_cummings.setZero();
    for (int mm = 0; mm < 2; ++mm)
        for (int nn = 0; nn < 2; ++nn) {
            const int a = 2 * mm + nn;
            out.matrix_form(a, a) = (mm == 0 ? e0 : e1) + omega0 * nn;
            const double sz = (mm == 0) ? 1.0 : -1.0;
            out.pauli_form(a, a) = -0.5 * dE * sz + omega0 * nn;
            out.jaynes_cummings(a, a) = -0.5 * dE * sz + omega0 * nn;
            for (int mp = 0; mp < 2; ++mp)
                for (int np = 0; np < 2; ++np) {
                    const int b = 2 * mp + np;
                    const double B = Bn(nn, np);
                    if (B == 0.0) continue;
                    const double x = spec.dipole(mm, mp);
                    out.matrix_form(a, b) += mi * g * x * B;
                    const double xp = (mm == mp) ? x00 : x01;
                    out.pauli_form(a, b) += mi * g * xp * B;
                }
        }
    // -i g x01 (a sigma- - adag sigma+) with sigma+ = |0><1|, sigma- = |1><0|:
    // <1 n| a sigma- |0 n+1> and <0 n+1| adag sigma+ |1 n>
    // nonzero elements in this truncation: (|10>,|01>) pair
    out.jaynes_cummings(2, 1) += mi * g * x01 * 1.0;          // a sigma-: sqrt(1)
    out.jaynes_cummings(1, 2) += mi * g * x01 * (-1.0);       // -adag sigma+
    return out;
}

ResonantBias resonant_bias(const junction::JunctionParams& p, double omega0) {
    if (omega0 <= 0) throw DomainError("resonant_bias: frequency must be positive");
    ResonantBias out;
    const double wp0 = junction::plasma_frequency0(p);
    const double r = omega0 / wp0;
    if (r >= 1.0)
        throw NotTunableError("resonator frequency exceeds the zero-bias plasma frequency");
    out.s_harmonic = std::sqrt(1.0 - r * r * r * r);

    junction::BasisPolicy pol;
    pol.explicit_count = 48;
    auto splitting = [&](double s) {
        auto sp = junction::diagonalize(p, s, pol);
        return sp.energies[1] - sp.energies[0];
    };

    double lo = 0.0;
    double flo = splitting(lo) - omega0;
    if (flo <= 0.0)
        throw NotTunableError("qubit splitting already below the resonator at zero bias");

    double hi = 0.99;
    double fhi = 0.0;
    for (;;) {
        try {
            fhi = splitting(hi) - omega0;
            break;
        } catch (const ConvergenceError&) {
            hi -= 0.005;
            if (hi < 0.5) throw NotTunableError("no usable bias range below the barrier collapse");
        }
    }
    if (fhi >= 0.0)
        throw NotTunableError("qubit splitting stays above the resonator over the tunable range");

    const double tol = 1e-6 * omega0;
    double mid = 0.5 * (lo + hi);
    for (int it = 0; it < 200; ++it) {
        mid = 0.5 * (lo + hi);
        const double fm = splitting(mid) - omega0;
        if (std::abs(fm) < tol) {
            out.s_exact = mid;
            return out;
        }
        if (fm > 0)
            lo = mid;
        else
            hi = mid;
    }
    throw ConvergenceError("resonant_bias: bisection did not reach tolerance");
}

SpectrumTable SpectrumTable::build(const junction::JunctionParams& p, double s_lo,
                                   double s_hi, int levels, double ds, int basis) {
    if (levels < 2 || levels > 16) throw DomainError("spectrum table: levels must be in [2,16]");
    if (ds <= 0) throw DomainError("spectrum table: grid step must be positive");
    s_lo = std::max(0.0, s_lo);
    s_hi = std::min(0.995, s_hi);
    if (!(s_hi > s_lo)) throw DomainError("spectrum table: empty bias range");

    SpectrumTable t;
    t.L_ = levels;
    t.ds_ = ds;
    t.lo_ = s_lo;
    t.n_ = std::max(4, static_cast<int>(std::ceil((s_hi - s_lo) / ds - 1e-12)) + 1);
    t.hi_ = t.lo_ + (t.n_ - 1) * ds;
    t.tE_.assign(static_cast<size_t>(t.n_) * levels, 0.0);
    t.tX_.assign(static_cast<size_t>(t.n_) * levels * levels, 0.0);
    t.tD_.assign(static_cast<size_t>(t.n_) * levels * levels, 0.0);

    junction::BasisPolicy pol;
    pol.explicit_count = basis;
    for (int i = 0; i < t.n_; ++i) {
        const double s = t.lo_ + i * ds;
        auto sp = junction::diagonalize(p, s, pol);
        if (sp.basis_size < levels)
            throw ConvergenceError("spectrum table: basis smaller than requested level count");
        for (int k = 0; k < levels; ++k) t.tE_[static_cast<size_t>(i) * levels + k] = sp.energies[k];
        Eigen::MatrixXd dds;
        // near s = 0 the centered finite difference has no room; the harmonic
        // closed form is exact in that limit
        if (s < 1e-4)
            dds = junction::dds_matrix(p, s, junction::DdsMethod::analytic_harmonic, levels);
        else
            dds = junction::dds_matrix(p, s, junction::DdsMethod::finite_difference, levels, basis);
        for (int a = 0; a < levels; ++a)
            for (int b = 0; b < levels; ++b) {
                t.tX_[(static_cast<size_t>(i) * levels + a) * levels + b] = sp.dipole(a, b);
                t.tD_[(static_cast<size_t>(i) * levels + a) * levels + b] = dds(a, b);
            }
    }
    return t;
}

void SpectrumTable::weights(double s, int& i0, double w[4]) const {
    if (s < lo_ - 1e-9 || s > hi_ + 1e-9)
        throw ScheduleError("bias " + std::to_string(s) + " outside tabulated range [" +
                            std::to_string(lo_) + ", " + std::to_string(hi_) + "]");
    s = std::clamp(s, lo_, hi_);
    const double u = (s - lo_) / ds_;
    int i = static_cast<int>(std::floor(u));
    i = std::clamp(i, 1, n_ - 3);
    const double tt = u - i;
    w[0] = -tt * (tt - 1.0) * (tt - 2.0) / 6.0;
    w[1] = (tt + 1.0) * (tt - 1.0) * (tt - 2.0) / 2.0;
    w[2] = -(tt + 1.0) * tt * (tt - 2.0) / 2.0;
    w[3] = (tt + 1.0) * tt * (tt - 1.0) / 6.0;
    i0 = i - 1;
}

void SpectrumTable::evaluate(double s, double* E, double* X, double* D) const {
    int i0;
    double w[4];
    weights(s, i0, w);
    const int L = L_, LL = L_ * L_;
    if (E) {
        const double *r0 = &tE_[static_cast<size_t>(i0) * L], *r1 = r0 + L, *r2 = r1 + L, *r3 = r2 + L;
        for (int k = 0; k < L; ++k) E[k] = w[0] * r0[k] + w[1] * r1[k] + w[2] * r2[k] + w[3] * r3[k];
    }
    if (X) {
        const double *r0 = &tX_[static_cast<size_t>(i0) * LL], *r1 = r0 + LL, *r2 = r1 + LL, *r3 = r2 + LL;
        for (int k = 0; k < LL; ++k) X[k] = w[0] * r0[k] + w[1] * r1[k] + w[2] * r2[k] + w[3] * r3[k];
    }
    if (D) {
        const double *r0 = &tD_[static_cast<size_t>(i0) * LL], *r1 = r0 + LL, *r2 = r1 + LL, *r3 = r2 + LL;
        for (int k = 0; k < LL; ++k) D[k] = w[0] * r0[k] + w[1] * r1[k] + w[2] * r2[k] + w[3] * r3[k];
    }
}

double SpectrumTable::energy(int m, double s) const {
    if (m < 0 || m >= L_) throw DomainError("spectrum table: level index out of range");
    std::vector<double> E(L_);
    evaluate(s, E.data(), nullptr, nullptr);
    return E[m];
}

double SpectrumTable::dipole(int i, int j, double s) const {
    if (i < 0 || i >= L_ || j < 0 || j >= L_) throw DomainError("spectrum table: level index out of range");
    std::vector<double> X(static_cast<size_t>(L_) * L_);
    evaluate(s, nullptr, X.data(), nullptr);
    return X[static_cast<size_t>(i) * L_ + j];
}

double SpectrumTable::dds(int i, int j, double s) const {
    if (i < 0 || i >= L_ || j < 0 || j >= L_) throw DomainError("spectrum table: level index out of range");
    std::vector<double> D(static_cast<size_t>(L_) * L_);
    evaluate(s, nullptr, nullptr, D.data());
    return D[static_cast<size_t>(i) * L_ + j];
}

} // namespace pbus::composite
