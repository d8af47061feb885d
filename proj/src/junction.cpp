#include "phononbus/junction.hpp"
#include <cmath>

namespace pbus::junction {

namespace {

void check_bias(double s) {
    if (!(s >= 0.0 && s < 1.0))
        throw DomainError("bias s = " + std::to_string(s) + " outside [0, 1)");
}

// sign-fix eigenvector columns in place: largest-|coeff| component positive,
// then cumulative flips so the first off-diagonal dipole band is positive.
// returns the dipole matrix in the eigenbasis.
Eigen::MatrixXd sign_fix(Eigen::MatrixXd& V, const Eigen::MatrixXd& X) {
    const int K = static_cast<int>(V.cols());
    for (int m = 0; m < K; ++m) {
        int j;
        V.col(m).cwiseAbs().maxCoeff(&j);
        if (V(j, m) < 0) V.col(m) = -V.col(m);
    }
    Eigen::MatrixXd Xe = V.transpose() * X * V;
    Eigen::VectorXd f = Eigen::VectorXd::Ones(K);
    for (int m = 1; m < K; ++m)
        f(m) = (Xe(m - 1, m) >= 0 ? f(m - 1) : -f(m - 1));
    for (int m = 0; m < K; ++m)
        if (f(m) < 0) V.col(m) = -V.col(m);
    Xe = f.asDiagonal() * Xe * f.asDiagonal();
    return Xe;
}

// gauss-hermite nodes: eigenvalues of the jacobi tridiagonal (no weights needed)
Eigen::VectorXd gh_nodes(int n) {
    Eigen::VectorXd diag = Eigen::VectorXd::Zero(n);
    Eigen::VectorXd sub(n - 1);
    for (int i = 1; i < n; ++i) sub(i - 1) = std::sqrt(0.5 * i);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    es.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
    return es.eigenvalues();
}

} // namespace

JunctionParams JunctionParams::from_device(double I0_uA, double C_pF) {
    if (I0_uA <= 0 || C_pF <= 0)
        throw DomainError("critical current and capacitance must be positive");
    JunctionParams p;
    p.critical_current_uA = I0_uA;
    p.capacitance_pF = C_pF;
    // EJ = hbar I0 / 2e, as rad/ns
    p.EJ = I0_uA * 1e-6 / (2.0 * e_charge_SI) * 1e-9;
    // Ec = (2e)^2 / 2C, as rad/ns
    p.Ec = 2.0 * e_charge_SI * e_charge_SI / (C_pF * 1e-12) / hbar_SI * 1e-9;
    p.ratio_warning = p.Ec / p.EJ > 1e-3;
    return p;
}

JunctionParams JunctionParams::from_energies(double EJ_radns, double Ec_radns) {
    if (EJ_radns <= 0 || Ec_radns <= 0)
        throw DomainError("junction energies must be positive");
    JunctionParams p;
    p.EJ = EJ_radns;
    p.Ec = Ec_radns;
    // I0 = 2e EJ/hbar ; EJ/hbar in 1/s = EJ_radns * 1e9
    p.critical_current_uA = 2.0 * e_charge_SI * p.EJ * 1e9 * 1e6;
    // C = (2e)^2 / (2 Ec) ; Ec in J = Ec_radns * 1e9 * hbar
    p.capacitance_pF = 2.0 * e_charge_SI * e_charge_SI / (p.Ec * 1e9 * hbar_SI) * 1e12;
    p.ratio_warning = p.Ec / p.EJ > 1e-3;
    return p;
}

double potential(const JunctionParams& p, double s, double delta) {
    check_bias(s);
    return -p.EJ * (std::cos(delta) + s * delta);
}

double barrier_height(const JunctionParams& p, double s) {
    check_bias(s);
    return 2.0 * p.EJ * (std::sqrt(1.0 - s * s) - s * std::acos(s));
}

double barrier_height_cubic(const JunctionParams& p, double s) {
    check_bias(s);
    return 4.0 * std::sqrt(2.0) / 3.0 * p.EJ * std::pow(1.0 - s, 1.5);
}

double delta_min(double s) {
    check_bias(s);
    return std::asin(s);
}

double delta_max(double s) {
    check_bias(s);
    return pi - std::asin(s);
}

double plasma_frequency0(const JunctionParams& p) {
    return std::sqrt(2.0 * p.Ec * p.EJ);
}

double plasma_frequency(const JunctionParams& p, double s) {
    check_bias(s);
    return plasma_frequency0(p) * std::pow(1.0 - s * s, 0.25);
}

double length_scale(const JunctionParams& p, double s) {
    check_bias(s);
    return std::pow(2.0 * p.Ec / p.EJ, 0.25) * std::pow(1.0 - s * s, -0.125);
}

double length_scale_derivative(const JunctionParams& p, double s) {
    return s * length_scale(p, s) / (4.0 * (1.0 - s * s));
}

namespace detail {

Eigen::VectorXd ho_diagonal(const JunctionParams& p, double s, int count) {
    const double l = length_scale(p, s);
    const double z = 0.5 * l * l;
    const double pref = p.EJ * std::sqrt(1.0 - s * s);
    const double damp = std::exp(-0.5 * z);
    Eigen::VectorXd diag(count);
    double L0 = 1.0, L1 = 1.0 - z;
    for (int m = 0; m < count; ++m) {
        double Lm = (m == 0) ? L0 : L1;
        diag(m) = p.Ec * (2 * m + 1) / (2.0 * l * l) + pref * (1.0 - damp * Lm);
        if (m >= 1) {
            double L2 = ((2 * m + 1 - z) * L1 - m * L0) / (m + 1);
            L0 = L1;
            L1 = L2;
        }
    }
    return diag;
}

int basis_count(const JunctionParams& p, double s) {
    const double dU = barrier_height(p, s);
    int K = 64;
    for (;;) {
        Eigen::VectorXd diag = ho_diagonal(p, s, K);
        for (int m = 0; m < K; ++m)
            if (diag(m) >= dU) return std::max(m, 8);
        K *= 2;
        if (K > (1 << 20))
            throw ConvergenceError("below-barrier basis rule did not terminate");
    }
}

void build_matrices(const JunctionParams& p, double s, int K,
                    Eigen::MatrixXd& H, Eigen::MatrixXd& X) {
    const double l = length_scale(p, s);
    const double dmin = delta_min(s);
    const int Q = 2 * K + 8;

    Eigen::VectorXd all_nodes = gh_nodes(Q);
    const double cut = std::sqrt(2.0 * K - 1.0) + 5.0;
    std::vector<double> kept;
    kept.reserve(Q);
    for (int i = 0; i < Q; ++i)
        if (std::abs(all_nodes(i)) <= cut) kept.push_back(all_nodes(i));
    const int nq = static_cast<int>(kept.size());

    // oscillator eigenfunction values psi_m(x) for m < K, plus christoffel weights
    // wt = 1/sum_{m<Q} psi_m^2. the recurrence runs in scaled form (seed e^{-x^2/2}
    // factored into logoff) so deep-tail nodes at large K never underflow to zero.
    Eigen::MatrixXd P(K, nq);
    Eigen::VectorXd wt(nq);
    const double renorm = 1e240;
    const double log_renorm = std::log(renorm);
    for (int j = 0; j < nq; ++j) {
        const double x = kept[j];
        double logoff = -0.5 * x * x;
        double f0 = std::pow(pi, -0.25);
        double f1 = std::sqrt(2.0) * x * f0;
        double sum = 0.0;
        for (int m = 0; m < Q; ++m) {
            double f = (m == 0) ? f0 : f1;
            double val;
            if (logoff > -700.0) {
                val = f * std::exp(logoff);
            } else if (f == 0.0) {
                val = 0.0;
            } else {
                double t = logoff + std::log(std::abs(f));
                val = (t > -740.0) ? std::copysign(std::exp(t), f) : 0.0;
            }
            if (m < K) P(m, j) = val;
            sum += val * val;
            if (m >= 1) {
                double f2 = x * std::sqrt(2.0 / (m + 1)) * f1 -
                            std::sqrt(m / (m + 1.0)) * f0;
                f0 = f1;
                f1 = f2;
                if (std::abs(f1) > renorm) {
                    f0 /= renorm;
                    f1 /= renorm;
                    logoff += log_renorm;
                }
            }
        }
        wt(j) = 1.0 / sum;
    }

    // potential on the quadrature grid, origin at u(delta_min)
    Eigen::VectorXd pot(nq);
    const double u0 = -p.EJ * (std::cos(dmin) + s * dmin);
    for (int j = 0; j < nq; ++j) {
        const double d = dmin + l * kept[j];
        pot(j) = -p.EJ * (std::cos(d) + s * d) - u0;
    }

    Eigen::MatrixXd PW = P;
    PW.array().rowwise() *= (wt.array() * pot.array()).transpose();
    H.noalias() = PW * P.transpose();

    // analytic kinetic part Ec p_xi^2 / l^2
    const double kpref = p.Ec / (2.0 * l * l);
    for (int k = 0; k < K; ++k) H(k, k) += kpref * (2 * k + 1);
    for (int k = 0; k + 2 < K; ++k) {
        const double off = -kpref * std::sqrt((k + 1.0) * (k + 2.0));
        H(k, k + 2) += off;
        H(k + 2, k) += off;
    }
    H = 0.5 * (H + H.transpose()).eval();

    // dipole delta = delta_min + l xi in the oscillator basis
    X = Eigen::MatrixXd::Zero(K, K);
    for (int k = 0; k < K; ++k) X(k, k) = dmin;
    for (int k = 0; k + 1 < K; ++k) {
        const double off = l * std::sqrt(0.5 * (k + 1));
        X(k, k + 1) = off;
        X(k + 1, k) = off;
    }
}

} // namespace detail

namespace {

// eigenvectors at fixed-basis bias s' = s + ds, where H(s') = H(s) - ds EJ X
Eigen::MatrixXd shifted_vectors(const Eigen::MatrixXd& H, const Eigen::MatrixXd& X,
                                double EJ, double ds) {
    Eigen::MatrixXd Hs = H - ds * EJ * X;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Hs);
    Eigen::MatrixXd V = es.eigenvectors();
    sign_fix(V, X);
    return V;
}

Eigen::MatrixXd dds_fd_once(const Eigen::MatrixXd& V0, const Eigen::MatrixXd& H,
                            const Eigen::MatrixXd& X, double EJ, double h, int levels) {
    Eigen::MatrixXd Vp = shifted_vectors(H, X, EJ, +h);
    Eigen::MatrixXd Vm = shifted_vectors(H, X, EJ, -h);
    Eigen::MatrixXd D(levels, levels);
    for (int m = 0; m < levels; ++m)
        for (int n = 0; n < levels; ++n)
            D(m, n) = V0.col(m).dot(Vp.col(n) - Vm.col(n)) / (2.0 * h);
    return D;
}

} // namespace

JunctionSpectrum diagonalize(const JunctionParams& p, double s, BasisPolicy policy) {
    check_bias(s);
    int K;
    if (policy.explicit_count > 0) {
        if (policy.explicit_count < 8)
            throw DomainError("explicit basis count must be >= 8");
        K = policy.explicit_count;
    } else {
        K = detail::basis_count(p, s);
    }

    Eigen::MatrixXd H, X;
    detail::build_matrices(p, s, K, H, X);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H);
    Eigen::VectorXd w = es.eigenvalues();
    Eigen::MatrixXd V = es.eigenvectors();

    // quasibound count: inside the well's energy window. variational states that
    // spill past the barrier pick up the downhill slope and land below u(delta_min),
    // so a plain "< dU" test would count them at extreme tilt.
    const double dU = barrier_height(p, s);
    int below = 0;
    for (int m = 0; m < K; ++m)
        if (w(m) >= 0.0 && w(m) < dU) ++below;
    if (below < 4)
        throw ConvergenceError("only " + std::to_string(below) +
                               " states below the barrier at s = " + std::to_string(s) +
                               "; junction is too shallow for a 4-level qubit model");

    // drop the spill artifacts themselves (sorted ascending, so they form a
    // prefix): index 0 must always be the well's ground state.
    int skip = 0;
    while (skip < K && w(skip) < 0.0) ++skip;
    if (skip > 0) {
        const int kept = K - skip;
        w = w.tail(kept).eval();
        V = V.rightCols(kept).eval();
    }
    Eigen::MatrixXd Xe = sign_fix(V, X);

    JunctionSpectrum spec;
    spec.s = s;
    spec.energies = w;
    spec.dipole = Xe;
    spec.omega_p = plasma_frequency(p, s);
    spec.length = length_scale(p, s);
    spec.dmin = delta_min(s);
    spec.basis_size = K;
    spec.states_below_barrier = below;

    if (policy.with_dds) {
        const int levels = std::min(policy.dds_levels, K);
        spec.dds = dds_matrix(p, s, DdsMethod::finite_difference, levels, K);
    }
    return spec;
}

Eigen::MatrixXd dds_matrix(const JunctionParams& p, double s, DdsMethod method,
                           int levels, int basis_count_in) {
    check_bias(s);
    if (levels < 1) throw DomainError("levels must be >= 1");

    if (method == DdsMethod::analytic_harmonic) {
        const double l = length_scale(p, s);
        const double c1 = 1.0 / (l * std::sqrt(1.0 - s * s));
        const double c2 = length_scale_derivative(p, s) / l;
        Eigen::MatrixXd D = Eigen::MatrixXd::Zero(levels, levels);
        for (int n = 0; n < levels; ++n) {
            if (n + 1 < levels) {
                D(n + 1, n) = c1 * std::sqrt(0.5 * (n + 1));
                D(n, n + 1) = -c1 * std::sqrt(0.5 * (n + 1));
            }
            if (n + 2 < levels) {
                D(n + 2, n) = c2 * 0.5 * std::sqrt((n + 1.0) * (n + 2.0));
                D(n, n + 2) = -c2 * 0.5 * std::sqrt((n + 1.0) * (n + 2.0));
            }
        }
        return D;
    }

    double h = 1e-5;
    if (s - h < 0.0 || s + h >= 1.0)
        throw DomainError("finite-difference step leaves the bias domain at s = " +
                          std::to_string(s));
    const int K = basis_count_in > 0 ? basis_count_in : detail::basis_count(p, s);
    if (levels > K) throw DomainError("levels exceed basis size");

    Eigen::MatrixXd H, X;
    detail::build_matrices(p, s, K, H, X);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H);
    Eigen::MatrixXd V0 = es.eigenvectors();
    sign_fix(V0, X);

    Eigen::MatrixXd D = dds_fd_once(V0, H, X, p.EJ, h, levels);
    for (int iter = 0; iter < 8; ++iter) {
        h *= 0.5;
        Eigen::MatrixXd D2 = dds_fd_once(V0, H, X, p.EJ, h, levels);
        const double change = (D2 - D).cwiseAbs().maxCoeff();
        D = D2;
        if (change < 1e-6) break;
    }
    return D;
}

} // namespace pbus::junction
