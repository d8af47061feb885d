#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <complex>

#include "phononbus/composite.hpp"
#include "phononbus/junction.hpp"
#include "phononbus/units.hpp"

using namespace pbus;
using composite::CouplingGraph;
using composite::ProductBasis;

namespace {
junction::JunctionParams device() {
    return junction::JunctionParams::from_energies(43.05 * meV, 53.33 * neV);
}
} // namespace

TEST_SUITE("composite") {

TEST_CASE("product basis indexing, resonator index fastest") {
    const auto b = ProductBasis::single(4, 4);
    CHECK(b.dim() == 16);
    CHECK(b.index({0}, {0}) == 0);
    CHECK(b.index({0}, {1}) == 1);
    CHECK(b.index({1}, {0}) == 4);
    CHECK(b.index({3}, {3}) == 15);
    CHECK(b.label(1) == "0_1");
    CHECK(b.label(4) == "1_0");

    const auto p = ProductBasis::pair(4, 4);
    CHECK(p.dim() == 64);
    CHECK(p.index({1, 0}, {0}) == 16);
    CHECK(p.index({0, 1}, {0}) == 4);
    CHECK(p.index({0, 0}, {1}) == 1);
    CHECK(p.label(16) == "1_0_0");
    CHECK(p.label(4) == "0_1_0");

    std::vector<int> m, n;
    p.decode(21, m, n);
    CHECK(m[0] == 1);
    CHECK(m[1] == 1);
    CHECK(n[0] == 1);
}

TEST_CASE("coupling graph shape validation") {
    CHECK_NOTHROW(CouplingGraph::single(1.0).validate(1, 1));
    CHECK_NOTHROW(CouplingGraph::pair(1.0).validate(2, 1));
    CHECK_THROWS_AS(CouplingGraph::single(1.0).validate(2, 1), StructuralError);
    CouplingGraph g;
    g.g = Eigen::MatrixXd::Zero(1, 1); // junction coupled to nothing
    CHECK_THROWS_AS(g.validate(1, 1), StructuralError);
}

TEST_CASE("assembled interaction is hermitian with antisymmetric generator") {
    const auto p = device();
    junction::BasisPolicy pol;
    pol.explicit_count = 48;
    pol.with_dds = true;
    const auto spec = junction::diagonalize(p, 0.545, pol);
    const auto basis = ProductBasis::single(4, 4);
    const double w0 = 15.0 * GHz;
    const auto H = composite::assemble({spec}, {w0}, CouplingGraph::single(0.9), basis,
                                       std::vector<double>{0.05});
    CHECK(H.E.size() == 16);
    // diagonal: junction level + n * resonator quantum
    CHECK(H.E[basis.index({2}, {3})] ==
          doctest::Approx(spec.energies[2] + 3 * w0).epsilon(1e-14));
    const Eigen::MatrixXcd full = H.full();
    CHECK((full - full.adjoint()).norm() < 1e-14);
    CHECK((H.W_int + H.W_int.transpose()).norm() < 1e-12);
    // the bias-derivative block is finite-difference data: antisymmetric to fd accuracy
    CHECK((H.D + H.D.transpose()).norm() < 1e-7);

    // interaction couples only n -> n +- 1 with the signed ladder weights:
    // +sqrt(n+1) dropping a quantum (bra n, ket n+1), -sqrt(n) raising one
    const double g = 0.9;
    CHECK(H.W_int(basis.index({1}, {2}), basis.index({0}, {1})) ==
          doctest::Approx(-g * spec.dipole(0, 1) * std::sqrt(2.0)).epsilon(1e-12));
    CHECK(H.W_int(basis.index({0}, {1}), basis.index({1}, {2})) ==
          doctest::Approx(g * spec.dipole(0, 1) * std::sqrt(2.0)).epsilon(1e-12));
    CHECK(H.W_int(basis.index({0}, {0}), basis.index({1}, {1})) ==
          doctest::Approx(g * spec.dipole(0, 1)).epsilon(1e-12));
    // no coupling between equal phonon numbers
    CHECK(H.W_int(basis.index({0}, {1}), basis.index({1}, {1})) == 0.0);
}

TEST_CASE("nonadiabatic term requires the bias-derivative data") {
    const auto p = device();
    junction::BasisPolicy pol;
    pol.explicit_count = 48; // no dds
    const auto spec = junction::diagonalize(p, 0.545, pol);
    const auto basis = ProductBasis::single(4, 4);
    CHECK_THROWS_AS(composite::assemble({spec}, {15.0 * GHz}, CouplingGraph::single(0.9), basis,
                                        std::vector<double>{0.05}),
                    StructuralError);
    CHECK_NOTHROW(
        composite::assemble({spec}, {15.0 * GHz}, CouplingGraph::single(0.9), basis, std::vector<double>{0.0}));
}

TEST_CASE("a pair embeds the single-device couplings block by block") {
    const auto p = device();
    junction::BasisPolicy pol;
    pol.explicit_count = 48;
    const auto spec = junction::diagonalize(p, 0.545, pol);
    const double w0 = 15.0 * GHz;
    const double g = 0.7;

    // a junction left entirely uncoupled is a wiring mistake, not a simulation
    CouplingGraph silent;
    silent.g = Eigen::MatrixXd::Zero(1, 2);
    silent.g(0, 0) = g;
    CHECK_THROWS_AS(silent.validate(2, 1), StructuralError);

    const auto b1 = ProductBasis::single(4, 4);
    const auto H1 = composite::assemble({spec}, {w0}, CouplingGraph::single(g), b1, {});
    const auto b2 = ProductBasis::pair(4, 4);
    const auto H2 = composite::assemble({spec, spec}, {w0}, CouplingGraph::pair(g), b2, {});

    // with the second junction parked in its ground state, elements that move the
    // first junction's level match the single device exactly; elements that leave
    // it alone pick up only the parked junction's static dipole drive.
    const double x00 = spec.dipole(0, 0);
    auto ladder = [](int n, int np) {
        if (np == n + 1) return std::sqrt(n + 1.0);
        if (np == n - 1) return -std::sqrt(static_cast<double>(n));
        return 0.0;
    };
    for (int m = 0; m < 4; ++m)
        for (int n = 0; n < 4; ++n)
            for (int mp = 0; mp < 4; ++mp)
                for (int np = 0; np < 4; ++np) {
                    double expected = H1.W_int(b1.index({m}, {n}), b1.index({mp}, {np}));
                    if (m == mp) expected += g * x00 * ladder(n, np);
                    const double got =
                        H2.W_int(b2.index({m, 0}, {n}), b2.index({mp, 0}, {np}));
                    CHECK(std::abs(got - expected) < 1e-12);
                }
}

TEST_CASE("two-level reductions agree near resonance") {
    const auto p = device();
    junction::BasisPolicy pol;
    pol.explicit_count = 48;
    const auto spec = junction::diagonalize(p, 0.545, pol);
    const double w0 = 15.0 * GHz;
    const double g = 0.94;
    const auto forms = composite::two_level_forms(spec, w0, g);

    const double dE = spec.energies[1] - spec.energies[0];
    // qubit-frame diagonal: |0> at -dE/2, |1> at +dE/2
    CHECK(forms.pauli_form(0, 0).real() == doctest::Approx(-0.5 * dE).epsilon(1e-12));
    CHECK(forms.pauli_form(3, 3).real() == doctest::Approx(0.5 * dE + w0).epsilon(1e-12));
    // excitation-conserving off-diagonal block
    const std::complex<double> iu(0, 1);
    CHECK(std::abs(forms.jaynes_cummings(2, 1) - (-iu * g * spec.dipole(0, 1))) < 1e-12);
    CHECK(std::abs(forms.jaynes_cummings(1, 2) - (iu * g * spec.dipole(0, 1))) < 1e-12);
    CHECK(forms.doublet_splitting == doctest::Approx(2 * g * spec.dipole(0, 1)).epsilon(1e-12));
    CHECK(forms.jc_valid);
    // far from resonance the reduction is flagged invalid
    CHECK_FALSE(composite::two_level_forms(spec, 4.0 * w0, g).jc_valid);
}

TEST_CASE("resonant bias solves the level-spacing condition") {
    const auto p = device();
    const double w0 = 15.0 * GHz;
    const auto rb = composite::resonant_bias(p, w0);
    CHECK(rb.s_exact > 0.543);
    CHECK(rb.s_exact < 0.548);
    CHECK(std::abs(rb.s_exact - rb.s_harmonic) < 0.005);
    // the spacing really equals the mode frequency there
    junction::BasisPolicy pol;
    pol.explicit_count = 48;
    const auto spec = junction::diagonalize(p, rb.s_exact, pol);
    CHECK(spec.energies[1] - spec.energies[0] == doctest::Approx(w0).epsilon(1e-6));

    CHECK_THROWS_AS(composite::resonant_bias(p, 17.0 * GHz), NotTunableError);
    CHECK_THROWS_AS(composite::resonant_bias(p, 1.0 * GHz), NotTunableError);
}

TEST_CASE("tabulated spectra interpolate to the direct solution") {
    const auto p = device();
    const auto table = composite::SpectrumTable::build(p, 0.40, 0.60, 4);
    CHECK(table.levels() == 4);
    CHECK(table.s_lo() == doctest::Approx(0.40));
    junction::BasisPolicy pol;
    pol.explicit_count = 48;
    pol.with_dds = true;
    std::vector<double> E(4), X(16), D(16);
    for (double s : {0.4123, 0.5001, 0.5449, 0.5999}) {
        const auto direct = junction::diagonalize(p, s, pol);
        table.evaluate(s, E.data(), X.data(), D.data());
        for (int m = 0; m < 4; ++m)
            CHECK(std::abs(E[m] - direct.energies[m]) < 1e-6 * direct.omega_p);
        for (int m = 0; m < 4; ++m)
            for (int mp = 0; mp < 4; ++mp) {
                CHECK(std::abs(X[m * 4 + mp] - direct.dipole(m, mp)) < 1e-7);
                CHECK(std::abs(D[m * 4 + mp] - direct.dds(m, mp)) <
                      2e-3 * (1 + std::abs(direct.dds(m, mp))));
            }
        CHECK(table.energy(1, s) == doctest::Approx(E[1]).epsilon(1e-14));
        CHECK(table.dipole(0, 1, s) == doctest::Approx(X[1]).epsilon(1e-14));
    }
    CHECK_THROWS_AS(table.evaluate(0.65, E.data(), X.data(), D.data()), ScheduleError);
    CHECK_THROWS_AS(table.evaluate(0.35, E.data(), X.data(), D.data()), ScheduleError);
}

} // TEST_SUITE
