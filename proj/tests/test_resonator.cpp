#include <doctest.h>

#include <cmath>

#include "phononbus/resonator.hpp"
#include "phononbus/units.hpp"

using namespace pbus;
using resonator::ResonatorParams;

TEST_SUITE("resonator") {

TEST_CASE("piezoelectric efficiency and stiffened sound speed") {
    const auto p = ResonatorParams::aln(0.23, 377.0);
    // gamma = e33^2 / (eps33 c33), dimensionless
    const double gamma = 1.46 * 1.46 / (10.7 * eps0_SI * 395e9);
    CHECK(resonator::piezo_efficiency(p) == doctest::Approx(gamma).epsilon(1e-12));
    CHECK(resonator::piezo_efficiency(p) == doctest::Approx(0.056961).epsilon(1e-4));
    CHECK(resonator::enhanced_stiffness_GPa(p) == doctest::Approx(395 * (1 + gamma)).epsilon(1e-12));
    CHECK(resonator::sound_speed(p) ==
          doctest::Approx(std::sqrt(395e9 * (1 + gamma) / 3260.0)).epsilon(1e-12));
    CHECK(resonator::sound_speed(p) == doctest::Approx(11316.7).epsilon(1e-4));
}

TEST_CASE("dilatational frequency from thickness, and the inverse") {
    const auto p = ResonatorParams::aln(0.23, 377.2228);
    CHECK(resonator::dilatational_frequency(p) / GHz == doctest::Approx(15.0).epsilon(1e-6));
    const auto q = ResonatorParams::aln_with_frequency(0.23, 15.0);
    CHECK(q.thickness_nm == doctest::Approx(377.2228).epsilon(1e-6));
    CHECK(resonator::dilatational_frequency(q) / GHz == doctest::Approx(15.0).epsilon(1e-12));
}

TEST_CASE("electrode capacitance") {
    const auto p = ResonatorParams::aln_with_frequency(0.23, 15.0);
    const auto c = resonator::resonator_capacitance(p);
    CHECK(c.C_res_fF == doctest::Approx(0.042).epsilon(0.03));
    // series-corrected value used in the coupling formula
    const double gamma = resonator::piezo_efficiency(p);
    CHECK(c.C_tilde_fF ==
          doctest::Approx(c.C_res_fF / (1 - gamma - gamma * gamma)).epsilon(1e-12));
}

TEST_CASE("interaction energy: pinned value, linearity in radius, split gate") {
    const auto p = ResonatorParams::aln_with_frequency(0.23, 15.0);
    const double g = resonator::coupling_strength(p, resonator::Gate::full);
    CHECK(g / ueV == doctest::Approx(0.62013).epsilon(1e-3));
    CHECK(resonator::coupling_strength(p, resonator::Gate::split) ==
          doctest::Approx(0.5 * g).epsilon(1e-14));

    double slope0 = 0;
    for (double R : {0.1, 0.5, 1.0, 2.3}) {
        const auto pr = ResonatorParams::aln_with_frequency(R, 15.0);
        const double slope = resonator::coupling_strength(pr, resonator::Gate::full) / ueV / R;
        if (slope0 == 0) slope0 = slope;
        CHECK(slope == doctest::Approx(slope0).epsilon(1e-9));
    }
    CHECK(slope0 == doctest::Approx(2.696).epsilon(1e-3));
}

TEST_CASE("thermal occupation of the mode") {
    const double w0 = 15.0 * GHz;
    const auto t03 = resonator::thermal_excited_probability(w0, 0.3);
    CHECK(t03.p1 == doctest::Approx(0.0825).epsilon(2e-3));
    const auto t01 = resonator::thermal_excited_probability(w0, 0.1);
    CHECK(t01.p1 == doctest::Approx(7.46e-4).epsilon(1e-2));
    // bose occupation consistent with the boltzmann ratio
    const double x = hbar_SI * (w0 * 1e9) / (k_B_SI * 0.3);
    CHECK(t03.n_bose == doctest::Approx(1.0 / (std::exp(x) - 1.0)).epsilon(1e-12));
    CHECK(t03.p1 == doctest::Approx(std::exp(-x) - std::exp(-2 * x)).epsilon(1e-12));
}

TEST_CASE("mode shapes are orthonormal and orthogonal to the uniform mode") {
    const auto p = ResonatorParams::aln_with_frequency(0.23, 15.0);
    const double b = p.thickness_nm;
    const int N = 10001;
    const double h = b / (N - 1);
    double n11 = 0, n22 = 0, n12 = 0, u1_mean = 0;
    for (int i = 0; i < N; ++i) {
        const double z = i * h;
        const double w = (i == 0 || i == N - 1) ? 0.5 : 1.0;
        const double u1 = resonator::mode_function(1, z, b);
        const double u2 = resonator::mode_function(2, z, b);
        n11 += w * u1 * u1 * h;
        n22 += w * u2 * u2 * h;
        n12 += w * u1 * u2 * h;
        u1_mean += w * u1 * h;
    }
    CHECK(n11 == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(n22 == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(std::abs(n12) < 1e-6);
    CHECK(std::abs(u1_mean) < 1e-6);
}

TEST_CASE("derived bundle is self-consistent") {
    const auto p = ResonatorParams::aln_with_frequency(0.23, 15.0);
    const auto d = resonator::derive(p);
    CHECK(d.omega0 == doctest::Approx(resonator::dilatational_frequency(p)).epsilon(1e-14));
    CHECK(d.C_res_fF == doctest::Approx(resonator::resonator_capacitance(p).C_res_fF).epsilon(1e-14));
    CHECK(d.g_full_gate ==
          doctest::Approx(resonator::coupling_strength(p, resonator::Gate::full)).epsilon(1e-14));
    // disk mass = density * pi R^2 b
    const double mass = 3260.0 * pi * 0.23e-6 * 0.23e-6 * p.thickness_nm * 1e-9;
    CHECK(d.mass == doctest::Approx(mass).epsilon(1e-12));
}

} // TEST_SUITE
