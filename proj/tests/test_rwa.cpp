#include <doctest.h>

#include <cmath>
#include <complex>

#include "phononbus/rwa.hpp"
#include "phononbus/units.hpp"

using namespace pbus;
using cplx = std::complex<double>;

TEST_SUITE("rwa") {

TEST_CASE("rabi frequencies") {
    rwa::RwaParams p{0.9422, 0.0293, 0.0};
    const auto f = rwa::rabi_frequency(p);
    CHECK(f.on_resonance == doctest::Approx(2 * 0.9422 * 0.0293).epsilon(1e-15));
    CHECK(f.detuned == doctest::Approx(f.on_resonance).epsilon(1e-15));
    CHECK(f.period_ns == doctest::Approx(2 * pi / f.on_resonance).epsilon(1e-15));

    p.omega_d = 0.1;
    const auto fd = rwa::rabi_frequency(p);
    CHECK(fd.detuned == doctest::Approx(std::hypot(fd.on_resonance, 0.1)).epsilon(1e-15));

    CHECK_THROWS_AS(rwa::rabi_frequency(rwa::RwaParams{0.0, 0.03, 0.0}), DomainError);
    CHECK_THROWS_AS(rwa::rabi_frequency(rwa::RwaParams{1.0, -0.03, 0.0}), DomainError);
}

TEST_CASE("closed-form amplitudes at the quarter points") {
    const cplx alpha(0.6, 0.0), beta(0.0, 0.8), iu(0.0, 1.0);
    rwa::RwaParams p{0.9422, 0.0293, 0.0};
    const double W0 = 2 * p.g * p.x01;

    SUBCASE("on resonance") {
        // W t = pi: full swap, the excitation moves onto the resonator
        auto a = rwa::rwa_amplitudes(alpha, beta, p, pi / W0);
        CHECK(a.c00 == alpha);
        CHECK(std::abs(a.c01 - beta) < 1e-14);
        CHECK(std::abs(a.c10) < 1e-14);
        CHECK(std::abs(a.c11) == 0.0);
        // W t = pi/2: balanced beam-splitter point
        a = rwa::rwa_amplitudes(alpha, beta, p, 0.5 * pi / W0);
        CHECK(std::abs(a.c01 - beta / std::sqrt(2.0)) < 1e-14);
        CHECK(std::abs(a.c10 - beta / std::sqrt(2.0)) < 1e-14);
        // W t = 2 pi: sign flip of the excited component
        a = rwa::rwa_amplitudes(alpha, beta, p, 2 * pi / W0);
        CHECK(std::abs(a.c10 + beta) < 1e-14);
        CHECK(std::abs(a.c01) < 1e-13);
        // W t = 4 pi: exact recurrence
        a = rwa::rwa_amplitudes(alpha, beta, p, 4 * pi / W0);
        CHECK(std::abs(a.c10 - beta) < 1e-13);
        CHECK(std::abs(a.c01) < 1e-13);
    }

    SUBCASE("detuned") {
        p.omega_d = 0.75 * W0;
        const auto f = rwa::rabi_frequency(p);
        for (double phase : {0.0, 0.5 * pi, pi, 1.5 * pi}) {
            const double t = phase / f.detuned;
            const auto a = rwa::rwa_amplitudes(alpha, beta, p, t);
            const double half = 0.5 * f.detuned * t;
            const cplx c01 = beta * (W0 / f.detuned) * std::sin(half) *
                             std::exp(iu * (0.5 * p.omega_d * t));
            const cplx c10 = beta *
                             (std::cos(half) + iu * (p.omega_d / f.detuned) * std::sin(half)) *
                             std::exp(-iu * (0.5 * p.omega_d * t));
            CHECK(std::abs(a.c01 - c01) < 1e-15);
            CHECK(std::abs(a.c10 - c10) < 1e-15);
        }
        // the swap is incomplete off resonance: floor of |c10|^2 is (wd/W)^2
        const auto a = rwa::rwa_amplitudes(alpha, beta, p, pi / f.detuned);
        const double floor = std::norm(beta) * std::pow(p.omega_d / f.detuned, 2);
        CHECK(std::norm(a.c10) == doctest::Approx(floor).epsilon(1e-12));
    }
}

TEST_CASE("probability is conserved for any detuning") {
    const cplx alpha(0.36, 0.48), beta(0.6, -0.52); // |a|^2 + |b|^2 = 1
    const double norm0 = std::norm(alpha) + std::norm(beta);
    for (double wd : {0.0, 0.013, -0.05, 0.4}) {
        rwa::RwaParams p{0.9422, 0.0293, wd};
        for (double t : {0.0, 1.7, 42.0, 113.7, 400.0}) {
            const auto a = rwa::rwa_amplitudes(alpha, beta, p, t);
            const double total =
                std::norm(a.c00) + std::norm(a.c01) + std::norm(a.c10) + std::norm(a.c11);
            CHECK(total == doctest::Approx(norm0).epsilon(1e-14));
            // the resonator excitation comes only from the qubit's excited part
            CHECK(std::norm(a.c01) + std::norm(a.c10) ==
                  doctest::Approx(std::norm(beta)).epsilon(1e-14));
        }
    }
}

TEST_CASE("pulse plan phases") {
    using rwa::Operation;
    CHECK(rwa::pulse_plan(Operation::entangle_plus) == doctest::Approx(0.5 * pi));
    CHECK(rwa::pulse_plan(Operation::swap) == doctest::Approx(pi));
    CHECK(rwa::pulse_plan(Operation::entangle_minus) == doctest::Approx(1.5 * pi));
    CHECK(rwa::pulse_plan(Operation::retrieve_or_transfer_general) == doctest::Approx(3 * pi));
    CHECK(rwa::pulse_plan(Operation::transfer_pure_excitation) == doctest::Approx(pi));
    CHECK(rwa::pulse_duration(Operation::swap, 0.0553) == doctest::Approx(pi / 0.0553));
    CHECK_THROWS_AS(rwa::pulse_duration(Operation::swap, 0.0), DomainError);

    for (const char* name : {"entangle_plus", "swap", "entangle_minus",
                             "retrieve_or_transfer_general", "transfer_pure_excitation"})
        CHECK(std::string(rwa::to_string(rwa::operation_from_string(name))) == name);
    CHECK_THROWS_AS(rwa::operation_from_string("bogus"), DomainError);
}

TEST_CASE("entangling quarter pulse makes a balanced pair") {
    rwa::RwaParams p{0.9422, 0.0293, 0.0};
    const double W0 = 2 * p.g * p.x01;
    const double t = rwa::pulse_duration(rwa::Operation::entangle_plus, W0);
    const auto a = rwa::rwa_amplitudes(0.0, 1.0, p, t);
    CHECK(std::norm(a.c01) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(std::norm(a.c10) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("rf drive rabi rate") {
    rwa::DriveParams d{1e-4, 94.2};
    const double dE = 94.25, x01 = 0.0293, EJ = 65404.6;
    CHECK(rwa::rf_rabi_frequency(d, x01, EJ, dE) ==
          doctest::Approx(std::hypot(1e-4 * x01 * EJ, 94.2 - 94.25)).epsilon(1e-15));
    // on resonance the rate is the drive amplitude term alone
    d.omega_rf = dE;
    CHECK(rwa::rf_rabi_frequency(d, x01, EJ, dE) ==
          doctest::Approx(1e-4 * x01 * EJ).epsilon(1e-15));
}

} // TEST_SUITE
