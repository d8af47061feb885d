#include <doctest.h>

#include "phononbus/units.hpp"

using namespace pbus;

TEST_SUITE("units") {

TEST_CASE("energy conversion constants derive from the physical constants") {
    // E = 1 ueV as an angular frequency: (1e-6 e)/hbar in rad/s, scaled to rad/ns
    const double expect = 1e-6 * e_charge_SI / hbar_SI * 1e-9;
    CHECK(ueV == doctest::Approx(expect).epsilon(1e-15));
    CHECK(ueV == doctest::Approx(1.5192674488).epsilon(1e-9));
    CHECK(meV == doctest::Approx(1e3 * ueV).epsilon(1e-15));
    CHECK(neV == doctest::Approx(1e-3 * ueV).epsilon(1e-15));
}

TEST_CASE("frequency conversion is angular") {
    CHECK(GHz == doctest::Approx(2 * pi).epsilon(1e-15));
    CHECK(radns_to_GHz(2 * pi) == doctest::Approx(1.0));
    CHECK(radns_to_ueV(ueV) == doctest::Approx(1.0));
}

TEST_CASE("error taxonomy") {
    // bias-domain violations and failed tuning must be catchable together
    CHECK_THROWS_AS(throw NotTunableError("x"), DomainError);
    CHECK_THROWS_AS(throw DomainError("x"), std::runtime_error);
    CHECK_THROWS_AS(throw ScheduleError("x"), std::runtime_error);
    CHECK_THROWS_AS(throw ConfigError("x"), std::runtime_error);

    const IntegrationQualityError err("drift", 1e-3, 0.5);
    CHECK(err.norm_drift == 1e-3);
    CHECK(err.suggested_dt_fs == 0.5);
}

} // TEST_SUITE
