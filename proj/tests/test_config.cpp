#include <doctest.h>

#include <cmath>
#include <string>

#include "phononbus/config.hpp"
#include "phononbus/units.hpp"

using namespace pbus;

namespace {

std::string canon(const std::string& text) {
    return config::serialize(config::parse_string(text));
}

// serialization is a fixed point: canonical text reparses to the same bytes
void check_roundtrip(const std::string& text) {
    const std::string once = canon(text);
    const std::string twice = canon(once);
    CHECK(once == twice);
}

bool throws_with(const std::string& text, const std::string& needle) {
    try {
        config::parse_string(text);
    } catch (const ConfigError& e) {
        return std::string(e.what()).find(needle) != std::string::npos;
    }
    return false;
}

const char* kSimulate = R"({
  "kind": "simulate",
  "junction": {"josephson_energy": "43.05 meV", "charging_energy": "53.33 neV"},
  "resonator": {"material": "AlN", "radius": "0.23 um", "frequency": "15 GHz"},
  "schedule": {
    "J1": [
      {"kind": "hold", "s": 0.4, "duration": "1 ns"},
      {"kind": "trapezoid", "s_to": 0.545, "crossover": "1 ns"},
      {"kind": "gaussian", "s_to": 0.4, "crossover": "0.5 ns"},
      {"kind": "arctangent", "s_to": 0.545, "crossover": "0.5 ns"},
      {"kind": "arctangent_flattop", "s_base": 0.545, "s_top": 0.56,
       "t_on": "1 ns", "t_off": "3 ns", "crossover": "0.5 ns", "duration": "5 ns"}
    ]
  },
  "initial": {"state": "1_0"},
  "levels": {"junction": 4, "phonon": 4},
  "integrator": {"dt": "2 fs", "max_rows": 400}
})";

} // namespace

TEST_SUITE("config") {

TEST_CASE("quantity strings convert to internal units") {
    CHECK(config::parse_quantity("21 uA", "current") == doctest::Approx(21.0));
    CHECK(config::parse_quantity("0.021 mA", "current") == doctest::Approx(21.0));
    CHECK(config::parse_quantity("6 pF", "capacitance") == doctest::Approx(6.0));
    CHECK(config::parse_quantity("6000 fF", "capacitance") == doctest::Approx(6.0));
    CHECK(config::parse_quantity("43.05 meV", "energy") == doctest::Approx(43.05 * meV));
    CHECK(config::parse_quantity("0.62 ueV", "energy") == doctest::Approx(0.62 * ueV));
    CHECK(config::parse_quantity("15 GHz", "frequency") == doctest::Approx(15.0 * GHz));
    CHECK(config::parse_quantity("15000 MHz", "frequency") == doctest::Approx(15.0 * GHz));
    CHECK(config::parse_quantity("0.23 um", "length") == doctest::Approx(0.23e-6));
    CHECK(config::parse_quantity("230 nm", "length") == doctest::Approx(0.23e-6));
    CHECK(config::parse_quantity("5 ns", "time") == doctest::Approx(5.0));
    CHECK(config::parse_quantity("500 ps", "time") == doctest::Approx(0.5));
    CHECK(config::parse_quantity("1 fs", "dt") == doctest::Approx(1.0));
    CHECK(config::parse_quantity("0.002 ns", "dt") == doctest::Approx(2000.0));
    CHECK(config::parse_quantity("300 mK", "temperature") == doctest::Approx(0.3));
    CHECK(config::parse_quantity("  2.5   GHz ", "frequency") == doctest::Approx(2.5 * GHz));
}

TEST_CASE("quantities without a unit are rejected") {
    CHECK_THROWS_AS(config::parse_quantity("21", "current"), ConfigError);
    CHECK_THROWS_AS(config::parse_quantity("21 furlongs", "current"), ConfigError);
    CHECK_THROWS_AS(config::parse_quantity("lots uA", "current"), ConfigError);
    CHECK_THROWS_AS(config::parse_quantity("", "current"), ConfigError);
    // a bare JSON number where a quantity is expected names the unit rule
    CHECK(throws_with(R"({"kind": "spectrum",
                          "junction": {"critical_current": 21, "capacitance": "6 pF"},
                          "bias": [0.5]})",
                      "explicit unit"));
}

TEST_CASE("unknown keys are named in the error") {
    CHECK(throws_with(R"({"kind": "spectrum",
                          "junction": {"critical_current": "21 uA", "capacitance": "6 pF"},
                          "bias": [0.5], "extra": 1})",
                      "unknown key 'extra'"));
    CHECK(throws_with(R"({"kind": "spectrum",
                          "junction": {"critical_current": "21 uA", "capacitance": "6 pF",
                                       "color": "blue"},
                          "bias": [0.5]})",
                      "unknown key 'color'"));
}

TEST_CASE("junction forms are exclusive") {
    CHECK(throws_with(R"({"kind": "spectrum",
                          "junction": {"critical_current": "21 uA", "capacitance": "6 pF",
                                       "josephson_energy": "43 meV"},
                          "bias": [0.5]})",
                      "not both"));
    const auto sc = config::parse_string(
        R"({"kind": "spectrum",
            "junction": {"critical_current": "21 uA", "capacitance": "6 pF"},
            "bias": [0.5]})");
    CHECK(sc.junction.critical_current_uA == doctest::Approx(21.0));
    CHECK(sc.junction_as_energies == false);
}

TEST_CASE("bias grids: explicit array and start/stop/step") {
    const auto a = config::parse_string(
        R"({"kind": "spectrum",
            "junction": {"critical_current": "21 uA", "capacitance": "6 pF"},
            "bias": [0.5, 0.7, 0.9], "levels": 3})");
    REQUIRE(a.bias_grid.size() == 3);
    CHECK(a.bias_grid[1] == doctest::Approx(0.7));
    CHECK(a.spectrum_levels == 3);

    const auto b = config::parse_string(
        R"({"kind": "spectrum",
            "junction": {"critical_current": "21 uA", "capacitance": "6 pF"},
            "bias": {"start": 0.1, "stop": 0.9, "step": 0.2}})");
    REQUIRE(b.bias_grid.size() == 5);
    CHECK(b.bias_grid.front() == doctest::Approx(0.1));
    CHECK(b.bias_grid.back() == doctest::Approx(0.9));

    CHECK(throws_with(R"({"kind": "spectrum",
                          "junction": {"critical_current": "21 uA", "capacitance": "6 pF"},
                          "bias": []})",
                      "empty"));
}

TEST_CASE("resonator needs exactly one of frequency or thickness") {
    const char* tmpl = R"({"kind": "protocol",
        "junction": {"josephson_energy": "43.05 meV", "charging_energy": "53.33 neV"},
        "resonator": %s,
        "protocol": "storage"})";
    auto with_res = [&](const char* res) {
        char buf[1024];
        std::snprintf(buf, sizeof buf, tmpl, res);
        return std::string(buf);
    };
    CHECK_THROWS_AS(config::parse_string(with_res(
                        R"({"material": "AlN", "radius": "0.23 um"})")),
                    ConfigError);
    CHECK_THROWS_AS(config::parse_string(with_res(
                        R"({"material": "AlN", "radius": "0.23 um",
                            "frequency": "15 GHz", "thickness": "377 nm"})")),
                    ConfigError);
    CHECK_THROWS_AS(config::parse_string(with_res(
                        R"({"material": "quartz", "radius": "0.23 um", "frequency": "15 GHz"})")),
                    ConfigError);
    const auto ok = config::parse_string(with_res(
        R"({"material": "AlN", "radius": "0.23 um", "frequency": "15 GHz", "gate": "split"})"));
    REQUIRE(ok.resonator.has_value());
    CHECK(ok.resonator->gate == resonator::Gate::split);
    CHECK(config::resonator_omega0(*ok.resonator) == doctest::Approx(15.0 * GHz).epsilon(1e-9));
    // split gate halves the interaction energy
    CHECK(config::resonator_g(*ok.resonator) == doctest::Approx(0.310 * ueV).epsilon(2e-2));
}

TEST_CASE("ramp segments inherit s_from from the previous segment") {
    const auto sc = config::parse_string(kSimulate);
    REQUIRE(sc.schedule.has_value());
    const auto& segs = sc.schedule->junctions[0];
    REQUIRE(segs.size() == 5);
    CHECK(segs[1].s_from == doctest::Approx(0.4));
    CHECK(segs[1].s_to == doctest::Approx(0.545));
    CHECK(segs[2].s_from == doctest::Approx(0.545));
    CHECK(segs[3].s_from == doctest::Approx(0.4));
    // first segment of a junction cannot inherit
    CHECK(throws_with(R"({"kind": "simulate",
        "junction": {"critical_current": "21 uA", "capacitance": "6 pF"},
        "resonator": {"material": "AlN", "radius": "0.23 um", "frequency": "15 GHz"},
        "schedule": {"J1": [{"kind": "trapezoid", "s_to": 0.5, "crossover": "1 ns"}]},
        "initial": {"state": "1_0"}})",
                      "s_from"));
}

TEST_CASE("initial state forms") {
    CHECK(throws_with(R"({"kind": "simulate",
        "junction": {"critical_current": "21 uA", "capacitance": "6 pF"},
        "resonator": {"material": "AlN", "radius": "0.23 um", "frequency": "15 GHz"},
        "schedule": {"J1": [{"kind": "hold", "s": 0.4, "duration": "1 ns"}]},
        "initial": {"alpha": [1, 0], "beta": [1, 0]}})",
                      "must equal 1"));
    CHECK(throws_with(R"({"kind": "simulate",
        "junction": {"critical_current": "21 uA", "capacitance": "6 pF"},
        "resonator": {"material": "AlN", "radius": "0.23 um", "frequency": "15 GHz"},
        "schedule": {"J1": [{"kind": "hold", "s": 0.4, "duration": "1 ns"}]},
        "initial": {"alpha": [0, 0], "beta": [1, 0], "state": "1_0"}})",
                      "exactly one"));
}

TEST_CASE("sweep requires at least two step sizes") {
    const char* tmpl = R"({"kind": "sweep",
        "junction": {"critical_current": "21 uA", "capacitance": "6 pF"},
        "resonator": {"material": "AlN", "radius": "0.23 um", "frequency": "15 GHz"},
        "schedule": {"J1": [{"kind": "hold", "s": 0.4, "duration": "1 ns"}]},
        "initial": {"state": "1_0"},
        "steps": %s})";
    char buf[1024];
    std::snprintf(buf, sizeof buf, tmpl, R"(["8 fs", "4 fs", "2 fs"])");
    const auto sc = config::parse_string(buf);
    REQUIRE(sc.steps_fs.size() == 3);
    CHECK(sc.steps_fs[0] == doctest::Approx(8.0));
    std::snprintf(buf, sizeof buf, tmpl, R"(["8 fs"])");
    CHECK_THROWS_AS(config::parse_string(buf), ConfigError);
}

TEST_CASE("protocol options parse and validate") {
    const auto sc = config::parse_string(R"({
        "kind": "protocol",
        "junction": {"josephson_energy": "43.05 meV", "charging_energy": "53.33 neV"},
        "resonator": {"material": "AlN", "radius": "0.23 um", "frequency": "15 GHz"},
        "protocol": "storage",
        "initial": {"alpha": [0, 0], "beta": [0, 1]},
        "shape": {"ramp": "arctangent", "crossover": "0.5 ns", "pre_hold": "4 ns",
                  "gap": "2 ns", "s_off": 0.18},
        "window_override": "10 ns",
        "levels": {"junction": 6, "phonon": 6}
    })");
    CHECK(sc.protocol == "storage");
    CHECK(sc.ramp == protocols::RampKind::arctangent);
    CHECK(sc.s_off == doctest::Approx(0.18));
    CHECK(sc.window_override_ns == doctest::Approx(10.0));
    const auto spec = config::to_protocol_spec(sc);
    CHECK(spec.omega0 == doctest::Approx(15.0 * GHz).epsilon(1e-9));
    CHECK(spec.g == doctest::Approx(0.620 * ueV).epsilon(2e-2));
    CHECK(spec.beta == std::complex<double>(0, 1));
    CHECK(spec.junction_levels == 6);

    CHECK(throws_with(R"({
        "kind": "protocol",
        "junction": {"josephson_energy": "43.05 meV", "charging_energy": "53.33 neV"},
        "resonator": {"material": "AlN", "radius": "0.23 um", "frequency": "15 GHz"},
        "protocol": "transfer",
        "second_window": "bogus"})",
                      "bogus"));
    CHECK(throws_with(R"({
        "kind": "protocol",
        "junction": {"josephson_energy": "43.05 meV", "charging_energy": "53.33 neV"},
        "resonator": {"material": "AlN", "radius": "0.23 um", "frequency": "15 GHz"},
        "protocol": "teleport"})",
                      "teleport"));
}

TEST_CASE("canonical serialization is a parse fixed point") {
    check_roundtrip(R"({"kind": "spectrum",
        "junction": {"critical_current": "21 uA", "capacitance": "6 pF"},
        "bias": {"start": 0.5, "stop": 0.9, "step": 0.2}, "levels": 4})");
    check_roundtrip(kSimulate);
    check_roundtrip(R"({
        "kind": "protocol",
        "junction": {"josephson_energy": "43.05 meV", "charging_energy": "53.33 neV"},
        "resonator": {"material": "AlN", "radius": "0.459 um", "frequency": "15 GHz",
                      "gate": "split", "temperature": "100 mK"},
        "protocol": "transfer",
        "initial": {"alpha": [0.70710678118654757, 0], "beta": [0, 0.70710678118654757]},
        "shape": {"ramp": "gaussian", "crossover": "0.5 ns"},
        "second_window": "retrieve_or_transfer_general",
        "levels": {"junction": 4, "phonon": 4}
    })");
    check_roundtrip(R"({"kind": "sweep",
        "junction": {"critical_current": "21 uA", "capacitance": "6 pF"},
        "resonator": {"material": "AlN", "radius": "0.23 um", "thickness": "377.2 nm"},
        "schedule": {"J1": [{"kind": "hold", "s": 0.4, "duration": "1 ns"}]},
        "initial": {"amplitudes": {"0_0": [0.6, 0], "1_0": [0, 0.8]}},
        "steps": ["8 fs", "4 fs", "2 fs", "1 fs"]})");
}

TEST_CASE("simulation setup places the initial amplitudes") {
    auto sc = config::parse_string(R"({"kind": "simulate",
        "junction": {"josephson_energy": "43.05 meV", "charging_energy": "53.33 neV"},
        "resonator": {"material": "AlN", "radius": "0.23 um", "frequency": "15 GHz"},
        "schedule": {"J1": [{"kind": "hold", "s": 0.545, "duration": "0.5 ns"}]},
        "initial": {"state": "1_0"},
        "integrator": {"dt": "10 fs"}})");
    auto setup = config::to_simulation(sc);
    CHECK(setup.system.dim() == 16);
    CHECK(setup.c0[setup.system.basis.index({1}, {0})] == std::complex<double>(1, 0));
    CHECK(setup.c0.norm() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(setup.integrator.dt_fs == doctest::Approx(10.0));
    CHECK(setup.schedule.duration() == doctest::Approx(0.5));

    // qubit form on two junctions excites junction one
    auto two = config::parse_string(R"({"kind": "simulate",
        "junction": {"josephson_energy": "43.05 meV", "charging_energy": "53.33 neV"},
        "resonator": {"material": "AlN", "radius": "0.459 um", "frequency": "15 GHz"},
        "junctions": 2,
        "schedule": {"J1": [{"kind": "hold", "s": 0.4, "duration": "1 ns"}],
                     "J2": [{"kind": "hold", "s": 0.4, "duration": "1 ns"}]},
        "initial": {"alpha": [0, 0], "beta": [1, 0]}})");
    auto pair = config::to_simulation(two);
    CHECK(pair.system.dim() == 64);
    CHECK(pair.c0[pair.system.basis.index({1, 0}, {0})] == std::complex<double>(1, 0));

    // unknown basis label is rejected
    auto bad = config::parse_string(R"({"kind": "simulate",
        "junction": {"josephson_energy": "43.05 meV", "charging_energy": "53.33 neV"},
        "resonator": {"material": "AlN", "radius": "0.23 um", "frequency": "15 GHz"},
        "schedule": {"J1": [{"kind": "hold", "s": 0.4, "duration": "1 ns"}]},
        "initial": {"state": "9_9"}})");
    CHECK_THROWS_AS(config::to_simulation(bad), ConfigError);

    // two-junction schedules need a J2 leg
    CHECK(throws_with(R"({"kind": "simulate",
        "junction": {"josephson_energy": "43.05 meV", "charging_energy": "53.33 neV"},
        "resonator": {"material": "AlN", "radius": "0.459 um", "frequency": "15 GHz"},
        "junctions": 2,
        "schedule": {"J1": [{"kind": "hold", "s": 0.4, "duration": "1 ns"}]},
        "initial": {"alpha": [0, 0], "beta": [1, 0]}})",
                      "J2"));
}

TEST_CASE("levels below two are rejected") {
    CHECK(throws_with(R"({"kind": "simulate",
        "junction": {"critical_current": "21 uA", "capacitance": "6 pF"},
        "resonator": {"material": "AlN", "radius": "0.23 um", "frequency": "15 GHz"},
        "schedule": {"J1": [{"kind": "hold", "s": 0.4, "duration": "1 ns"}]},
        "initial": {"state": "1_0"},
        "levels": {"junction": 1}})",
                      "at least 2"));
}

} // TEST_SUITE
