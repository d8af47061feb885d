#include "phononbus/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <vector>

#include <json.hpp>

#include "phononbus/composite.hpp"

namespace pbus::config {

namespace {

using json = nlohmann::ordered_json;

[[noreturn]] void fail(const std::string& msg) { throw ConfigError(msg); }

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t");
    size_t b = s.find_last_not_of(" \t");
    if (a == std::string::npos) return "";
    return s.substr(a, b - a + 1);
}

struct UnitEntry {
    const char* unit;
    double factor;
};

const std::vector<UnitEntry>& unit_table(const std::string& dimension) {
    static const std::vector<UnitEntry> current{{"A", 1e6}, {"mA", 1e3}, {"uA", 1}, {"nA", 1e-3}};
    static const std::vector<UnitEntry> capacitance{
        {"F", 1e12}, {"uF", 1e6}, {"nF", 1e3}, {"pF", 1}, {"fF", 1e-3}};
    static const std::vector<UnitEntry> energy{
        {"eV", 1e6 * ueV}, {"meV", meV}, {"ueV", ueV}, {"neV", neV}};
    static const std::vector<UnitEntry> frequency{{"THz", 1e3 * GHz},
                                                  {"GHz", GHz},
                                                  {"MHz", 1e-3 * GHz},
                                                  {"kHz", 1e-6 * GHz},
                                                  {"Hz", 1e-9 * GHz}};
    static const std::vector<UnitEntry> length{{"m", 1}, {"mm", 1e-3}, {"um", 1e-6}, {"nm", 1e-9}};
    static const std::vector<UnitEntry> time{{"s", 1e9},  {"ms", 1e6},  {"us", 1e3},
                                             {"ns", 1},   {"ps", 1e-3}, {"fs", 1e-6}};
    static const std::vector<UnitEntry> dt{{"s", 1e15}, {"ms", 1e12}, {"us", 1e9},
                                           {"ns", 1e6}, {"ps", 1e3},  {"fs", 1}};
    static const std::vector<UnitEntry> temperature{{"K", 1}, {"mK", 1e-3}, {"uK", 1e-6}};
    if (dimension == "current") return current;
    if (dimension == "capacitance") return capacitance;
    if (dimension == "energy") return energy;
    if (dimension == "frequency") return frequency;
    if (dimension == "length") return length;
    if (dimension == "time") return time;
    if (dimension == "dt") return dt;
    if (dimension == "temperature") return temperature;
    fail("unknown quantity dimension: " + dimension);
}

void check_keys(const json& obj, const std::vector<std::string>& allowed,
                const std::string& where) {
    if (!obj.is_object()) fail(where + " must be an object");
    for (const auto& item : obj.items()) {
        if (std::find(allowed.begin(), allowed.end(), item.key()) == allowed.end())
            fail("unknown key '" + item.key() + "' in " + where);
    }
}

void require(const json& obj, const std::string& key, const std::string& where) {
    if (!obj.contains(key)) fail("missing key '" + key + "' in " + where);
}

double quantity(const json& v, const std::string& dimension, const std::string& where) {
    if (!v.is_string())
        fail(where + " must be a string with an explicit unit (e.g. \"21 uA\")");
    return parse_quantity(v.get<std::string>(), dimension);
}

double number(const json& v, const std::string& where) {
    if (!v.is_number()) fail(where + " must be a plain number");
    return v.get<double>();
}

int integer(const json& v, const std::string& where) {
    if (!v.is_number_integer()) fail(where + " must be an integer");
    return v.get<int>();
}

std::complex<double> complex_pair(const json& v, const std::string& where) {
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
        fail(where + " must be a [re, im] pair");
    return {v[0].get<double>(), v[1].get<double>()};
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

std::string qstr(double v, const char* unit) { return fmt(v) + std::string(" ") + unit; }

junction::JunctionParams parse_junction(const json& j, bool& as_energies) {
    check_keys(j, {"critical_current", "capacitance", "josephson_energy", "charging_energy"},
               "junction");
    const bool device = j.contains("critical_current") || j.contains("capacitance");
    const bool energies = j.contains("josephson_energy") || j.contains("charging_energy");
    if (device && energies) fail("junction: give either (critical_current, capacitance) or "
                                 "(josephson_energy, charging_energy), not both");
    if (device) {
        require(j, "critical_current", "junction");
        require(j, "capacitance", "junction");
        as_energies = false;
        return junction::JunctionParams::from_device(
            quantity(j["critical_current"], "current", "junction.critical_current"),
            quantity(j["capacitance"], "capacitance", "junction.capacitance"));
    }
    require(j, "josephson_energy", "junction");
    require(j, "charging_energy", "junction");
    as_energies = true;
    return junction::JunctionParams::from_energies(
        quantity(j["josephson_energy"], "energy", "junction.josephson_energy"),
        quantity(j["charging_energy"], "energy", "junction.charging_energy"));
}

ResonatorConfig parse_resonator(const json& j) {
    check_keys(j, {"material", "radius", "frequency", "thickness", "gate", "temperature"},
               "resonator");
    require(j, "material", "resonator");
    if (!j["material"].is_string() || j["material"].get<std::string>() != "AlN")
        fail("resonator.material: only \"AlN\" is supported");
    require(j, "radius", "resonator");
    const double radius_um = quantity(j["radius"], "length", "resonator.radius") * 1e6;
    if (j.contains("frequency") == j.contains("thickness"))
        fail("resonator: give exactly one of frequency or thickness");

    ResonatorConfig rc;
    if (j.contains("frequency")) {
        rc.from_frequency = true;
        rc.frequency_GHz = quantity(j["frequency"], "frequency", "resonator.frequency") / GHz;
        rc.params = resonator::ResonatorParams::aln_with_frequency(radius_um, rc.frequency_GHz);
    } else {
        rc.params = resonator::ResonatorParams::aln(
            radius_um, quantity(j["thickness"], "length", "resonator.thickness") * 1e9);
    }
    if (j.contains("gate")) {
        const std::string g = j["gate"].is_string() ? j["gate"].get<std::string>() : "";
        if (g == "full")
            rc.gate = resonator::Gate::full;
        else if (g == "split")
            rc.gate = resonator::Gate::split;
        else
            fail("resonator.gate must be \"full\" or \"split\"");
    }
    if (j.contains("temperature"))
        rc.temperature_K = quantity(j["temperature"], "temperature", "resonator.temperature");
    return rc;
}

dynamics::Segment parse_segment(const json& j, bool first, double prev_end) {
    require(j, "kind", "schedule segment");
    const std::string kind = j["kind"].is_string() ? j["kind"].get<std::string>() : "";
    auto ramp_from = [&](const json& seg) {
        if (seg.contains("s_from")) return number(seg["s_from"], "segment.s_from");
        if (first) fail("the first segment of a ramp kind needs an explicit s_from");
        return prev_end;
    };
    if (kind == "hold") {
        check_keys(j, {"kind", "s", "duration"}, "hold segment");
        require(j, "s", "hold segment");
        require(j, "duration", "hold segment");
        return dynamics::Segment::hold(number(j["s"], "segment.s"),
                                       quantity(j["duration"], "time", "segment.duration"));
    }
    if (kind == "trapezoid" || kind == "gaussian" || kind == "arctangent") {
        check_keys(j, {"kind", "s_from", "s_to", "crossover"}, kind + " segment");
        require(j, "s_to", "ramp segment");
        require(j, "crossover", "ramp segment");
        const double from = ramp_from(j);
        const double to = number(j["s_to"], "segment.s_to");
        const double tau = quantity(j["crossover"], "time", "segment.crossover");
        if (kind == "trapezoid") return dynamics::Segment::trapezoid_ramp(from, to, tau);
        if (kind == "gaussian") return dynamics::Segment::gaussian_ramp(from, to, tau);
        return dynamics::Segment::arctangent_ramp(from, to, tau);
    }
    if (kind == "arctangent_flattop") {
        check_keys(j, {"kind", "s_base", "s_top", "t_on", "t_off", "crossover", "duration"},
                   "arctangent_flattop segment");
        for (const char* k : {"s_base", "s_top", "t_on", "t_off", "crossover", "duration"})
            require(j, k, "arctangent_flattop segment");
        return dynamics::Segment::arctangent_flattop(
            number(j["s_base"], "segment.s_base"), number(j["s_top"], "segment.s_top"),
            quantity(j["t_on"], "time", "segment.t_on"),
            quantity(j["t_off"], "time", "segment.t_off"),
            quantity(j["crossover"], "time", "segment.crossover"),
            quantity(j["duration"], "time", "segment.duration"));
    }
    fail("unknown segment kind: " + kind);
}

dynamics::BiasSchedule parse_schedule(const json& j, int num_junctions) {
    if (!j.is_object()) fail("schedule must be an object with keys J1..Jn");
    dynamics::BiasSchedule sched;
    for (int jj = 1; jj <= num_junctions; ++jj) {
        const std::string key = "J" + std::to_string(jj);
        require(j, key, "schedule");
        const json& arr = j[key];
        if (!arr.is_array() || arr.empty()) fail("schedule." + key + " must be a nonempty array");
        std::vector<dynamics::Segment> segs;
        double prev_end = 0;
        for (size_t k = 0; k < arr.size(); ++k) {
            segs.push_back(parse_segment(arr[k], k == 0, prev_end));
            prev_end = segs.back().bias(segs.back().duration);
        }
        sched.junctions.push_back(std::move(segs));
    }
    for (const auto& item : j.items()) {
        bool ok = false;
        for (int jj = 1; jj <= num_junctions; ++jj)
            if (item.key() == "J" + std::to_string(jj)) ok = true;
        if (!ok) fail("unknown key '" + item.key() + "' in schedule");
    }
    return sched;
}

InitialState parse_initial(const json& j) {
    check_keys(j, {"alpha", "beta", "state", "amplitudes"}, "initial");
    InitialState init;
    const bool qubit = j.contains("alpha") || j.contains("beta");
    const bool named = j.contains("state");
    const bool amps = j.contains("amplitudes");
    if (int(qubit) + int(named) + int(amps) != 1)
        fail("initial: give exactly one of (alpha, beta), state, or amplitudes");
    if (qubit) {
        require(j, "alpha", "initial");
        require(j, "beta", "initial");
        init.has_qubit = true;
        init.alpha = complex_pair(j["alpha"], "initial.alpha");
        init.beta = complex_pair(j["beta"], "initial.beta");
        const double p = std::norm(init.alpha) + std::norm(init.beta);
        if (std::abs(p - 1.0) > 1e-9) fail("initial: |alpha|^2 + |beta|^2 must equal 1");
    } else if (named) {
        if (!j["state"].is_string()) fail("initial.state must be a basis label string");
        init.amplitudes.push_back({j["state"].get<std::string>(), {1.0, 0.0}});
    } else {
        if (!j["amplitudes"].is_object()) fail("initial.amplitudes must be an object");
        for (const auto& item : j["amplitudes"].items())
            init.amplitudes.push_back({item.key(), complex_pair(item.value(), "initial.amplitudes")});
        if (init.amplitudes.empty()) fail("initial.amplitudes is empty");
    }
    return init;
}

dynamics::IntegratorConfig parse_integrator(const json& j) {
    check_keys(j, {"dt", "norm_tol", "include_nonadiabatic", "coupling_scale", "max_rows"},
               "integrator");
    dynamics::IntegratorConfig cfg;
    if (j.contains("dt")) cfg.dt_fs = quantity(j["dt"], "dt", "integrator.dt");
    if (j.contains("norm_tol")) cfg.norm_tol = number(j["norm_tol"], "integrator.norm_tol");
    if (j.contains("include_nonadiabatic")) {
        if (!j["include_nonadiabatic"].is_boolean())
            fail("integrator.include_nonadiabatic must be a boolean");
        cfg.include_nonadiabatic = j["include_nonadiabatic"].get<bool>();
    }
    if (j.contains("coupling_scale"))
        cfg.coupling_scale = number(j["coupling_scale"], "integrator.coupling_scale");
    if (j.contains("max_rows")) cfg.max_rows = integer(j["max_rows"], "integrator.max_rows");
    return cfg;
}

LevelsConfig parse_levels(const json& j) {
    check_keys(j, {"junction", "phonon"}, "levels");
    LevelsConfig lv;
    if (j.contains("junction")) lv.junction = integer(j["junction"], "levels.junction");
    if (j.contains("phonon")) lv.phonon = integer(j["phonon"], "levels.phonon");
    if (lv.junction < 2 || lv.phonon < 2) fail("levels must be at least 2");
    return lv;
}

std::vector<double> parse_bias_grid(const json& j) {
    std::vector<double> grid;
    if (j.is_array()) {
        for (const auto& v : j) grid.push_back(number(v, "bias entry"));
    } else if (j.is_object()) {
        check_keys(j, {"start", "stop", "step"}, "bias");
        for (const char* k : {"start", "stop", "step"}) require(j, k, "bias");
        const double a = number(j["start"], "bias.start");
        const double b = number(j["stop"], "bias.stop");
        const double h = number(j["step"], "bias.step");
        if (h <= 0 || b < a) fail("bias range: need step > 0 and stop >= start");
        for (double v = a; v <= b + 1e-12; v += h) grid.push_back(v);
    } else {
        fail("bias must be an array or a {start, stop, step} object");
    }
    if (grid.empty()) fail("bias grid is empty");
    return grid;
}

json junction_json(const Scenario& sc) {
    json j;
    if (sc.junction_as_energies) {
        j["josephson_energy"] = qstr(sc.junction.EJ / meV, "meV");
        j["charging_energy"] = qstr(sc.junction.Ec / neV, "neV");
    } else {
        j["critical_current"] = qstr(sc.junction.critical_current_uA, "uA");
        j["capacitance"] = qstr(sc.junction.capacitance_pF, "pF");
    }
    return j;
}

json resonator_json(const ResonatorConfig& rc) {
    json j;
    j["material"] = "AlN";
    j["radius"] = qstr(rc.params.radius_um, "um");
    if (rc.from_frequency)
        j["frequency"] = qstr(rc.frequency_GHz, "GHz");
    else
        j["thickness"] = qstr(rc.params.thickness_nm, "nm");
    j["gate"] = rc.gate == resonator::Gate::split ? "split" : "full";
    if (rc.temperature_K >= 0) j["temperature"] = qstr(rc.temperature_K, "K");
    return j;
}

json segment_json(const dynamics::Segment& s) {
    using K = dynamics::Segment::Kind;
    json j;
    switch (s.kind) {
        case K::hold:
            j["kind"] = "hold";
            j["s"] = s.s_from;
            j["duration"] = qstr(s.duration, "ns");
            break;
        case K::trapezoid_ramp:
            j["kind"] = "trapezoid";
            j["s_from"] = s.s_from;
            j["s_to"] = s.s_to;
            j["crossover"] = qstr(s.duration, "ns");
            break;
        case K::gaussian_ramp:
        case K::arctangent_ramp:
            j["kind"] = s.kind == K::gaussian_ramp ? "gaussian" : "arctangent";
            j["s_from"] = s.s_from;
            j["s_to"] = s.s_to;
            j["crossover"] = qstr(s.duration / 3.0, "ns");
            break;
        case K::arctangent_flattop:
            j["kind"] = "arctangent_flattop";
            j["s_base"] = s.s_from;
            j["s_top"] = s.s_to;
            j["t_on"] = qstr(s.t_on, "ns");
            j["t_off"] = qstr(s.t_off, "ns");
            j["crossover"] = qstr(s.width * pi, "ns");
            j["duration"] = qstr(s.duration, "ns");
            break;
    }
    return j;
}

json initial_json(const InitialState& in) {
    json j;
    if (in.has_qubit) {
        j["alpha"] = json::array({in.alpha.real(), in.alpha.imag()});
        j["beta"] = json::array({in.beta.real(), in.beta.imag()});
    } else {
        json amps;
        for (const auto& [label, amp] : in.amplitudes)
            amps[label] = json::array({amp.real(), amp.imag()});
        j["amplitudes"] = amps;
    }
    return j;
}

json integrator_json(const dynamics::IntegratorConfig& c) {
    json j;
    j["dt"] = qstr(c.dt_fs, "fs");
    j["norm_tol"] = c.norm_tol;
    j["include_nonadiabatic"] = c.include_nonadiabatic;
    j["coupling_scale"] = c.coupling_scale;
    j["max_rows"] = c.max_rows;
    return j;
}

} // namespace

double parse_quantity(const std::string& text, const std::string& dimension) {
    const std::string t = trim(text);
    const char* begin = t.c_str();
    char* end = nullptr;
    const double value = std::strtod(begin, &end);
    if (end == begin) fail("cannot parse a number from quantity '" + text + "'");
    const std::string unit = trim(std::string(end));
    if (unit.empty())
        fail("quantity '" + text + "' must carry an explicit " + dimension + " unit");
    for (const auto& e : unit_table(dimension))
        if (unit == e.unit) return value * e.factor;
    fail("unknown " + dimension + " unit '" + unit + "' in quantity '" + text + "'");
}

double resonator_omega0(const ResonatorConfig& rc) {
    return resonator::dilatational_frequency(rc.params);
}

double resonator_g(const ResonatorConfig& rc) {
    return resonator::coupling_strength(rc.params, rc.gate);
}

Scenario parse_string(const std::string& text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const std::exception& e) {
        fail(std::string("config is not valid JSON: ") + e.what());
    }
    if (!root.is_object()) fail("config root must be an object");
    require(root, "kind", "config");
    if (!root["kind"].is_string()) fail("kind must be a string");

    Scenario sc;
    sc.kind = root["kind"].get<std::string>();
    require(root, "junction", "config");
    sc.junction = parse_junction(root["junction"], sc.junction_as_energies);

    if (sc.kind == "spectrum") {
        check_keys(root, {"kind", "junction", "bias", "levels"}, "config");
        require(root, "bias", "config");
        sc.bias_grid = parse_bias_grid(root["bias"]);
        if (root.contains("levels")) sc.spectrum_levels = integer(root["levels"], "levels");
        if (sc.spectrum_levels < 1) fail("levels must be positive");
        return sc;
    }

    if (sc.kind == "simulate" || sc.kind == "sweep") {
        check_keys(root,
                   {"kind", "junction", "resonator", "junctions", "schedule", "initial", "levels",
                    "integrator", "steps"},
                   "config");
        require(root, "resonator", "config");
        sc.resonator = parse_resonator(root["resonator"]);
        if (root.contains("junctions")) sc.num_junctions = integer(root["junctions"], "junctions");
        if (sc.num_junctions < 1 || sc.num_junctions > 2) fail("junctions must be 1 or 2");
        require(root, "schedule", "config");
        sc.schedule = parse_schedule(root["schedule"], sc.num_junctions);
        require(root, "initial", "config");
        sc.initial = parse_initial(root["initial"]);
        if (root.contains("levels")) sc.levels = parse_levels(root["levels"]);
        if (root.contains("integrator")) sc.integrator = parse_integrator(root["integrator"]);
        if (sc.kind == "sweep") {
            require(root, "steps", "config");
            if (!root["steps"].is_array() || root["steps"].size() < 2)
                fail("sweep: steps must list at least two step sizes");
            for (const auto& v : root["steps"])
                sc.steps_fs.push_back(quantity(v, "dt", "steps entry"));
        } else if (root.contains("steps")) {
            fail("unknown key 'steps' in config");
        }
        return sc;
    }

    if (sc.kind == "protocol") {
        check_keys(root,
                   {"kind", "junction", "resonator", "protocol", "initial", "shape",
                    "window_override", "second_window", "levels", "integrator"},
                   "config");
        require(root, "resonator", "config");
        sc.resonator = parse_resonator(root["resonator"]);
        require(root, "protocol", "config");
        if (!root["protocol"].is_string()) fail("protocol must be a string");
        sc.protocol = root["protocol"].get<std::string>();
        if (sc.protocol != "storage" && sc.protocol != "retrieve" && sc.protocol != "transfer" &&
            sc.protocol != "entangle")
            fail("unknown protocol: " + sc.protocol);
        sc.initial.has_qubit = true; // default (alpha, beta) = (0, 1)
        if (root.contains("initial")) sc.initial = parse_initial(root["initial"]);
        if (root.contains("shape")) {
            const json& sh = root["shape"];
            check_keys(sh, {"ramp", "crossover", "pre_hold", "gap", "s_off"}, "shape");
            if (sh.contains("ramp")) {
                if (!sh["ramp"].is_string()) fail("shape.ramp must be a string");
                sc.ramp = protocols::ramp_from_string(sh["ramp"].get<std::string>());
            }
            if (sh.contains("crossover"))
                sc.crossover_ns = quantity(sh["crossover"], "time", "shape.crossover");
            if (sh.contains("pre_hold"))
                sc.pre_hold_ns = quantity(sh["pre_hold"], "time", "shape.pre_hold");
            if (sh.contains("gap")) sc.gap_ns = quantity(sh["gap"], "time", "shape.gap");
            if (sh.contains("s_off")) sc.s_off = number(sh["s_off"], "shape.s_off");
        }
        if (root.contains("window_override"))
            sc.window_override_ns = quantity(root["window_override"], "time", "window_override");
        if (root.contains("second_window")) {
            if (!root["second_window"].is_string()) fail("second_window must be a string");
            sc.second_window = root["second_window"].get<std::string>();
            try {
                rwa::operation_from_string(sc.second_window); // validate
            } catch (const DomainError& e) {
                fail(e.what());
            }
        }
        if (root.contains("levels")) sc.levels = parse_levels(root["levels"]);
        if (root.contains("integrator")) sc.integrator = parse_integrator(root["integrator"]);
        return sc;
    }

    fail("unknown kind: " + sc.kind + " (expected spectrum, simulate, protocol, or sweep)");
}

Scenario parse_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) fail("cannot open config file: " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return parse_string(ss.str());
}

std::string serialize(const Scenario& sc) {
    json root;
    root["kind"] = sc.kind;
    root["junction"] = junction_json(sc);
    if (sc.kind == "spectrum") {
        root["bias"] = sc.bias_grid;
        root["levels"] = sc.spectrum_levels;
    } else if (sc.kind == "simulate" || sc.kind == "sweep") {
        root["resonator"] = resonator_json(*sc.resonator);
        root["junctions"] = sc.num_junctions;
        json sched;
        for (int j = 0; j < sc.num_junctions; ++j) {
            json arr = json::array();
            for (const auto& seg : sc.schedule->junctions[j]) arr.push_back(segment_json(seg));
            sched["J" + std::to_string(j + 1)] = arr;
        }
        root["schedule"] = sched;
        root["initial"] = initial_json(sc.initial);
        json lv;
        lv["junction"] = sc.levels.junction;
        lv["phonon"] = sc.levels.phonon;
        root["levels"] = lv;
        root["integrator"] = integrator_json(sc.integrator);
        if (sc.kind == "sweep") {
            json steps = json::array();
            for (double v : sc.steps_fs) steps.push_back(qstr(v, "fs"));
            root["steps"] = steps;
        }
    } else if (sc.kind == "protocol") {
        root["resonator"] = resonator_json(*sc.resonator);
        root["protocol"] = sc.protocol;
        root["initial"] = initial_json(sc.initial);
        json sh;
        sh["ramp"] = protocols::to_string(sc.ramp);
        sh["crossover"] = qstr(sc.crossover_ns, "ns");
        sh["pre_hold"] = qstr(sc.pre_hold_ns, "ns");
        sh["gap"] = qstr(sc.gap_ns, "ns");
        sh["s_off"] = sc.s_off;
        root["shape"] = sh;
        if (sc.window_override_ns >= 0) root["window_override"] = qstr(sc.window_override_ns, "ns");
        if (!sc.second_window.empty()) root["second_window"] = sc.second_window;
        json lv;
        lv["junction"] = sc.levels.junction;
        lv["phonon"] = sc.levels.phonon;
        root["levels"] = lv;
        root["integrator"] = integrator_json(sc.integrator);
    }
    return root.dump(2) + "\n";
}

protocols::ProtocolSpec to_protocol_spec(const Scenario& sc) {
    if (sc.kind != "protocol") fail("scenario kind is not 'protocol'");
    if (!sc.resonator) fail("protocol scenario needs a resonator");
    protocols::ProtocolSpec spec;
    spec.junction_params = sc.junction;
    spec.omega0 = resonator_omega0(*sc.resonator);
    spec.g = resonator_g(*sc.resonator);
    spec.s_off = sc.s_off;
    spec.ramp = sc.ramp;
    spec.crossover_ns = sc.crossover_ns;
    spec.pre_hold_ns = sc.pre_hold_ns;
    spec.gap_ns = sc.gap_ns;
    spec.window_override_ns = sc.window_override_ns;
    if (!sc.second_window.empty())
        spec.second_window = rwa::operation_from_string(sc.second_window);
    spec.junction_levels = sc.levels.junction;
    spec.phonon_levels = sc.levels.phonon;
    spec.integrator = sc.integrator;

    if (sc.initial.has_qubit) {
        spec.alpha = sc.initial.alpha;
        spec.beta = sc.initial.beta;
    } else {
        const int J = (sc.protocol == "transfer" || sc.protocol == "entangle") ? 2 : 1;
        const auto basis = J == 2
                               ? composite::ProductBasis::pair(sc.levels.junction, sc.levels.phonon)
                               : composite::ProductBasis::single(sc.levels.junction, sc.levels.phonon);
        Eigen::VectorXcd c0 = Eigen::VectorXcd::Zero(basis.dim());
        for (const auto& [label, amp] : sc.initial.amplitudes) {
            bool found = false;
            for (int a = 0; a < basis.dim(); ++a)
                if (basis.label(a) == label) {
                    c0[a] = amp;
                    found = true;
                    break;
                }
            if (!found) fail("initial.amplitudes: no basis state labeled " + label);
        }
        if (std::abs(c0.norm() - 1.0) > 1e-6) fail("initial amplitudes must be normalized");
        spec.initial_amplitudes = c0;
    }
    return spec;
}

SimulationSetup to_simulation(const Scenario& sc) {
    if (sc.kind != "simulate" && sc.kind != "sweep") fail("scenario kind is not 'simulate'");
    if (!sc.resonator) fail("simulate scenario needs a resonator");
    if (!sc.schedule) fail("simulate scenario needs a schedule");
    const int J = sc.num_junctions;
    const auto basis = J == 2 ? composite::ProductBasis::pair(sc.levels.junction, sc.levels.phonon)
                              : composite::ProductBasis::single(sc.levels.junction, sc.levels.phonon);
    const double g = resonator_g(*sc.resonator);
    const auto graph = J == 2 ? composite::CouplingGraph::pair(g)
                              : composite::CouplingGraph::single(g);
    std::vector<junction::JunctionParams> params(J, sc.junction);

    SimulationSetup setup{
        dynamics::CoupledSystem::build(params, {resonator_omega0(*sc.resonator)}, graph, basis,
                                       *sc.schedule),
        *sc.schedule, Eigen::VectorXcd::Zero(basis.dim()), sc.integrator};

    if (sc.initial.has_qubit) {
        std::vector<int> ground(J, 0), excited(J, 0);
        excited[0] = 1;
        const std::vector<int> n(1, 0);
        setup.c0[basis.index(ground, n)] = sc.initial.alpha;
        setup.c0[basis.index(excited, n)] = sc.initial.beta;
    } else {
        for (const auto& [label, amp] : sc.initial.amplitudes) {
            bool found = false;
            for (int a = 0; a < basis.dim(); ++a)
                if (basis.label(a) == label) {
                    setup.c0[a] = amp;
                    found = true;
                    break;
                }
            if (!found) fail("initial.amplitudes: no basis state labeled " + label);
        }
    }
    if (std::abs(setup.c0.norm() - 1.0) > 1e-6) fail("initial state must be normalized");
    return setup;
}

} // namespace pbus::config
