// command-line front end: junction spectra, schedule integration, named
// protocols, step-size sweeps, and the verification suite.
//
// exit codes: 0 success, 2 configuration/usage error, 3 integration-quality
// error (norm drift), 4 verification-suite failure.
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "phononbus/accept.hpp"
#include "phononbus/config.hpp"
#include "phononbus/dynamics.hpp"
#include "phononbus/junction.hpp"
#include "phononbus/protocols.hpp"
#include "phononbus/units.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace pbus;

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

// write-then-rename so partially written files never appear under the final name
void atomic_write(const fs::path& path, const std::string& text) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    const fs::path tmp = path.string() + ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw ConfigError("cannot write file: " + tmp.string());
        f << text;
        if (!f) throw ConfigError("write failed: " + tmp.string());
    }
    fs::rename(tmp, path);
}

json amplitudes_json(const std::vector<std::string>& labels, const Eigen::VectorXcd& c) {
    json out;
    for (int a = 0; a < c.size(); ++a)
        out[labels[a]] = json::array({c[a].real(), c[a].imag()});
    return out;
}

struct CommonArgs {
    std::string config_path;
    std::string out_dir = "out";
    double dt_fs = -1; // <= 0 keeps the config's value
    int threads = 1;
    bool seedless = false; // the solver is deterministic; accepted for symmetry
};

config::Scenario load(const CommonArgs& args, const std::string& expected_kind) {
    if (args.config_path.empty())
        throw ConfigError("--config PATH is required for this command");
    fs::create_directories(args.out_dir);
    auto sc = config::parse_file(args.config_path);
    if (sc.kind != expected_kind)
        throw ConfigError("config kind '" + sc.kind + "' does not match the '" + expected_kind +
                          "' command");
    return sc;
}

std::string out_stem(const CommonArgs& args) {
    return fs::path(args.config_path).stem().string();
}

int cmd_spectrum(const CommonArgs& args) {
    const auto sc = load(args, "spectrum");
    for (double s : sc.bias_grid)
        if (!(s >= 0.0 && s < 1.0))
            throw DomainError("bias " + fmt(s) + " is outside [0, 1)");

    const int L = sc.spectrum_levels;
    std::string csv = "s";
    for (int m = 0; m < L; ++m) csv += ",eps" + std::to_string(m) + "_over_wp";
    for (int m = 0; m < L; ++m)
        for (int mp = m; mp < L; ++mp) csv += ",x" + std::to_string(m) + std::to_string(mp);
    csv += ",dU_over_dU0,wp_over_wp0\n";

    const double dU0 = junction::barrier_height(sc.junction, 0.0);
    const double wp0 = junction::plasma_frequency0(sc.junction);
    for (double s : sc.bias_grid) {
        const auto spec = junction::diagonalize(sc.junction, s);
        if (spec.basis_size < L)
            throw ConvergenceError("spectrum has fewer levels than requested at s = " + fmt(s));
        csv += fmt(s);
        for (int m = 0; m < L; ++m) csv += "," + fmt(spec.energies[m] / spec.omega_p);
        for (int m = 0; m < L; ++m)
            for (int mp = m; mp < L; ++mp) csv += "," + fmt(spec.dipole(m, mp));
        csv += "," + fmt(junction::barrier_height(sc.junction, s) / dU0);
        csv += "," + fmt(spec.omega_p / wp0);
        csv += "\n";
    }
    atomic_write(fs::path(args.out_dir) / (out_stem(args) + "_spectrum.csv"), csv);
    return 0;
}

int cmd_simulate(const CommonArgs& args) {
    const auto sc = load(args, "simulate");
    auto setup = config::to_simulation(sc);
    if (args.dt_fs > 0) setup.integrator.dt_fs = args.dt_fs;

    const auto t0 = std::chrono::steady_clock::now();
    const auto tr = dynamics::integrate(setup.system, setup.schedule, setup.c0, setup.integrator);
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    tr.write_csv((fs::path(args.out_dir) / (out_stem(args) + "_trajectory.csv")).string());

    json summary;
    summary["kind"] = "simulate";
    summary["config"] = json::parse(config::serialize(sc));
    summary["duration_ns"] = tr.duration_ns;
    summary["rows"] = tr.rows();
    summary["final_norm"] = tr.norm.back();
    summary["norm_drift"] = tr.norm_drift;
    summary["final_amplitudes"] = amplitudes_json(tr.labels, tr.final_c);
    summary["wall_seconds"] = wall;
    atomic_write(fs::path(args.out_dir) / (out_stem(args) + "_summary.jsonl"),
                 summary.dump() + "\n");
    return 0;
}

int cmd_protocol(const CommonArgs& args) {
    const auto sc = load(args, "protocol");
    auto spec = config::to_protocol_spec(sc);
    if (args.dt_fs > 0) spec.integrator.dt_fs = args.dt_fs;

    protocols::FidelityReport rep;
    if (sc.protocol == "storage")
        rep = protocols::storage(spec);
    else if (sc.protocol == "retrieve")
        rep = protocols::retrieve(spec);
    else if (sc.protocol == "transfer")
        rep = protocols::transfer(spec);
    else
        rep = protocols::entangle(spec);

    rep.trajectory.write_csv((fs::path(args.out_dir) / (out_stem(args) + "_trajectory.csv")).string());

    // a run is flagged when it misses the design target badly (pulse-shape or
    // truncation failures show up here long before hard errors do)
    const double threshold = 0.9;
    json summary;
    summary["kind"] = "protocol";
    summary["protocol"] = sc.protocol;
    summary["config"] = json::parse(config::serialize(sc));
    json res;
    res["s_star"] = rep.resonance.s_star;
    res["s_harmonic"] = rep.resonance.s_harmonic;
    res["x01"] = rep.resonance.x01;
    res["rabi_rad_per_ns"] = rep.resonance.omega_rabi;
    res["period_ns"] = rep.resonance.period_ns;
    summary["resonance"] = res;
    json windows = json::array();
    for (const auto& [a, b] : rep.windows) windows.push_back(json::array({a, b}));
    summary["windows_ns"] = windows;
    summary["fidelity"] = rep.fidelity;
    summary["fidelity_ok"] = rep.fidelity >= threshold;
    json occ;
    for (size_t a = 0; a < rep.labels.size(); ++a) occ[rep.labels[a]] = rep.occupations[a];
    summary["occupations"] = occ;
    summary["final_amplitudes"] = amplitudes_json(rep.labels, rep.final_amplitudes);
    summary["leakage"] = rep.leakage;
    summary["max_leakage"] = rep.max_leakage;
    summary["norm_drift"] = rep.norm_drift;
    summary["wall_seconds"] = rep.wall_seconds;
    atomic_write(fs::path(args.out_dir) / (out_stem(args) + "_summary.jsonl"),
                 summary.dump() + "\n");
    return 0;
}

int cmd_sweep(const CommonArgs& args) {
    const auto sc = load(args, "sweep");
    auto setup = config::to_simulation(sc);

    const auto t0 = std::chrono::steady_clock::now();
    const auto rep = dynamics::convergence_sweep(setup.system, setup.schedule, setup.c0,
                                                 setup.integrator, sc.steps_fs);
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    json summary;
    summary["kind"] = "sweep";
    summary["config"] = json::parse(config::serialize(sc));
    summary["steps_fs"] = rep.dt_fs;
    summary["diffs"] = rep.diffs;
    summary["orders"] = rep.orders;
    summary["monotone"] = rep.monotone;
    std::vector<std::string> labels;
    for (int a = 0; a < setup.system.dim(); ++a)
        labels.push_back(setup.system.basis.label(a));
    summary["final_amplitudes"] = amplitudes_json(labels, rep.finals.back());
    summary["wall_seconds"] = wall;
    atomic_write(fs::path(args.out_dir) / (out_stem(args) + "_summary.jsonl"),
                 summary.dump() + "\n");
    return 0;
}

int cmd_accept(const CommonArgs& args) {
    const auto suite = accept::run_all(args.threads, args.dt_fs > 0 ? args.dt_fs : 1.0);
    const std::string table = accept::format_table(suite);
    std::cout << table;
    if (!args.out_dir.empty())
        atomic_write(fs::path(args.out_dir) / "acceptance.txt", table);
    return suite.all_pass ? 0 : 4;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"coupled Josephson-junction / piezoelectric-resonator simulator"};
    app.require_subcommand(1);

    CommonArgs args;
    app.add_option("--config", args.config_path, "scenario config file (JSON with unit strings)");
    app.add_option("--out", args.out_dir, "output directory")->capture_default_str();
    app.add_option("--dt", args.dt_fs, "integrator step override, femtoseconds");
    app.add_option("--threads", args.threads, "worker threads for the verification suite")
        ->capture_default_str();
    app.add_flag("--seedless", args.seedless,
                 "assert determinism (the solver uses no randomness; accepted as a no-op)");

    auto* sub_spectrum =
        app.add_subcommand("spectrum", "junction eigensystem over a bias grid -> CSV");
    auto* sub_simulate =
        app.add_subcommand("simulate", "integrate a bias schedule -> trajectory CSV + summary");
    auto* sub_protocol =
        app.add_subcommand("protocol", "run a named pulse protocol -> trajectory CSV + summary");
    auto* sub_sweep =
        app.add_subcommand("sweep", "step-halving convergence study -> summary");
    auto* sub_accept =
        app.add_subcommand("accept", "run the pinned verification suite -> pass/fail table");
    for (auto* sub : {sub_spectrum, sub_simulate, sub_protocol, sub_sweep, sub_accept})
        sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (sub_spectrum->parsed()) return cmd_spectrum(args);
        if (sub_simulate->parsed()) return cmd_simulate(args);
        if (sub_protocol->parsed()) return cmd_protocol(args);
        if (sub_sweep->parsed()) return cmd_sweep(args);
        return cmd_accept(args);
    } catch (const IntegrationQualityError& e) {
        std::cerr << "integration quality error: " << e.what() << "\n"
                  << "  norm drift " << fmt(e.norm_drift) << "; try --dt "
                  << fmt(e.suggested_dt_fs) << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
