#include "phononbus/accept.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <sstream>
#include <thread>
#include <vector>

#include "phononbus/composite.hpp"
#include "phononbus/dynamics.hpp"
#include "phononbus/junction.hpp"
#include "phononbus/protocols.hpp"
#include "phononbus/resonator.hpp"
#include "phononbus/rwa.hpp"
#include "phononbus/units.hpp"

namespace pbus::accept {

namespace {

using Clock = std::chrono::steady_clock;

struct Timer {
    Clock::time_point start = Clock::now();
    double elapsed() const {
        return std::chrono::duration<double>(Clock::now() - start).count();
    }
};

template <typename... Args>
std::string strf(const char* fmt, Args... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, fmt, args...);
    return buf;
}

void run_tasks(std::vector<std::function<void()>>& tasks, int threads) {
    if (threads <= 1) {
        for (auto& t : tasks) t();
        return;
    }
    std::atomic<size_t> next{0};
    auto worker = [&] {
        for (size_t i = next.fetch_add(1); i < tasks.size(); i = next.fetch_add(1)) tasks[i]();
    };
    std::vector<std::thread> pool;
    const int n = std::min<int>(threads, static_cast<int>(tasks.size()));
    pool.reserve(n);
    for (int i = 0; i < n; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
}

// reference device: the junction whose spectra the pinned numbers describe
junction::JunctionParams reference_junction() {
    return junction::JunctionParams::from_energies(43.05 * meV, 53.33 * neV);
}

// ---- analytic criteria -----------------------------------------------------

CriterionResult check_level_spacings(const std::vector<junction::JunctionSpectrum>& spectra) {
    Timer tm;
    // pinned reduced level energies eps_m / (hbar omega_p), m = 0..3
    const double expected[3][4] = {{0.4999, 1.4996, 2.4989, 3.4979},
                                   {0.4999, 1.4993, 2.4981, 3.4962},
                                   {0.4995, 1.4971, 2.4922, 3.4848}};
    const double s_values[3] = {0.50, 0.70, 0.90};
    double worst = 0;
    for (int i = 0; i < 3; ++i)
        for (int m = 0; m < 4; ++m)
            worst = std::max(worst,
                             std::abs(spectra[i].energies[m] / spectra[i].omega_p - expected[i][m]));
    CriterionResult r{1, "junction level spacings", worst <= 2e-3,
                      strf("max |eps_m/hw_p - pinned| = %.2e over s={%.2f,%.2f,%.2f}, m<=3 "
                           "(tol 2e-03)",
                           worst, s_values[0], s_values[1], s_values[2]),
                      tm.elapsed()};
    return r;
}

CriterionResult check_dipole_elements(const junction::JunctionSpectrum& s09) {
    Timer tm;
    const double x01 = s09.dipole(0, 1);
    const double x00 = s09.dipole(0, 0);
    const double x02 = s09.dipole(0, 2);
    const double d01 = std::abs(x01 / 3.46e-2 - 1.0);
    const double d00 = std::abs(x00 / 1.12 - 1.0);
    const double d02 = std::abs(x02 / -5.86e-4 - 1.0);
    const bool pass = d01 <= 0.01 && d00 <= 0.01 && d02 <= 0.05;
    CriterionResult r{2, "junction dipole elements", pass,
                      strf("x01=%.4e (3.46e-02 +-1%%), x00=%.4e (1.12 +-1%%), "
                           "x02=%.4e (-5.86e-04 +-5%%)",
                           x01, x00, x02),
                      tm.elapsed()};
    return r;
}

CriterionResult check_sum_rule(const junction::JunctionSpectrum& s05,
                               const junction::JunctionSpectrum& s09, double Ec) {
    Timer tm;
    double worst = 0;
    for (const auto* sp : {&s05, &s09}) {
        const int K = static_cast<int>(sp->energies.size());
        for (int m = 0; m < 2; ++m) {
            double sum = 0;
            for (int n = 0; n < K; ++n)
                sum += (sp->energies[n] - sp->energies[m]) * sp->dipole(m, n) * sp->dipole(m, n);
            worst = std::max(worst, std::abs(sum / Ec - 1.0));
        }
    }
    CriterionResult r{3, "dipole sum rule", worst < 1e-5,
                      strf("max rel err of sum_n (e_n - e_m) x_mn^2 vs Ec = %.2e "
                           "(m=0,1 at s=0.5,0.9; tol 1e-05)",
                           worst),
                      tm.elapsed()};
    return r;
}

CriterionResult check_resonator() {
    Timer tm;
    const auto p = resonator::ResonatorParams::aln_with_frequency(0.230, 15.0);
    const double f0_GHz = resonator::dilatational_frequency(p) / GHz;
    const double C_fF = resonator::resonator_capacitance(p).C_res_fF;
    const double g_ueV = resonator::coupling_strength(p, resonator::Gate::full) / ueV;

    double slope_min = 1e300, slope_max = -1e300;
    for (double R : {0.1, 0.23, 0.459, 1.0, 2.3}) {
        const auto pr = resonator::ResonatorParams::aln_with_frequency(R, 15.0);
        const double slope = resonator::coupling_strength(pr, resonator::Gate::full) / ueV / R;
        slope_min = std::min(slope_min, slope);
        slope_max = std::max(slope_max, slope);
    }
    const double lin = (slope_max - slope_min) / (0.5 * (slope_max + slope_min));

    const bool pass = std::abs(f0_GHz / 15.0 - 1.0) <= 5e-3 && std::abs(C_fF / 0.042 - 1.0) <= 0.03 &&
                      std::abs(g_ueV / 0.620 - 1.0) <= 0.02 && lin <= 1e-6;
    CriterionResult r{4, "resonator derived quantities", pass,
                      strf("f0=%.4f GHz (15 +-0.5%%), C=%.4f fF (0.042 +-3%%), g=%.4f ueV "
                           "(0.620 +-2%%), g/R spread=%.1e (tol 1e-06)",
                           f0_GHz, C_fF, g_ueV, lin),
                      tm.elapsed()};
    return r;
}

CriterionResult check_resonance(const protocols::ResonanceInfo& info) {
    Timer tm;
    const double rabi_MHz = info.omega_rabi / (2 * pi) * 1e3; // rad/ns -> MHz
    const bool pass = info.s_star >= 0.543 && info.s_star <= 0.548 &&
                      std::abs(rabi_MHz / 8.79 - 1.0) <= 0.02 &&
                      std::abs(info.period_ns / 113.7 - 1.0) <= 0.02;
    CriterionResult r{5, "resonant bias and vacuum Rabi rate", pass,
                      strf("s*=%.4f ([0.543,0.548]), Rabi=%.3f MHz (8.79 +-2%%), "
                           "period=%.2f ns (113.7 +-2%%)",
                           info.s_star, rabi_MHz, info.period_ns),
                      tm.elapsed()};
    return r;
}

// ---- closed-form rotating-frame check (part of criterion 12) ---------------

double rotating_frame_closed_form_error() {
    const std::complex<double> alpha(0.6, 0.0), beta(0.0, 0.8);
    const std::complex<double> iu(0.0, 1.0);
    const double g = 0.9425, x01 = 0.0293;
    double worst = 0;
    for (double wd_ratio : {0.0, 0.75}) {
        rwa::RwaParams prm{g, x01, wd_ratio * 2 * g * x01};
        const auto rabi = rwa::rabi_frequency(prm);
        for (double phase : {0.0, pi / 2, pi, 1.5 * pi}) {
            const double t = phase / rabi.detuned;
            const auto a = rwa::rwa_amplitudes(alpha, beta, prm, t);
            const double half = 0.5 * rabi.detuned * t;
            const std::complex<double> c01 = beta * (rabi.on_resonance / rabi.detuned) *
                                             std::sin(half) * std::exp(iu * (0.5 * prm.omega_d * t));
            const std::complex<double> c10 =
                beta * (std::cos(half) + iu * (prm.omega_d / rabi.detuned) * std::sin(half)) *
                std::exp(-iu * (0.5 * prm.omega_d * t));
            worst = std::max({worst, std::abs(a.c00 - alpha), std::abs(a.c01 - c01),
                              std::abs(a.c10 - c10), std::abs(a.c11)});
        }
    }
    return worst;
}

// ---- long-run tasks --------------------------------------------------------

struct HoldRun {
    double dev_env = 0; // max | |c_{1,0}|^2 - cos^2(W0 t / 2) |
    double dev_01 = 0;  // max | |c_{0,1}|^2 - sin^2(W0 t / 2) |
    double seconds = 0;
    std::string error;
};

HoldRun resonant_hold_run(const junction::JunctionParams& p, double omega0, double s_star,
                          double x01, double g_ratio, double dt_fs) {
    HoldRun out;
    Timer tm;
    try {
        const double g = g_ratio * omega0;
        const double W0 = 2 * g * x01;
        const auto basis = composite::ProductBasis::single(4, 4);
        const auto sched =
            dynamics::BiasSchedule::single({dynamics::Segment::hold(s_star, 2 * pi / W0)});
        const auto sys = dynamics::CoupledSystem::build(
            {p}, {omega0}, composite::CouplingGraph::single(g), basis, sched);
        Eigen::VectorXcd c0 = Eigen::VectorXcd::Zero(basis.dim());
        c0[basis.index({1}, {0})] = 1.0;
        dynamics::IntegratorConfig cfg;
        cfg.dt_fs = dt_fs;
        const auto tr = dynamics::integrate(sys, sched, c0, cfg);
        const int i10 = basis.index({1}, {0});
        const int i01 = basis.index({0}, {1});
        for (int row = 0; row < tr.rows(); ++row) {
            const double half = 0.5 * W0 * tr.t[row];
            const double c2 = std::cos(half) * std::cos(half);
            out.dev_env = std::max(out.dev_env, std::abs(std::norm(tr.c(i10, row)) - c2));
            out.dev_01 = std::max(out.dev_01, std::abs(std::norm(tr.c(i01, row)) - (1.0 - c2)));
        }
    } catch (const std::exception& e) {
        out.error = e.what();
    }
    out.seconds = tm.elapsed();
    return out;
}

struct CompareRun {
    double max_amp_diff = 0; // RK4 vs exact diagonalization, constant bias
    double order = 0;        // observed convergence order
    double seconds = 0;
    std::string error;
};

CompareRun propagator_cross_check(const junction::JunctionParams& p, double omega0, double s_star,
                                  double dt_fs) {
    CompareRun out;
    Timer tm;
    try {
        const double g = 0.01 * omega0;
        const auto basis = composite::ProductBasis::single(4, 4);

        // RK4 against the matrix-exponential propagator at constant bias
        const double s_hold = 0.545;
        const auto sched_hold =
            dynamics::BiasSchedule::single({dynamics::Segment::hold(s_hold, 10.0)});
        const auto sys_hold = dynamics::CoupledSystem::build(
            {p}, {omega0}, composite::CouplingGraph::single(g), basis, sched_hold);
        Eigen::VectorXcd c0 = Eigen::VectorXcd::Zero(basis.dim());
        c0[basis.index({0}, {0})] = 0.5;
        c0[basis.index({0}, {1})] = 0.5;
        c0[basis.index({1}, {0})] = std::complex<double>(0.0, 0.5);
        c0[basis.index({1}, {1})] = 0.5;
        dynamics::IntegratorConfig cfg;
        cfg.dt_fs = dt_fs;
        const auto tr = dynamics::integrate(sys_hold, sched_hold, c0, cfg);
        const Eigen::VectorXcd exact = dynamics::propagate_constant(sys_hold, {s_hold}, c0, 10.0);
        out.max_amp_diff = (tr.final_c - exact).cwiseAbs().maxCoeff();

        // step-halving order on a ramp + hold sequence (durations are exact
        // multiples of every step so each halving doubles the step count)
        const auto sched_ramp = dynamics::BiasSchedule::single(
            {dynamics::Segment::hold(0.40, 2.097152),
             dynamics::Segment::trapezoid_ramp(0.40, s_star, 1.048576),
             dynamics::Segment::hold(s_star, 2.097152)});
        const auto sys_ramp = dynamics::CoupledSystem::build(
            {p}, {omega0}, composite::CouplingGraph::single(g), basis, sched_ramp);
        Eigen::VectorXcd c1 = Eigen::VectorXcd::Zero(basis.dim());
        c1[basis.index({1}, {0})] = 1.0;
        const auto rep =
            dynamics::convergence_sweep(sys_ramp, sched_ramp, c1, {}, {512, 256, 128, 64});
        out.order = rep.orders.empty() ? 0.0 : rep.orders.front();
    } catch (const std::exception& e) {
        out.error = e.what();
    }
    out.seconds = tm.elapsed();
    return out;
}

struct ProtocolRun {
    protocols::FidelityReport report;
    double seconds = 0;
    std::string error;
};

CriterionResult failed(int id, const char* name, const std::string& error, double seconds) {
    return {id, name, false, "error: " + error, seconds};
}

} // namespace

SuiteResult run_all(int threads, double dt_fs) {
    SuiteResult suite;
    Timer total;
    const auto p = reference_junction();

    // shared analytics (cheap, serial)
    std::vector<junction::JunctionSpectrum> spectra;
    for (double s : {0.50, 0.70, 0.90}) spectra.push_back(junction::diagonalize(p, s));

    const auto res023 = resonator::ResonatorParams::aln_with_frequency(0.230, 15.0);
    const double omega0 = resonator::dilatational_frequency(res023);
    const double g023 = resonator::coupling_strength(res023, resonator::Gate::full);
    const auto res459 = resonator::ResonatorParams::aln_with_frequency(0.459, 15.0);
    const double g459 = resonator::coupling_strength(res459, resonator::Gate::split);

    Timer t_res;
    const auto info = protocols::resonance_info(p, omega0, g023);
    const double res_seconds = t_res.elapsed();

    auto base_spec = [&](double g) {
        protocols::ProtocolSpec spec;
        spec.junction_params = p;
        spec.omega0 = omega0;
        spec.g = g;
        spec.integrator.dt_fs = dt_fs;
        return spec;
    };

    // long integrations, longest first so a thread pool packs them well
    ProtocolRun entangle, transfer, storage_trap, storage_atan;
    HoldRun weak, strong;
    CompareRun cross;

    auto protocol_task = [&](ProtocolRun& slot, auto runner, protocols::ProtocolSpec spec) {
        return [&slot, runner, spec] {
            Timer tm;
            try {
                slot.report = runner(spec);
            } catch (const std::exception& e) {
                slot.error = e.what();
            }
            slot.seconds = tm.elapsed();
        };
    };

    auto spec_trap = base_spec(g023);
    auto spec_atan = base_spec(g023);
    spec_atan.ramp = protocols::RampKind::arctangent;
    auto spec_two = base_spec(g459);

    std::vector<std::function<void()>> tasks;
    tasks.push_back(protocol_task(entangle, [](const auto& s) { return protocols::entangle(s); },
                                  spec_two));
    tasks.push_back(protocol_task(transfer, [](const auto& s) { return protocols::transfer(s); },
                                  spec_two));
    tasks.push_back([&] { weak = resonant_hold_run(p, omega0, info.s_star, info.x01, 0.01, dt_fs); });
    tasks.push_back(protocol_task(storage_trap, [](const auto& s) { return protocols::storage(s); },
                                  spec_trap));
    tasks.push_back(protocol_task(storage_atan, [](const auto& s) { return protocols::storage(s); },
                                  spec_atan));
    tasks.push_back(
        [&] { strong = resonant_hold_run(p, omega0, info.s_star, info.x01, 0.10, dt_fs); });
    tasks.push_back([&] { cross = propagator_cross_check(p, omega0, info.s_star, dt_fs); });
    run_tasks(tasks, threads);

    // ---- assemble the twelve criteria ----
    auto& out = suite.criteria;
    out.push_back(check_level_spacings(spectra));
    out.push_back(check_dipole_elements(spectra[2]));
    out.push_back(check_sum_rule(spectra[0], spectra[2], p.Ec));
    out.push_back(check_resonator());
    {
        auto r = check_resonance(info);
        r.seconds += res_seconds;
        out.push_back(r);
    }

    if (!storage_trap.error.empty()) {
        out.push_back(failed(6, "storage swap into the resonator", storage_trap.error,
                             storage_trap.seconds));
    } else {
        const auto& rep = storage_trap.report;
        const double p01 = rep.occupation("0_1");
        const double p10 = rep.occupation("1_0");
        const double p11 = rep.occupation("1_1");
        const bool pass = std::abs(p01 - 0.987) <= 0.010 && p10 <= 0.01 && p11 <= 0.01 &&
                          rep.norm_drift < 7e-5 && rep.max_leakage < 1e-3;
        out.push_back({6, "storage swap into the resonator", pass,
                       strf("|c01|^2=%.4f (0.987 +-0.010), |c10|^2=%.1e, |c11|^2=%.1e (<=0.01), "
                            "norm drift=%.1e (<7e-05), leakage=%.1e (<1e-03)",
                            p01, p10, p11, rep.norm_drift, rep.max_leakage),
                       storage_trap.seconds});
    }

    if (!transfer.error.empty()) {
        out.push_back(failed(7, "junction-to-junction state transfer", transfer.error,
                             transfer.seconds));
    } else {
        const double p010 = transfer.report.occupation("0_1_0");
        out.push_back({7, "junction-to-junction state transfer", std::abs(p010 - 0.974) <= 0.010,
                       strf("|c010|^2=%.4f (0.974 +-0.010)", p010), transfer.seconds});
    }

    if (!entangle.error.empty()) {
        out.push_back(failed(8, "entangled pair preparation", entangle.error, entangle.seconds));
    } else {
        const double fid = entangle.report.fidelity;
        out.push_back({8, "entangled pair preparation", std::abs(fid - 0.92) <= 0.02,
                       strf("fidelity to (|100>-|010>)/sqrt2 = %.4f (0.92 +-0.02)", fid),
                       entangle.seconds});
    }

    if (!storage_trap.error.empty() || !storage_atan.error.empty()) {
        out.push_back(failed(9, "ramp profile sensitivity",
                             storage_trap.error.empty() ? storage_atan.error : storage_trap.error,
                             storage_atan.seconds));
    } else {
        const double gap = storage_trap.report.fidelity - storage_atan.report.fidelity;
        out.push_back({9, "ramp profile sensitivity", gap > 0.1,
                       strf("trapezoid fid %.4f - arctangent fid %.4f = %.4f (> 0.1)",
                            storage_trap.report.fidelity, storage_atan.report.fidelity, gap),
                       storage_atan.seconds});
    }

    if (!weak.error.empty() || !strong.error.empty()) {
        out.push_back(failed(10, "strong-coupling envelope breakdown",
                             weak.error.empty() ? strong.error : weak.error,
                             weak.seconds + strong.seconds));
    } else {
        const double ratio = weak.dev_env > 0 ? strong.dev_env / weak.dev_env : 1e300;
        out.push_back({10, "strong-coupling envelope breakdown", ratio > 5.0,
                       strf("envelope deviation %.2e (g/w0=0.10) vs %.2e (g/w0=0.01), "
                            "ratio %.1f (> 5)",
                            strong.dev_env, weak.dev_env, ratio),
                       weak.seconds + strong.seconds});
    }

    if (!cross.error.empty()) {
        out.push_back(failed(11, "propagator cross-check and RK4 order", cross.error,
                             cross.seconds));
    } else {
        const bool pass = cross.max_amp_diff <= 1e-6 && std::abs(cross.order - 4.0) <= 0.5;
        out.push_back({11, "propagator cross-check and RK4 order", pass,
                       strf("max amplitude diff vs exact propagator %.2e (<=1e-06) over 10 ns; "
                            "observed order %.2f (4 +-0.5)",
                            cross.max_amp_diff, cross.order),
                       cross.seconds});
    }

    {
        Timer tm;
        const double closed = rotating_frame_closed_form_error();
        if (!weak.error.empty()) {
            out.push_back(failed(12, "rotating-frame closed forms", weak.error, tm.elapsed()));
        } else {
            const double sim_dev = std::max(weak.dev_env, weak.dev_01);
            const bool pass = closed < 1e-13 && sim_dev < 0.02;
            out.push_back({12, "rotating-frame closed forms", pass,
                           strf("closed-form max err %.1e (<1e-13); full simulation vs envelope "
                                "%.2e in |c|^2 (<0.02 at g/w0=0.01)",
                                closed, sim_dev),
                           tm.elapsed()});
        }
    }

    suite.all_pass = std::all_of(out.begin(), out.end(),
                                 [](const CriterionResult& c) { return c.pass; });
    suite.total_seconds = total.elapsed();
    return suite;
}

std::string format_table(const SuiteResult& suite) {
    std::ostringstream os;
    int passed = 0;
    for (const auto& c : suite.criteria) {
        os << strf("[%2d] %s  %-38s %s  [%.1f s]\n", c.id, c.pass ? "PASS" : "FAIL",
                   c.name.c_str(), c.detail.c_str(), c.seconds);
        if (c.pass) ++passed;
    }
    os << strf("overall: %s (%d/%d) in %.1f s\n", suite.all_pass ? "PASS" : "FAIL", passed,
               static_cast<int>(suite.criteria.size()), suite.total_seconds);
    return os.str();
}

} // namespace pbus::accept
