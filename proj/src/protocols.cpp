#include "phononbus/protocols.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "phononbus/composite.hpp"

namespace pbus::protocols {

namespace {

using dynamics::Segment;

double ramp_span(RampKind r, double tau) {
    return r == RampKind::trapezoid ? tau : 3.0 * tau;
}

Segment make_ramp(RampKind r, double from, double to, double tau) {
    switch (r) {
        case RampKind::trapezoid: return Segment::trapezoid_ramp(from, to, tau);
        case RampKind::gaussian: return Segment::gaussian_ramp(from, to, tau);
        case RampKind::arctangent: return Segment::arctangent_ramp(from, to, tau);
    }
    throw ScheduleError("unknown ramp kind");
}

// one junction's line: lead hold, optional excursion to s_star, tail hold
std::vector<Segment> line(const ProtocolSpec& spec, double s_star, double lead, double window,
                          double tail) {
    std::vector<Segment> segs;
    if (window <= 0) {
        segs.push_back(Segment::hold(spec.s_off, lead + tail));
        return segs;
    }
    const double tau = spec.crossover_ns;
    segs.push_back(Segment::hold(spec.s_off, lead));
    segs.push_back(make_ramp(spec.ramp, spec.s_off, s_star, tau));
    segs.push_back(Segment::hold(s_star, window));
    segs.push_back(make_ramp(spec.ramp, s_star, spec.s_off, tau));
    segs.push_back(Segment::hold(spec.s_off, tail));
    return segs;
}

double planned_window(const ProtocolSpec& spec, const ResonanceInfo& info, rwa::Operation op) {
    if (spec.window_override_ns >= 0) return spec.window_override_ns;
    if (info.omega_rabi <= 0)
        throw ScheduleError("zero coupling strength: an explicit window duration is required");
    return rwa::pulse_plan(op) / info.omega_rabi;
}

Eigen::VectorXcd basis_vector(const composite::ProductBasis& basis, const std::vector<int>& m,
                              const std::vector<int>& n) {
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(basis.dim());
    v[basis.index(m, n)] = 1.0;
    return v;
}

void check_qubit_state(const ProtocolSpec& spec) {
    if (spec.initial_amplitudes.size() > 0) return;
    const double p = std::norm(spec.alpha) + std::norm(spec.beta);
    if (std::abs(p - 1.0) > 1e-9)
        throw DomainError("protocol: |alpha|^2 + |beta|^2 must equal 1");
}

FidelityReport run(const ProtocolSpec& spec, const dynamics::BiasSchedule& sched,
                   const composite::CouplingGraph& graph, const composite::ProductBasis& basis,
                   Eigen::VectorXcd c0, const Eigen::VectorXcd& target,
                   const ResonanceInfo& info,
                   std::vector<std::pair<double, double>> windows) {
    const auto t_begin = std::chrono::steady_clock::now();

    std::vector<junction::JunctionParams> params(basis.junction_levels.size(),
                                                 spec.junction_params);
    const auto sys = dynamics::CoupledSystem::build(params, {spec.omega0}, graph, basis, sched);
    if (spec.initial_amplitudes.size() > 0) {
        if (spec.initial_amplitudes.size() != sys.basis.dim())
            throw DomainError("protocol: initial amplitude vector has wrong dimension");
        c0 = spec.initial_amplitudes;
    }

    FidelityReport rep;
    rep.resonance = info;
    rep.windows = std::move(windows);
    rep.target = target;
    rep.trajectory = dynamics::integrate(sys, sched, c0, spec.integrator);

    const auto& tr = rep.trajectory;
    rep.labels = tr.labels;
    rep.final_amplitudes = tr.final_c;
    rep.norm_drift = tr.norm_drift;

    const int dim = static_cast<int>(tr.labels.size());
    rep.occupations.resize(dim);
    for (int a = 0; a < dim; ++a) rep.occupations[a] = std::norm(tr.final_c[a]);

    // computational subspace: every junction level and phonon number <= 1
    std::vector<bool> comp(dim, true);
    {
        std::vector<int> m, n;
        for (int a = 0; a < dim; ++a) {
            basis.decode(a, m, n);
            for (int v : m)
                if (v > 1) comp[a] = false;
            for (int v : n)
                if (v > 1) comp[a] = false;
        }
    }
    rep.leakage = 0;
    for (int a = 0; a < dim; ++a)
        if (!comp[a]) rep.leakage += rep.occupations[a];
    rep.max_leakage = 0;
    for (int r = 0; r < tr.rows(); ++r) {
        double lk = 0;
        for (int a = 0; a < dim; ++a)
            if (!comp[a]) lk += std::norm(tr.c(a, r));
        rep.max_leakage = std::max(rep.max_leakage, lk);
    }

    const std::complex<double> ov = target.dot(tr.final_c);
    rep.fidelity = std::norm(ov) / target.squaredNorm();

    rep.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_begin).count();
    return rep;
}

} // namespace

RampKind ramp_from_string(const std::string& name) {
    if (name == "trapezoid") return RampKind::trapezoid;
    if (name == "gaussian") return RampKind::gaussian;
    if (name == "arctangent") return RampKind::arctangent;
    throw ConfigError("unknown ramp kind: " + name);
}

const char* to_string(RampKind r) {
    switch (r) {
        case RampKind::trapezoid: return "trapezoid";
        case RampKind::gaussian: return "gaussian";
        case RampKind::arctangent: return "arctangent";
    }
    throw ConfigError("unknown ramp kind");
}

ResonanceInfo resonance_info(const junction::JunctionParams& p, double omega0, double g) {
    if (g < 0) throw DomainError("resonance_info: coupling must be nonnegative");
    ResonanceInfo info;
    const auto bias = composite::resonant_bias(p, omega0);
    info.s_star = bias.s_exact;
    info.s_harmonic = bias.s_harmonic;
    junction::BasisPolicy pol;
    pol.explicit_count = 48;
    info.x01 = junction::diagonalize(p, info.s_star, pol).dipole(0, 1);
    info.omega_rabi = 2.0 * g * info.x01;
    info.period_ns = info.omega_rabi > 0 ? 2.0 * pi / info.omega_rabi : 0.0;
    return info;
}

double FidelityReport::occupation(const std::string& label) const {
    for (size_t a = 0; a < labels.size(); ++a)
        if (labels[a] == label) return occupations[a];
    throw DomainError("no basis state labeled " + label);
}

FidelityReport storage(const ProtocolSpec& spec) {
    check_qubit_state(spec);
    const ResonanceInfo info = resonance_info(spec.junction_params, spec.omega0, spec.g);
    const double w = planned_window(spec, info, rwa::Operation::swap);
    const double tau = spec.crossover_ns;
    const auto basis = composite::ProductBasis::single(spec.junction_levels, spec.phonon_levels);

    dynamics::BiasSchedule sched;
    std::vector<std::pair<double, double>> windows;
    if (w > 0 && spec.ramp == RampKind::arctangent) {
        // single smooth pulse with power-law tails on the trapezoid-equivalent timeline
        const double T = spec.pre_hold_ns + tau + w + tau + spec.gap_ns;
        const double t_on = spec.pre_hold_ns + 0.5 * tau;
        const double t_off = t_on + w + tau;
        sched = dynamics::BiasSchedule::single(
            {Segment::arctangent_flattop(spec.s_off, info.s_star, t_on, t_off, tau, T)});
        windows.push_back({spec.pre_hold_ns + tau, spec.pre_hold_ns + tau + w});
    } else {
        const double r = ramp_span(spec.ramp, tau);
        sched = dynamics::BiasSchedule::single(
            line(spec, info.s_star, spec.pre_hold_ns, w, spec.gap_ns));
        if (w > 0) windows.push_back({spec.pre_hold_ns + r, spec.pre_hold_ns + r + w});
    }

    const Eigen::VectorXcd c0 = spec.alpha * basis_vector(basis, {0}, {0}) +
                                spec.beta * basis_vector(basis, {1}, {0});
    const Eigen::VectorXcd target = spec.alpha * basis_vector(basis, {0}, {0}) +
                                    spec.beta * basis_vector(basis, {0}, {1});
    return run(spec, sched, composite::CouplingGraph::single(spec.g), basis, c0, target, info,
               std::move(windows));
}

FidelityReport retrieve(const ProtocolSpec& spec) {
    check_qubit_state(spec);
    const ResonanceInfo info = resonance_info(spec.junction_params, spec.omega0, spec.g);
    const double w = planned_window(spec, info, spec.second_window);
    const double r = ramp_span(spec.ramp, spec.crossover_ns);
    const auto basis = composite::ProductBasis::single(spec.junction_levels, spec.phonon_levels);

    dynamics::BiasSchedule sched = dynamics::BiasSchedule::single(
        line(spec, info.s_star, spec.pre_hold_ns, w, spec.gap_ns));
    std::vector<std::pair<double, double>> windows;
    if (w > 0) windows.push_back({spec.pre_hold_ns + r, spec.pre_hold_ns + r + w});

    const Eigen::VectorXcd c0 = spec.alpha * basis_vector(basis, {0}, {0}) +
                                spec.beta * basis_vector(basis, {0}, {1});
    const Eigen::VectorXcd target = spec.alpha * basis_vector(basis, {0}, {0}) +
                                    spec.beta * basis_vector(basis, {1}, {0});
    return run(spec, sched, composite::CouplingGraph::single(spec.g), basis, c0, target, info,
               std::move(windows));
}

namespace {

// shared two-junction schedule: J1 excursion, then J2 excursion, strictly sequenced
FidelityReport two_junction(const ProtocolSpec& spec, rwa::Operation op1, rwa::Operation op2,
                            const Eigen::VectorXcd& c0, const Eigen::VectorXcd& target) {
    const ResonanceInfo info = resonance_info(spec.junction_params, spec.omega0, spec.g);
    const double w1 = planned_window(spec, info, op1);
    const double w2 = planned_window(spec, info, op2);
    const double r = ramp_span(spec.ramp, spec.crossover_ns);
    const double span1 = w1 > 0 ? 2 * r + w1 : 0;
    const double span2 = w2 > 0 ? 2 * r + w2 : 0;

    // Between the two excursions, the branch parked in a junction precesses
    // relative to the branch circulating through the resonator at the hold-bias
    // detuning (~4 rad/ns here, a turn every ~1.5 ns).  The relative phase of a
    // superposition target therefore depends on when the second window opens.
    // Stretch the inter-window gap to the next whole number of precession turns
    // so that phase is a designed quantity, not an accident of the timeline.
    // (The two rise ramps are congruent, so their phase contributions cancel.)
    double gap = spec.gap_ns;
    if (w1 > 0 && w2 > 0) {
        junction::BasisPolicy pol;
        pol.explicit_count = 48;
        const auto off = junction::diagonalize(spec.junction_params, spec.s_off, pol);
        const double detune = (off.energies[1] - off.energies[0]) - spec.omega0;
        if (std::abs(detune) > 1e-9) {
            const double turns = detune * (span1 + gap) / (2.0 * pi);
            const double whole = detune > 0 ? std::ceil(turns) : std::floor(turns);
            gap += 2.0 * pi * (whole - turns) / detune;
        }
    }
    const double T = spec.pre_hold_ns + span1 + gap + span2 + spec.gap_ns;

    dynamics::BiasSchedule sched;
    sched.junctions.push_back(
        line(spec, info.s_star, spec.pre_hold_ns, w1, T - spec.pre_hold_ns - span1));
    sched.junctions.push_back(
        line(spec, info.s_star, spec.pre_hold_ns + span1 + gap, w2, spec.gap_ns));

    std::vector<std::pair<double, double>> windows;
    if (w1 > 0) windows.push_back({spec.pre_hold_ns + r, spec.pre_hold_ns + r + w1});
    if (w2 > 0) {
        const double start = spec.pre_hold_ns + span1 + gap + r;
        windows.push_back({start, start + w2});
    }

    const auto basis = composite::ProductBasis::pair(spec.junction_levels, spec.phonon_levels);
    return run(spec, sched, composite::CouplingGraph::pair(spec.g), basis, c0, target, info,
               std::move(windows));
}

} // namespace

FidelityReport transfer(const ProtocolSpec& spec) {
    check_qubit_state(spec);
    const auto basis = composite::ProductBasis::pair(spec.junction_levels, spec.phonon_levels);
    const Eigen::VectorXcd c0 = spec.alpha * basis_vector(basis, {0, 0}, {0}) +
                                spec.beta * basis_vector(basis, {1, 0}, {0});
    const Eigen::VectorXcd target = spec.alpha * basis_vector(basis, {0, 0}, {0}) +
                                    spec.beta * basis_vector(basis, {0, 1}, {0});
    return two_junction(spec, rwa::Operation::swap, spec.second_window, c0, target);
}

FidelityReport entangle(const ProtocolSpec& spec) {
    const auto basis = composite::ProductBasis::pair(spec.junction_levels, spec.phonon_levels);
    const Eigen::VectorXcd c0 = basis_vector(basis, {1, 0}, {0});
    const bool plus = spec.second_window == rwa::Operation::retrieve_or_transfer_general;
    const rwa::Operation op2 = plus ? rwa::Operation::retrieve_or_transfer_general
                                    : rwa::Operation::swap;
    const double sign = plus ? 1.0 : -1.0;
    const Eigen::VectorXcd target =
        (basis_vector(basis, {1, 0}, {0}) + sign * basis_vector(basis, {0, 1}, {0})) /
        std::sqrt(2.0);
    return two_junction(spec, rwa::Operation::entangle_plus, op2, c0, target);
}

} // namespace pbus::protocols
