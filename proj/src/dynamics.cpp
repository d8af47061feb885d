#include "phononbus/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace pbus::dynamics {

namespace {

constexpr double kErfInv08 = 0.9061938024368232; // erf(x) = 0.8

double solve_arctan_width(double duration, double crossover) {
    // 2 w atan(duration / 2w) = crossover; left side increases with w
    double lo = 1e-12 * crossover, hi = crossover;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double f = 2.0 * mid * std::atan(duration / (2.0 * mid));
        if (f < crossover)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

} // namespace

double Segment::bias(double tau) const {
    tau = std::clamp(tau, 0.0, duration);
    switch (kind) {
        case Kind::hold:
            return s_from;
        case Kind::trapezoid_ramp:
            return s_from + (s_to - s_from) * (tau / duration);
        case Kind::gaussian_ramp: {
            const double tc = 0.5 * duration;
            const double A = std::erf(tc / width);
            return s_from + (s_to - s_from) * (std::erf((tau - tc) / width) + A) / (2.0 * A);
        }
        case Kind::arctangent_ramp: {
            const double tc = 0.5 * duration;
            const double A = std::atan(tc / width);
            return s_from + (s_to - s_from) * (std::atan((tau - tc) / width) + A) / (2.0 * A);
        }
        case Kind::arctangent_flattop: {
            const double d = s_to - s_from;
            return s_from + d * (std::atan((tau - t_on) / width) - std::atan((tau - t_off) / width)) / pi;
        }
    }
    throw ScheduleError("unknown segment kind");
}

double Segment::bias_rate(double tau) const {
    tau = std::clamp(tau, 0.0, duration);
    switch (kind) {
        case Kind::hold:
            return 0.0;
        case Kind::trapezoid_ramp:
            return (s_to - s_from) / duration;
        case Kind::gaussian_ramp: {
            const double tc = 0.5 * duration;
            const double A = std::erf(tc / width);
            const double u = (tau - tc) / width;
            return (s_to - s_from) / (2.0 * A) * (2.0 / std::sqrt(pi)) * std::exp(-u * u) / width;
        }
        case Kind::arctangent_ramp: {
            const double tc = 0.5 * duration;
            const double A = std::atan(tc / width);
            const double u = tau - tc;
            return (s_to - s_from) / (2.0 * A) * width / (width * width + u * u);
        }
        case Kind::arctangent_flattop: {
            const double d = s_to - s_from;
            const double ua = tau - t_on, ub = tau - t_off;
            return d / pi * (width / (width * width + ua * ua) - width / (width * width + ub * ub));
        }
    }
    throw ScheduleError("unknown segment kind");
}

Segment Segment::hold(double s, double duration) {
    if (duration <= 0) throw ScheduleError("hold: duration must be positive");
    Segment g;
    g.kind = Kind::hold;
    g.s_from = g.s_to = s;
    g.duration = duration;
    return g;
}

Segment Segment::trapezoid_ramp(double s_from, double s_to, double crossover) {
    if (crossover <= 0) throw ScheduleError("trapezoid_ramp: crossover must be positive");
    Segment g;
    g.kind = Kind::trapezoid_ramp;
    g.s_from = s_from;
    g.s_to = s_to;
    g.duration = crossover;
    return g;
}

Segment Segment::gaussian_ramp(double s_from, double s_to, double crossover) {
    if (crossover <= 0) throw ScheduleError("gaussian_ramp: crossover must be positive");
    Segment g;
    g.kind = Kind::gaussian_ramp;
    g.s_from = s_from;
    g.s_to = s_to;
    g.duration = 3.0 * crossover;
    g.width = crossover / (2.0 * kErfInv08); // 10-90% rise = crossover
    return g;
}

Segment Segment::arctangent_ramp(double s_from, double s_to, double crossover) {
    if (crossover <= 0) throw ScheduleError("arctangent_ramp: crossover must be positive");
    Segment g;
    g.kind = Kind::arctangent_ramp;
    g.s_from = s_from;
    g.s_to = s_to;
    g.duration = 3.0 * crossover;
    g.width = solve_arctan_width(g.duration, crossover);
    return g;
}

Segment Segment::arctangent_flattop(double s_base, double s_top, double t_on, double t_off,
                                    double crossover, double duration) {
    if (duration <= 0 || crossover <= 0) throw ScheduleError("arctangent_flattop: durations must be positive");
    if (!(0.0 < t_on && t_on < t_off && t_off < duration))
        throw ScheduleError("arctangent_flattop: need 0 < t_on < t_off < duration");
    Segment g;
    g.kind = Kind::arctangent_flattop;
    g.s_from = s_base;
    g.s_to = s_top;
    g.duration = duration;
    g.width = crossover / pi; // inflection slope matches the linear-ramp slope
    g.t_on = t_on;
    g.t_off = t_off;
    return g;
}

double BiasSchedule::duration() const {
    if (junctions.empty()) throw ScheduleError("schedule has no junctions");
    double T = 0;
    for (const auto& seg : junctions[0]) T += seg.duration;
    return T;
}

double BiasSchedule::bias(int j, double t) const {
    const auto& segs = junctions.at(j);
    double start = 0;
    for (size_t k = 0; k < segs.size(); ++k) {
        const double end = start + segs[k].duration;
        if (t < end || k + 1 == segs.size()) return segs[k].bias(t - start);
        start = end;
    }
    throw ScheduleError("empty schedule for junction " + std::to_string(j));
}

double BiasSchedule::bias_rate(int j, double t) const {
    const auto& segs = junctions.at(j);
    double start = 0;
    for (size_t k = 0; k < segs.size(); ++k) {
        const double end = start + segs[k].duration;
        if (t < end || k + 1 == segs.size()) return segs[k].bias_rate(t - start);
        start = end;
    }
    throw ScheduleError("empty schedule for junction " + std::to_string(j));
}

void BiasSchedule::bias_range(int j, double& lo, double& hi) const {
    lo = 1e300;
    hi = -1e300;
    for (const auto& seg : junctions.at(j)) {
        const int N = 1024;
        for (int k = 0; k <= N; ++k) {
            const double v = seg.bias(seg.duration * k / N);
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
    }
}

std::vector<double> BiasSchedule::boundaries() const {
    const double T = duration();
    std::vector<double> b{0.0, T};
    for (const auto& segs : junctions) {
        double start = 0;
        for (const auto& seg : segs) {
            start += seg.duration;
            b.push_back(std::min(start, T));
        }
    }
    std::sort(b.begin(), b.end());
    std::vector<double> out;
    for (double v : b)
        if (out.empty() || v - out.back() > 1e-12) out.push_back(v);
    if (std::abs(out.back() - T) > 1e-12)
        out.push_back(T);
    else
        out.back() = T;
    return out;
}

void BiasSchedule::validate() const {
    if (junctions.empty()) throw ScheduleError("schedule has no junctions");
    const double T = duration();
    if (!(T > 0)) throw ScheduleError("schedule duration must be positive");
    for (size_t j = 0; j < junctions.size(); ++j) {
        const auto& segs = junctions[j];
        if (segs.empty()) throw ScheduleError("junction " + std::to_string(j) + " has no segments");
        double Tj = 0;
        for (size_t k = 0; k < segs.size(); ++k) {
            if (!(segs[k].duration > 0)) throw ScheduleError("segment duration must be positive");
            Tj += segs[k].duration;
            if (k + 1 < segs.size()) {
                const double a = segs[k].bias(segs[k].duration);
                const double b = segs[k + 1].bias(0.0);
                if (std::abs(a - b) > 1e-9)
                    throw ScheduleError("bias discontinuity at segment joint: " +
                                        std::to_string(a) + " vs " + std::to_string(b));
            }
            const int N = 256;
            for (int q = 0; q <= N; ++q) {
                const double v = segs[k].bias(segs[k].duration * q / N);
                if (!std::isfinite(v) || v < -1e-12 || v > 0.99 + 1e-12)
                    throw ScheduleError("bias " + std::to_string(v) + " outside [0, 0.99]");
            }
        }
        if (std::abs(Tj - T) > 1e-9 * std::max(1.0, T))
            throw ScheduleError("junction schedules have unequal total durations");
    }
}

BiasSchedule BiasSchedule::single(std::vector<Segment> segments) {
    BiasSchedule s;
    s.junctions.push_back(std::move(segments));
    return s;
}

CoupledSystem CoupledSystem::build(std::vector<junction::JunctionParams> params,
                                   std::vector<double> omega0, composite::CouplingGraph graph,
                                   composite::ProductBasis basis, const BiasSchedule& schedule,
                                   double table_margin) {
    const int J = static_cast<int>(basis.junction_levels.size());
    const int I = static_cast<int>(basis.phonon_cutoffs.size());
    if (static_cast<int>(params.size()) != J)
        throw StructuralError("system: need one junction parameter set per junction slot");
    if (static_cast<int>(omega0.size()) != I)
        throw StructuralError("system: need one frequency per resonator slot");
    graph.validate(J, I);
    schedule.validate();
    if (schedule.num_junctions() != J)
        throw StructuralError("system: schedule junction count does not match basis");

    CoupledSystem sys;
    sys.params = std::move(params);
    sys.omega0 = std::move(omega0);
    sys.graph = std::move(graph);
    sys.basis = std::move(basis);
    for (int j = 0; j < J; ++j) {
        double lo, hi;
        schedule.bias_range(j, lo, hi);
        lo = std::max(0.0, lo - table_margin);
        hi = std::min(0.995, hi + table_margin);
        sys.tables.push_back(std::make_shared<composite::SpectrumTable>(
            composite::SpectrumTable::build(sys.params[j], lo, hi, sys.basis.junction_levels[j])));
    }
    return sys;
}

namespace {

// active segment of one junction over a boundary-delimited span
struct ActiveSeg {
    const Segment* seg;
    double start; // absolute time of segment start
};

struct Engine {
    const CoupledSystem& sys;
    const IntegratorConfig& cfg;
    int dim, J, I;

    struct EntryX {
        int pos, j, xidx;
        double coef;
    };
    struct EntryD {
        int pos, j, didx;
    };
    std::vector<EntryX> ex;
    std::vector<EntryD> ed;
    std::vector<int> touched;
    Eigen::MatrixXi mlev;   // dim x J
    Eigen::VectorXd e_base; // resonator energies + gauge shift

    std::vector<Eigen::VectorXd> tE, tX, tD; // per-junction table outputs
    Eigen::MatrixXd d2, y2;
    Eigen::VectorXcd k1, k2, k3, k4, ct;

    Engine(const CoupledSystem& s, const IntegratorConfig& c)
        : sys(s), cfg(c), dim(s.basis.dim()),
          J(static_cast<int>(s.basis.junction_levels.size())),
          I(static_cast<int>(s.basis.phonon_cutoffs.size())) {
        mlev.resize(dim, J);
        e_base.resize(dim);
        for (int j = 0; j < J; ++j) {
            const int L = sys.basis.junction_levels[j];
            tE.emplace_back(L);
            tX.emplace_back(L * L);
            tD.emplace_back(L * L);
        }
        d2.resize(dim, 2);
        y2.resize(dim, 2);
        k1.resize(dim);
        k2.resize(dim);
        k3.resize(dim);
        k4.resize(dim);
        ct.resize(dim);
        build_sparsity();
    }

    void build_sparsity() {
        std::vector<long> sj, si;
        {
            // recompute strides as in the basis encoding
            long acc = 1;
            si.assign(I, 0);
            sj.assign(J, 0);
            for (int i = I - 1; i >= 0; --i) {
                si[i] = acc;
                acc *= sys.basis.phonon_cutoffs[i];
            }
            for (int j = J - 1; j >= 0; --j) {
                sj[j] = acc;
                acc *= sys.basis.junction_levels[j];
            }
        }
        std::vector<int> m, n;
        for (int a = 0; a < dim; ++a) {
            sys.basis.decode(a, m, n);
            double eres = cfg.energy_shift;
            for (int i = 0; i < I; ++i) eres += sys.omega0[i] * n[i];
            e_base[a] = eres;
            for (int j = 0; j < J; ++j) mlev(a, j) = m[j];

            for (int i = 0; i < I; ++i)
                for (int j = 0; j < J; ++j) {
                    const double gij = sys.graph.g(i, j) * cfg.coupling_scale;
                    if (sys.graph.g(i, j) == 0.0) continue;
                    const int L = sys.basis.junction_levels[j];
                    for (int dn = -1; dn <= 1; dn += 2) {
                        const int np = n[i] + dn;
                        if (np < 0 || np >= sys.basis.phonon_cutoffs[i]) continue;
                        const double B = (dn == 1) ? std::sqrt(double(np)) : -std::sqrt(double(n[i]));
                        for (int mp = 0; mp < L; ++mp) {
                            const long b = a + (mp - m[j]) * sj[j] + dn * si[i];
                            ex.push_back({static_cast<int>(a + b * dim), j, m[j] * L + mp, gij * B});
                        }
                    }
                }
            for (int j = 0; j < J; ++j) {
                const int L = sys.basis.junction_levels[j];
                for (int mp = 0; mp < L; ++mp) {
                    if (mp == m[j]) continue;
                    const long b = a + (mp - m[j]) * sj[j];
                    ed.push_back({static_cast<int>(a + b * dim), j, m[j] * L + mp});
                }
            }
        }
        touched.reserve(ex.size() + ed.size());
        for (const auto& e : ex) touched.push_back(e.pos);
        for (const auto& e : ed) touched.push_back(e.pos);
        std::sort(touched.begin(), touched.end());
        touched.erase(std::unique(touched.begin(), touched.end()), touched.end());
    }

    // evaluate tables at the given biases and fill W and E
    void fill(const double* s, const double* sdot, Eigen::MatrixXd& W, Eigen::VectorXd& E) {
        for (int j = 0; j < J; ++j)
            sys.tables[j]->evaluate(s[j], tE[j].data(), tX[j].data(), tD[j].data());
        double* Wd = W.data();
        for (int pos : touched) Wd[pos] = 0.0;
        for (const auto& e : ex) Wd[e.pos] += e.coef * tX[e.j][e.xidx];
        if (cfg.include_nonadiabatic)
            for (const auto& e : ed) {
                const double sd = sdot[e.j];
                if (sd != 0.0) Wd[e.pos] += sd * tD[e.j][e.didx];
            }
        for (int a = 0; a < dim; ++a) {
            double v = e_base[a];
            for (int j = 0; j < J; ++j) v += tE[j][mlev(a, j)];
            E[a] = v;
        }
    }

    // dc/dt = -U .* (W (conj(U) .* c)) with U = exp(i Theta)
    void deriv(const Eigen::MatrixXd& W, const Eigen::VectorXcd& U, const Eigen::VectorXcd& cin,
               Eigen::VectorXcd& out) {
        for (int a = 0; a < dim; ++a) {
            const std::complex<double> d = std::conj(U[a]) * cin[a];
            d2(a, 0) = d.real();
            d2(a, 1) = d.imag();
        }
        y2.noalias() = W * d2;
        for (int a = 0; a < dim; ++a)
            out[a] = -U[a] * std::complex<double>(y2(a, 0), y2(a, 1));
    }

    void rk4_step(const Eigen::MatrixXd& W0, const Eigen::MatrixXd& Wh, const Eigen::MatrixXd& W1,
                  const Eigen::VectorXcd& U0, const Eigen::VectorXcd& Uh, const Eigen::VectorXcd& U1,
                  double h, Eigen::VectorXcd& c) {
        deriv(W0, U0, c, k1);
        ct = c + (0.5 * h) * k1;
        deriv(Wh, Uh, ct, k2);
        ct = c + (0.5 * h) * k2;
        deriv(Wh, Uh, ct, k3);
        ct = c + h * k3;
        deriv(W1, U1, ct, k4);
        c += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
};

void kahan_add(Eigen::VectorXd& sum, Eigen::VectorXd& comp, const Eigen::VectorXd& delta) {
    for (int a = 0; a < sum.size(); ++a) {
        const double y = delta[a] - comp[a];
        const double t = sum[a] + y;
        comp[a] = (t - sum[a]) - y;
        sum[a] = t;
    }
}

Eigen::VectorXcd unit_phase(const Eigen::VectorXd& theta) {
    Eigen::VectorXcd u(theta.size());
    for (int a = 0; a < theta.size(); ++a) u[a] = std::complex<double>(std::cos(theta[a]), std::sin(theta[a]));
    return u;
}

} // namespace

Trajectory integrate(const CoupledSystem& sys, const BiasSchedule& schedule,
                     const Eigen::VectorXcd& c0, const IntegratorConfig& cfg) {
    schedule.validate();
    const int dim = sys.dim();
    const int J = schedule.num_junctions();
    if (J != static_cast<int>(sys.basis.junction_levels.size()))
        throw StructuralError("integrate: schedule junction count does not match system");
    if (c0.size() != dim) throw StructuralError("integrate: initial state has wrong dimension");
    if (std::abs(c0.norm() - 1.0) > 1e-3)
        throw DomainError("integrate: initial state must be normalized");
    if (!(cfg.dt_fs > 0)) throw DomainError("integrate: dt must be positive");
    const double dt_ns = cfg.dt_fs * 1e-6;
    const int max_rows = std::clamp(cfg.max_rows, 1, 100000);

    Engine eng(sys, cfg);

    const std::vector<double> bnd = schedule.boundaries();
    const int nspan = static_cast<int>(bnd.size()) - 1;

    // bind active segments per span and count total steps for the sample stride
    std::vector<std::vector<ActiveSeg>> active(nspan, std::vector<ActiveSeg>(J));
    std::vector<long> steps(nspan);
    long total_steps = 0;
    for (int sp = 0; sp < nspan; ++sp) {
        const double len = bnd[sp + 1] - bnd[sp];
        const double mid = 0.5 * (bnd[sp] + bnd[sp + 1]);
        for (int j = 0; j < J; ++j) {
            double start = 0;
            const auto& segs = schedule.junctions[j];
            for (size_t k = 0; k < segs.size(); ++k) {
                const double end = start + segs[k].duration;
                if (mid < end || k + 1 == segs.size()) {
                    active[sp][j] = {&segs[k], start};
                    break;
                }
                start = end;
            }
        }
        steps[sp] = std::max<long>(1, static_cast<long>(std::ceil(len / dt_ns - 1e-12)));
        total_steps += steps[sp];
    }
    const long stride = std::max<long>(1, (total_steps + max_rows - 1) / max_rows);

    Trajectory tr;
    tr.duration_ns = schedule.duration();
    tr.labels.resize(dim);
    for (int a = 0; a < dim; ++a) tr.labels[a] = sys.basis.label(a);
    const long est_rows = total_steps / stride + nspan + 4;
    tr.t.reserve(est_rows);
    tr.norm.reserve(est_rows);
    tr.c.resize(dim, est_rows);
    tr.s.resize(0, J);
    std::vector<Eigen::RowVectorXd> srows;
    srows.reserve(est_rows);

    Eigen::VectorXcd c = c0;
    Eigen::VectorXd theta = Eigen::VectorXd::Zero(dim);
    Eigen::VectorXd comp = Eigen::VectorXd::Zero(dim);

    Eigen::MatrixXd W0 = Eigen::MatrixXd::Zero(dim, dim), Wh = W0, W1 = W0;
    Eigen::VectorXd E0(dim), Eh(dim), E1(dim);
    Eigen::VectorXd thalf(dim), tfull(dim), delta(dim);
    std::vector<double> sv0(J), svh(J), sv1(J), sd0(J), sdh(J), sd1(J);

    int row = 0;
    auto sample = [&](double tnow, const double* svals) {
        tr.t.push_back(tnow);
        tr.norm.push_back(c.norm());
        tr.c.col(row) = c;
        Eigen::RowVectorXd sr(J);
        for (int j = 0; j < J; ++j) sr[j] = svals[j];
        srows.push_back(sr);
        ++row;
    };

    for (int j = 0; j < J; ++j) sv0[j] = schedule.bias(j, 0.0);
    sample(0.0, sv0.data());

    double norm_drift = 0;
    long gstep = 0;
    for (int sp = 0; sp < nspan; ++sp) {
        const double t0 = bnd[sp], len = bnd[sp + 1] - bnd[sp];
        if (len <= 1e-12) continue;
        const long n = steps[sp];
        const double h = len / n;

        bool hold_span = true;
        for (int j = 0; j < J; ++j)
            if (active[sp][j].seg->kind != Segment::Kind::hold) hold_span = false;

        auto eval_sv = [&](double tnow, double* sv, double* sd) {
            for (int j = 0; j < J; ++j) {
                const ActiveSeg& as = active[sp][j];
                const double tau = tnow - as.start;
                sv[j] = as.seg->bias(tau);
                sd[j] = as.seg->bias_rate(tau);
            }
        };

        auto check_norm = [&](double tnow) {
            const double drift = std::abs(c.norm() - 1.0);
            norm_drift = std::max(norm_drift, drift);
            if (drift > cfg.norm_tol)
                throw IntegrationQualityError(
                    "norm drift " + std::to_string(drift) + " at t = " + std::to_string(tnow) +
                        " ns exceeds tolerance; reduce the time step",
                    drift, 0.5 * cfg.dt_fs);
        };

        if (hold_span) {
            eval_sv(t0, sv0.data(), sd0.data());
            eng.fill(sv0.data(), sd0.data(), W0, E0);
            const Eigen::VectorXd theta_base = theta;
            Eigen::VectorXcd U0 = unit_phase(theta_base);
            Eigen::VectorXcd rot(dim), Uh(dim), U1(dim);
            for (int a = 0; a < dim; ++a)
                rot[a] = std::complex<double>(std::cos(E0[a] * h * 0.5), std::sin(E0[a] * h * 0.5));
            for (long k = 0; k < n; ++k) {
                if (k > 0 && k % 4096 == 0) {
                    // resync the cached phase factors against the exact linear phase
                    tfull = theta_base + (double(k) * h) * E0;
                    U0 = unit_phase(tfull);
                }
                for (int a = 0; a < dim; ++a) {
                    Uh[a] = U0[a] * rot[a];
                    U1[a] = Uh[a] * rot[a];
                }
                eng.rk4_step(W0, W0, W0, U0, Uh, U1, h, c);
                U0.swap(U1);
                ++gstep;
                const double tnow = t0 + (k + 1) * h;
                check_norm(tnow);
                if (gstep % stride == 0 && row < tr.c.cols()) sample(tnow, sv0.data());
            }
            delta = len * E0;
            kahan_add(theta, comp, delta);
        } else {
            eval_sv(t0, sv0.data(), sd0.data());
            eng.fill(sv0.data(), sd0.data(), W0, E0);
            Eigen::VectorXcd U0 = unit_phase(theta), Uh(dim), U1(dim);
            for (long k = 0; k < n; ++k) {
                const double ta = t0 + k * h;
                eval_sv(ta + 0.5 * h, svh.data(), sdh.data());
                eng.fill(svh.data(), sdh.data(), Wh, Eh);
                eval_sv(ta + h, sv1.data(), sd1.data());
                eng.fill(sv1.data(), sd1.data(), W1, E1);
                // Simpson-consistent phases on the same grid as the stepper
                thalf = theta + (h / 24.0) * (5.0 * E0 + 8.0 * Eh - E1);
                delta = (h / 6.0) * (E0 + 4.0 * Eh + E1);
                tfull = theta + delta;
                Uh = unit_phase(thalf);
                U1 = unit_phase(tfull);
                eng.rk4_step(W0, Wh, W1, U0, Uh, U1, h, c);
                kahan_add(theta, comp, delta);
                U0.swap(U1);
                W0.swap(W1);
                E0.swap(E1);
                std::swap(sv0, sv1);
                std::swap(sd0, sd1);
                ++gstep;
                const double tnow = ta + h;
                check_norm(tnow);
                if (gstep % stride == 0 && row < tr.c.cols()) sample(tnow, sv0.data());
            }
        }
    }

    // make sure the final point is recorded
    const double T = schedule.duration();
    for (int j = 0; j < J; ++j) sv0[j] = schedule.bias(j, T);
    if (tr.t.empty() || std::abs(tr.t.back() - T) > 1e-9) {
        if (row >= tr.c.cols()) tr.c.conservativeResize(dim, row + 1);
        sample(T, sv0.data());
    }

    tr.c.conservativeResize(dim, row);
    tr.s.resize(row, J);
    for (int r = 0; r < row; ++r) tr.s.row(r) = srows[r];
    tr.final_c = c;
    tr.final_phase = theta;
    tr.norm_drift = norm_drift;
    return tr;
}

Eigen::VectorXcd propagate_constant(const CoupledSystem& sys, const std::vector<double>& s,
                                    const Eigen::VectorXcd& c0, double t_ns,
                                    double coupling_scale) {
    const int J = static_cast<int>(sys.basis.junction_levels.size());
    if (static_cast<int>(s.size()) != J)
        throw StructuralError("propagate_constant: need one bias per junction");
    if (c0.size() != sys.basis.dim())
        throw StructuralError("propagate_constant: initial state has wrong dimension");

    // direct diagonalization; independent of the table + RK4 path
    std::vector<junction::JunctionSpectrum> spectra;
    junction::BasisPolicy pol;
    pol.explicit_count = 48;
    for (int j = 0; j < J; ++j) spectra.push_back(junction::diagonalize(sys.params[j], s[j], pol));

    composite::CouplingGraph graph = sys.graph;
    graph.g *= coupling_scale;
    const composite::InstantaneousHamiltonian H =
        composite::assemble(spectra, sys.omega0, graph, sys.basis);

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(H.full());
    if (es.info() != Eigen::Success)
        throw ConvergenceError("propagate_constant: eigendecomposition failed");
    const std::complex<double> i(0.0, 1.0);
    Eigen::VectorXcd w = es.eigenvectors().adjoint() * c0;
    for (int k = 0; k < w.size(); ++k) w[k] *= std::exp(-i * es.eigenvalues()[k] * t_ns);
    Eigen::VectorXcd lab = es.eigenvectors() * w;
    Eigen::VectorXcd out(lab.size());
    for (int a = 0; a < lab.size(); ++a) out[a] = std::exp(i * H.E[a] * t_ns) * lab[a];
    return out;
}

ConvergenceReport convergence_sweep(const CoupledSystem& sys, const BiasSchedule& schedule,
                                    const Eigen::VectorXcd& c0, IntegratorConfig cfg,
                                    std::vector<double> steps_fs) {
    if (steps_fs.size() < 2) throw DomainError("convergence_sweep: need at least two step sizes");
    ConvergenceReport rep;
    rep.dt_fs = steps_fs;
    for (double dt : steps_fs) {
        cfg.dt_fs = dt;
        rep.finals.push_back(integrate(sys, schedule, c0, cfg).final_c);
    }
    for (size_t k = 0; k + 1 < rep.finals.size(); ++k)
        rep.diffs.push_back((rep.finals[k] - rep.finals[k + 1]).norm());
    for (size_t k = 0; k + 1 < rep.diffs.size(); ++k) {
        if (rep.diffs[k + 1] <= 0 || rep.diffs[k] <= 0) {
            rep.orders.push_back(0);
            rep.monotone = false;
            continue;
        }
        rep.orders.push_back(std::log2(rep.diffs[k] / rep.diffs[k + 1]));
        if (rep.diffs[k + 1] > rep.diffs[k]) rep.monotone = false;
    }
    return rep;
}

Eigen::VectorXcd Trajectory::lab_frame_final() const {
    Eigen::VectorXcd out(final_c.size());
    const std::complex<double> i(0.0, 1.0);
    for (int a = 0; a < final_c.size(); ++a) out[a] = final_c[a] * std::exp(-i * final_phase[a]);
    return out;
}

std::string Trajectory::csv() const {
    std::ostringstream os;
    os << "t_ns";
    for (int j = 0; j < s.cols(); ++j) os << ",s_J" << (j + 1);
    os << ",norm";
    for (const auto& lab : labels) os << ",re_c_" << lab << ",im_c_" << lab << ",p_" << lab;
    os << '\n';
    char buf[32];
    auto put = [&](double v) {
        std::snprintf(buf, sizeof buf, "%.12g", v);
        os << ',' << buf;
    };
    for (int r = 0; r < rows(); ++r) {
        std::snprintf(buf, sizeof buf, "%.12g", t[r]);
        os << buf;
        for (int j = 0; j < s.cols(); ++j) put(s(r, j));
        put(norm[r]);
        for (int a = 0; a < c.rows(); ++a) {
            const std::complex<double> v = c(a, r);
            put(v.real());
            put(v.imag());
            put(std::norm(v));
        }
        os << '\n';
    }
    return os.str();
}

void Trajectory::write_csv(const std::string& path) const {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary);
        if (!f) throw ConfigError("cannot open output file: " + tmp);
        f << csv();
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0)
        throw ConfigError("cannot move output file into place: " + path);
}

} // namespace pbus::dynamics
