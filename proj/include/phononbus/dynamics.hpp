#pragma once
#include <complex>
#include <memory>
#include <string>
#include <vector>
#include <Eigen/Dense>
#include "phononbus/composite.hpp"
#include "phononbus/junction.hpp"
#include "phononbus/units.hpp"

namespace pbus::dynamics {

// one piece of a bias-current profile s(t); tau is measured from segment start
struct Segment {
    enum class Kind { hold, trapezoid_ramp, gaussian_ramp, arctangent_ramp, arctangent_flattop };
    Kind kind = Kind::hold;
    double s_from = 0, s_to = 0;
    double duration = 0; // ns
    double width = 0;    // profile width (ns); meaning depends on kind
    double t_on = 0, t_off = 0; // flattop inflection times, relative to segment start

    double bias(double tau) const;
    double bias_rate(double tau) const; // ds/dt, one-sided at segment ends

    static Segment hold(double s, double duration);
    // linear ramp lasting exactly the crossover time
    static Segment trapezoid_ramp(double s_from, double s_to, double crossover);
    // error-function profile; 10-90% rise time = crossover; duration = 3 x crossover,
    // normalized to hit the endpoints exactly
    static Segment gaussian_ramp(double s_from, double s_to, double crossover);
    // arctangent profile over 3 x crossover, endpoint-normalized, width solved so the
    // central slope equals the linear-ramp slope (s_to - s_from)/crossover
    static Segment arctangent_ramp(double s_from, double s_to, double crossover);
    // single smooth pulse with power-law tails spanning one long segment:
    //   s(tau) = s_base + (s_top - s_base) [atan((tau-t_on)/w) - atan((tau-t_off)/w)]/pi
    // with w = crossover/pi so the slope at the inflections matches the linear ramp
    static Segment arctangent_flattop(double s_base, double s_top, double t_on,
                                      double t_off, double crossover, double duration);
};

struct BiasSchedule {
    std::vector<std::vector<Segment>> junctions; // equal total duration per junction

    double duration() const;
    int num_junctions() const { return static_cast<int>(junctions.size()); }
    double bias(int j, double t) const;
    double bias_rate(int j, double t) const;
    void bias_range(int j, double& lo, double& hi) const;
    // merged segment boundaries across junctions (sorted, deduplicated, incl. 0 and T)
    std::vector<double> boundaries() const;
    // continuity, domain s in [0, 0.99], positive durations, equal totals
    void validate() const;

    static BiasSchedule single(std::vector<Segment> segments);
};

// junction spectra tabulated over the schedule's bias range plus the resonator
// frequencies and coupling topology; shared by integrate / propagate_constant
struct CoupledSystem {
    std::vector<junction::JunctionParams> params;
    std::vector<std::shared_ptr<const composite::SpectrumTable>> tables;
    std::vector<double> omega0; // rad/ns
    composite::CouplingGraph graph;
    composite::ProductBasis basis;

    int dim() const { return basis.dim(); }
    static CoupledSystem build(std::vector<junction::JunctionParams> params,
                               std::vector<double> omega0, composite::CouplingGraph graph,
                               composite::ProductBasis basis, const BiasSchedule& schedule,
                               double table_margin = 0.01);
};

struct IntegratorConfig {
    double dt_fs = 1.0;             // base step, femtoseconds
    double norm_tol = 7e-5;         // max |norm - 1| before aborting
    bool include_nonadiabatic = true;
    double energy_shift = 0.0;      // rad/ns added to every level (gauge check)
    double coupling_scale = 1.0;    // multiplies every interaction energy
    int max_rows = 20000;           // trajectory decimation (hard cap 1e5)
};

struct Trajectory {
    std::vector<std::string> labels;   // basis-state labels, CSV column suffixes
    std::vector<double> t;             // sample times, ns
    Eigen::MatrixXd s;                 // samples x junctions
    std::vector<double> norm;          // |c| per sample
    Eigen::MatrixXcd c;                // dim x samples, interaction representation
    Eigen::VectorXcd final_c;          // exact (undecimated) final amplitudes
    Eigen::VectorXd final_phase;       // accumulated phase integrals at T
    double norm_drift = 0;             // max |norm - 1| seen during the run
    double duration_ns = 0;

    int rows() const { return static_cast<int>(t.size()); }
    double occupation(int state, int row) const { return std::norm(c(state, row)); }
    // amplitudes with the accumulated dynamical phases reattached; use these as the
    // initial state when chaining a second integration leg
    Eigen::VectorXcd lab_frame_final() const;
    std::string csv() const;
    void write_csv(const std::string& path) const;
};

// RK4 integration of the interaction-representation amplitudes with
// Simpson-rule phase accumulation on the same grid
Trajectory integrate(const CoupledSystem& sys, const BiasSchedule& schedule,
                     const Eigen::VectorXcd& c0, const IntegratorConfig& cfg = {});

// exact eigendecomposition propagation at constant bias; oracle for integrate()
Eigen::VectorXcd propagate_constant(const CoupledSystem& sys, const std::vector<double>& s,
                                    const Eigen::VectorXcd& c0, double t_ns,
                                    double coupling_scale = 1.0);

struct ConvergenceReport {
    std::vector<double> dt_fs;
    std::vector<Eigen::VectorXcd> finals;
    std::vector<double> diffs;  // ||final_k - final_{k+1}||_2
    std::vector<double> orders; // log2(diffs[k]/diffs[k+1])
    bool monotone = true;
};

ConvergenceReport convergence_sweep(const CoupledSystem& sys, const BiasSchedule& schedule,
                                    const Eigen::VectorXcd& c0, IntegratorConfig cfg = {},
                                    std::vector<double> steps_fs = {8, 4, 2, 1});

} // namespace pbus::dynamics
