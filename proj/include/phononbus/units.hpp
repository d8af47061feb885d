#pragma once
#include <stdexcept>
#include <string>

// internal unit system: hbar = 1, time in ns, energy == angular frequency in rad/ns.
// conversions to/from SI happen only at api boundaries.
namespace pbus {

// codata-2018 exact values
inline constexpr double hbar_SI = 1.054571817e-34;     // J s
inline constexpr double e_charge_SI = 1.602176634e-19; // C
inline constexpr double k_B_SI = 1.380649e-23;         // J/K
inline constexpr double eps0_SI = 8.8541878128e-12;    // F/m

// 1 ueV as angular frequency in rad/ns: E/hbar * 1e-9
inline constexpr double ueV = e_charge_SI * 1e-6 / hbar_SI * 1e-9; // = 1.5192674...
inline constexpr double meV = 1e3 * ueV;
inline constexpr double neV = 1e-3 * ueV;

inline constexpr double pi = 3.141592653589793238462643383279502884;

// linear frequency in GHz -> angular rad/ns
inline constexpr double GHz = 2.0 * pi;

inline constexpr double radns_to_ueV(double w) { return w / ueV; }
inline constexpr double radns_to_GHz(double w) { return w / GHz; }

// common base for every failure the library reports
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct DomainError : Error {
    explicit DomainError(const std::string& msg) : Error(msg) {}
};

struct ConvergenceError : Error {
    explicit ConvergenceError(const std::string& msg) : Error(msg) {}
};

struct StructuralError : Error {
    explicit StructuralError(const std::string& msg) : Error(msg) {}
};

struct NotTunableError : DomainError {
    explicit NotTunableError(const std::string& msg) : DomainError(msg) {}
};

struct ScheduleError : Error {
    explicit ScheduleError(const std::string& msg) : Error(msg) {}
};

struct IntegrationQualityError : Error {
    double norm_drift;
    double suggested_dt_fs;
    IntegrationQualityError(const std::string& msg, double drift, double suggested)
        : Error(msg), norm_drift(drift), suggested_dt_fs(suggested) {}
};

struct ConfigError : Error {
    explicit ConfigError(const std::string& msg) : Error(msg) {}
};

} // namespace pbus
