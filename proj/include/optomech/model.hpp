#pragma once

// Shared parameter types. Every frequency is angular (rad/s) and every
// quantity is SI; conversion from Hz happens only at the CLI boundary.

#include <numbers>
#include <string>
#include <vector>

namespace om {

namespace constants {
inline constexpr double hbar = 1.054571817e-34;  // J s
inline constexpr double k_B = 1.380649e-23;      // J/K
inline constexpr double c = 299792458.0;         // m/s
inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;
}  // namespace constants

inline constexpr double hz_to_rad(double f) { return constants::two_pi * f; }
inline constexpr double rad_to_hz(double w) { return w / constants::two_pi; }

// Optical mode. g0 carries its sign (negative for a WGM, whose resonance
// frequency drops when the radius grows).
class CavityParams {
public:
    CavityParams(double omega_c, double kappa, double eta_c, double g0, double radius);

    // WGM geometry: g0 = -omega_c / radius.
    static CavityParams wgm(double omega_c, double radius, double kappa, double eta_c);
    // Build from intrinsic and coupling photon lifetimes (tau_0 may be +inf).
    static CavityParams from_lifetimes(double omega_c, double tau_0, double tau_ex,
                                       double g0, double radius);

    double omega_c() const { return omega_c_; }
    double kappa() const { return kappa_; }
    double eta_c() const { return eta_c_; }
    double g0() const { return g0_; }
    double radius() const { return radius_; }

    double tau_0() const;   // 1/((1-eta_c) kappa); +inf when eta_c == 1
    double tau_ex() const;  // 1/(eta_c kappa)

    CavityParams with_kappa(double kappa) const;
    CavityParams with_eta_c(double eta_c) const;
    CavityParams with_g0(double g0) const;

private:
    double omega_c_, kappa_, eta_c_, g0_, radius_;
};

class MechMode {
public:
    MechMode(double omega_m, double gamma_m, double m_eff, double t_bath);

    double omega_m() const { return omega_m_; }
    double gamma_m() const { return gamma_m_; }
    double m_eff() const { return m_eff_; }
    double t_bath() const { return t_bath_; }
    double q_m() const { return omega_m_ / gamma_m_; }

    MechMode with_gamma_m(double gamma_m) const;
    MechMode with_t_bath(double t_bath) const;

private:
    double omega_m_, gamma_m_, m_eff_, t_bath_;
};

class Drive {
public:
    Drive(double p_in, double omega_l, double detuning);

    // Laser placed at omega_c + detuning.
    static Drive at_detuning(const CavityParams& cav, double p_in, double detuning);

    double p_in() const { return p_in_; }
    double omega_l() const { return omega_l_; }
    double detuning() const { return detuning_; }
    // |s_in|^2 in photons per second.
    double photon_flux() const;

private:
    double p_in_, omega_l_, detuning_;
};

// Linearisation point. The field amplitude is taken real and non-negative;
// only |a|^2 is physical.
class OperatingPoint {
public:
    OperatingPoint(double a_bar, double x_bar, double detuning_eff);

    static OperatingPoint from_photons(double photons, double x_bar, double detuning_eff);
    // Treats drive.detuning() as the effective detuning (static shift
    // already absorbed) and fills in the Lorentzian photon number.
    static OperatingPoint from_drive(const CavityParams& cav, const Drive& drive);

    double a_bar() const { return a_bar_; }
    double photons() const { return a_bar_ * a_bar_; }
    double x_bar() const { return x_bar_; }
    double detuning_eff() const { return detuning_eff_; }

private:
    double a_bar_, x_bar_, detuning_eff_;
};

enum class SpectrumUnit { m2_per_hz, n2_per_hz, dimensionless };
std::string to_string(SpectrumUnit u);

// Sampled power spectral density. Symmetrized two-sided by default, so
// that integrating over (-inf, inf) with dOmega/2pi gives the variance.
class Spectrum {
public:
    Spectrum(std::vector<double> grid, std::vector<double> values, SpectrumUnit unit,
             bool two_sided = true);

    const std::vector<double>& grid() const { return grid_; }
    const std::vector<double>& values() const { return values_; }
    SpectrumUnit unit() const { return unit_; }
    bool two_sided() const { return two_sided_; }
    std::size_t size() const { return grid_.size(); }

    // One-sided version on the non-negative part of the grid (values x2).
    Spectrum single_sided() const;
    // Trapezoidal integral of values dOmega/2pi over [lo, hi] (grid points only).
    double integrate(double lo, double hi) const;

    bool same_grid(const Spectrum& other) const;

private:
    std::vector<double> grid_, values_;
    SpectrumUnit unit_;
    bool two_sided_;
};

Spectrum operator+(const Spectrum& a, const Spectrum& b);

// Evenly spaced grid including both end points.
std::vector<double> linspace(double lo, double hi, std::size_t n);
std::vector<double> logspace(double lo, double hi, std::size_t n);

double x_zpf(const MechMode& mode);
double n_bath(const MechMode& mode);
double finesse(const CavityParams& cav, double fsr);
// Angular free spectral range of a ring of radius R and group index n.
double fsr_ring(double radius, double n_index);

}  // namespace om
