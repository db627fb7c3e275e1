#include "optomech/cavity.hpp"

#include <cmath>

#include "optomech/errors.hpp"

namespace om {

using detail::require;
using cd = std::complex<double>;

namespace {

constexpr cd I{0.0, 1.0};
// first positive zero of J_1
constexpr double j11 = 3.8317059702075123;

// 1 / (-i D + kappa/2)
cd lorentz(double detuning, double kappa) { return 1.0 / (-I * detuning + 0.5 * kappa); }

double sq(double v) { return v * v; }

}  // namespace

cd steady_field(const CavityParams& cav, const Drive& drive)
{
    const double s_in = std::sqrt(drive.photon_flux());
    return std::sqrt(cav.eta_c() * cav.kappa()) * s_in * lorentz(drive.detuning(), cav.kappa());
}

SidebandPair sideband_amplitudes(const CavityParams& cav, const Drive& drive, double x0,
                                 double omega_mech)
{
    require(omega_mech > 0, "sidebands: mechanical frequency must be positive");
    const double beta = cav.g0() * x0 / omega_mech;
    if (!(std::abs(beta) < 0.1))
        throw ValidationError("sidebands: modulation index |beta| = " + std::to_string(std::abs(beta)) +
                              " is not small; use bessel_transmission");
    const cd a0 = steady_field(cav, drive);
    const double d = drive.detuning();
    const cd half = 0.5 * cav.g0() * x0 * a0;
    return SidebandPair{a0, half * lorentz(d + omega_mech, cav.kappa()),
                        -half * lorentz(d - omega_mech, cav.kappa())};
}

ModulationQuadratures photon_number_modulation(const CavityParams& cav, const Drive& drive,
                                               double omega_mech)
{
    const double h = 0.5 * cav.kappa();
    const double dp = drive.detuning() + omega_mech;
    const double dm = drive.detuning() - omega_mech;
    const double lp = sq(dp) + h * h;
    const double lm = sq(dm) + h * h;
    return ModulationQuadratures{cav.g0() * (dp / lp + dm / lm), cav.g0() * (h / lp - h / lm)};
}

double phase_lag(const CavityParams& cav, double detuning, double omega_mech)
{
    if (detuning == 0.0)
        throw ValidationError("phase_lag: undefined at zero detuning (phase jump)");
    const double k = cav.kappa();
    const cd z = cav.g0() * detuning *
                 cd(detuning * detuning + 0.25 * k * k - omega_mech * omega_mech, -omega_mech * k);
    double phi = std::arg(z);
    if (phi == -constants::pi) phi = constants::pi;
    return phi;
}

int bessel_truncation(double beta) { return static_cast<int>(std::ceil(std::abs(beta))) + 20; }

double bessel_transmission(const CavityParams& cav, double beta, double detuning,
                           double omega_mech)
{
    require(std::isfinite(beta), "bessel_transmission: beta must be finite");
    const int n_max = bessel_truncation(beta);
    const double b = std::abs(beta);
    const double k = cav.kappa();
    double weight = 0.0;
    double sum = 0.0;
    for (int n = -n_max; n <= n_max; ++n) {
        // J_{-n}(x)^2 = J_n(x)^2 and J_n(-x)^2 = J_n(x)^2
        const double j = std::cyl_bessel_j(static_cast<double>(std::abs(n)), b);
        const double j2 = j * j;
        weight += j2;
        sum += k * k * j2 / (sq(detuning + n * omega_mech) + 0.25 * k * k);
    }
    if (weight < 1.0 - 1e-10)
        throw NumericalError("bessel_transmission: truncated sum of J_n^2 = " +
                             std::to_string(weight));
    return 1.0 - cav.eta_c() * (1.0 - cav.eta_c()) * sum;
}

double homodyne_error_signal(const CavityParams& cav, double detuning, double p_cav, double p_lo)
{
    require(p_cav >= 0 && p_lo >= 0, "homodyne: powers must be non-negative");
    const double h = 0.5 * cav.kappa();
    return 2.0 * cav.eta_c() * cav.kappa() * detuning / (detuning * detuning + h * h) *
           std::sqrt(p_cav * p_lo);
}

double homodyne_displacement_gain(const CavityParams& cav, double p_cav, double p_lo,
                                  double omega)
{
    require(p_cav >= 0 && p_lo >= 0, "homodyne: powers must be non-negative");
    const double x = omega / (0.5 * cav.kappa());
    return 8.0 * cav.eta_c() * std::abs(cav.g0()) / cav.kappa() *
           std::sqrt(p_cav * p_lo / (1.0 + x * x));
}

double pdh_penalty(double eta_c, double beta_mod)
{
    require(eta_c > 0 && eta_c <= 1, "pdh_penalty: eta_c must lie in (0, 1]");
    require(beta_mod > 0 && beta_mod < j11,
            "pdh_penalty: modulation depth must lie between 0 and the first zero of J_1");
    const double j1 = std::cyl_bessel_j(1.0, beta_mod);
    if (j1 == 0.0) throw NumericalError("pdh_penalty: J_1(beta) vanishes");
    return 1.0 + eta_c + sq(1.0 - 2.0 * eta_c) / (2.0 * j1 * j1);
}

double calibrate_modulation(const CavityParams& cav, double delta_omega)
{
    if (cav.g0() == 0.0) throw ValidationError("calibrate_modulation: g0 is zero");
    return delta_omega / std::abs(cav.g0());
}

}  // namespace om
