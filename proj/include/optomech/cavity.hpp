#pragma once

// Optical response of a driven cavity whose boundary follows a prescribed
// motion (no backaction), and the interferometric error signals built on it.

#include <complex>

#include "optomech/model.hpp"

namespace om {

struct SidebandPair {
    std::complex<double> carrier;
    std::complex<double> anti_stokes;  // at omega_l + Omega
    std::complex<double> stokes;       // at omega_l - Omega
};

// Coefficients of sin(Omega t) and cos(Omega t) in the intracavity photon
// number, per metre of oscillation amplitude and relative to the mean.
struct ModulationQuadratures {
    double in_phase;
    double quadrature;
};

std::complex<double> steady_field(const CavityParams& cav, const Drive& drive);

// First-order sidebands for x(t) = x0 sin(Omega t). Requires |g0 x0 / Omega| < 0.1;
// beyond that use bessel_transmission.
SidebandPair sideband_amplitudes(const CavityParams& cav, const Drive& drive, double x0,
                                 double omega_mech);

ModulationQuadratures photon_number_modulation(const CavityParams& cav, const Drive& drive,
                                               double omega_mech);

// Phase of the photon-number oscillation relative to x(t), i.e.
// arg(g0 D (D^2 + (kappa/2)^2 - Omega^2 - i Omega kappa)) in (-pi, pi].
// A positive value means the stored energy leads the displacement.
// Undefined on resonance, where the modulation amplitude has a zero crossing.
double phase_lag(const CavityParams& cav, double detuning, double omega_mech);

// DC transmission |s_out|^2/|s_in|^2 for a large sinusoidal modulation of
// index beta. The Bessel sum is truncated at |n| <= ceil(|beta|) + 20.
double bessel_transmission(const CavityParams& cav, double beta, double detuning,
                           double omega_mech);
// Number of retained orders on each side for a given beta.
int bessel_truncation(double beta);

// Balanced homodyne signal versus detuning, in W.
double homodyne_error_signal(const CavityParams& cav, double detuning, double p_cav, double p_lo);
// |dh/dx| for resonant locking, rolled off by the cavity above kappa/2.
double homodyne_displacement_gain(const CavityParams& cav, double p_cav, double p_lo,
                                  double omega);

// Sensitivity penalty of Pound-Drever-Hall readout relative to ideal homodyne.
double pdh_penalty(double eta_c, double beta_mod);

// Displacement equivalent of a laser frequency modulation of depth delta_omega.
double calibrate_modulation(const CavityParams& cav, double delta_omega);

}  // namespace om
