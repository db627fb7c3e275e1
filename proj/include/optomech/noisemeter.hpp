#pragma once

// Displacement-readout noise: quantum imprecision and backaction for resonant
// and detuned probing, the standard quantum limit, thermal forces and the
// technical floors set by laser frequency noise and thermorefractive noise.
// All spectral densities are symmetrized and double-sided, so they depend on
// |omega| only.

#include <vector>

#include "optomech/model.hpp"

namespace om {

// Resonant probing (requires detuning_eff == 0). Returns +inf for a_bar = 0.
double imprecision_resonant(const CavityParams& cav, const OperatingPoint& op, double omega);
double backaction_resonant(const CavityParams& cav, const OperatingPoint& op, double omega);

// Same imprecision written through wavelength in the medium and finesse, in m/sqrt(Hz).
double min_displacement(const CavityParams& cav, const Drive& drive, double omega,
                        double wavelength_in_medium, double finesse);

// hbar |chi(omega)| / sqrt(eta_c).
double sql_spectrum(const MechMode& mode, double eta_c, double omega);

// hbar m Gamma |omega| coth(hbar |omega| / 2 k_B T), and its classical limit.
double thermal_force_psd(const MechMode& mode, double omega);
double thermal_force_classical(const MechMode& mode);

// Apparent displacement noise of a cavity-frequency noise S_ww [rad^2/s^2/Hz].
double frequency_noise_imprecision(const CavityParams& cav, double s_omega_omega);

struct ThermoRefractiveParams {
    double conductivity;  // k [W/m/K]
    double density;       // rho [kg/m^3]
    double heat_capacity; // c_p [J/kg/K]
    double dn_dT;         // [1/K]
    double diffusivity;   // D [m^2/s]
    double b, d;          // transverse mode dimensions [m], d > b
    double n;             // refractive index
    double radius;        // [m]
    double temperature;   // [K]
};

// Thermodynamic index fluctuations expressed as displacement noise
// (already multiplied by R^2). The q-integral is evaluated adaptively on
// (0, q_max] and re-checked with q_max doubled and a tighter tolerance.
double thermorefractive_psd(const ThermoRefractiveParams& p, double omega);

// Output phase-quadrature spectrum in shot-noise units.
Spectrum output_phase_spectrum_resonant(const CavityParams& cav, const OperatingPoint& op,
                                        const Spectrum& s_xx);
Spectrum output_phase_spectrum_detuned(const CavityParams& cav, const OperatingPoint& op,
                                       const Spectrum& s_xx);

// Detuned readout; both reduce to the resonant forms at zero detuning.
double imprecision_detuned(const CavityParams& cav, const OperatingPoint& op, double omega);
double backaction_detuned(const CavityParams& cav, const OperatingPoint& op, double omega);

// Small-kappa asymptotes at detuning -Omega_m, Fourier frequency Omega_m.
double imprecision_rsb(const CavityParams& cav, const MechMode& mode, const Drive& drive);
double backaction_rsb(const CavityParams& cav, const MechMode& mode, const Drive& drive);

struct NoiseBudget {
    Spectrum imprecision;         // m^2/Hz
    Spectrum backaction_force;    // N^2/Hz
    Spectrum thermal_force;       // N^2/Hz, summed over modes
    std::vector<Spectrum> modes;  // |chi_eff,n|^2 (S_th,n + S_ba) per mode
    Spectrum total_displacement;  // imprecision + sum of modes
};

// Total apparent displacement noise for a set of mechanical modes read out
// through one optical mode. Uses the detuned expressions, which coincide with
// the resonant ones at zero detuning.
NoiseBudget noise_budget(const CavityParams& cav, const OperatingPoint& op,
                         const std::vector<MechMode>& modes, const std::vector<double>& grid);

}  // namespace om
