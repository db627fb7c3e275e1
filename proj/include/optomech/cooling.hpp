#pragma once

// Backaction cooling in the quantum picture: Stokes and anti-Stokes rates,
// occupancy limits, technical limits from laser frequency noise and
// absorption heating, sideband asymmetry and the probe transmission of a
// driven optomechanical system.

#include <vector>

#include "optomech/model.hpp"

namespace om {

struct ScatteringRates {
    double a_minus;  // anti-Stokes, removes phonons [1/s]
    double a_plus;   // Stokes, adds phonons [1/s]
};

ScatteringRates scattering_rates(const CavityParams& cav, const MechMode& mode,
                                 const OperatingPoint& op);

// A+/(A- - A+). Zero when A+ vanishes, +inf when A- <= A+ (heating).
double quantum_limit(const CavityParams& cav, const MechMode& mode, const OperatingPoint& op);
double quantum_limit_unresolved(double kappa, double omega_m);  // kappa / 4 Omega_m
double quantum_limit_resolved(double kappa, double omega_m);    // kappa^2 / 16 Omega_m^2

struct CoolingReport {
    double a_minus, a_plus;
    double gamma_dba, gamma_eff;
    double n_bath;
    double n_min_quantum;
    double n_fn;
    double n_final;  // (Gamma_m/Gamma_eff) n_bath + n_fn + n_min
    double t_mode;   // hbar Omega_m n_final / k_B
    bool heating;    // no net cooling; n_final is +inf
};

// Steady occupancy. s_omega_omega is the laser frequency-noise PSD at
// Omega_m in rad^2/s^2/Hz (zero for a noiseless laser).
CoolingReport final_occupancy(const CavityParams& cav, const MechMode& mode,
                              const OperatingPoint& op, double s_omega_omega = 0.0);

// Extra radiation-pressure force noise from laser frequency noise, exact
// and in the resolved-sideband shortcut (with g0 = omega / R).
double frequency_noise_force(const CavityParams& cav, const OperatingPoint& op,
                             double s_omega_omega, double omega);
double frequency_noise_force_rsb(const CavityParams& cav, const MechMode& mode,
                                 const Drive& drive, double s_omega_omega);
// S_ww a^2 |D| / (kappa Omega_m).
double frequency_noise_occupancy(const CavityParams& cav, const MechMode& mode,
                                 const OperatingPoint& op, double s_omega_omega);
// Best occupancy reachable over input power when frequency noise and the
// thermal bath compete: sqrt(2 k_B T m Gamma S_ww) / (hbar |g0|).
double frequency_noise_limit(const CavityParams& cav, const MechMode& mode,
                             double s_omega_omega);

struct HeatingModel {
    double dT_per_circulating_watt;  // [K/W]
    double dgamma_dT;                // [rad/s per K]
};

// Power circulating in a ring of index n_index and radius R holding the
// given photon number.
double circulating_power(const CavityParams& cav, double photons, double n_index);

struct HeatedCooling {
    double t_effective;  // T' of the heated bath
    double gamma_m;      // Gamma_m(T')
    double t_mode;
    double n_final;      // k_B t_mode / (hbar Omega_m)
};

HeatedCooling cooling_with_heating(const CavityParams& cav, const MechMode& mode,
                                   const OperatingPoint& op, const HeatingModel& h,
                                   double p_circulating);

struct HeterodyneSidebands {
    double upper_weight;   // A- <n>, at omega_l + Omega_m [photons/s]
    double lower_weight;   // A+ (<n> + 1), at omega_l - Omega_m
    double carrier_weight; // delta-function weight at omega_l
    double gamma_eff;
    // Sideband flux density versus offset from omega_l, normalised so that
    // Spectrum::integrate returns the weights above.
    Spectrum lineshape;
};

// Weights are reported without the overall coupling-efficiency prefactor;
// absolute flux calibration is left to the caller.
HeterodyneSidebands heterodyne_sidebands(const CavityParams& cav, const MechMode& mode,
                                         const OperatingPoint& op, double n_occ,
                                         const std::vector<double>& offsets);

// Probe transmission at offset omega from the coupling laser.
double omit_transmission(const CavityParams& cav, const MechMode& mode, const OperatingPoint& op,
                         double omega);
// Resolved-sideband simplification at detuning -Omega_m (EIT form).
double omit_transmission_eit(const CavityParams& cav, const MechMode& mode,
                             const OperatingPoint& op, double omega);

}  // namespace om
