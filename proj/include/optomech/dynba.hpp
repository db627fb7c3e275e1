#pragma once

// Dynamical backaction: the retarded radiation-pressure force seen as an
// optical damping and spring acting on the mechanical mode.

#include <complex>

#include "optomech/errors.hpp"
#include "optomech/model.hpp"

namespace om {

// Raised when the total damping is not positive (regenerative oscillation).
class InstabilityError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

struct BackactionRates {
    double gamma_dba;  // [rad/s]
    double k_dba;      // [N/m]
};

// Optical damping and spring at Fourier frequency omega. The damping is
// evaluated in a form without the 1/omega factor, so omega = 0 returns the
// static limit directly.
BackactionRates backaction_rates(const CavityParams& cav, const MechMode& mode,
                                 const OperatingPoint& op, double omega);

// chi(omega) = 1 / (m (Omega_m^2 - omega^2 - i Gamma_m omega)).
std::complex<double> bare_susceptibility(const MechMode& mode, double omega);
std::complex<double> effective_susceptibility(const CavityParams& cav, const MechMode& mode,
                                              const OperatingPoint& op, double omega);

// Coupling rate G = 2 a g0 x_zpf (absolute value).
double coupling_rate(const CavityParams& cav, const MechMode& mode, const OperatingPoint& op);

struct EffectiveOscillator {
    double gamma_eff;
    double omega_eff;
    double gamma_dba;
    double k_dba_over_m;  // [rad^2/s^2]
    // G < kappa/3; outside this range the mode hybridises with the cavity
    // and the Lorentzian picture is only indicative.
    bool weak_coupling;

    bool unstable() const { return !(gamma_eff > 0); }
};

EffectiveOscillator effective_oscillator(const CavityParams& cav, const MechMode& mode,
                                         const OperatingPoint& op);

// T_m = (Gamma_m / Gamma_eff) T. Throws InstabilityError for gamma_eff <= 0.
double mode_temperature(const MechMode& mode, double gamma_eff);

// Photon number that balances imprecision and backaction at Omega_m for
// resonant readout.
double sql_photon_number(const CavityParams& cav, const MechMode& mode);

struct ThresholdReport {
    bool has_threshold;  // false when the detuning gives no anti-damping
    double p_thresh;     // [W], +inf without a threshold
    double p_sql;        // hbar omega_c kappa a_sql^2 / (4 eta_c)
    double ratio() const { return p_thresh / p_sql; }
};

// Input power at which Gamma_eff vanishes for a given effective detuning.
// The photon energy is taken at omega_c.
ThresholdReport instability_threshold(const CavityParams& cav, const MechMode& mode,
                                      double detuning);

// Photon number in the cavity for a given input power at effective
// detuning, with photons priced at omega_c (matches instability_threshold).
double photons_at(const CavityParams& cav, double p_in, double detuning);

// Probe-frequency response to a modulated intracavity pump power.
struct ResponseParams {
    double beta1, beta2;    // thermal response weights [K/W]
    double omega1, omega2;  // thermal cut-offs [rad/s]
    double tau_abs;         // absorption time [s]
    double alpha;           // thermal expansion [1/K]
    double dn_dT;           // [1/K]
    double n;               // refractive index
    double n2;              // Kerr index [m^2/W]
    double a_eff;           // effective mode area [m^2]
    double radius;          // [m]
    double omega_c;         // [rad/s]
    MechMode mode;
};

// Toroid parameters used for the pump-probe fit (R = 29 um, 58 MHz mode).
ResponseParams toroid_response_params();

struct PumpProbeResponse {
    std::complex<double> thermal, kerr, radiation;
    std::complex<double> total() const { return thermal + kerr + radiation; }
};

// Response per watt of intracavity power modulation, in rad/s per W.
// This model uses the exp(+i omega t) convention of its thermal low-pass.
PumpProbeResponse pump_probe_response(const ResponseParams& p, double omega);

}  // namespace om
