#pragma once

// Direct integration of the nonlinear field/oscillator equations in the
// frame rotating at the laser frequency:
//   da/dt = (i (D - g0 x) - kappa/2) a + sqrt(eta_c kappa) s_in
//   m (d2x/dt2 + Gamma_m dx/dt + Omega_m^2 x) = -hbar g0 |a|^2
// Serves as an independent check of the static, linearised and threshold
// results.

#include <complex>
#include <cstddef>
#include <vector>

#include "optomech/model.hpp"

namespace om {

struct TrajectoryState {
    std::complex<double> a;  // [sqrt(photons)]
    double x;                // [m]
    double v;                // [m/s]
    double t;                // [s]
};

struct IntegratorOptions {
    double tol = 1e-9;          // relative and absolute, on the scaled state
    double input_phase = 0.0;   // global phase of s_in
    double x_scale = 0.0;       // displacement scale for error control; 0 picks one
    std::size_t max_steps = 50'000'000;
};

struct Trajectory {
    std::vector<TrajectoryState> samples;  // at the requested times
    std::size_t accepted = 0;
    std::size_t rejected = 0;
};

// Dormand-Prince 5(4) with PI step control and continuous output at the
// sample times (which must be non-decreasing and lie in [initial.t, t_end]).
// Throws NumericalError when the step size underflows.
Trajectory integrate(const CavityParams& cav, const MechMode& mode, const Drive& drive,
                     const TrajectoryState& initial, double t_end,
                     const std::vector<double>& sample_times,
                     const IntegratorOptions& opts = {});

// Convenience form with n_samples evenly spaced output times including both ends.
Trajectory integrate(const CavityParams& cav, const MechMode& mode, const Drive& drive,
                     const TrajectoryState& initial, double t_end, std::size_t n_samples,
                     const IntegratorOptions& opts = {});

// Per-period RMS of x - x_ref, for samples taken at a fixed number of points
// per mechanical period.
std::vector<double> period_rms(const Trajectory& tr, double x_ref, std::size_t per_period);

// Amplitude decay rate (growth is negative) from a least-squares fit of
// log per-period RMS; the first skip_periods are discarded as transient.
double envelope_decay_rate(const Trajectory& tr, double x_ref, double period,
                           std::size_t per_period, std::size_t skip_periods = 0);

// Drive and equilibrium that hold the effective detuning fixed at a given power.
struct FixedDetuningPoint {
    Drive drive;
    double photons;
    double x_bar;
    std::complex<double> a_bar;
};
FixedDetuningPoint fixed_detuning_point(const CavityParams& cav, const MechMode& mode,
                                        double p_in, double detuning_eff);

struct GrowthTest {
    bool growing;
    double rms_middle;  // mean per-period RMS over 40-60 % of the run
    double rms_last;    // and over the last 20 %
};

// Kicks the equilibrium at fixed effective detuning by dx0 and compares the
// oscillation envelope late in the run with the middle of the run.
GrowthTest growth_test(const CavityParams& cav, const MechMode& mode, double p_in,
                       double detuning_eff, double t_end, double dx0,
                       const IntegratorOptions& opts = {});

struct ThresholdSearch {
    double p_thresh;
    double p_lo, p_hi;  // final bracket, p_hi/p_lo - 1 <= rel_tol
    int iterations;
};

// Bisection (geometric) on input power between decay and growth. The run
// length defaults to 10 / Gamma_m and the kick to 1e-4 kappa / |g0|.
// Throws NumericalError when both ends behave alike.
ThresholdSearch threshold_search(const CavityParams& cav, const MechMode& mode,
                                 double detuning_eff, double p_lo, double p_hi,
                                 double rel_tol = 5e-3, const IntegratorOptions& opts = {});

}  // namespace om
