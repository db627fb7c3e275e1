#include "optomech/dynba.hpp"

#include <cmath>
#include <limits>

namespace om {

using constants::hbar;
using cd = std::complex<double>;
using detail::require;

namespace {

double sq(double v) { return v * v; }

}  // namespace

BackactionRates backaction_rates(const CavityParams& cav, const MechMode& mode,
                                 const OperatingPoint& op, double omega)
{
    const double h = 0.5 * cav.kappa();
    const double d = op.detuning_eff();
    const double pp = sq(d + omega) + h * h;
    const double pm = sq(d - omega) + h * h;
    const double pref = hbar * sq(cav.g0()) * op.photons();
    // (L+ - L-)/omega with L = h/P simplifies to -4 h d / (P+ P-)
    const double gamma = -4.0 * h * d * pref / (mode.m_eff() * pp * pm);
    const double k = pref * ((d + omega) / pp + (d - omega) / pm);
    return BackactionRates{gamma, k};
}

cd bare_susceptibility(const MechMode& mode, double omega)
{
    const double w = mode.omega_m();
    return 1.0 / (mode.m_eff() * cd(w * w - omega * omega, -mode.gamma_m() * omega));
}

cd effective_susceptibility(const CavityParams& cav, const MechMode& mode,
                            const OperatingPoint& op, double omega)
{
    const auto r = backaction_rates(cav, mode, op, omega);
    const double m = mode.m_eff();
    const double w = mode.omega_m();
    return 1.0 / (m * cd(w * w + r.k_dba / m - omega * omega,
                         -(mode.gamma_m() + r.gamma_dba) * omega));
}

double coupling_rate(const CavityParams& cav, const MechMode& mode, const OperatingPoint& op)
{
    return 2.0 * op.a_bar() * std::abs(cav.g0()) * x_zpf(mode);
}

EffectiveOscillator effective_oscillator(const CavityParams& cav, const MechMode& mode,
                                         const OperatingPoint& op)
{
    const double w = mode.omega_m();
    const auto r = backaction_rates(cav, mode, op, w);
    const double k_over_m = r.k_dba / mode.m_eff();
    return EffectiveOscillator{mode.gamma_m() + r.gamma_dba, w + k_over_m / (2.0 * w),
                               r.gamma_dba, k_over_m,
                               coupling_rate(cav, mode, op) < cav.kappa() / 3.0};
}

double mode_temperature(const MechMode& mode, double gamma_eff)
{
    if (!(gamma_eff > 0))
        throw InstabilityError("mode_temperature: effective damping is not positive "
                               "(parametric instability)");
    return mode.gamma_m() / gamma_eff * mode.t_bath();
}

double sql_photon_number(const CavityParams& cav, const MechMode& mode)
{
    if (cav.g0() == 0.0) return std::numeric_limits<double>::infinity();
    const double w = mode.omega_m();
    const double h = 0.5 * cav.kappa();
    return mode.m_eff() * mode.gamma_m() * w * (w * w + h * h) /
           (2.0 * sq(cav.g0()) * hbar * cav.kappa() * std::sqrt(cav.eta_c()));
}

ThresholdReport instability_threshold(const CavityParams& cav, const MechMode& mode,
                                      double detuning)
{
    const double h = 0.5 * cav.kappa();
    const double w = mode.omega_m();
    const double a2_sql = sql_photon_number(cav, mode);
    const double p_sql =
        hbar * cav.omega_c() * cav.kappa() * a2_sql / (4.0 * cav.eta_c());
    const double pp = sq(detuning + w) + h * h;
    const double pm = sq(detuning - w) + h * h;
    // h/pm - h/pp written without cancellation
    const double bracket = 4.0 * h * detuning * w / (pp * pm);
    if (!(bracket > 0) || cav.g0() == 0.0)
        return ThresholdReport{false, std::numeric_limits<double>::infinity(), p_sql};
    const double p = mode.gamma_m() * (sq(detuning) + h * h) / (cav.eta_c() * cav.kappa()) *
                     cav.omega_c() * mode.m_eff() * w / sq(cav.g0()) / bracket;
    return ThresholdReport{true, p, p_sql};
}

double photons_at(const CavityParams& cav, double p_in, double detuning)
{
    require(p_in >= 0, "photons_at: power must be non-negative");
    const double h = 0.5 * cav.kappa();
    return cav.eta_c() * cav.kappa() * p_in / (hbar * cav.omega_c() * (sq(detuning) + h * h));
}

ResponseParams toroid_response_params()
{
    const double two_pi = constants::two_pi;
    // silica thermo-optic constants; probe at 1550 nm
    return ResponseParams{1.8e4,
                          570.0,
                          two_pi * 900.0,
                          two_pi * 69e3,
                          100e-9,
                          5.5e-7,
                          1.2e-5,
                          1.45,
                          2.2e-20,
                          2.5e-12,
                          29e-6,
                          two_pi * constants::c / 1550e-9,
                          MechMode(two_pi * 58e6, two_pi * 15.7e3, 15e-12, 300.0)};
}

PumpProbeResponse pump_probe_response(const ResponseParams& p, double omega)
{
    require(p.tau_abs > 0 && p.n > 0 && p.a_eff > 0 && p.radius > 0 && p.omega_c > 0 &&
                p.omega1 > 0 && p.omega2 > 0,
            "pump_probe_response: parameters must be positive");
    const cd I{0.0, 1.0};
    const double c = constants::c;
    const cd low_pass = p.beta1 / (1.0 + I * omega / p.omega1) + p.beta2 / (1.0 + I * omega / p.omega2);
    const cd dT = low_pass * (constants::two_pi * p.n * p.radius / c) / p.tau_abs;
    const cd thermal = -p.omega_c * (p.alpha + p.dn_dT / p.n) * dT;
    const cd kerr = -p.omega_c * p.n2 / (p.n * p.a_eff);
    const auto& m = p.mode;
    const cd chi = 1.0 / (m.m_eff() * cd(sq(m.omega_m()) - omega * omega, m.gamma_m() * omega));
    const cd radiation = -p.omega_c / p.radius * chi * (constants::two_pi * p.n / c);
    return PumpProbeResponse{thermal, kerr, radiation};
}

}  // namespace om
