#include "optomech/cooling.hpp"

#include <cmath>
#include <complex>
#include <limits>

#include "optomech/dynba.hpp"
#include "optomech/errors.hpp"

namespace om {

using constants::hbar;
using constants::k_B;
using cd = std::complex<double>;
using detail::require;

namespace {

double sq(double v) { return v * v; }
constexpr double inf = std::numeric_limits<double>::infinity();

}  // namespace

ScatteringRates scattering_rates(const CavityParams& cav, const MechMode& mode,
                                 const OperatingPoint& op)
{
    const double h2 = sq(0.5 * cav.kappa());
    const double d = op.detuning_eff();
    const double w = mode.omega_m();
    const double pref = sq(cav.g0()) * op.photons() * sq(x_zpf(mode)) * cav.kappa();
    return ScatteringRates{pref / (sq(d + w) + h2), pref / (sq(d - w) + h2)};
}

double quantum_limit(const CavityParams& cav, const MechMode& mode, const OperatingPoint& op)
{
    const auto r = scattering_rates(cav, mode, op);
    if (r.a_plus == 0.0) return 0.0;
    if (!(r.a_minus > r.a_plus)) return inf;
    return r.a_plus / (r.a_minus - r.a_plus);
}

double quantum_limit_unresolved(double kappa, double omega_m) { return kappa / (4.0 * omega_m); }

double quantum_limit_resolved(double kappa, double omega_m)
{
    return sq(kappa) / (16.0 * sq(omega_m));
}

CoolingReport final_occupancy(const CavityParams& cav, const MechMode& mode,
                              const OperatingPoint& op, double s_omega_omega)
{
    require(s_omega_omega >= 0, "final_occupancy: frequency-noise PSD must be non-negative");
    const auto r = scattering_rates(cav, mode, op);
    const auto eo = effective_oscillator(cav, mode, op);
    const double nb = mode.t_bath() > 0 ? n_bath(mode) : 0.0;
    const double n_fn = frequency_noise_occupancy(cav, mode, op, s_omega_omega);
    const double n_min = quantum_limit(cav, mode, op);

    CoolingReport rep{r.a_minus, r.a_plus, eo.gamma_dba, eo.gamma_eff, nb, n_min, n_fn,
                      inf, inf, false};
    // a bare mode with no light at all is simply the bath
    if (r.a_minus == 0.0 && r.a_plus == 0.0) {
        rep.n_final = nb + n_fn;
    } else if (!(r.a_minus > r.a_plus) || eo.unstable()) {
        rep.heating = true;
        return rep;
    } else {
        rep.n_final = mode.gamma_m() / eo.gamma_eff * nb + n_fn + n_min;
    }
    rep.t_mode = hbar * mode.omega_m() * rep.n_final / k_B;
    return rep;
}

double frequency_noise_force(const CavityParams& cav, const OperatingPoint& op,
                             double s_omega_omega, double omega)
{
    require(s_omega_omega >= 0, "frequency_noise_force: PSD must be non-negative");
    const double h2 = sq(0.5 * cav.kappa());
    const double d = op.detuning_eff();
    const double pp = sq(d + omega) + h2;
    const double pm = sq(d - omega) + h2;
    // (D/P- - D/P+)/omega = 4 D^2 / (P+ P-)
    return sq(hbar) * sq(op.photons()) * sq(cav.g0()) * 4.0 * d * d / (pp * pm) * s_omega_omega;
}

double frequency_noise_force_rsb(const CavityParams& cav, const MechMode& mode,
                                 const Drive& drive, double s_omega_omega)
{
    return 4.0 * sq(cav.eta_c()) * s_omega_omega * sq(drive.p_in()) /
           (sq(cav.radius()) * std::pow(mode.omega_m(), 4));
}

double frequency_noise_occupancy(const CavityParams& cav, const MechMode& mode,
                                 const OperatingPoint& op, double s_omega_omega)
{
    return s_omega_omega * op.photons() * std::abs(op.detuning_eff()) /
           (cav.kappa() * mode.omega_m());
}

double frequency_noise_limit(const CavityParams& cav, const MechMode& mode,
                             double s_omega_omega)
{
    require(cav.g0() != 0.0, "frequency_noise_limit: g0 must be non-zero");
    require(s_omega_omega >= 0, "frequency_noise_limit: PSD must be non-negative");
    return std::sqrt(2.0 * k_B * mode.t_bath() * mode.m_eff() * mode.gamma_m() * s_omega_omega) /
           (hbar * std::abs(cav.g0()));
}

double circulating_power(const CavityParams& cav, double photons, double n_index)
{
    require(photons >= 0 && n_index > 0, "circulating_power: invalid photons or index");
    const double round_trip = constants::two_pi * n_index * cav.radius() / constants::c;
    return hbar * cav.omega_c() * photons / round_trip;
}

HeatedCooling cooling_with_heating(const CavityParams& cav, const MechMode& mode,
                                   const OperatingPoint& op, const HeatingModel& h,
                                   double p_circulating)
{
    require(h.dT_per_circulating_watt >= 0 && h.dgamma_dT >= 0,
            "cooling_with_heating: heating coefficients must be non-negative");
    require(p_circulating >= 0, "cooling_with_heating: power must be non-negative");
    const double t_eff = mode.t_bath() + h.dT_per_circulating_watt * p_circulating;
    const double gamma = mode.gamma_m() + h.dgamma_dT * (t_eff - mode.t_bath());
    const double gamma_dba = backaction_rates(cav, mode, op, mode.omega_m()).gamma_dba;
    const double total = gamma + gamma_dba;
    if (!(total > 0))
        throw InstabilityError("cooling_with_heating: effective damping is not positive");
    const double t_mode = gamma / total * t_eff;
    return HeatedCooling{t_eff, gamma, t_mode, k_B * t_mode / (hbar * mode.omega_m())};
}

HeterodyneSidebands heterodyne_sidebands(const CavityParams& cav, const MechMode& mode,
                                         const OperatingPoint& op, double n_occ,
                                         const std::vector<double>& offsets)
{
    require(n_occ >= 0 && std::isfinite(n_occ), "heterodyne_sidebands: occupancy must be >= 0");
    const auto eo = effective_oscillator(cav, mode, op);
    if (eo.unstable())
        throw InstabilityError("heterodyne_sidebands: effective damping is not positive");
    const auto r = scattering_rates(cav, mode, op);
    const double upper = r.a_minus * n_occ;
    const double lower = r.a_plus * (n_occ + 1.0);

    const double h2 = sq(0.5 * cav.kappa());
    const double d2 = sq(op.detuning_eff());
    const double eta = cav.eta_c();
    const double s2 = op.photons() * (d2 + h2) / (eta * cav.kappa());
    const double carrier = (1.0 / eta - (1.0 - eta) * sq(cav.kappa()) / (d2 + h2)) * s2;

    const double g = eo.gamma_eff;
    const double w = mode.omega_m();
    std::vector<double> v(offsets.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        const double nu = offsets[i];
        // Lorentzians of unit area in d(omega)/2pi
        v[i] = g * upper / (sq(nu - w) + 0.25 * g * g) + g * lower / (sq(nu + w) + 0.25 * g * g);
    }
    return HeterodyneSidebands{upper, lower, carrier, g,
                               Spectrum(offsets, std::move(v), SpectrumUnit::dimensionless)};
}

double omit_transmission(const CavityParams& cav, const MechMode& mode, const OperatingPoint& op,
                         double omega)
{
    const cd I{0.0, 1.0};
    const double h = 0.5 * cav.kappa();
    const double d = op.detuning_eff();
    const cd chi = bare_susceptibility(mode, omega);
    const cd f = hbar * sq(cav.g0()) * op.photons() * chi / (I * (d - omega) + h);
    const cd r = (1.0 + I * f) * cav.eta_c() * cav.kappa() / (-I * (d + omega) + h + 2.0 * d * f);
    return std::norm(1.0 - r);
}

double omit_transmission_eit(const CavityParams& cav, const MechMode& mode,
                             const OperatingPoint& op, double omega)
{
    const cd I{0.0, 1.0};
    const double dp = omega - mode.omega_m();
    const double coupling = op.photons() * sq(cav.g0()) * sq(x_zpf(mode));
    const cd den = (-I * dp + 0.5 * cav.kappa()) + coupling / (-I * dp + 0.5 * mode.gamma_m());
    return std::norm(1.0 - cav.eta_c() * cav.kappa() / den);
}

}  // namespace om
