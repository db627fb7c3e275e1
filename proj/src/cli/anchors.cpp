#include "optomech/anchors.hpp"

#include <cmath>

#include "optomech/cooling.hpp"
#include "optomech/dynba.hpp"
#include "optomech/errors.hpp"
#include "optomech/mechanics.hpp"
#include "optomech/noisemeter.hpp"

namespace om::cli {

namespace {

using constants::two_pi;

// Mode and cavity of the 40.6 MHz toroid used for the SQL and cooling numbers.
MechMode toroid_40mhz(double t_bath = 300.0)
{
    return MechMode(two_pi * 40.6e6, two_pi * 1.3e3, 10e-12, t_bath);
}

double sphere_radius() { return 25e-6; }

double frequency_noise_floor()
{
    const MechMode mode = toroid_40mhz();
    const double omega = two_pi * 300e12;
    const double r = 38e-6;
    const CavityParams cav(omega, two_pi * 10e6, 0.5, omega / r, r);
    const double s = std::pow(4e-6 * mode.omega_m(), 2);
    return frequency_noise_limit(cav, mode, s);
}

// Resolved-sideband device: Omega_m/2pi = 73.5 MHz, kappa/2pi = 3.2 MHz.
double rsb_quantum_limit()
{
    const double w = two_pi * 73.5e6;
    const auto cav = CavityParams::wgm(two_pi * 2.8e14, 30e-6, two_pi * 3.2e6, 0.5);
    const MechMode mode(w, two_pi * 1e3, 10e-12, 300.0);
    return quantum_limit(cav, mode, OperatingPoint::from_photons(1e4, 0.0, -w));
}

double threshold_ratio()
{
    const double w = two_pi * 50e6;
    const double eta = 0.5;
    const auto cav = CavityParams::wgm(two_pi * 2.8e14, 30e-6, w / 50.0, eta);
    const MechMode mode(w, two_pi * 5e3, 10e-12, 300.0);
    return instability_threshold(cav, mode, w).ratio() / (4.0 * std::sqrt(eta));
}

double rsb_imprecision_factor()
{
    const double w = two_pi * 40.6e6;
    const auto cav = CavityParams::wgm(two_pi * 2.8e14, 30e-6, w / 20.0, 0.5);
    const double p_in = 1e-6;
    const auto detuned = OperatingPoint::from_photons(photons_at(cav, p_in, -w), 0.0, -w);
    const auto resonant = OperatingPoint::from_photons(photons_at(cav, p_in, 0.0), 0.0, 0.0);
    return imprecision_detuned(cav, detuned, w) / imprecision_resonant(cav, resonant, w);
}

double pump_probe_ratio()
{
    const auto p = toroid_response_params();
    const auto r = pump_probe_response(p, p.mode.omega_m());
    return std::abs(r.radiation) / std::abs(r.kerr);
}

double photoelastic(Polarization pol)
{
    const auto mat = fused_silica();
    const auto mode = sphere_fundamental(mat, sphere_radius());
    return photoelastic_shift(mat, sphere_fields(mode, mat, sphere_radius()), pol).relative;
}

std::vector<Anchor> build()
{
    std::vector<Anchor> v;
    v.push_back({"sphere-f-91.2MHz", "silica sphere breathing mode at R = 25 um",
                 [] { return rad_to_hz(sphere_fundamental(fused_silica(), sphere_radius()).omega); },
                 91.2e6, 5e-3, true, "Hz"});
    v.push_back({"sphere-kR", "root of the free-surface condition for silica",
                 [] { return sphere_characteristic_root(fused_silica()); }, 2.4005, 1e-3, false, ""});
    v.push_back({"meff-8470", "effective mass coefficient m_eff / R^3",
                 [] {
                     const double r = sphere_radius();
                     return sphere_effective_mass(fused_silica(), r) / (r * r * r);
                 },
                 8470.0, 1e-2, true, "kg/m^3"});
    v.push_back({"energy-8.69e11", "strain energy coefficient U / (R x^2)",
                 [] { return sphere_strain_energy(fused_silica(), sphere_radius()) / sphere_radius(); },
                 8.69e11, 1e-2, true, "J/m^3"});
    v.push_back({"sql-2.2am", "SQL displacement at Omega_m, 10 ng, 40.6 MHz, eta_c = 1",
                 [] {
                     const auto m = toroid_40mhz();
                     return std::sqrt(sql_spectrum(m, 1.0, m.omega_m()));
                 },
                 2.2e-18, 5e-2, true, "m/sqrt(Hz)"});
    v.push_back({"nfn-5200", "occupancy floor from 4 urad/sqrt(Hz) laser frequency noise",
                 frequency_noise_floor, 5200.0, 0.1, true, "phonons"});
    v.push_back({"rsb-factor-23", "Omega_m/kappa implied by the exact quantum limit, 1/(4 sqrt(n_min))",
                 [] { return 1.0 / (4.0 * std::sqrt(rsb_quantum_limit())); }, 23.0, 1e-2, true, ""});
    v.push_back({"rsb-quantum-limit", "A+/(A- - A+) for Omega_m/kappa = 23 at detuning -Omega_m",
                 rsb_quantum_limit, 1.2e-4, 5e-2, true, "phonons"});
    v.push_back({"mode-temp-11K", "T_m for Gamma_eff/Gamma_m = 27 at 300 K",
                 [] {
                     const auto m = toroid_40mhz();
                     return mode_temperature(m, 27.0 * m.gamma_m());
                 },
                 11.0, 5e-2, true, "K"});
    v.push_back({"pthresh-4sqrt-eta", "P_thresh/P_SQL divided by 4 sqrt(eta_c), kappa/Omega_m = 1/50",
                 threshold_ratio, 1.0, 1e-2, true, ""});
    v.push_back({"tls-peak", "temperature of the TLS loss peak at 40 MHz (window 40-60 K)",
                 [] { return tls_minimum(tls_silica(), two_pi * 40e6).temperature; }, 50.0, 10.0,
                 false, "K"});
    v.push_back({"tls-qmin-500", "calibrated TLS quality factor at the loss peak",
                 [] { return tls_minimum(tls_silica(), two_pi * 40e6).q; }, 500.0, 1e-2, true, ""});
    v.push_back({"photoelastic-te-30", "extra TE shift relative to boundary motion",
                 [] { return photoelastic(Polarization::te); }, 0.30, 0.05, false, ""});
    v.push_back({"photoelastic-tm-50", "extra TM shift relative to boundary motion",
                 [] { return photoelastic(Polarization::tm); }, 0.50, 0.05, false, ""});
    v.push_back({"rsb-imprecision-factor-4",
                 "imprecision at detuning -Omega_m over resonant readout, kappa/Omega_m = 1/20",
                 rsb_imprecision_factor, 4.0, 5e-2, true, ""});
    v.push_back({"pump-probe-240", "|radiation/Kerr| probe response at Omega_m, 58 MHz toroid",
                 pump_probe_ratio, 240.0, 0.1, true, ""});
    return v;
}

}  // namespace

const std::vector<Anchor>& anchor_registry()
{
    static const std::vector<Anchor> registry = build();
    return registry;
}

AnchorResult evaluate(const Anchor& a)
{
    const double value = a.compute();
    const double err = std::abs(value - a.reference);
    const double allowed = a.relative ? a.tolerance * std::abs(a.reference) : a.tolerance;
    return AnchorResult{a.name,     value, a.reference, a.tolerance, a.relative, a.unit,
                        err <= allowed};
}

AnchorResult reproduce(const std::string& name)
{
    for (const auto& a : anchor_registry())
        if (a.name == name) return evaluate(a);
    throw ValidationError("unknown anchor '" + name + "'");
}

}  // namespace om::cli
