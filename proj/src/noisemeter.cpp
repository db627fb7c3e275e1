#include "optomech/noisemeter.hpp"

#include <cmath>
#include <limits>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "optomech/dynba.hpp"
#include "optomech/errors.hpp"

namespace om {

using constants::hbar;
using constants::k_B;
using detail::require;

namespace {

double sq(double v) { return v * v; }

// Transduction denominators shared by the detuned expressions.
struct DetunedTerms {
    double lead;  // D^2 + e^2 h^2, e = 2 eta_c - 1
    double num;   // D^4 + 2 D^2 (h^2 - W^2) + (h^2 + W^2)^2
    double den;   // D^4 + 2 D^2 e h^2 + e^2 h^2 (h^2 + W^2)
};

DetunedTerms detuned_terms(const CavityParams& cav, double detuning, double omega)
{
    const double h2 = sq(0.5 * cav.kappa());
    const double e = 2.0 * cav.eta_c() - 1.0;
    const double d2 = sq(detuning);
    const double w2 = sq(omega);
    return DetunedTerms{d2 + e * e * h2, d2 * d2 + 2.0 * d2 * (h2 - w2) + sq(h2 + w2),
                        d2 * d2 + 2.0 * d2 * e * h2 + e * e * h2 * (h2 + w2)};
}

void require_resonant(const CavityParams& cav, const OperatingPoint& op, const char* who)
{
    require(std::abs(op.detuning_eff()) <= 1e-12 * cav.kappa(),
            std::string(who) + ": requires a resonant (zero-detuning) operating point");
}

}  // namespace

double imprecision_resonant(const CavityParams& cav, const OperatingPoint& op, double omega)
{
    require_resonant(cav, op, "imprecision_resonant");
    const double gain = 4.0 * op.photons() * sq(cav.g0()) * cav.eta_c() * cav.kappa();
    if (gain == 0.0) return std::numeric_limits<double>::infinity();
    return (sq(omega) + sq(0.5 * cav.kappa())) / gain;
}

double backaction_resonant(const CavityParams& cav, const OperatingPoint& op, double omega)
{
    require_resonant(cav, op, "backaction_resonant");
    return op.photons() * sq(cav.g0()) * cav.kappa() * hbar * hbar /
           (sq(omega) + sq(0.5 * cav.kappa()));
}

double min_displacement(const CavityParams& cav, const Drive& drive, double omega,
                        double wavelength_in_medium, double finesse)
{
    require(wavelength_in_medium > 0 && finesse > 0,
            "min_displacement: wavelength and finesse must be positive");
    const double flux = drive.photon_flux();
    if (flux == 0.0) return std::numeric_limits<double>::infinity();
    return wavelength_in_medium / (16.0 * constants::pi * finesse * cav.eta_c() * std::sqrt(flux)) *
           std::sqrt(1.0 + sq(omega / (0.5 * cav.kappa())));
}

double sql_spectrum(const MechMode& mode, double eta_c, double omega)
{
    require(eta_c > 0 && eta_c <= 1, "sql_spectrum: eta_c must lie in (0, 1]");
    return hbar * std::abs(bare_susceptibility(mode, omega)) / std::sqrt(eta_c);
}

double thermal_force_psd(const MechMode& mode, double omega)
{
    const double w = std::abs(omega);
    const double pref = mode.m_eff() * mode.gamma_m();
    if (mode.t_bath() == 0.0) return hbar * pref * w;
    const double x = hbar * w / (2.0 * k_B * mode.t_bath());
    // x coth x = 1 + x^2/3 + ... near the origin
    if (x < 1e-6) return 2.0 * pref * k_B * mode.t_bath() * (1.0 + x * x / 3.0);
    return hbar * pref * w / std::tanh(x);
}

double thermal_force_classical(const MechMode& mode)
{
    return 2.0 * mode.m_eff() * mode.gamma_m() * k_B * mode.t_bath();
}

double frequency_noise_imprecision(const CavityParams& cav, double s_omega_omega)
{
    require(cav.g0() != 0.0, "frequency_noise_imprecision: g0 must be non-zero");
    require(s_omega_omega >= 0, "frequency_noise_imprecision: PSD must be non-negative");
    return s_omega_omega / sq(cav.g0());
}

double thermorefractive_psd(const ThermoRefractiveParams& p, double omega)
{
    require(p.conductivity > 0 && p.density > 0 && p.heat_capacity > 0 && p.diffusivity > 0 &&
                p.n > 0 && p.radius > 0 && p.temperature > 0,
            "thermorefractive_psd: material parameters must be positive");
    require(p.b > 0 && p.d > p.b, "thermorefractive_psd: need d > b > 0");
    require(std::abs(omega) > 0, "thermorefractive_psd: diverges at omega = 0");

    // q = s / b turns the integral into (b / D^2) int s^2 exp(-s^2/2) / (s^4 + nu^2) ds
    const double nu = std::abs(omega) * p.b * p.b / p.diffusivity;
    auto f = [nu](double s) { return s * s * std::exp(-0.5 * s * s) / (s * s * s * s + nu * nu); };
    using boost::math::quadrature::gauss_kronrod;
    auto integrate = [&](double s_max, double tol) {
        const double peak = std::sqrt(nu);
        double err = 0.0, total = 0.0;
        if (peak < s_max) {
            total += gauss_kronrod<double, 31>::integrate(f, 0.0, peak, 20, tol, &err);
            double err2 = 0.0;
            total += gauss_kronrod<double, 31>::integrate(f, peak, s_max, 20, tol, &err2);
            err += err2;
        } else {
            total = gauss_kronrod<double, 31>::integrate(f, 0.0, s_max, 20, tol, &err);
        }
        return std::pair{total, err};
    };
    const auto [coarse, e1] = integrate(10.0, 1e-10);
    const auto [fine, e2] = integrate(20.0, 1e-12);
    if (!(std::abs(fine - coarse) <= 1e-6 * std::abs(fine)) || !std::isfinite(fine))
        throw NumericalError("thermorefractive_psd: quadrature not converged (I = " +
                             std::to_string(fine) + ", change " +
                             std::to_string(std::abs(fine - coarse)) + ", error estimates " +
                             std::to_string(e1) + ", " + std::to_string(e2) + ")");
    const double q_integral = p.b / sq(p.diffusivity) * fine / constants::two_pi;
    const double pref = k_B * sq(p.temperature) * p.conductivity * p.radius /
                        (std::pow(constants::pi, 2.5) * sq(p.n) * sq(p.density) *
                         sq(p.heat_capacity)) /
                        std::sqrt(p.d * p.d - p.b * p.b) * sq(p.dn_dT);
    return pref * q_integral;
}

Spectrum output_phase_spectrum_resonant(const CavityParams& cav, const OperatingPoint& op,
                                        const Spectrum& s_xx)
{
    require_resonant(cav, op, "output_phase_spectrum_resonant");
    require(s_xx.unit() == SpectrumUnit::m2_per_hz, "output_phase_spectrum: expects m^2/Hz input");
    const double h2 = sq(0.5 * cav.kappa());
    const double gain = 4.0 * op.photons() * sq(cav.g0()) * cav.eta_c() * cav.kappa();
    std::vector<double> v(s_xx.size());
    for (std::size_t i = 0; i < v.size(); ++i)
        v[i] = 1.0 + gain / (sq(s_xx.grid()[i]) + h2) * s_xx.values()[i];
    return Spectrum(s_xx.grid(), std::move(v), SpectrumUnit::dimensionless, s_xx.two_sided());
}

Spectrum output_phase_spectrum_detuned(const CavityParams& cav, const OperatingPoint& op,
                                       const Spectrum& s_xx)
{
    require(s_xx.unit() == SpectrumUnit::m2_per_hz, "output_phase_spectrum: expects m^2/Hz input");
    const double gain = 4.0 * op.photons() * sq(cav.g0()) * cav.eta_c() * cav.kappa();
    std::vector<double> v(s_xx.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        const auto t = detuned_terms(cav, op.detuning_eff(), s_xx.grid()[i]);
        v[i] = 1.0 + gain / t.lead * (t.den / t.num) * s_xx.values()[i];
    }
    return Spectrum(s_xx.grid(), std::move(v), SpectrumUnit::dimensionless, s_xx.two_sided());
}

double imprecision_detuned(const CavityParams& cav, const OperatingPoint& op, double omega)
{
    const double gain = 4.0 * op.photons() * sq(cav.g0()) * cav.eta_c() * cav.kappa();
    if (gain == 0.0) return std::numeric_limits<double>::infinity();
    const auto t = detuned_terms(cav, op.detuning_eff(), omega);
    if (t.den == 0.0) return std::numeric_limits<double>::infinity();
    return t.lead / gain * (t.num / t.den);
}

double backaction_detuned(const CavityParams& cav, const OperatingPoint& op, double omega)
{
    const double h2 = sq(0.5 * cav.kappa());
    const auto t = detuned_terms(cav, op.detuning_eff(), omega);
    return hbar * hbar * sq(cav.g0()) * op.photons() * cav.kappa() *
           (sq(op.detuning_eff()) + h2 + sq(omega)) / t.num;
}

double imprecision_rsb(const CavityParams& cav, const MechMode& mode, const Drive& drive)
{
    require(cav.g0() != 0.0 && drive.p_in() > 0, "imprecision_rsb: needs g0 != 0 and P_in > 0");
    return sq(mode.omega_m()) * hbar * drive.omega_l() /
           (4.0 * sq(cav.eta_c()) * sq(cav.g0()) * drive.p_in());
}

double backaction_rsb(const CavityParams& cav, const MechMode& mode, const Drive& drive)
{
    return 2.0 * sq(cav.g0()) * drive.p_in() * cav.eta_c() * hbar /
           (drive.omega_l() * sq(mode.omega_m()));
}

NoiseBudget noise_budget(const CavityParams& cav, const OperatingPoint& op,
                         const std::vector<MechMode>& modes, const std::vector<double>& grid)
{
    require(!modes.empty(), "noise_budget: need at least one mechanical mode");
    const std::size_t n = grid.size();
    std::vector<double> imp(n), ba(n), th(n, 0.0), total(n);
    for (std::size_t i = 0; i < n; ++i) {
        imp[i] = imprecision_detuned(cav, op, grid[i]);
        ba[i] = backaction_detuned(cav, op, grid[i]);
        total[i] = imp[i];
    }
    std::vector<Spectrum> per_mode;
    for (const auto& mode : modes) {
        std::vector<double> x(n);
        for (std::size_t i = 0; i < n; ++i) {
            const double f_th = thermal_force_psd(mode, grid[i]);
            th[i] += f_th;
            x[i] = std::norm(effective_susceptibility(cav, mode, op, grid[i])) * (f_th + ba[i]);
            total[i] += x[i];
        }
        per_mode.emplace_back(grid, std::move(x), SpectrumUnit::m2_per_hz);
    }
    return NoiseBudget{Spectrum(grid, std::move(imp), SpectrumUnit::m2_per_hz),
                       Spectrum(grid, std::move(ba), SpectrumUnit::n2_per_hz),
                       Spectrum(grid, std::move(th), SpectrumUnit::n2_per_hz), std::move(per_mode),
                       Spectrum(grid, std::move(total), SpectrumUnit::m2_per_hz)};
}

}  // namespace om
