#include "optomech/model.hpp"

#include <cmath>
#include <limits>

#include "optomech/errors.hpp"

namespace om {

using detail::require;

namespace {
bool finite(double v) { return std::isfinite(v); }
}  // namespace

CavityParams::CavityParams(double omega_c, double kappa, double eta_c, double g0, double radius)
    : omega_c_(omega_c), kappa_(kappa), eta_c_(eta_c), g0_(g0), radius_(radius)
{
    require(finite(omega_c) && omega_c > 0, "cavity: omega_c must be positive");
    require(finite(kappa) && kappa > 0, "cavity: kappa must be positive");
    require(finite(eta_c) && eta_c > 0 && eta_c <= 1, "cavity: eta_c must lie in (0, 1]");
    require(finite(g0), "cavity: g0 must be finite");
    require(finite(radius) && radius > 0, "cavity: radius must be positive");
}

CavityParams CavityParams::wgm(double omega_c, double radius, double kappa, double eta_c)
{
    require(finite(radius) && radius > 0, "cavity: radius must be positive");
    return CavityParams(omega_c, kappa, eta_c, -omega_c / radius, radius);
}

CavityParams CavityParams::from_lifetimes(double omega_c, double tau_0, double tau_ex, double g0,
                                          double radius)
{
    require(tau_0 > 0 && !std::isnan(tau_0), "cavity: tau_0 must be positive");
    require(finite(tau_ex) && tau_ex > 0, "cavity: tau_ex must be positive");
    const double kappa = 1.0 / tau_0 + 1.0 / tau_ex;
    // eta_c = tau_0 / (tau_0 + tau_ex), written to survive tau_0 = inf
    const double eta_c = std::isinf(tau_0) ? 1.0 : 1.0 / (1.0 + tau_ex / tau_0);
    return CavityParams(omega_c, kappa, eta_c, g0, radius);
}

double CavityParams::tau_0() const
{
    if (eta_c_ == 1.0) return std::numeric_limits<double>::infinity();
    return 1.0 / ((1.0 - eta_c_) * kappa_);
}

double CavityParams::tau_ex() const { return 1.0 / (eta_c_ * kappa_); }

CavityParams CavityParams::with_kappa(double kappa) const
{
    return CavityParams(omega_c_, kappa, eta_c_, g0_, radius_);
}
CavityParams CavityParams::with_eta_c(double eta_c) const
{
    return CavityParams(omega_c_, kappa_, eta_c, g0_, radius_);
}
CavityParams CavityParams::with_g0(double g0) const
{
    return CavityParams(omega_c_, kappa_, eta_c_, g0, radius_);
}

MechMode::MechMode(double omega_m, double gamma_m, double m_eff, double t_bath)
    : omega_m_(omega_m), gamma_m_(gamma_m), m_eff_(m_eff), t_bath_(t_bath)
{
    require(finite(omega_m) && omega_m > 0, "mode: omega_m must be positive");
    require(finite(gamma_m) && gamma_m > 0, "mode: gamma_m must be positive");
    require(finite(m_eff) && m_eff > 0, "mode: m_eff must be positive");
    require(finite(t_bath) && t_bath >= 0, "mode: t_bath must be non-negative");
}

MechMode MechMode::with_gamma_m(double gamma_m) const
{
    return MechMode(omega_m_, gamma_m, m_eff_, t_bath_);
}
MechMode MechMode::with_t_bath(double t_bath) const
{
    return MechMode(omega_m_, gamma_m_, m_eff_, t_bath);
}

Drive::Drive(double p_in, double omega_l, double detuning)
    : p_in_(p_in), omega_l_(omega_l), detuning_(detuning)
{
    require(finite(p_in) && p_in >= 0, "drive: p_in must be non-negative");
    require(finite(omega_l) && omega_l > 0, "drive: omega_l must be positive");
    require(finite(detuning), "drive: detuning must be finite");
}

Drive Drive::at_detuning(const CavityParams& cav, double p_in, double detuning)
{
    return Drive(p_in, cav.omega_c() + detuning, detuning);
}

double Drive::photon_flux() const { return p_in_ / (constants::hbar * omega_l_); }

OperatingPoint::OperatingPoint(double a_bar, double x_bar, double detuning_eff)
    : a_bar_(a_bar), x_bar_(x_bar), detuning_eff_(detuning_eff)
{
    require(finite(a_bar) && a_bar >= 0, "operating point: a_bar must be real and >= 0");
    require(finite(x_bar), "operating point: x_bar must be finite");
    require(finite(detuning_eff), "operating point: detuning must be finite");
}

OperatingPoint OperatingPoint::from_photons(double photons, double x_bar, double detuning_eff)
{
    require(finite(photons) && photons >= 0, "operating point: photon number must be >= 0");
    return OperatingPoint(std::sqrt(photons), x_bar, detuning_eff);
}

OperatingPoint OperatingPoint::from_drive(const CavityParams& cav, const Drive& drive)
{
    const double h = 0.5 * cav.kappa();
    const double d = drive.detuning();
    const double n = cav.eta_c() * cav.kappa() * drive.photon_flux() / (d * d + h * h);
    return from_photons(n, 0.0, d);
}

std::string to_string(SpectrumUnit u)
{
    switch (u) {
    case SpectrumUnit::m2_per_hz: return "m^2/Hz";
    case SpectrumUnit::n2_per_hz: return "N^2/Hz";
    case SpectrumUnit::dimensionless: return "1";
    }
    return "?";
}

Spectrum::Spectrum(std::vector<double> grid, std::vector<double> values, SpectrumUnit unit,
                   bool two_sided)
    : grid_(std::move(grid)), values_(std::move(values)), unit_(unit), two_sided_(two_sided)
{
    require(grid_.size() == values_.size(), "spectrum: grid and values differ in length");
    for (std::size_t i = 0; i < grid_.size(); ++i) {
        require(finite(grid_[i]), "spectrum: grid must be finite");
        require(i == 0 || grid_[i] > grid_[i - 1], "spectrum: grid must be strictly increasing");
        require(finite(values_[i]) && values_[i] >= 0, "spectrum: values must be finite and >= 0");
    }
}

Spectrum Spectrum::single_sided() const
{
    if (!two_sided_) return *this;
    std::vector<double> g, v;
    for (std::size_t i = 0; i < grid_.size(); ++i) {
        if (grid_[i] < 0) continue;
        g.push_back(grid_[i]);
        v.push_back(2.0 * values_[i]);
    }
    return Spectrum(std::move(g), std::move(v), unit_, false);
}

double Spectrum::integrate(double lo, double hi) const
{
    double acc = 0.0;
    for (std::size_t i = 1; i < grid_.size(); ++i) {
        if (grid_[i - 1] < lo || grid_[i] > hi) continue;
        acc += 0.5 * (values_[i] + values_[i - 1]) * (grid_[i] - grid_[i - 1]);
    }
    return acc / constants::two_pi;
}

bool Spectrum::same_grid(const Spectrum& other) const { return grid_ == other.grid_; }

Spectrum operator+(const Spectrum& a, const Spectrum& b)
{
    require(a.unit() == b.unit(), "spectrum: cannot add " + to_string(a.unit()) + " and " +
                                      to_string(b.unit()));
    require(a.two_sided() == b.two_sided(), "spectrum: mixing one- and two-sided spectra");
    require(a.same_grid(b), "spectrum: grids differ");
    std::vector<double> v(a.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = a.values()[i] + b.values()[i];
    return Spectrum(a.grid(), std::move(v), a.unit(), a.two_sided());
}

std::vector<double> linspace(double lo, double hi, std::size_t n)
{
    require(n >= 2, "linspace: need at least two points");
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i)
        out[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    out.back() = hi;
    return out;
}

std::vector<double> logspace(double lo, double hi, std::size_t n)
{
    require(lo > 0 && hi > 0, "logspace: bounds must be positive");
    auto e = linspace(std::log(lo), std::log(hi), n);
    for (auto& v : e) v = std::exp(v);
    e.front() = lo;
    e.back() = hi;
    return e;
}

double x_zpf(const MechMode& mode)
{
    return std::sqrt(constants::hbar / (2.0 * mode.m_eff() * mode.omega_m()));
}

double n_bath(const MechMode& mode)
{
    require(mode.t_bath() > 0, "n_bath: temperature must be positive");
    return constants::k_B * mode.t_bath() / (constants::hbar * mode.omega_m());
}

double finesse(const CavityParams& cav, double fsr)
{
    require(finite(fsr) && fsr > 0, "finesse: fsr must be positive");
    return fsr / cav.kappa();
}

double fsr_ring(double radius, double n_index)
{
    require(radius > 0 && n_index > 0, "fsr_ring: radius and index must be positive");
    // one round trip of length 2 pi R at group velocity c/n, in rad/s
    return constants::c / (n_index * radius);
}

}  // namespace om
