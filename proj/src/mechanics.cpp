#include "optomech/mechanics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/roots.hpp>

#include "optomech/errors.hpp"
#include "optomech/model.hpp"

namespace om {

using constants::k_B;
using constants::pi;
using detail::require;
using boost::math::quadrature::gauss_kronrod;

namespace {

double sq(double v) { return v * v; }

// sin s - s cos s and (s^2 - 2) sin s + 2 s cos s, with series near the origin
// where both vanish like s^3
double radial_kernel(double s)
{
    if (std::abs(s) < 1e-2) {
        const double s2 = s * s;
        return s * s2 * (1.0 / 3.0 - s2 / 30.0 + s2 * s2 / 840.0);
    }
    return std::sin(s) - s * std::cos(s);
}

double strain_kernel(double s)
{
    if (std::abs(s) < 1e-2) {
        const double s2 = s * s;
        return s * s2 * (1.0 / 3.0 - s2 / 10.0 + s2 * s2 / 168.0);
    }
    return (s * s - 2.0) * std::sin(s) + 2.0 * s * std::cos(s);
}

// pole-free form of the characteristic equation
double char_smooth(double ratio, double y)
{
    return (1.0 - 0.25 * ratio * y * y) * std::sin(y) - y * std::cos(y);
}

double velocity_ratio2(const ElasticMaterial& m) { return sq(m.v_long() / m.v_trans()); }

}  // namespace

ElasticMaterial::ElasticMaterial(double density_, double youngs_, double poisson_, double p1_,
                                 double p2_, double n_index_)
    : density(density_), youngs(youngs_), poisson(poisson_), p1(p1_), p2(p2_), n_index(n_index_)
{
    require(density > 0 && youngs > 0, "material: density and Young's modulus must be positive");
    require(poisson > 0 && poisson < 0.5, "material: Poisson ratio must lie in (0, 0.5)");
    require(n_index > 0, "material: refractive index must be positive");
}

double ElasticMaterial::lame_lambda() const
{
    return poisson * youngs / ((1.0 + poisson) * (1.0 - 2.0 * poisson));
}
double ElasticMaterial::lame_mu() const { return youngs / (2.0 * (1.0 + poisson)); }
double ElasticMaterial::v_long() const
{
    return std::sqrt((lame_lambda() + 2.0 * lame_mu()) / density);
}
double ElasticMaterial::v_trans() const { return std::sqrt(lame_mu() / density); }

ElasticMaterial fused_silica() { return ElasticMaterial(2200.0, 73e9, 0.17, 0.121, 0.270, 1.45); }

double sphere_characteristic(const ElasticMaterial& mat, double y)
{
    return (1.0 - 0.25 * velocity_ratio2(mat) * y * y) * std::tan(y) / y - 1.0;
}

double sphere_characteristic_root(const ElasticMaterial& mat)
{
    const double ratio = velocity_ratio2(mat);
    auto g = [ratio](double y) { return char_smooth(ratio, y); };
    const double step = 0.01;
    double lo = 0.1, g_lo = g(lo);
    for (double hi = lo + step; hi <= 10.0 + 1e-12; hi += step) {
        const double g_hi = g(hi);
        if (g_lo == 0.0) return lo;
        if (std::signbit(g_lo) != std::signbit(g_hi)) {
            boost::uintmax_t iters = 200;
            auto tol = boost::math::tools::eps_tolerance<double>(52);
            auto [a, b] = boost::math::tools::toms748_solve(g, lo, hi, g_lo, g_hi, tol, iters);
            const double y = 0.5 * (a + b);
            // tan has poles at odd multiples of pi/2; skip roots of the smooth
            // form that coincide with cos y = 0
            if (std::abs(std::cos(y)) > 1e-8) {
                if (!(std::abs(sphere_characteristic(mat, y)) < 1e-10))
                    throw NumericalError("sphere root: residual " +
                                         std::to_string(sphere_characteristic(mat, y)) +
                                         " at kR = " + std::to_string(y));
                return y;
            }
        }
        lo = hi;
        g_lo = g_hi;
    }
    throw NumericalError("sphere root: no sign change of the characteristic function on [0.1, 10] "
                         "(v_long/v_trans squared = " + std::to_string(ratio) + ")");
}

SphereMode sphere_fundamental(const ElasticMaterial& mat, double radius)
{
    require(radius > 0 && std::isfinite(radius), "sphere: radius must be positive");
    const double y = sphere_characteristic_root(mat);
    const double k = y / radius;
    const double amp = sq(radius) / radial_kernel(y);  // unit surface displacement
    SphereMode mode{y, radius, y * mat.v_long() / radius, 0.0,
                    [k, amp](double r) { return r == 0.0 ? 0.0 : amp * radial_kernel(k * r) / (r * r); }};
    mode.m_eff = 2.0 * sphere_strain_energy(mat, radius) / sq(mode.omega);
    return mode;
}

SphereFields sphere_fields(const SphereMode& mode, const ElasticMaterial& mat, double r)
{
    require(r >= 0 && r <= mode.radius * (1.0 + 1e-12), "sphere_fields: need 0 <= r <= R");
    const double k = mode.k_root / mode.radius;
    const double amp = sq(mode.radius) / radial_kernel(mode.k_root);
    const double s = k * r;
    const double k3 = k * k * k;
    // A k^3 f(s)/s^3 stays finite as s -> 0 through the series kernels
    double e_tt, e_rr;
    if (s == 0.0) {
        e_tt = amp * k3 / 3.0;
        e_rr = amp * k3 / 3.0;
    } else {
        const double s3 = s * s * s;
        e_tt = amp * k3 * radial_kernel(s) / s3;
        e_rr = amp * k3 * strain_kernel(s) / s3;
    }
    const double u = e_tt * r;
    const double lam = mat.lame_lambda(), mu = mat.lame_mu();
    const double tr = e_rr + 2.0 * e_tt;
    const double s_rr = 2.0 * mu * e_rr + lam * tr;
    const double s_tt = 2.0 * mu * e_tt + lam * tr;
    return SphereFields{u, e_rr, e_tt, e_tt, s_rr, s_tt, s_tt,
                        0.5 * (s_rr * e_rr + 2.0 * s_tt * e_tt)};
}

double sphere_strain_energy(const ElasticMaterial& mat, double radius)
{
    require(radius > 0 && std::isfinite(radius), "sphere: radius must be positive");
    const double y = sphere_characteristic_root(mat);
    const SphereMode mode{y, radius, y * mat.v_long() / radius, 0.0, {}};
    // integrate in s = r/R; Boost's error estimate is not scale invariant, so
    // working in metres made it spuriously large for micron radii
    auto f = [&](double s) {
        const double r = std::min(s * radius, radius);
        return sphere_fields(mode, mat, r).energy_density * 4.0 * pi * r * r * radius;
    };
    // the integrand is entire in r, so fixed panels converge geometrically
    const int panels = 8;
    double u = 0.0, err = 0.0;
    for (int i = 0; i < panels; ++i) {
        double e = 0.0;
        u += gauss_kronrod<double, 61>::integrate(f, double(i) / panels, double(i + 1) / panels, 0,
                                                  0.0, &e);
        err += e;
    }
    if (!(err <= 1e-9 * std::abs(u)))
        throw NumericalError("sphere_strain_energy: quadrature error estimate " + std::to_string(err));
    return u;
}

double sphere_effective_mass(const ElasticMaterial& mat, double radius)
{
    const double y = sphere_characteristic_root(mat);
    const double omega = y * mat.v_long() / radius;
    return 2.0 * sphere_strain_energy(mat, radius) / sq(omega);
}

double sphere_effective_mass_kinetic(const ElasticMaterial& mat, double radius)
{
    require(radius > 0 && std::isfinite(radius), "sphere: radius must be positive");
    const double y = sphere_characteristic_root(mat);
    // int_0^y (sin s - s cos s)^2 / s^2 ds
    const double moving = 0.5 * y + 0.25 * std::sin(2.0 * y) - sq(std::sin(y)) / y;
    return 4.0 * pi * mat.density * radius * radius * radius * y * moving / sq(radial_kernel(y));
}

PhotoelasticShift photoelastic_shift(const ElasticMaterial& mat, const SphereFields& f,
                                     Polarization pol)
{
    const double d = (pol == Polarization::te) ? mat.p2 * f.e_rr + mat.p1 * f.e_tt + mat.p2 * f.e_pp
                                               : mat.p1 * f.e_rr + mat.p2 * f.e_tt + mat.p2 * f.e_pp;
    // index part: d omega/omega = -dn/n = (n^2/2) d(n^-2); boundary part: -u/R = -e_tt
    const double index_shift = 0.5 * sq(mat.n_index) * d;
    const double geometric = -f.e_tt;
    if (geometric == 0.0) return PhotoelasticShift{d, 0.0, 0.0};
    const double rel = index_shift / geometric;
    return PhotoelasticShift{d, std::abs(rel), rel};
}

// ---------------------------------------------------------------------------
// two-level systems

TlsParams tls_silica()
{
    const double v0 = 667.0 * k_B;
    return TlsParams{0.0018505461215420722, v0, 0.28, std::pow(10.0, -12.2), v0 / 7.7};
}

namespace {

enum class TlsKernel { loss, dispersion };

// erf(sqrt2 kT/Dc)/(kT) int (V/V0)^-zeta exp(-V^2/2V0^2) K(ln(Omega tau0) + V/kT) dV
double tls_integral(const TlsParams& p, double temperature, double omega, TlsKernel kind)
{
    require(temperature > 0 && std::isfinite(temperature), "tls: temperature must be positive");
    require(omega > 0, "tls: frequency must be positive");
    require(p.v0 > 0 && p.zeta > 0 && p.zeta < 1 && p.tau0 > 0 && p.delta_c > 0 && p.amplitude >= 0,
            "tls: parameters out of range");
    const double kt = k_B * temperature;
    const double log_wt = std::log(omega * p.tau0);
    const double a = p.v0 / kt;
    const double e = 1.0 - p.zeta;
    // w = u^(1 - zeta) absorbs the endpoint singularity: u^-zeta du = dw / (1 - zeta)
    auto f = [&](double w) {
        const double u = std::pow(w, 1.0 / e);
        const double x = log_wt + a * u;
        const double ax = std::abs(x);
        double k;
        if (kind == TlsKernel::loss) {
            k = std::exp(-ax) / (1.0 + std::exp(-2.0 * ax));  // 1/(2 cosh x)
        } else {
            k = x > 0 ? std::exp(-2.0 * x) / (1.0 + std::exp(-2.0 * x)) : 1.0 / (1.0 + std::exp(2.0 * x));
        }
        return std::exp(-0.5 * u * u) * k;
    };

    const double u_max = 8.0;
    const double u_peak = -log_wt / a;
    const double width = 1.0 / a;
    std::vector<double> cuts{0.0};
    for (double c : {u_peak - 10 * width, u_peak - 2 * width, u_peak, u_peak + 2 * width,
                     u_peak + 10 * width, u_peak + 40 * width})
        if (c > 0.0 && c < u_max) cuts.push_back(c);
    cuts.push_back(u_max);
    std::sort(cuts.begin(), cuts.end());

    double total = 0.0, err_total = 0.0;
    for (std::size_t i = 1; i < cuts.size(); ++i) {
        const double w0 = std::pow(cuts[i - 1], e), w1 = std::pow(cuts[i], e);
        if (w1 <= w0) continue;
        // mapped onto [0, 1]: Boost's error estimate is not scale invariant and
        // floors far above the true error on very narrow panels
        auto g = [&](double t) { return f(w0 + (w1 - w0) * t) * (w1 - w0); };
        double err = 0.0;
        total += gauss_kronrod<double, 61>::integrate(g, 0.0, 1.0, 15, 1e-12, &err);
        err_total += err;
    }
    if (!std::isfinite(total) || err_total > 1e-8 * std::abs(total) + 1e-300)
        throw NumericalError("tls: quadrature not converged at T = " + std::to_string(temperature) +
                             " K (integral " + std::to_string(total) + ", error " +
                             std::to_string(err_total) + ")");
    return std::erf(std::sqrt(2.0) * kt / p.delta_c) * a * total / e;
}

}  // namespace

double tls_inverse_q(const TlsParams& p, double temperature, double omega)
{
    return p.amplitude * tls_integral(p, temperature, omega, TlsKernel::loss);
}

double tls_quality_factor(const TlsParams& p, double temperature, double omega)
{
    const double inv = tls_inverse_q(p, temperature, omega);
    return inv > 0 ? 1.0 / inv : std::numeric_limits<double>::infinity();
}

double tls_frequency_shift(const TlsParams& p, double temperature, double omega)
{
    return -0.5 * p.amplitude * tls_integral(p, temperature, omega, TlsKernel::dispersion);
}

TlsMinimum tls_minimum(const TlsParams& p, double omega, double t_lo, double t_hi)
{
    require(t_lo > 0 && t_hi > t_lo, "tls_minimum: invalid temperature range");
    auto q_of_log = [&](double lt) { return tls_quality_factor(p, std::exp(lt), omega); };
    const int n = 80;
    const double a = std::log(t_lo), b = std::log(t_hi);
    int best = 0;
    double best_q = std::numeric_limits<double>::infinity();
    for (int i = 0; i <= n; ++i) {
        const double q = q_of_log(a + (b - a) * i / n);
        if (q < best_q) {
            best_q = q;
            best = i;
        }
    }
    const double lo = a + (b - a) * std::max(best - 1, 0) / n;
    const double hi = a + (b - a) * std::min(best + 1, n) / n;
    auto r = boost::math::tools::brent_find_minima(q_of_log, lo, hi, 40);
    return TlsMinimum{std::exp(r.first), r.second};
}

double calibrate_tls_amplitude(const TlsParams& p, double omega, double q_min)
{
    require(q_min > 0, "calibrate_tls_amplitude: target Q must be positive");
    TlsParams unit = p;
    unit.amplitude = 1.0;
    // Q scales as 1/C, so one evaluation fixes the amplitude
    return tls_minimum(unit, omega).q / q_min;
}

// ---------------------------------------------------------------------------
// other loss channels

double combine_q(const std::vector<double>& channels)
{
    require(!channels.empty(), "combine_q: need at least one channel");
    double inv = 0.0;
    for (double q : channels) {
        require(q > 0, "combine_q: quality factors must be positive");
        inv += 1.0 / q;
    }
    return 1.0 / inv;
}

double gas_q(const GasReference& ref, double pressure, GasRegime regime)
{
    require(ref.pressure > 0 && ref.q > 0 && pressure > 0, "gas_q: pressures and Q must be positive");
    const double exponent = regime == GasRegime::viscous ? -0.5 : -1.0;
    return ref.q * std::pow(pressure / ref.pressure, exponent);
}

CoupledModes coupled_modes(double omega_r, double q_r, double omega_f, double q_f, double g_im)
{
    require(omega_r > 0 && omega_f > 0 && q_r > 0 && q_f > 0, "coupled_modes: invalid bare modes");
    require(g_im >= 0, "coupled_modes: coupling must be non-negative");
    using cd = std::complex<double>;
    const cd zr(omega_r, 0.5 * omega_r / q_r);
    const cd zf(omega_f, 0.5 * omega_f / q_f);
    if (g_im == 0.0) {
        if (omega_r >= omega_f) return CoupledModes{omega_r, q_r, omega_f, q_f};
        return CoupledModes{omega_f, q_f, omega_r, q_r};
    }
    // eigenvalues of [[zr, c], [c, zf]] with c^2 = g^4 / (4 Omega_R Omega_F)
    const cd c2 = std::pow(g_im, 4) / (4.0 * omega_r * omega_f);
    const cd mean = 0.5 * (zr + zf);
    const cd half = 0.5 * (zr - zf);
    cd root = std::sqrt(half * half + c2);
    if (root.real() < 0) root = -root;
    const cd up = mean + root, dn = mean - root;
    return CoupledModes{up.real(), up.real() / (2.0 * up.imag()), dn.real(),
                        dn.real() / (2.0 * dn.imag())};
}

ClampingLoss clamping_loss(const std::vector<double>& dz, const std::vector<double>& da,
                           double v_sound, double density, double omega, double e_mech)
{
    require(!dz.empty(), "clamping_loss: empty sample set");
    require(dz.size() == da.size(), "clamping_loss: samples and area elements differ in length");
    require(v_sound > 0 && density > 0 && e_mech >= 0, "clamping_loss: invalid material data");
    double acc = 0.0;
    for (std::size_t i = 0; i < dz.size(); ++i) {
        require(da[i] >= 0, "clamping_loss: area elements must be non-negative");
        acc += dz[i] * dz[i] * da[i];
    }
    const double p = v_sound * density * omega * omega * acc;
    const double q = p > 0 ? omega * e_mech / p : std::numeric_limits<double>::infinity();
    return ClampingLoss{p, q};
}

ClampingLoss clamping_loss(const std::vector<double>& dz, double area_element, double v_sound,
                           double density, double omega, double e_mech)
{
    return clamping_loss(dz, std::vector<double>(dz.size(), area_element), v_sound, density, omega,
                         e_mech);
}

}  // namespace om
