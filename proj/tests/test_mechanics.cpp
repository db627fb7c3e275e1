#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/Polynomials>
#include <gsl/gsl_errno.h>
#include <gsl/gsl_integration.h>

#include "optomech/errors.hpp"
#include "optomech/mechanics.hpp"
#include "optomech/model.hpp"
#include "support.hpp"

using namespace om;
using om::test::rel_err;
using constants::pi;
using constants::two_pi;

namespace {

// adaptive GSL quadrature of f on [a, b]
template <class F>
double gsl_integral(F f, double a, double b, double rel = 1e-11)
{
    gsl_set_error_handler_off();
    gsl_integration_workspace* w = gsl_integration_workspace_alloc(2000);
    gsl_function gf;
    gf.function = [](double x, void* p) { return (*static_cast<F*>(p))(x); };
    gf.params = &f;
    double result = 0.0, err = 0.0;
    const int status = gsl_integration_qag(&gf, a, b, 0.0, rel, 2000, GSL_INTEG_GAUSS61, w, &result, &err);
    gsl_integration_workspace_free(w);
    REQUIRE(status == GSL_SUCCESS);
    return result;
}

// Breathing-mode fields written out independently: u = A j1(k r) with
// j1(s) = (sin s - s cos s)/s^2, normalised to u(R) = 1.
struct OwnFields {
    double k, amp, lam, mu;

    OwnFields(const ElasticMaterial& m, double ky, double radius)
        : k(ky / radius), lam(m.lame_lambda()), mu(m.lame_mu())
    {
        amp = 1.0 / j1(ky);
    }

    static double j1(double s) { return (std::sin(s) - s * std::cos(s)) / (s * s); }
    static double j1_prime(double s)
    {
        return ((s * s - 2.0) * std::sin(s) + 2.0 * s * std::cos(s)) / (s * s * s);
    }

    double u(double r) const { return amp * j1(k * r); }
    double e_rr(double r) const { return amp * k * j1_prime(k * r); }
    double e_tt(double r) const { return u(r) / r; }
    double s_rr(double r) const
    {
        return (lam + 2.0 * mu) * e_rr(r) + 2.0 * lam * e_tt(r);
    }
    double energy(double r) const
    {
        const double er = e_rr(r), et = e_tt(r);
        const double tr = er + 2.0 * et;
        return 0.5 * lam * tr * tr + mu * (er * er + 2.0 * et * et);
    }
};

}  // namespace

TEST_CASE("material: Lame constants and sound speeds")
{
    const auto m = fused_silica();
    const double s = m.poisson, e = m.youngs;
    CHECK(rel_err(m.lame_lambda(), s * e / ((1 + s) * (1 - 2 * s))) < 1e-15);
    CHECK(rel_err(m.lame_mu(), e / (2 * (1 + s))) < 1e-15);
    CHECK(m.v_long() > m.v_trans());
    CHECK(m.v_trans() > 0);
    // longitudinal speed of silica near 5.9 km/s
    CHECK(m.v_long() == doctest::Approx(5900).epsilon(0.02));

    test::Draw draw(11);
    for (int i = 0; i < 200; ++i) {
        const ElasticMaterial q(draw.uniform(1e3, 2e4), draw.log_uniform(1e9, 1e12),
                                draw.uniform(0.01, 0.49));
        CHECK(q.v_long() > q.v_trans());
        // E = mu (3 lambda + 2 mu)/(lambda + mu)
        const double lam = q.lame_lambda(), mu = q.lame_mu();
        CHECK(rel_err(mu * (3 * lam + 2 * mu) / (lam + mu), q.youngs) < 1e-12);
    }
    CHECK_THROWS_AS(ElasticMaterial(2200, 73e9, 0.5), ValidationError);
    CHECK_THROWS_AS(ElasticMaterial(-1, 73e9, 0.2), ValidationError);
}

TEST_CASE("sphere: breathing-mode root and frequency")
{
    const auto m = fused_silica();
    const double y = sphere_characteristic_root(m);
    CHECK(y == doctest::Approx(2.4005).epsilon(1e-4));
    CHECK(std::abs(sphere_characteristic(m, y)) < 1e-10);

    // smallest positive root: a fine independent scan of the smooth form finds
    // no earlier sign change away from the tan poles
    const double r2 = std::pow(m.v_long() / m.v_trans(), 2);
    auto smooth = [&](double s) { return (1 - 0.25 * r2 * s * s) * std::sin(s) - s * std::cos(s); };
    double first = 0.0;
    for (double s = 0.1; s < 10.0; s += 1e-4) {
        if (std::signbit(smooth(s)) != std::signbit(smooth(s + 1e-4)) &&
            std::abs(std::cos(s)) > 1e-3) {
            first = s;
            break;
        }
    }
    CHECK(std::abs(first - y) < 2e-4);

    const auto mode = sphere_fundamental(m, 25e-6);
    CHECK(mode.omega / two_pi == doctest::Approx(91.2e6).epsilon(0.005));
    CHECK(rel_err(mode.omega, mode.k_root * m.v_long() / 25e-6) < 1e-15);

    for (double r = 10e-6; r <= 100e-6 + 1e-12; r += 10e-6) {
        const auto md = sphere_fundamental(m, r);
        CHECK(md.omega / two_pi * r == doctest::Approx(2280).epsilon(0.005));
        // f proportional to 1/R exactly
        CHECK(rel_err(md.omega * r, mode.omega * 25e-6) < 1e-13);
    }
    CHECK_THROWS_AS(sphere_fundamental(m, 0.0), ValidationError);
}

TEST_CASE("sphere: effective mass and strain energy")
{
    const auto m = fused_silica();
    const double meff15 = sphere_effective_mass(m, 15e-6);
    CHECK(meff15 == doctest::Approx(28.6e-12).epsilon(0.01));
    CHECK(meff15 / std::pow(15e-6, 3) == doctest::Approx(8470).epsilon(0.01));

    const double ref = sphere_effective_mass(m, 10e-6) / (m.density * 1e-15);
    for (double r : {50e-9, 3e-6, 17e-6, 42e-6, 120e-6, 1e-3}) {
        const double c = sphere_effective_mass(m, r) / (m.density * r * r * r);
        CHECK(rel_err(c, ref) < 1e-9);
    }

    // independent volume quadrature of the hand-written fields
    for (double r : {15e-6, 40e-6}) {
        const double y = sphere_characteristic_root(m);
        const OwnFields own(m, y, r);
        const double u = gsl_integral([&](double s) { return own.energy(s) * 4 * pi * s * s; },
                                      1e-9 * r, r);
        const double lib = sphere_strain_energy(m, r);
        CHECK(rel_err(lib, u) < 1e-6);
        // U = 8.69e11 R x^2 for unit surface displacement
        CHECK(lib / r == doctest::Approx(8.69e11).epsilon(0.01));

        // virial: strain-energy mass equals the kinetic mass of the same mode
        const double kin = gsl_integral([&](double s) { return m.density * std::pow(own.u(s), 2) * 4 * pi * s * s; },
                                        1e-9 * r, r);
        CHECK(rel_err(sphere_effective_mass_kinetic(m, r), kin) < 1e-8);
        CHECK(rel_err(sphere_effective_mass(m, r), kin) < 1e-8);
    }
}

TEST_CASE("sphere: field profiles")
{
    const auto m = fused_silica();
    const double r0 = 20e-6;
    const auto mode = sphere_fundamental(m, r0);
    const OwnFields own(m, mode.k_root, r0);

    const auto edge = sphere_fields(mode, m, r0);
    CHECK(std::abs(edge.u_r - 1.0) < 1e-12);
    CHECK(std::abs(edge.s_rr) < 1e-10 * std::abs(edge.s_tt));
    CHECK(std::abs(own.s_rr(r0)) < 1e-10 * std::abs(edge.s_tt));

    const auto centre = sphere_fields(mode, m, 0.0);
    CHECK(std::isfinite(centre.e_rr));
    CHECK(std::isfinite(centre.energy_density));
    CHECK(centre.u_r == 0.0);
    // isotropic at the centre
    CHECK(rel_err(centre.e_rr, centre.e_tt) < 1e-12);
    // continuity into the series branch near the origin
    const auto near = sphere_fields(mode, m, 1e-4 * r0);
    CHECK(rel_err(near.e_rr, centre.e_rr) < 1e-6);

    double u_max = 0.0, w_max = 0.0, r_wmax = 0.0;
    for (int i = 1; i <= 400; ++i) {
        const double r = r0 * i / 400.0;
        const auto f = sphere_fields(mode, m, r);
        CHECK(f.e_tt == f.e_pp);
        CHECK(f.s_tt == f.s_pp);
        CHECK(rel_err(f.u_r, own.u(r)) < 1e-9);
        CHECK(rel_err(f.e_rr, own.e_rr(r)) < 1e-8);
        CHECK(rel_err(f.energy_density, own.energy(r)) < 1e-8);
        CHECK(rel_err(f.u_r, mode.radial_profile(r)) < 1e-12);
        u_max = std::max(u_max, f.u_r);
        if (f.energy_density > w_max) {
            w_max = f.energy_density;
            r_wmax = r;
        }
    }
    // j1 peaks at s = 2.0816 < kR, so the displacement crests just inside the
    // surface (about 3% above its boundary value) rather than at r = R
    double s_peak = 0.0;
    {
        double best = 0.0;
        for (double t = 1.5; t < 2.5; t += 1e-6)
            if (OwnFields::j1(t) > best) best = OwnFields::j1(t), s_peak = t;
    }
    double r_umax = 0.0;
    for (int i = 1; i <= 4000; ++i) {
        const double r = r0 * i / 4000.0;
        if (sphere_fields(mode, m, r).u_r >= u_max * (1 - 1e-15)) r_umax = r;
    }
    CHECK(r_umax / r0 == doctest::Approx(s_peak / mode.k_root).epsilon(1e-3));
    CHECK(u_max == doctest::Approx(OwnFields::j1(s_peak) / OwnFields::j1(mode.k_root)).epsilon(1e-6));
    CHECK(u_max < 1.03);
    // rising over the inner 85% of the radius
    for (int i = 1; i < 85; ++i)
        CHECK(sphere_fields(mode, m, r0 * i / 100.0).u_r < sphere_fields(mode, m, r0 * (i + 1) / 100.0).u_r);
    CHECK(r_wmax > 0.0);
    CHECK(r_wmax < r0);
    CHECK(w_max > sphere_fields(mode, m, r0).energy_density);
    CHECK_THROWS_AS(sphere_fields(mode, m, 1.1 * r0), ValidationError);
}

TEST_CASE("photoelastic: extra shift of the breathing mode")
{
    const auto m = fused_silica();
    const auto mode = sphere_fundamental(m, 30e-6);
    const auto f = sphere_fields(mode, m, mode.radius);
    const auto te = photoelastic_shift(m, f, Polarization::te);
    const auto tm = photoelastic_shift(m, f, Polarization::tm);
    CHECK(te.relative == doctest::Approx(0.30).epsilon(0.05 / 0.30));
    CHECK(tm.relative == doctest::Approx(0.50).epsilon(0.05 / 0.50));
    CHECK(rel_err(te.delta_inv_n2, m.p2 * f.e_rr + m.p1 * f.e_tt + m.p2 * f.e_pp) < 1e-15);
    CHECK(rel_err(tm.delta_inv_n2, m.p1 * f.e_rr + m.p2 * f.e_tt + m.p2 * f.e_pp) < 1e-15);
    CHECK(std::abs(te.relative_signed) == doctest::Approx(te.relative));
    // an expanding sphere is under tension at its surface, which lowers the
    // index and pushes the optical frequency against the boundary shift
    CHECK(f.e_tt > 0);
    CHECK(te.relative_signed < 0);
    CHECK(tm.relative_signed < 0);

    SphereFields zero{};
    const auto z = photoelastic_shift(m, zero, Polarization::te);
    CHECK(z.delta_inv_n2 == 0.0);
    CHECK(z.relative == 0.0);

    // swapping p1 and p2 exchanges the radial weight between TE and TM
    const ElasticMaterial swapped(m.density, m.youngs, m.poisson, m.p2, m.p1, m.n_index);
    SphereFields radial_only{};
    radial_only.e_rr = 1e-3;
    CHECK(photoelastic_shift(swapped, radial_only, Polarization::te).delta_inv_n2 ==
          doctest::Approx(photoelastic_shift(m, radial_only, Polarization::tm).delta_inv_n2));
    CHECK(photoelastic_shift(swapped, radial_only, Polarization::tm).delta_inv_n2 ==
          doctest::Approx(photoelastic_shift(m, radial_only, Polarization::te).delta_inv_n2));
}

TEST_CASE("tls: calibrated minimum and temperature dependence")
{
    const auto p = tls_silica();
    const double w40 = two_pi * 40e6;
    const auto mn = tls_minimum(p, w40);
    CHECK(mn.q == doctest::Approx(500).epsilon(1e-6));
    CHECK(mn.temperature > 35);
    CHECK(mn.temperature < 65);

    // calibration round trip from an arbitrary amplitude
    TlsParams other = p;
    other.amplitude = 0.05;
    const double c = calibrate_tls_amplitude(other, w40, 500);
    CHECK(rel_err(c, p.amplitude) < 1e-6);
    other.amplitude = c;
    CHECK(rel_err(tls_minimum(other, w40).q, 500) < 1e-6);

    // thermally activated freeze-out
    double prev = 0.0;
    for (double t : {8.0, 4.0, 2.0, 1.0}) {
        const double inv = tls_inverse_q(p, t, w40);
        CHECK(inv >= 0.0);
        if (prev > 0) CHECK(inv < prev);
        prev = inv;
    }
    // low-temperature asymptote: the relaxation kernel 1/(2 cosh x) narrows to
    // width kT around V* = -kT ln(W tau0), giving
    // Q^-1 -> C erf(sqrt2 kT/Dc) (pi/2) (V*/V0)^-zeta exp(-V*^2/2V0^2)
    for (double t : {1.0, 0.1, 0.01}) {
        const double kt = constants::k_B * t;
        const double vs = -kt * std::log(w40 * p.tau0) / p.v0;
        const double asym = p.amplitude * std::erf(std::sqrt(2.0) * kt / p.delta_c) * 0.5 * pi *
                            std::pow(vs, -p.zeta) * std::exp(-0.5 * vs * vs);
        CHECK(rel_err(tls_inverse_q(p, t, w40), asym) < 0.02);
    }
    // so Q^-1 vanishes like T^(1 - zeta)
    CHECK(tls_inverse_q(p, 0.01, w40) < 0.01 * tls_inverse_q(p, mn.temperature, w40));

    // room-temperature ceiling at 36 MHz
    const double q300 = tls_quality_factor(p, 300, two_pi * 36e6);
    CHECK(q300 > 25e3);
    CHECK(q300 < 100e3);

    CHECK_THROWS_AS(tls_quality_factor(p, 0.0, w40), ValidationError);
    CHECK_THROWS_AS(tls_quality_factor(p, 10.0, -1.0), ValidationError);
}

TEST_CASE("tls: loss and shift against a direct quadrature in V")
{
    const auto p = tls_silica();
    for (double t : {12.0, 47.0, 150.0, 300.0}) {
        for (double f : {36e6, 63e6}) {
            const double w = two_pi * f;
            const double kt = constants::k_B * t;
            // integrate in v = V/V0, splitting at the relaxation peak
            auto loss = [&](double v) {
                const double x = w * p.tau0 * std::exp(v * p.v0 / kt);
                return std::pow(v, -p.zeta) * std::exp(-0.5 * v * v) * x / (1 + x * x);
            };
            auto disp = [&](double v) {
                const double x = w * p.tau0 * std::exp(v * p.v0 / kt);
                return std::pow(v, -p.zeta) * std::exp(-0.5 * v * v) / (1 + x * x);
            };
            const double peak = -std::log(w * p.tau0) * kt / p.v0;
            auto both = [&](auto g) {
                gsl_set_error_handler_off();
                gsl_integration_workspace* ws = gsl_integration_workspace_alloc(2000);
                gsl_function gf;
                gf.function = [](double v, void* q) { return (*static_cast<decltype(g)*>(q))(v); };
                gf.params = &g;
                std::vector<double> pts{0.0};
                if (peak > 0 && peak < 8) pts.push_back(peak);
                pts.push_back(8.0);
                double res = 0, err = 0;
                const int st = gsl_integration_qagp(&gf, pts.data(), pts.size(), 0, 1e-10, 2000,
                                                    ws, &res, &err);
                gsl_integration_workspace_free(ws);
                REQUIRE(st == GSL_SUCCESS);
                return res;
            };
            const double pre = std::erf(std::sqrt(2.0) * kt / p.delta_c) * p.v0 / kt;
            CHECK(rel_err(tls_inverse_q(p, t, w), p.amplitude * pre * both(loss)) < 1e-6);
            CHECK(rel_err(tls_frequency_shift(p, t, w), -0.5 * p.amplitude * pre * both(disp)) < 1e-6);
        }
    }
}

TEST_CASE("tls: frequency shift")
{
    TlsParams p = tls_silica();
    const double w = two_pi * 63e6;
    // negative throughout; the shift deepens while more defects relax within
    // a period, bottoms out once the erf factor saturates, then recovers
    // toward zero as 1/T, so the frequency climbs over most of the range
    std::vector<double> ts, shifts;
    for (double t = 10.0; t <= 300.0; t += 5.0) {
        ts.push_back(t);
        shifts.push_back(tls_frequency_shift(p, t, w));
        CHECK(shifts.back() < 0.0);
    }
    const auto lowest = std::min_element(shifts.begin(), shifts.end()) - shifts.begin();
    CHECK(ts[static_cast<std::size_t>(lowest)] > 30.0);
    CHECK(ts[static_cast<std::size_t>(lowest)] < 100.0);
    for (std::size_t i = 1; i < shifts.size(); ++i) {
        if (i <= static_cast<std::size_t>(lowest)) CHECK(shifts[i] < shifts[i - 1]);
        else CHECK(shifts[i] > shifts[i - 1]);
    }
    // 1/T recovery at the warm end
    CHECK(tls_frequency_shift(p, 300, w) / tls_frequency_shift(p, 150, w) ==
          doctest::Approx(0.5).epsilon(0.15));
    p.amplitude = 0.0;
    CHECK(tls_frequency_shift(p, 100, w) == 0.0);
    CHECK(std::isinf(tls_quality_factor(p, 100, w)));
}

TEST_CASE("q channels: combination and gas scaling")
{
    CHECK(combine_q({1234.5}) == doctest::Approx(1234.5));
    CHECK(combine_q({1000, 1000}) == doctest::Approx(500));
    CHECK_THROWS_AS(combine_q({}), ValidationError);
    CHECK_THROWS_AS(combine_q({100, 0}), ValidationError);

    test::Draw draw(5);
    for (int i = 0; i < 300; ++i) {
        std::vector<double> qs(static_cast<std::size_t>(draw.integer(1, 6)));
        for (auto& q : qs) q = draw.log_uniform(10, 1e8);
        const double qc = combine_q(qs);
        CHECK(qc <= *std::min_element(qs.begin(), qs.end()) * (1 + 1e-15));
        auto shuffled = qs;
        std::reverse(shuffled.begin(), shuffled.end());
        std::rotate(shuffled.begin(), shuffled.begin() + static_cast<long>(shuffled.size() / 2),
                    shuffled.end());
        CHECK(rel_err(combine_q(shuffled), qc) < 1e-14);
        auto more = qs;
        more.push_back(draw.log_uniform(10, 1e8));
        CHECK(combine_q(more) < qc);
    }

    const GasReference ref{100.0, 2e4};
    CHECK(gas_q(ref, 100.0, GasRegime::viscous) == doctest::Approx(2e4));
    CHECK(gas_q(ref, 100.0, GasRegime::molecular) == doctest::Approx(2e4));
    CHECK(gas_q(ref, 400.0, GasRegime::viscous) == doctest::Approx(1e4));
    CHECK(gas_q(ref, 1000.0, GasRegime::molecular) == doctest::Approx(2e3));
    CHECK(gas_q(ref, 1.0, GasRegime::molecular) == doctest::Approx(2e6));
    CHECK_THROWS_AS(gas_q(ref, 0.0, GasRegime::viscous), ValidationError);
}

TEST_CASE("coupled modes: bare limit and degeneracy")
{
    const double wr = two_pi * 50e6, wf = two_pi * 45e6;
    const auto bare = coupled_modes(wr, 3000, wf, 40, 0.0);
    CHECK(bare.omega_plus == wr);
    CHECK(bare.q_plus == 3000);
    CHECK(bare.omega_minus == wf);
    CHECK(bare.q_minus == 40);
    const auto swapped = coupled_modes(wf, 40, wr, 3000, 0.0);
    CHECK(swapped.omega_plus == wr);
    CHECK(swapped.q_minus == 40);

    // degenerate, weakly damped: each mode shifts by g^2/(2 sqrt(Wr Wf))
    const double w0 = two_pi * 50e6, g = two_pi * 14e6;
    const auto deg = coupled_modes(w0, 1e5, w0, 1e5, g);
    const double half = g * g / (2 * w0);
    CHECK(rel_err(deg.omega_plus - w0, half) < 1e-9);
    CHECK(rel_err(w0 - deg.omega_minus, half) < 1e-9);

    // independent 2x2 complex eigen-solve over random bare parameters
    test::Draw draw(21);
    for (int i = 0; i < 300; ++i) {
        const double a = two_pi * draw.uniform(20e6, 80e6), b = two_pi * draw.uniform(20e6, 80e6);
        const double qa = draw.log_uniform(10, 1e5), qb = draw.log_uniform(10, 1e5);
        const double gi = two_pi * draw.uniform(0.5e6, 20e6);
        using cd = std::complex<double>;
        Eigen::Matrix2cd mat;
        const cd c = std::sqrt(cd(std::pow(gi, 4) / (4 * a * b)));
        mat << cd(a, a / (2 * qa)), c, c, cd(b, b / (2 * qb));
        Eigen::ComplexEigenSolver<Eigen::Matrix2cd> es(mat);
        auto ev = es.eigenvalues();
        const cd hi = ev(0).real() > ev(1).real() ? ev(0) : ev(1);
        const cd lo = ev(0).real() > ev(1).real() ? ev(1) : ev(0);
        const auto cm = coupled_modes(a, qa, b, qb, gi);
        CHECK(rel_err(cm.omega_plus, hi.real()) < 1e-10);
        CHECK(rel_err(cm.omega_minus, lo.real()) < 1e-10);
        CHECK(rel_err(cm.q_plus, hi.real() / (2 * hi.imag())) < 1e-7);
        CHECK(rel_err(cm.q_minus, lo.real() / (2 * lo.imag())) < 1e-7);
        // the damping is shared, never created: total linewidth is conserved
        CHECK(rel_err(cm.omega_plus / cm.q_plus + cm.omega_minus / cm.q_minus, a / qa + b / qb) < 1e-8);
    }
    CHECK_THROWS_AS(coupled_modes(w0, 100, w0, 100, -1.0), ValidationError);
}

TEST_CASE("coupled modes: agree with the full second-order oscillator pair")
{
    // x_R'' + G_R x_R' + W_R^2 x_R = g^2 x_F and vice versa; the quartic in
    // the complex frequency is solved exactly
    const double wr = two_pi * 60e6, wf = two_pi * 58e6, g = two_pi * 4e6;
    const double qr = 5000, qf = 50;
    const double gr = wr / qr, gf = wf / qf;
    using cd = std::complex<double>;
    // (W_R^2 - w^2 - i w G_R)(W_F^2 - w^2 - i w G_F) - g^4 = 0 with w = i s
    // becomes (s^2 + G_R s + W_R^2)(s^2 + G_F s + W_F^2) - g^4 = 0
    Eigen::Matrix<double, 5, 1> coeff;
    coeff << wr * wr * wf * wf - std::pow(g, 4), gr * wf * wf + gf * wr * wr,
        wr * wr + wf * wf + gr * gf, gr + gf, 1.0;
    Eigen::PolynomialSolver<double, 4> solver(coeff);
    std::vector<double> freqs, qs;
    for (int i = 0; i < 4; ++i) {
        const cd s = solver.roots()(i);
        if (s.imag() > 0) {
            freqs.push_back(s.imag());
            qs.push_back(s.imag() / (-2 * s.real()));
        }
    }
    REQUIRE(freqs.size() == 2);
    const std::size_t ih = freqs[0] > freqs[1] ? 0 : 1;
    const auto cm = coupled_modes(wr, qr, wf, qf, g);
    // the first-order eigen form drops the W/(8Q^2) pulling of a damped
    // oscillator's frequency, which matters for the lossy partner
    const double shift = std::abs(cm.omega_plus - wr);
    const double pull = wf / (8 * qf * qf) + wr / (8 * qr * qr);
    CHECK(std::abs(cm.omega_plus - freqs[ih]) < 0.05 * shift + 1.5 * pull);
    CHECK(std::abs(cm.omega_minus - freqs[1 - ih]) < 0.05 * shift + 1.5 * pull);
    CHECK(rel_err(cm.q_plus, qs[ih]) < 0.05);
    CHECK(rel_err(cm.q_minus, qs[1 - ih]) < 0.05);
}

TEST_CASE("coupled modes: avoided crossing along an undercut series")
{
    // bare radial-breathing and flexural frequencies linear in the undercut,
    // crossing at u = 0.5
    const double g = two_pi * 14e6;
    auto bare_r = [](double u) { return two_pi * (50e6 + 10e6 * (u - 0.5)); };
    auto bare_f = [](double u) { return two_pi * (50e6 - 30e6 * (u - 0.5)); };
    const double qr = 4000, qf = 30;
    double min_gap = 1e30, u_gap = 0.0;
    double q_high_branch_min = 1e30, u_qmin = 0.0;
    for (int i = 0; i <= 200; ++i) {
        const double u = i / 200.0;
        const auto cm = coupled_modes(bare_r(u), qr, bare_f(u), qf, g);
        CHECK(cm.omega_plus > cm.omega_minus);
        const double gap = cm.omega_plus - cm.omega_minus;
        if (gap < min_gap) {
            min_gap = gap;
            u_gap = u;
        }
        const double best = std::max(cm.q_plus, cm.q_minus);
        if (best < q_high_branch_min) {
            q_high_branch_min = best;
            u_qmin = u;
        }
    }
    // gap never closes and is smallest at the bare crossing
    CHECK(std::abs(u_gap - 0.5) < 0.03);
    CHECK(min_gap > 0.5 * g * g / (two_pi * 50e6));
    // the high-Q mode loses its quality factor near the crossing
    CHECK(std::abs(u_qmin - 0.5) < 0.05);
    CHECK(q_high_branch_min < 0.1 * qr);
    const auto far = coupled_modes(bare_r(0.0), qr, bare_f(0.0), qf, g);
    CHECK(std::max(far.q_plus, far.q_minus) > 5 * q_high_branch_min);
}

TEST_CASE("clamping loss: scaling and grid refinement")
{
    const double v = 5900, rho = 2200, w = two_pi * 50e6, e = 1e-15;
    const auto none = clamping_loss(std::vector<double>(50, 0.0), 1e-12, v, rho, w, e);
    CHECK(none.p_mech == 0.0);
    CHECK(std::isinf(none.q_clamp_proportional));

    std::vector<double> dz{1e-12, 3e-12, -2e-12}, dz2;
    for (double z : dz) dz2.push_back(2 * z);
    const auto a = clamping_loss(dz, 1e-12, v, rho, w, e);
    const auto b = clamping_loss(dz2, 1e-12, v, rho, w, e);
    CHECK(rel_err(b.p_mech, 4 * a.p_mech) < 1e-14);
    CHECK(rel_err(a.q_clamp_proportional, w * e / a.p_mech) < 1e-14);
    CHECK(rel_err(a.p_mech, v * rho * w * w * 14e-24 * 1e-12) < 1e-14);

    // smooth synthetic profile on a pillar of radius a0, sampled on midpoint rings
    const double a0 = 5e-6;
    auto profile = [&](double r) { return 1e-12 * std::cos(0.5 * pi * r / a0); };
    // exact: int |dz|^2 2 pi r dr
    const double exact_int = 1e-24 * 2 * pi * a0 * a0 * (0.25 - 1.0 / (pi * pi));
    auto sampled = [&](int n) {
        std::vector<double> z, da;
        for (int i = 0; i < n; ++i) {
            const double r = (i + 0.5) * a0 / n;
            z.push_back(profile(r));
            da.push_back(2 * pi * r * a0 / n);
        }
        return clamping_loss(z, da, v, rho, w, e).p_mech;
    };
    const double p_exact = v * rho * w * w * exact_int;
    std::vector<double> errs;
    for (int n : {10, 20, 40, 80, 160}) errs.push_back(std::abs(sampled(n) - p_exact));
    for (std::size_t i = 1; i < errs.size(); ++i) CHECK(errs[i] < errs[i - 1]);
    CHECK(errs[3] / errs[4] == doctest::Approx(4.0).epsilon(0.02));
    CHECK(errs.back() < 1e-4 * p_exact);

    CHECK_THROWS_AS(clamping_loss(std::vector<double>{}, 1e-12, v, rho, w, e), ValidationError);
    CHECK_THROWS_AS(clamping_loss(dz, std::vector<double>{1e-12}, v, rho, w, e), ValidationError);
}
