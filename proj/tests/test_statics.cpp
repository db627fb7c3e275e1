#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "optomech/cooling.hpp"
#include "optomech/statics.hpp"
#include "optomech/timedomain.hpp"
#include "support.hpp"

using namespace om;
using om::test::rel_err;
using constants::hbar;
using constants::two_pi;

namespace {

// Toroid of the bistability figure: R = 25 um, 380 THz, kappa/2pi = 8 MHz,
// Omega_m/2pi = 50 MHz, 20 ng.
struct Bistable {
    CavityParams cav = CavityParams::wgm(two_pi * 380e12, 25e-6, two_pi * 8e6, 0.5);
    MechMode mode{two_pi * 50e6, two_pi * 50e6 / 1000, 20e-12, 300};
};

Drive flux_drive(const CavityParams& cav, double flux, double detuning)
{
    const double wl = cav.omega_c() + detuning;
    return Drive(flux * hbar * wl, wl, detuning);
}

// Roots of m W^2 x + hbar g0 n(x) = 0 located by a dense scan plus bisection.
std::vector<double> scanned_roots(const CavityParams& cav, const MechMode& mode, const Drive& d)
{
    const double h = 0.5 * cav.kappa();
    const double k = mode.m_eff() * mode.omega_m() * mode.omega_m();
    auto n_of = [&](double x) {
        const double de = d.detuning() - cav.g0() * x;
        return cav.eta_c() * cav.kappa() * d.photon_flux() / (de * de + h * h);
    };
    auto f = [&](double x) { return k * x + hbar * cav.g0() * n_of(x); };
    const double x_max = std::abs(hbar * cav.g0() * cav.eta_c() * cav.kappa() * d.photon_flux() / (h * h) / k);
    const int n = 400000;
    std::vector<double> out;
    double prev = f(-0.01 * x_max);
    for (int i = 1; i <= n; ++i) {
        const double x = (-0.01 + 1.02 * i / n) * x_max;
        const double cur = f(x);
        if ((prev < 0) != (cur < 0)) {
            double lo = (-0.01 + 1.02 * (i - 1) / n) * x_max, hi = x;
            for (int it = 0; it < 200 && hi - lo > 1e-15 * x_max; ++it) {
                const double mid = 0.5 * (lo + hi);
                ((f(lo) < 0) == (f(mid) < 0) ? lo : hi) = mid;
            }
            out.push_back(0.5 * (lo + hi));
        }
        prev = cur;
    }
    return out;
}

double max_re(const std::array<std::complex<double>, 4>& ev)
{
    double r = -1e300;
    for (const auto& z : ev) r = std::max(r, z.real());
    return r;
}

}  // namespace

TEST_CASE("radiation force")
{
    const double omega = two_pi * constants::c / 1064e-9;
    const auto cav = CavityParams::wgm(omega, 25e-6, two_pi * 8e6, 0.5);
    CHECK(radiation_force(cav, 0.0) == 0.0);
    CHECK(rel_err(radiation_force(cav, 1.0), hbar * omega / 25e-6) < 1e-15);
    // momentum bookkeeping: a ring carrying P_circ feels 2 pi n P_circ / c outward
    const double n_index = 1.45, photons = 3.7e6;
    const double p_circ = circulating_power(cav, photons, n_index);
    CHECK(rel_err(radiation_force(cav, photons), two_pi * n_index * p_circ / constants::c) < 1e-14);
    CHECK(radiation_force(cav.with_g0(1e19), 5.0) < 0);
    CHECK(radiation_force(cav.with_g0(-1e19), 5.0) > 0);
}

TEST_CASE("trivial steady states")
{
    Bistable b;
    const auto none = steady_states(b.cav, b.mode, Drive::at_detuning(b.cav, 0.0, 1e6));
    REQUIRE(none.size() == 1);
    CHECK(none[0].x_bar == 0.0);
    CHECK(none[0].photons == 0.0);
    CHECK(none[0].stable());

    const auto free = b.cav.with_g0(0.0);
    const auto d = Drive::at_detuning(free, 1e-3, 3e7);
    const auto s = steady_states(free, b.mode, d);
    REQUIRE(s.size() == 1);
    CHECK(s[0].x_bar == 0.0);
    CHECK(rel_err(s[0].photons, OperatingPoint::from_drive(free, d).photons()) < 1e-14);
}

TEST_CASE("bistable toroid against a graphical intersection")
{
    Bistable b;
    int triples = 0;
    for (double dk = -4.0; dk <= 1.0; dk += 0.05) {
        const auto d = Drive::at_detuning(b.cav, 1e-3, dk * b.cav.kappa());
        const auto br = steady_states(b.cav, b.mode, d);
        const auto scan = scanned_roots(b.cav, b.mode, d);
        REQUIRE(br.size() == scan.size());
        for (std::size_t i = 0; i < br.size(); ++i)
            CHECK(std::abs(br[i].x_bar - scan[i]) <= 1e-9 * std::abs(scan[i]) + 1e-24);
        if (br.size() == 3) {
            ++triples;
            CHECK(br[1].stability == Stability::unstable);
            // the middle branch is a saddle: a purely real growing eigenvalue
            const auto ev = linearized_eigenvalues(br[1], b.cav, b.mode);
            CHECK(std::any_of(ev.begin(), ev.end(), [](const auto& z) { return z.real() > 0 && z.imag() == 0.0; }));
            for (const auto* outer : {&br[0], &br[2]}) {
                if (outer->detuning_eff < 0) {
                    CHECK(outer->stable());
                } else {
                    // blue of the shifted resonance only optical anti-damping remains
                    for (const auto& z : linearized_eigenvalues(*outer, b.cav, b.mode))
                        if (z.real() > 0) CHECK(z.imag() != 0.0);
                }
            }
        }
    }
    CHECK(triples > 3);
}

TEST_CASE("bistability threshold")
{
    Bistable b;
    const double s2 = bistability_threshold(b.cav, b.mode);
    CHECK(std::isinf(bistability_threshold(b.cav.with_g0(0.0), b.mode)));
    CHECK(rel_err(bistability_threshold(b.cav.with_kappa(2 * b.cav.kappa()), b.mode), 4 * s2) < 1e-14);

    // triple root at the threshold, at D = -sqrt(3) kappa/2
    const auto at = steady_states(b.cav, b.mode,
                                  flux_drive(b.cav, s2, -std::sqrt(3.0) * 0.5 * b.cav.kappa()));
    CHECK(std::any_of(at.begin(), at.end(), [](const auto& br) { return br.degenerate; }));

    auto max_count = [&](double factor) {
        std::size_t m = 0;
        for (double dk = -3.0; dk <= 0.5; dk += 0.002)
            m = std::max(m, steady_states(b.cav, b.mode, flux_drive(b.cav, factor * s2, dk * b.cav.kappa())).size());
        return m;
    };
    CHECK(max_count(1.1) == 3);
    CHECK(max_count(0.9) == 1);
}

TEST_CASE("branch residuals, parity and continuity")
{
    om::test::Draw d(31);
    int checked = 0;
    for (int i = 0; i < 300; ++i) {
        const double w = two_pi * d.log_uniform(1e6, 1e8);
        const auto cav = CavityParams::wgm(two_pi * d.uniform(1.9e14, 4e14), d.uniform(10e-6, 60e-6),
                                           w * d.log_uniform(0.05, 20), d.uniform(0.05, 1.0));
        const MechMode mode(w, w / d.log_uniform(10, 1e4), d.log_uniform(1e-13, 1e-9), 300);
        const double p = bistability_threshold(cav, mode) * d.log_uniform(0.01, 30) * hbar * cav.omega_c();
        const auto drive = Drive::at_detuning(cav, p, cav.kappa() * d.uniform(-6, 2));
        const auto br = steady_states(cav, mode, drive);
        const double h = 0.5 * cav.kappa();
        for (const auto& b : br) {
            const double de = drive.detuning() - cav.g0() * b.x_bar;
            const double n = cav.eta_c() * cav.kappa() * drive.photon_flux() / (de * de + h * h);
            CHECK(rel_err(b.photons, n) < 1e-9);
            CHECK(rel_err(mode.m_eff() * mode.omega_m() * mode.omega_m() * b.x_bar,
                          -hbar * cav.g0() * b.photons) < 1e-9);
            CHECK(b.photons >= 0);
        }
        const bool degenerate = std::any_of(br.begin(), br.end(), [](const auto& b) { return b.degenerate; });
        if (!degenerate) CHECK(br.size() % 2 == 1);

        const auto nudged = steady_states(cav, mode, Drive::at_detuning(cav, p * (1 + 1e-7), drive.detuning()));
        if (nudged.size() == br.size() && !degenerate) {
            for (std::size_t k = 0; k < br.size(); ++k)
                CHECK(std::abs(nudged[k].x_bar - br[k].x_bar) < 1e-4 * std::abs(br[k].x_bar));
            ++checked;
        }
    }
    CHECK(checked > 250);
}

TEST_CASE("stability agrees with direct integration")
{
    om::test::Draw d(32);
    const double w = two_pi * 50e6;
    const MechMode base(w, w / 50, 10e-12, 300);
    int done = 0, stable_seen = 0, unstable_seen = 0;
    for (int attempt = 0; attempt < 400 && done < 20; ++attempt) {
        const auto cav = CavityParams::wgm(two_pi * 2.8e14, 30e-6, w * d.uniform(0.3, 3), d.uniform(0.2, 1.0));
        const MechMode mode = base.with_gamma_m(w / d.uniform(20, 200));
        const double p = bistability_threshold(cav, mode) * hbar * cav.omega_c() * d.log_uniform(0.1, 10);
        const auto drive = Drive::at_detuning(cav, p, cav.kappa() * d.uniform(-3, 2));
        const auto br = steady_states(cav, mode, drive);
        const auto& b = br[static_cast<std::size_t>(d.integer(0, static_cast<int>(br.size()) - 1))];
        if (b.degenerate) continue;
        const double rate = max_re(linearized_eigenvalues(b, cav, mode));
        // skip nearly neutral points where a finite run cannot decide
        if (std::abs(rate) < 2e-3 * w) continue;

        const double h = 0.5 * cav.kappa();
        const double dx = 1e-6 * cav.kappa() / std::abs(cav.g0());
        TrajectoryState s0{std::sqrt(cav.eta_c() * cav.kappa() * drive.photon_flux()) /
                               std::complex<double>(h, -b.detuning_eff),
                           b.x_bar + dx, 0.0, 0.0};
        const double t_end = 6.0 / std::abs(rate);
        const double period = two_pi / w;
        std::vector<double> times;
        for (int i = 0; i < 64; ++i) times.push_back(t_end - period + period * i / 63.0);
        const auto tr = integrate(cav, mode, drive, s0, t_end, times);
        double dev = 0.0;
        for (const auto& s : tr.samples) dev = std::max(dev, std::abs(s.x - b.x_bar));
        const bool decayed = dev < 0.2 * dx;
        CHECK(decayed == b.stable());
        CHECK((dev > 5 * dx) == !b.stable());
        (b.stable() ? stable_seen : unstable_seen)++;
        ++done;
    }
    CHECK(done == 20);
    CHECK(stable_seen > 0);
    CHECK(unstable_seen > 0);
}
