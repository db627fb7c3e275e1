#include "optomech/statics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Dense>
#include <unsupported/Eigen/Polynomials>

#include "optomech/errors.hpp"

namespace om {

using constants::hbar;

const char* to_string(Stability s)
{
    switch (s) {
    case Stability::stable: return "stable";
    case Stability::unstable: return "unstable";
    case Stability::marginal: return "marginal";
    }
    return "?";
}

OperatingPoint SteadyStateBranch::operating_point() const
{
    return OperatingPoint::from_photons(photons, x_bar, detuning_eff);
}

double radiation_force(const CavityParams& cav, double photons)
{
    detail::require(photons >= 0, "radiation_force: photon number must be >= 0");
    return -hbar * cav.g0() * photons;
}

namespace {

// t^3 - 2 D t^2 + (D^2 + H^2) t + K in units of kappa, where t = g0 x_bar.
struct ShiftCubic {
    double D, H2, K;
    double operator()(double t) const { return ((t - 2 * D) * t + D * D + H2) * t + K; }
    double deriv(double t) const { return (3 * t - 4 * D) * t + D * D + H2; }
    double scale(double t) const
    {
        const double a = std::abs(t);
        return a * a * a + 2 * std::abs(D) * a * a + (D * D + H2) * a + std::abs(K);
    }
};

double polish(const ShiftCubic& p, double t)
{
    for (int it = 0; it < 60; ++it) {
        const double d = p.deriv(t);
        if (d == 0.0) break;
        const double step = p(t) / d;
        t -= step;
        if (std::abs(step) <= 1e-16 * std::max(std::abs(t), 1e-300)) break;
    }
    return t;
}

}  // namespace

std::vector<SteadyStateBranch> steady_states(const CavityParams& cav, const MechMode& mode,
                                             const Drive& drive)
{
    const double kappa = cav.kappa();
    const double h = 0.5 * kappa;
    const double D = drive.detuning();
    const double flux = drive.photon_flux();
    const double m = mode.m_eff();
    const double w2 = mode.omega_m() * mode.omega_m();
    const double g0 = cav.g0();

    auto make_branch = [&](double t, bool degenerate) {
        const double d_eff = D - t;
        const double n = cav.eta_c() * kappa * flux / (d_eff * d_eff + h * h);
        const double x = (g0 == 0.0) ? 0.0 : -hbar * g0 * n / (m * w2);
        SteadyStateBranch b{x, n, D - g0 * x, Stability::stable, degenerate};
        b.stability = classify_stability(b, cav, mode);
        return b;
    };

    const double K = hbar * g0 * g0 * cav.eta_c() * kappa * flux / (m * w2);
    if (K == 0.0) return {make_branch(0.0, false)};

    const ShiftCubic p{D / kappa, 0.25, K / (kappa * kappa * kappa)};
    Eigen::Vector4d coeffs(p.K, p.D * p.D + p.H2, -2 * p.D, 1.0);
    Eigen::PolynomialSolver<double, 3> solver;
    solver.compute(coeffs);

    std::vector<double> roots;
    for (const auto& z : solver.roots()) {
        if (std::abs(z.imag()) > 1e-4 * (1.0 + std::abs(z.real()))) continue;
        const double t = polish(p, z.real());
        if (std::abs(p(t)) <= 1e-10 * p.scale(t)) roots.push_back(t);
    }
    if (roots.empty()) {
        // a real cubic always has a real root; fall back to the least complex one
        const auto& rs = solver.roots();
        auto best = std::min_element(rs.data(), rs.data() + 3, [](const auto& a, const auto& b) {
            return std::abs(a.imag()) < std::abs(b.imag());
        });
        roots.push_back(polish(p, best->real()));
    }
    std::sort(roots.begin(), roots.end());

    std::vector<SteadyStateBranch> out;
    std::vector<bool> merged(roots.size(), false);
    for (std::size_t i = 0; i < roots.size(); ++i) {
        if (merged[i]) continue;
        bool degenerate = false;
        for (std::size_t j = i + 1; j < roots.size(); ++j) {
            if (std::abs(roots[j] - roots[i]) <= 1e-5 * (std::abs(p.D) + 1.0)) {
                merged[j] = true;
                degenerate = true;
            }
        }
        out.push_back(make_branch(roots[i] * kappa, degenerate));
    }
    std::sort(out.begin(), out.end(),
              [](const auto& a, const auto& b) { return a.x_bar < b.x_bar; });
    return out;
}

double bistability_threshold(const CavityParams& cav, const MechMode& mode)
{
    if (cav.g0() == 0.0) return std::numeric_limits<double>::infinity();
    const double w = mode.omega_m();
    const double k = cav.kappa();
    return std::sqrt(3.0) / 9.0 * w * w * mode.m_eff() * k * k /
           (cav.eta_c() * hbar * cav.g0() * cav.g0());
}

std::array<std::complex<double>, 4> linearized_eigenvalues(const SteadyStateBranch& branch,
                                                           const CavityParams& cav,
                                                           const MechMode& mode)
{
    const double h = 0.5 * cav.kappa();
    const double d = branch.detuning_eff;
    const double a = std::sqrt(branch.photons);
    const double w = mode.omega_m();
    // field quadratures (u, w) unscaled; displacement and velocity scaled by
    // 1/(2 x_zpf) so that both couplings read G = 2 g0 a x_zpf
    const double G = 2.0 * cav.g0() * a * x_zpf(mode);
    Eigen::Matrix4d A;
    A << -h, -d, 0, 0,
          d, -h, -G, 0,
          0, 0, 0, w,
         -G, 0, -w, -mode.gamma_m();
    Eigen::EigenSolver<Eigen::Matrix4d> es(A, false);
    if (es.info() != Eigen::Success)
        throw NumericalError("linearized_eigenvalues: eigenvalue iteration failed");
    std::array<std::complex<double>, 4> ev;
    for (int i = 0; i < 4; ++i) ev[i] = es.eigenvalues()(i);
    return ev;
}

Stability classify_stability(const SteadyStateBranch& branch, const CavityParams& cav,
                             const MechMode& mode)
{
    const auto ev = linearized_eigenvalues(branch, cav, mode);
    double re_max = -std::numeric_limits<double>::infinity();
    for (const auto& z : ev) re_max = std::max(re_max, z.real());
    const double scale =
        std::max({cav.kappa(), mode.omega_m(), std::abs(branch.detuning_eff)});
    if (std::abs(re_max) <= 1e-9 * scale) return Stability::marginal;
    return re_max < 0 ? Stability::stable : Stability::unstable;
}

}  // namespace om
