#include "optomech/timedomain.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "optomech/errors.hpp"

namespace om {

using constants::hbar;
using detail::require;
using cd = std::complex<double>;

namespace {

using State = std::array<double, 4>;

// Dormand-Prince 5(4) tableau
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192, a75 = -2187.0 / 6784,
                 a76 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;
// continuous extension (Hairer, Norsett and Wanner)
constexpr double d1 = -12715105075.0 / 11282082432, d3 = 87487479700.0 / 32700410799,
                 d4 = -10690763975.0 / 1880347072, d5 = 701980252875.0 / 199316789632,
                 d6 = -1453857185.0 / 822651844, d7 = 69997945.0 / 29380423;

// Equations in scaled variables: a = A (y0 + i y1), x = X y2, v = X Omega_m y3.
struct Rhs {
    double detuning, h, g0, drive_re, drive_im;  // drive already divided by A
    double omega, gamma, force;                  // force: hbar g0 A^2 / (m X Omega)
    double g0x;                                  // g0 X

    State operator()(const State& y) const
    {
        const double phase = detuning - g0x * y[2];
        const double re = y[0], im = y[1];
        return State{-h * re - phase * im + drive_re, phase * re - h * im + drive_im,
                     omega * y[3],
                     -gamma * y[3] - omega * y[2] - force * (re * re + im * im)};
    }
};

State axpy(const State& y, double h, std::initializer_list<std::pair<double, const State*>> terms)
{
    State out = y;
    for (const auto& [c, k] : terms)
        for (int i = 0; i < 4; ++i) out[i] += h * c * (*k)[i];
    return out;
}

}  // namespace

Trajectory integrate(const CavityParams& cav, const MechMode& mode, const Drive& drive,
                     const TrajectoryState& initial, double t_end,
                     const std::vector<double>& sample_times, const IntegratorOptions& opts)
{
    require(opts.tol >= 1e-12 && opts.tol <= 1e-4, "integrate: tol must lie in [1e-12, 1e-4]");
    require(std::isfinite(t_end) && t_end >= initial.t, "integrate: t_end must not precede t0");
    require(std::isfinite(std::abs(initial.a)) && std::isfinite(initial.x) &&
                std::isfinite(initial.v),
            "integrate: initial state must be finite");
    for (std::size_t i = 0; i < sample_times.size(); ++i) {
        require(sample_times[i] >= initial.t && sample_times[i] <= t_end,
                "integrate: sample times must lie in [t0, t_end]");
        require(i == 0 || sample_times[i] >= sample_times[i - 1],
                "integrate: sample times must be non-decreasing");
    }

    const double kappa = cav.kappa();
    const double h_half = 0.5 * kappa;
    const double w = mode.omega_m();
    const double m = mode.m_eff();
    const cd s_in = std::polar(std::sqrt(drive.photon_flux()), opts.input_phase);
    const cd drive_term = std::sqrt(cav.eta_c() * kappa) * s_in;

    // scales: Lorentzian field amplitude and a displacement set by the
    // static radiation-pressure shift, the initial state, or the caller
    const double a_scale = std::max({std::abs(drive_term) / h_half, std::abs(initial.a), 1.0});
    double x_scale = opts.x_scale;
    if (!(x_scale > 0)) {
        x_scale = std::max({hbar * std::abs(cav.g0()) * a_scale * a_scale / (m * w * w),
                            std::abs(initial.x), std::abs(initial.v) / w, x_zpf(mode)});
    }
    const Rhs f{drive.detuning(),
                h_half,
                cav.g0(),
                drive_term.real() / a_scale,
                drive_term.imag() / a_scale,
                w,
                mode.gamma_m(),
                hbar * cav.g0() * a_scale * a_scale / (m * x_scale * w),
                cav.g0() * x_scale};

    auto to_state = [&](const State& y, double t) {
        return TrajectoryState{a_scale * cd(y[0], y[1]), x_scale * y[2], x_scale * w * y[3], t};
    };

    Trajectory out;
    out.samples.reserve(sample_times.size());
    std::size_t next = 0;

    State y{initial.a.real() / a_scale, initial.a.imag() / a_scale, initial.x / x_scale,
            initial.v / (x_scale * w)};
    double t = initial.t;
    while (next < sample_times.size() && sample_times[next] <= t) out.samples.push_back(to_state(y, t)), ++next;
    if (t_end == t) return out;

    const double rtol = opts.tol, atol = opts.tol;
    // initial step from the fastest rate in the problem
    const double rate = std::max({kappa, w, std::abs(drive.detuning()), std::abs(f.g0x) * 2.0});
    double h = 0.01 / rate;
    double facold = 1e-4;
    const double beta = 0.04, expo1 = 0.2 - beta * 0.75, safe = 0.9;
    bool last_rejected = false;

    State k1 = f(y);
    while (t < t_end) {
        if (out.accepted + out.rejected >= opts.max_steps)
            throw NumericalError("integrate: step budget exhausted at t = " + std::to_string(t));
        if (h < 1e-14 * std::max(std::abs(t), 1.0 / rate))
            throw NumericalError("integrate: step size underflow (h = " + std::to_string(h) +
                                 " s, kappa h = " + std::to_string(kappa * h) + ", t = " +
                                 std::to_string(t) + " s); the problem looks stiff");
        if (t + h > t_end) h = t_end - t;

        const State k2 = f(axpy(y, h, {{a21, &k1}}));
        const State k3 = f(axpy(y, h, {{a31, &k1}, {a32, &k2}}));
        const State k4 = f(axpy(y, h, {{a41, &k1}, {a42, &k2}, {a43, &k3}}));
        const State k5 = f(axpy(y, h, {{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}}));
        const State k6 = f(axpy(y, h, {{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}}));
        const State y1 = axpy(y, h, {{a71, &k1}, {a73, &k3}, {a74, &k4}, {a75, &k5}, {a76, &k6}});
        const State k7 = f(y1);

        double err = 0.0;
        for (int i = 0; i < 4; ++i) {
            const double e = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] +
                                  e7 * k7[i]);
            const double sk = atol + rtol * std::max(std::abs(y[i]), std::abs(y1[i]));
            err += (e / sk) * (e / sk);
        }
        err = std::sqrt(err / 4.0);
        if (!std::isfinite(err)) {
            ++out.rejected;
            h *= 0.1;
            last_rejected = true;
            continue;
        }

        const double fac11 = std::pow(err, expo1);
        if (err <= 1.0) {
            double fac = fac11 / std::pow(facold, beta);
            fac = std::clamp(fac / safe, 0.1, 5.0);
            facold = std::max(err, 1e-4);
            const double t1 = t + h;

            // continuous output for the samples inside (t, t1]
            if (next < sample_times.size() && sample_times[next] <= t1) {
                State r2, r3, r4, r5;
                for (int i = 0; i < 4; ++i) {
                    const double ydiff = y1[i] - y[i];
                    const double bspl = h * k1[i] - ydiff;
                    r2[i] = ydiff;
                    r3[i] = bspl;
                    r4[i] = ydiff - h * k7[i] - bspl;
                    r5[i] = h * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] + d6 * k6[i] +
                                 d7 * k7[i]);
                }
                while (next < sample_times.size() && sample_times[next] <= t1) {
                    const double th = (sample_times[next] - t) / h;
                    const double th1 = 1.0 - th;
                    State ys;
                    for (int i = 0; i < 4; ++i)
                        ys[i] = y[i] + th * (r2[i] + th1 * (r3[i] + th * (r4[i] + th1 * r5[i])));
                    out.samples.push_back(to_state(ys, sample_times[next]));
                    ++next;
                }
            }

            y = y1;
            k1 = k7;  // first-same-as-last
            t = (t1 >= t_end || h == t_end - t) ? t_end : t1;
            ++out.accepted;
            double h_new = h / fac;
            if (last_rejected) h_new = std::min(h_new, h);
            last_rejected = false;
            h = h_new;
        } else {
            ++out.rejected;
            h /= std::min(5.0, fac11 / safe);
            last_rejected = true;
        }
    }
    while (next < sample_times.size()) out.samples.push_back(to_state(y, t_end)), ++next;
    return out;
}

Trajectory integrate(const CavityParams& cav, const MechMode& mode, const Drive& drive,
                     const TrajectoryState& initial, double t_end, std::size_t n_samples,
                     const IntegratorOptions& opts)
{
    require(n_samples >= 2, "integrate: need at least two samples");
    require(t_end > initial.t, "integrate: t_end must exceed t0");
    return integrate(cav, mode, drive, initial, t_end, linspace(initial.t, t_end, n_samples), opts);
}

std::vector<double> period_rms(const Trajectory& tr, double x_ref, std::size_t per_period)
{
    require(per_period >= 4, "period_rms: need at least 4 samples per period");
    std::vector<double> out;
    const auto& s = tr.samples;
    for (std::size_t start = 0; start + per_period <= s.size(); start += per_period) {
        double acc = 0.0;
        for (std::size_t i = start; i < start + per_period; ++i) acc += (s[i].x - x_ref) * (s[i].x - x_ref);
        out.push_back(std::sqrt(acc / static_cast<double>(per_period)));
    }
    return out;
}

double envelope_decay_rate(const Trajectory& tr, double x_ref, double period,
                           std::size_t per_period, std::size_t skip_periods)
{
    const auto rms = period_rms(tr, x_ref, per_period);
    require(rms.size() > skip_periods + 2, "envelope_decay_rate: too few periods");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    double n = 0;
    for (std::size_t i = skip_periods; i < rms.size(); ++i) {
        require(rms[i] > 0, "envelope_decay_rate: zero amplitude");
        const double t = period * static_cast<double>(i);
        const double l = std::log(rms[i]);
        sx += t;
        sy += l;
        sxx += t * t;
        sxy += t * l;
        n += 1;
    }
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    return -slope;
}

FixedDetuningPoint fixed_detuning_point(const CavityParams& cav, const MechMode& mode,
                                        double p_in, double detuning_eff)
{
    const double h = 0.5 * cav.kappa();
    // iterate once on omega_l, which enters only through the photon energy
    double shift = 0.0;
    Drive d(p_in, cav.omega_c() + detuning_eff, detuning_eff);
    double n = 0.0, x = 0.0;
    for (int it = 0; it < 3; ++it) {
        n = cav.eta_c() * cav.kappa() * d.photon_flux() / (detuning_eff * detuning_eff + h * h);
        x = -hbar * cav.g0() * n / (mode.m_eff() * mode.omega_m() * mode.omega_m());
        shift = cav.g0() * x;
        d = Drive(p_in, cav.omega_c() + detuning_eff + shift, detuning_eff + shift);
    }
    const cd a = std::sqrt(cav.eta_c() * cav.kappa() * d.photon_flux()) / cd(h, -detuning_eff);
    return FixedDetuningPoint{d, std::norm(a), x, a};
}

GrowthTest growth_test(const CavityParams& cav, const MechMode& mode, double p_in,
                       double detuning_eff, double t_end, double dx0,
                       const IntegratorOptions& opts)
{
    const auto pt = fixed_detuning_point(cav, mode, p_in, detuning_eff);
    const std::size_t per_period = 32;
    const double period = constants::two_pi / mode.omega_m();
    const auto n_periods = static_cast<std::size_t>(std::floor(t_end / period));
    require(n_periods >= 10, "growth_test: run shorter than ten mechanical periods");
    std::vector<double> times(n_periods * per_period);
    for (std::size_t i = 0; i < times.size(); ++i)
        times[i] = period * static_cast<double>(i) / static_cast<double>(per_period);
    IntegratorOptions o = opts;
    if (!(o.x_scale > 0)) o.x_scale = std::max(std::abs(dx0), x_zpf(mode));
    const auto tr = integrate(cav, mode, pt.drive, TrajectoryState{pt.a_bar, pt.x_bar + dx0, 0.0, 0.0},
                              times.back(), times, o);
    const auto rms = period_rms(tr, pt.x_bar, per_period);
    auto window_mean = [&](double lo, double hi) {
        const auto i0 = static_cast<std::size_t>(lo * static_cast<double>(rms.size()));
        const auto i1 = std::max(i0 + 1, static_cast<std::size_t>(hi * static_cast<double>(rms.size())));
        double acc = 0.0;
        for (std::size_t i = i0; i < i1; ++i) acc += rms[i];
        return acc / static_cast<double>(i1 - i0);
    };
    const double mid = window_mean(0.4, 0.6);
    const double last = window_mean(0.8, 1.0);
    return GrowthTest{last > mid, mid, last};
}

ThresholdSearch threshold_search(const CavityParams& cav, const MechMode& mode,
                                 double detuning_eff, double p_lo, double p_hi, double rel_tol,
                                 const IntegratorOptions& opts)
{
    require(detuning_eff > 0, "threshold_search: needs blue detuning");
    require(p_lo > 0 && p_hi > p_lo, "threshold_search: invalid power range");
    require(rel_tol > 0, "threshold_search: tolerance must be positive");
    require(cav.g0() != 0.0, "threshold_search: g0 must be non-zero");
    const double t_end = 10.0 / mode.gamma_m();
    const double dx0 = 1e-4 * cav.kappa() / std::abs(cav.g0());
    auto grows = [&](double p) {
        return growth_test(cav, mode, p, detuning_eff, t_end, dx0, opts).growing;
    };
    if (grows(p_lo) || !grows(p_hi))
        throw NumericalError("threshold_search: no change from decay to growth between " +
                             std::to_string(p_lo) + " W and " + std::to_string(p_hi) + " W");
    int it = 0;
    while (p_hi / p_lo - 1.0 > rel_tol) {
        const double mid = std::sqrt(p_lo * p_hi);
        (grows(mid) ? p_hi : p_lo) = mid;
        ++it;
    }
    return ThresholdSearch{std::sqrt(p_lo * p_hi), p_lo, p_hi, it};
}

}  // namespace om
