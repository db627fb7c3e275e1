#include "optomech/cli.hpp"

#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <optional>
#include <ostream>

#include <CLI11.hpp>

#include "optomech/anchors.hpp"
#include "optomech/cooling.hpp"
#include "optomech/dynba.hpp"
#include "optomech/errors.hpp"
#include "optomech/mechanics.hpp"
#include "optomech/noisemeter.hpp"
#include "optomech/statics.hpp"
#include "optomech/timedomain.hpp"

namespace om::cli {

namespace {

using constants::two_pi;

std::string format_number(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string csv_field(const std::string& s)
{
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) {
        if (c == '"') q += '"';
        q += c;
    }
    return q + '"';
}

// Default sweep axis of each subcommand; empty when it takes none.
std::string default_axis(const std::string& sub)
{
    if (sub == "steady" || sub == "sweep-detuning" || sub == "cooling-limit") return "detuning_hz";
    if (sub == "spectrum") return "fourier_hz";
    if (sub == "omit") return "offset_hz";
    if (sub == "sphere-modes") return "radius_m";
    if (sub == "tls-q") return "temperature_k";
    return {};
}

void set_parameter(RunConfig& cfg, const std::string& name, double v)
{
    if (name == "detuning_hz") cfg.drive.detuning_hz = v;
    else if (name == "p_in_w") cfg.drive.p_in_w = v;
    else if (name == "kappa_hz") cfg.cavity.kappa_hz = v;
    else if (name == "temperature_k") cfg.mode.t_bath_k = v;
    else if (name == "radius_m") cfg.cavity.radius_m = v;
    else throw ValidationError("axis '" + name + "' is not a model parameter");
}

// Values of a parameter sweep, or the single configured point.
struct ParameterSweep {
    std::string axis;  // empty when not swept
    std::vector<double> values;
};

ParameterSweep parameter_sweep(const RunConfig& cfg, std::initializer_list<const char*> allowed)
{
    if (!cfg.sweep) return {{}, {0.0}};
    const auto& name = cfg.sweep->name;
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return name == a; }))
        throw ValidationError(cfg.subcommand + ": cannot sweep '" + name + "'");
    return {name, axis_values(*cfg.sweep)};
}

RunConfig at_point(const RunConfig& cfg, const ParameterSweep& sw, std::size_t i)
{
    RunConfig c = cfg;
    if (!sw.axis.empty()) set_parameter(c, sw.axis, sw.values[i]);
    return c;
}

// Grid axis (Fourier or probe offset) with a fallback range.
std::vector<double> grid_axis(const RunConfig& cfg, const std::string& name, double lo, double hi,
                              int points)
{
    if (cfg.sweep) {
        if (cfg.sweep->name != name)
            throw ValidationError(cfg.subcommand + ": sweep axis must be '" + name + "'");
        return axis_values(*cfg.sweep);
    }
    return linspace(lo, hi, static_cast<std::size_t>(points));
}

struct Model {
    CavityParams cav;
    MechMode mode;
    Drive drive;
};

Model model_of(const RunConfig& c)
{
    return {make_cavity(c.cavity), make_mode(c.mode), make_drive(c.cavity, c.drive)};
}

Table run_steady(const RunConfig& cfg)
{
    const auto sw = parameter_sweep(cfg, {"detuning_hz", "p_in_w", "kappa_hz"});
    Table t;
    if (!sw.axis.empty() && sw.axis != "detuning_hz") t.columns.push_back(sw.axis);
    for (const char* c : {"detuning_hz", "x_bar_m", "photons", "stable"}) t.columns.emplace_back(c);

    const auto per_point = parallel_map(sw.values.size(), [&](std::size_t i) {
        const auto c = at_point(cfg, sw, i);
        const auto m = model_of(c);
        std::vector<std::vector<Cell>> rows;
        for (const auto& b : steady_states(m.cav, m.mode, m.drive)) {
            std::vector<Cell> row;
            if (t.columns.size() == 5) row.emplace_back(sw.values[i]);
            row.emplace_back(c.drive.detuning_hz);
            row.emplace_back(b.x_bar);
            row.emplace_back(b.photons);
            row.emplace_back(std::string(to_string(b.stability)));
            rows.push_back(std::move(row));
        }
        return rows;
    });
    for (const auto& rows : per_point)
        for (const auto& r : rows) t.rows.push_back(r);
    return t;
}

Table run_sweep_detuning(const RunConfig& cfg)
{
    RunConfig c = cfg;
    if (!c.sweep) c.sweep = SweepAxis{"detuning_hz", -3 * cfg.cavity.kappa_hz, 3 * cfg.cavity.kappa_hz,
                                      121, AxisScale::lin};
    if (c.sweep->name != "detuning_hz")
        throw ValidationError("sweep-detuning: sweep axis must be 'detuning_hz'");
    const auto det = axis_values(*c.sweep);
    Table t{{"detuning_hz", "gamma_eff_hz", "omega_eff_hz", "t_mode_k"}, {}};
    t.rows = parallel_map(det.size(), [&](std::size_t i) {
        RunConfig ci = c;
        ci.drive.detuning_hz = det[i];
        const auto m = model_of(ci);
        const auto op = OperatingPoint::from_drive(m.cav, m.drive);
        const auto eo = effective_oscillator(m.cav, m.mode, op);
        // regenerative points have no steady mode temperature
        const double tm = eo.unstable() ? std::numeric_limits<double>::infinity()
                                        : mode_temperature(m.mode, eo.gamma_eff);
        return std::vector<Cell>{det[i], rad_to_hz(eo.gamma_eff), rad_to_hz(eo.omega_eff), tm};
    });
    return t;
}

Table run_spectrum(const RunConfig& cfg, const SubcommandOptions& o)
{
    const double fm = cfg.mode.f_m_hz;
    const auto grid_hz = grid_axis(cfg, "fourier_hz", 0.5 * fm, 1.5 * fm, 401);
    const auto m = model_of(cfg);
    const auto op = OperatingPoint::from_drive(m.cav, m.drive);
    // a regenerating oscillator has no stationary spectrum
    const auto eo = effective_oscillator(m.cav, m.mode, op);
    if (eo.unstable())
        throw InstabilityError("spectrum: Gamma_eff/2pi = " + format_number(rad_to_hz(eo.gamma_eff)) +
                               " Hz at this operating point; no stationary spectrum");
    std::vector<double> grid;
    for (double f : grid_hz) grid.push_back(hz_to_rad(f));

    const auto nb = noise_budget(m.cav, op, {m.mode}, grid);
    std::vector<double> ba(grid.size()), th(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double chi2 = std::norm(effective_susceptibility(m.cav, m.mode, op, grid[i]));
        ba[i] = chi2 * nb.backaction_force.values()[i];
        th[i] = chi2 * nb.thermal_force.values()[i];
    }
    std::vector<Spectrum> cols{nb.imprecision,
                               Spectrum(grid, ba, SpectrumUnit::m2_per_hz),
                               Spectrum(grid, th, SpectrumUnit::m2_per_hz),
                               nb.total_displacement};
    if (o.single_sided)
        for (auto& s : cols) s = s.single_sided();

    Table t{{"omega_hz", "imprecision_m2_per_hz", "backaction_m2_per_hz", "thermal_m2_per_hz",
             "total_m2_per_hz"},
            {}};
    for (std::size_t i = 0; i < cols[0].size(); ++i) {
        std::vector<Cell> row{rad_to_hz(cols[0].grid()[i])};
        for (const auto& s : cols) row.emplace_back(s.values()[i]);
        t.rows.push_back(std::move(row));
    }
    return t;
}

Table run_cooling_limit(const RunConfig& cfg, const SubcommandOptions& o)
{
    const auto sw = parameter_sweep(cfg, {"detuning_hz", "p_in_w", "kappa_hz", "temperature_k"});
    Table t{{"detuning_hz", "p_in_w", "kappa_hz", "t_bath_k", "a_minus_per_s", "a_plus_per_s",
             "gamma_eff_hz", "n_min_quantum", "n_fn", "n_final", "t_mode_k", "heating"},
            {}};
    t.rows = parallel_map(sw.values.size(), [&](std::size_t i) {
        const auto c = at_point(cfg, sw, i);
        const auto m = model_of(c);
        const auto r = final_occupancy(m.cav, m.mode, OperatingPoint::from_drive(m.cav, m.drive),
                                       o.s_omega_omega);
        return std::vector<Cell>{c.drive.detuning_hz, c.drive.p_in_w, c.cavity.kappa_hz,
                                 c.mode.t_bath_k,     r.a_minus,      r.a_plus,
                                 rad_to_hz(r.gamma_eff), r.n_min_quantum, r.n_fn,
                                 r.n_final,           r.t_mode,       r.heating ? 1.0 : 0.0};
    });
    return t;
}

Table run_omit(const RunConfig& cfg)
{
    const double fm = cfg.mode.f_m_hz, k = cfg.cavity.kappa_hz;
    const auto off = grid_axis(cfg, "offset_hz", fm - k, fm + k, 801);
    const auto m = model_of(cfg);
    const auto op = OperatingPoint::from_drive(m.cav, m.drive);
    Table t{{"offset_hz", "transmission", "transmission_eit"}, {}};
    t.rows = parallel_map(off.size(), [&](std::size_t i) {
        const double w = hz_to_rad(off[i]);
        return std::vector<Cell>{off[i], omit_transmission(m.cav, m.mode, op, w),
                                 omit_transmission_eit(m.cav, m.mode, op, w)};
    });
    return t;
}

Table run_sphere_modes(const RunConfig& cfg, const SubcommandOptions& o)
{
    if (o.material != "silica") throw ValidationError("sphere-modes: unknown material '" + o.material + "'");
    detail::require(o.radius_um > 0 && std::isfinite(o.radius_um),
                    "sphere-modes: radius must be positive");
    const auto mat = fused_silica();
    std::vector<double> radii{o.radius_um * 1e-6};
    if (cfg.sweep) {
        if (cfg.sweep->name != "radius_m")
            throw ValidationError("sphere-modes: sweep axis must be 'radius_m'");
        radii = axis_values(*cfg.sweep);
        detail::require(radii.front() > 0, "sphere-modes: radius must be positive");
    }
    Table t{{"radius_m", "k_root", "f_hz", "m_eff_kg"}, {}};
    t.rows = parallel_map(radii.size(), [&](std::size_t i) {
        const auto s = sphere_fundamental(mat, radii[i]);
        return std::vector<Cell>{radii[i], s.k_root, rad_to_hz(s.omega), s.m_eff};
    });
    return t;
}

Table run_tls_q(const RunConfig& cfg, const SubcommandOptions& o)
{
    detail::require(o.tls_f_hz > 0, "tls-q: frequency must be positive");
    RunConfig c = cfg;
    if (!c.sweep) c.sweep = SweepAxis{"temperature_k", 5.0, 300.0, 60, AxisScale::log};
    if (c.sweep->name != "temperature_k") throw ValidationError("tls-q: sweep axis must be 'temperature_k'");
    const auto temps = axis_values(*c.sweep);
    detail::require(temps.front() > 0, "tls-q: temperatures must be positive");
    const auto p = tls_silica();
    const double w = hz_to_rad(o.tls_f_hz);
    Table t{{"temperature_k", "q_tls", "inverse_q", "relative_shift"}, {}};
    t.rows = parallel_map(temps.size(), [&](std::size_t i) {
        const double inv = tls_inverse_q(p, temps[i], w);
        return std::vector<Cell>{temps[i], tls_quality_factor(p, temps[i], w), inv,
                                 tls_frequency_shift(p, temps[i], w)};
    });
    return t;
}

Table run_timedomain(const RunConfig& cfg, const SubcommandOptions& o)
{
    if (cfg.sweep) throw ValidationError("timedomain: takes no sweep axis");
    detail::require(o.samples >= 2, "timedomain: need at least 2 samples");
    detail::require(o.tol > 0 && o.tol < 1, "timedomain: tolerance must lie in (0, 1)");
    const auto m = model_of(cfg);
    const double period = two_pi / m.mode.omega_m();
    const double t_end = o.t_end > 0 ? o.t_end : 20.0 * period;
    detail::require(std::isfinite(t_end), "timedomain: run length must be finite");

    // start on the first stable branch (or the first branch) plus the kick
    const auto branches = steady_states(m.cav, m.mode, m.drive);
    TrajectoryState init{{0.0, 0.0}, 0.0, 0.0, 0.0};
    if (!branches.empty()) {
        auto it = std::find_if(branches.begin(), branches.end(),
                               [](const SteadyStateBranch& b) { return b.stable(); });
        const auto& b = it == branches.end() ? branches.front() : *it;
        const double h = 0.5 * m.cav.kappa();
        init.a = std::sqrt(m.cav.eta_c() * m.cav.kappa() * m.drive.photon_flux()) /
                 std::complex<double>(h, -b.detuning_eff);
        init.x = b.x_bar;
    }
    init.x += o.kick_m;
    IntegratorOptions io;
    io.tol = o.tol;
    const auto tr = integrate(m.cav, m.mode, m.drive, init, t_end,
                              static_cast<std::size_t>(o.samples), io);
    Table t{{"t_s", "re_a", "im_a", "x_m", "v_mps"}, {}};
    for (const auto& s : tr.samples)
        t.rows.push_back({s.t, s.a.real(), s.a.imag(), s.x, s.v});
    return t;
}

Table run_reproduce(const SubcommandOptions& o, bool* anchors_ok)
{
    std::vector<const Anchor*> chosen;
    for (const auto& a : anchor_registry())
        if (o.anchor == "all" || o.anchor == a.name) chosen.push_back(&a);
    if (chosen.empty()) throw ValidationError("reproduce: unknown anchor '" + o.anchor + "'");
    const auto results = parallel_map(chosen.size(), [&](std::size_t i) { return evaluate(*chosen[i]); });
    Table t{{"anchor", "computed", "reference", "tolerance", "tolerance_kind", "unit", "status"}, {}};
    bool all = true;
    for (const auto& r : results) {
        all = all && r.passed;
        t.rows.push_back({r.name, r.computed, r.reference, r.tolerance,
                          std::string(r.relative ? "relative" : "absolute"), r.unit,
                          std::string(r.passed ? "pass" : "FAIL")});
    }
    if (anchors_ok) *anchors_ok = all;
    return t;
}

}  // namespace

void write_csv(const Table& t, std::ostream& os)
{
    for (std::size_t i = 0; i < t.columns.size(); ++i)
        os << (i ? "," : "") << csv_field(t.columns[i]);
    os << '\n';
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) os << ',';
            if (const double* d = std::get_if<double>(&row[i])) os << format_number(*d);
            else os << csv_field(std::get<std::string>(row[i]));
        }
        os << '\n';
    }
}

void write_json(const Table& t, std::ostream& os)
{
    nlohmann::json j;
    j["columns"] = t.columns;
    j["rows"] = nlohmann::json::array();
    for (const auto& row : t.rows) {
        auto r = nlohmann::json::array();
        for (const auto& c : row) {
            if (const double* d = std::get_if<double>(&c)) {
                if (std::isfinite(*d)) r.push_back(*d);
                else r.push_back(nullptr);
            } else {
                r.push_back(std::get<std::string>(c));
            }
        }
        j["rows"].push_back(std::move(r));
    }
    os << j.dump(2) << '\n';
}

Table run(const RunConfig& cfg, const SubcommandOptions& o, bool* anchors_ok)
{
    if (anchors_ok) *anchors_ok = true;
    const auto& s = cfg.subcommand;
    if (s == "steady") return run_steady(cfg);
    if (s == "sweep-detuning") return run_sweep_detuning(cfg);
    if (s == "spectrum") return run_spectrum(cfg, o);
    if (s == "cooling-limit") return run_cooling_limit(cfg, o);
    if (s == "omit") return run_omit(cfg);
    if (s == "sphere-modes") return run_sphere_modes(cfg, o);
    if (s == "tls-q") return run_tls_q(cfg, o);
    if (s == "timedomain") return run_timedomain(cfg, o);
    if (s == "reproduce") return run_reproduce(o, anchors_ok);
    if (s.empty()) throw ValidationError("no subcommand given");
    throw ValidationError("unknown subcommand '" + s + "'");
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Cavity optomechanics toolkit"};
    app.name("optomech");
    app.require_subcommand(0, 1);

    std::string config_path, out_path, format;
    bool print_config = false;
    app.add_option("--config", config_path, "JSON parameter document");
    app.add_option("--out", out_path, "output file (default: standard output)");
    app.add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    app.add_flag("--print-config", print_config, "print the effective configuration and exit");

    // parameter overrides, all in Hz / SI
    struct Override {
        const char* flag;
        std::optional<double> value;
    };
    std::vector<Override> overrides{
        {"--f-c-hz", {}},       {"--kappa-hz", {}}, {"--eta-c", {}},     {"--g0-hz-per-m", {}},
        {"--radius-m", {}},     {"--n-index", {}},  {"--f-m-hz", {}},    {"--gamma-m-hz", {}},
        {"--m-eff-kg", {}},     {"--t-bath-k", {}}, {"--p-in-w", {}},    {"--detuning-hz", {}}};
    for (auto& ov : overrides) app.add_option(ov.flag, ov.value, "parameter override")->group("Parameters");

    std::optional<double> from, to;
    std::optional<int> points;
    std::string scale = "lin";
    app.add_option("--from", from, "start of the subcommand's sweep axis")->group("Sweep");
    app.add_option("--to", to, "end of the sweep axis")->group("Sweep");
    app.add_option("--points", points, "number of sweep points (default 101)")->group("Sweep");
    app.add_option("--scale", scale, "lin or log")->check(CLI::IsMember({"lin", "log"}))->group("Sweep");

    SubcommandOptions o;
    auto* steady = app.add_subcommand("steady", "static equilibria and their stability");
    auto* sweep = app.add_subcommand("sweep-detuning", "optical damping and spring versus detuning");
    auto* spectrum = app.add_subcommand("spectrum", "displacement noise budget versus Fourier frequency");
    spectrum->add_flag("--single-sided", o.single_sided, "one-sided spectra (x2, omega >= 0)");
    auto* cooling = app.add_subcommand("cooling-limit", "final phonon occupancy");
    cooling->add_option("--freq-noise", o.s_omega_omega, "laser frequency noise S_ww [rad^2/s^2/Hz]");
    auto* omit = app.add_subcommand("omit", "probe transmission around the coupling laser");
    auto* sphere = app.add_subcommand("sphere-modes", "breathing mode of an elastic sphere");
    sphere->add_option("--radius-um", o.radius_um, "sphere radius [um]");
    sphere->add_option("--material", o.material, "material (silica)");
    auto* tls = app.add_subcommand("tls-q", "two-level-system quality factor versus temperature");
    tls->add_option("--f-hz", o.tls_f_hz, "mechanical frequency [Hz]");
    auto* td = app.add_subcommand("timedomain", "direct integration of the coupled equations");
    td->add_option("--t-end", o.t_end, "run length [s] (default 20 mechanical periods)");
    td->add_option("--samples", o.samples, "number of output samples");
    td->add_option("--kick-m", o.kick_m, "initial displacement offset [m]");
    td->add_option("--tol", o.tol, "integrator tolerance");
    auto* rep = app.add_subcommand("reproduce", "recompute the built-in reference numbers");
    rep->add_option("anchor", o.anchor, "anchor name or 'all'");
    for (auto* s : {steady, sweep, spectrum, cooling, omit, sphere, tls, td, rep}) s->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? ExitCode::ok : ExitCode::validation;
    }

    try {
        RunConfig cfg = config_path.empty() ? RunConfig{} : load_config(config_path);
        for (auto* s : app.get_subcommands()) cfg.subcommand = s->get_name();
        if (!out_path.empty()) cfg.out = out_path;
        if (!format.empty()) cfg.format = format;

        double* targets[] = {&cfg.cavity.f_c_hz,  &cfg.cavity.kappa_hz,   &cfg.cavity.eta_c,
                             nullptr,             &cfg.cavity.radius_m,   &cfg.cavity.refractive_index,
                             &cfg.mode.f_m_hz,    &cfg.mode.gamma_m_hz,   &cfg.mode.m_eff_kg,
                             &cfg.mode.t_bath_k,  &cfg.drive.p_in_w,      &cfg.drive.detuning_hz};
        for (std::size_t i = 0; i < overrides.size(); ++i) {
            if (!overrides[i].value) continue;
            if (targets[i]) *targets[i] = *overrides[i].value;
            else cfg.cavity.g0_hz_per_m = overrides[i].value;
        }

        if (from || to || points) {
            const auto axis = default_axis(cfg.subcommand);
            if (axis.empty())
                throw ValidationError(cfg.subcommand + ": takes no --from/--to range");
            if (!from || !to) throw ValidationError("sweep: both --from and --to are required");
            cfg.sweep = SweepAxis{axis, *from, *to, points.value_or(101),
                                  scale == "log" ? AxisScale::log : AxisScale::lin};
        }
        // re-validate the merged document through the same schema checks
        cfg = parse_config(dump_config(cfg), "<command line>");

        if (print_config) {
            out << dump_config(cfg) << '\n';
            return ExitCode::ok;
        }

        bool anchors_ok = true;
        const Table t = run(cfg, o, &anchors_ok);
        std::ofstream file;
        if (!cfg.out.empty()) {
            file.open(cfg.out);
            if (!file) throw ValidationError("cannot open output file '" + cfg.out + "'");
        }
        std::ostream& os = cfg.out.empty() ? out : file;
        if (cfg.format == "json") write_json(t, os);
        else write_csv(t, os);
        return anchors_ok ? ExitCode::ok : ExitCode::anchor_failed;
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << '\n';
        return ExitCode::validation;
    } catch (const NumericalError& e) {
        err << "numerical error: " << e.what() << '\n';
        return ExitCode::numerical;
    } catch (const std::exception& e) {
        err << "numerical error: " << e.what() << '\n';
        return ExitCode::numerical;
    }
}

}  // namespace om::cli
