#include "optomech/config.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <sstream>

#include "optomech/errors.hpp"

namespace om::cli {

using nlohmann::json;

namespace {

constexpr std::array<const char*, 7> axis_names{"detuning_hz", "p_in_w",     "offset_hz",
                                                "fourier_hz",  "temperature_k", "radius_m",
                                                "kappa_hz"};

// 1-based line of byte offset pos in text
std::size_t line_of(const std::string& text, std::size_t pos)
{
    pos = std::min(pos, text.size());
    return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<long>(pos), '\n'));
}

// Best-effort location of "key" inside the object named section.
std::string locate(const std::string& text, const std::string& section, const std::string& key)
{
    std::size_t from = 0;
    if (!section.empty()) {
        from = text.find('"' + section + '"');
        if (from == std::string::npos) return {};
    }
    const auto at = text.find('"' + key + '"', from);
    if (at == std::string::npos) return {};
    return " (line " + std::to_string(line_of(text, at)) + ")";
}

class Reader {
public:
    Reader(const std::string& text, const std::string& source) : text_(text), source_(source) {}

    [[noreturn]] void fail(const std::string& section, const std::string& key,
                           const std::string& what) const
    {
        const std::string path = section.empty() ? key : section + "." + key;
        throw ValidationError(source_ + ": field '" + path + "'" + locate(text_, section, key) +
                              ": " + what);
    }

    void check_keys(const json& obj, const std::string& section,
                    std::initializer_list<const char*> allowed) const
    {
        for (const auto& [k, v] : obj.items()) {
            if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return k == a; }))
                fail(section, k, "unknown field");
        }
    }

    double number(const json& obj, const std::string& section, const char* key, double fallback,
                  bool positive, bool non_negative = false) const
    {
        if (!obj.contains(key)) return fallback;
        const auto& v = obj.at(key);
        if (!v.is_number()) fail(section, key, "expected a number, got " + std::string(v.type_name()));
        const double d = v.get<double>();
        if (!std::isfinite(d)) fail(section, key, "must be finite");
        if (positive && !(d > 0)) fail(section, key, "must be positive");
        if (non_negative && d < 0) fail(section, key, "must be non-negative");
        return d;
    }

    std::string string(const json& obj, const std::string& section, const char* key,
                       const std::string& fallback) const
    {
        if (!obj.contains(key)) return fallback;
        const auto& v = obj.at(key);
        if (!v.is_string()) fail(section, key, "expected a string, got " + std::string(v.type_name()));
        return v.get<std::string>();
    }

    const json& object(const json& root, const char* key) const
    {
        static const json empty = json::object();
        if (!root.contains(key)) return empty;
        const auto& v = root.at(key);
        if (!v.is_object()) fail("", key, "expected an object");
        return v;
    }

private:
    const std::string& text_;
    const std::string& source_;
};

}  // namespace

bool known_axis(const std::string& name)
{
    return std::any_of(axis_names.begin(), axis_names.end(), [&](const char* a) { return name == a; });
}

void validate_axis(const SweepAxis& axis)
{
    if (!known_axis(axis.name)) throw ValidationError("sweep: unknown axis '" + axis.name + "'");
    if (axis.points < 2) throw ValidationError("sweep: need at least 2 points");
    if (!std::isfinite(axis.min) || !std::isfinite(axis.max))
        throw ValidationError("sweep: bounds must be finite");
    if (!(axis.max > axis.min)) throw ValidationError("sweep: empty range (max must exceed min)");
    if (axis.scale == AxisScale::log && !(axis.min > 0))
        throw ValidationError("sweep: log axis needs positive bounds");
}

std::vector<double> axis_values(const SweepAxis& axis)
{
    validate_axis(axis);
    const auto n = static_cast<std::size_t>(axis.points);
    return axis.scale == AxisScale::log ? logspace(axis.min, axis.max, n)
                                        : linspace(axis.min, axis.max, n);
}

RunConfig parse_config(const std::string& text, const std::string& source)
{
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        // e.byte is 1-based
        const std::size_t pos = e.byte > 0 ? e.byte - 1 : 0;
        const std::size_t line = line_of(text, pos);
        const auto line_start = text.rfind('\n', pos == 0 ? 0 : pos - 1);
        const std::size_t col = pos - (line_start == std::string::npos ? 0 : line_start + 1) + 1;
        throw ValidationError(source + ": JSON syntax error at line " + std::to_string(line) +
                              ", column " + std::to_string(col) + ": " + e.what());
    }
    if (!root.is_object()) throw ValidationError(source + ": top level must be a JSON object");

    const Reader rd(text, source);
    rd.check_keys(root, "", {"subcommand", "cavity", "mode", "drive", "sweep", "out", "format"});

    RunConfig cfg;
    cfg.subcommand = rd.string(root, "", "subcommand", "");
    cfg.out = rd.string(root, "", "out", "");
    cfg.format = rd.string(root, "", "format", "csv");
    if (cfg.format != "csv" && cfg.format != "json") rd.fail("", "format", "must be 'csv' or 'json'");

    const auto& c = rd.object(root, "cavity");
    rd.check_keys(c, "cavity",
                  {"f_c_hz", "kappa_hz", "eta_c", "g0_hz_per_m", "radius_m", "refractive_index"});
    CavityDoc cd;
    cd.f_c_hz = rd.number(c, "cavity", "f_c_hz", cd.f_c_hz, true);
    cd.kappa_hz = rd.number(c, "cavity", "kappa_hz", cd.kappa_hz, true);
    cd.eta_c = rd.number(c, "cavity", "eta_c", cd.eta_c, true);
    if (cd.eta_c > 1) rd.fail("cavity", "eta_c", "must not exceed 1");
    if (c.contains("g0_hz_per_m"))
        cd.g0_hz_per_m = rd.number(c, "cavity", "g0_hz_per_m", 0.0, false);
    cd.radius_m = rd.number(c, "cavity", "radius_m", cd.radius_m, true);
    cd.refractive_index = rd.number(c, "cavity", "refractive_index", cd.refractive_index, true);
    cfg.cavity = cd;

    const auto& m = rd.object(root, "mode");
    rd.check_keys(m, "mode", {"f_m_hz", "gamma_m_hz", "m_eff_kg", "t_bath_k"});
    ModeDoc md;
    md.f_m_hz = rd.number(m, "mode", "f_m_hz", md.f_m_hz, true);
    md.gamma_m_hz = rd.number(m, "mode", "gamma_m_hz", md.gamma_m_hz, true);
    md.m_eff_kg = rd.number(m, "mode", "m_eff_kg", md.m_eff_kg, true);
    md.t_bath_k = rd.number(m, "mode", "t_bath_k", md.t_bath_k, false, true);
    cfg.mode = md;

    const auto& d = rd.object(root, "drive");
    rd.check_keys(d, "drive", {"p_in_w", "detuning_hz"});
    DriveDoc dd;
    dd.p_in_w = rd.number(d, "drive", "p_in_w", dd.p_in_w, false, true);
    dd.detuning_hz = rd.number(d, "drive", "detuning_hz", dd.detuning_hz, false);
    cfg.drive = dd;

    if (root.contains("sweep")) {
        const auto& s = rd.object(root, "sweep");
        rd.check_keys(s, "sweep", {"name", "min", "max", "points", "scale"});
        SweepAxis ax;
        ax.name = rd.string(s, "sweep", "name", "");
        if (!known_axis(ax.name)) rd.fail("sweep", "name", "unknown axis '" + ax.name + "'");
        ax.min = rd.number(s, "sweep", "min", 0.0, false);
        ax.max = rd.number(s, "sweep", "max", 0.0, false);
        if (!s.contains("points") || !s.at("points").is_number_integer())
            rd.fail("sweep", "points", "expected an integer");
        ax.points = s.at("points").get<int>();
        const auto scale = rd.string(s, "sweep", "scale", "lin");
        if (scale != "lin" && scale != "log") rd.fail("sweep", "scale", "must be 'lin' or 'log'");
        ax.scale = scale == "log" ? AxisScale::log : AxisScale::lin;
        try {
            validate_axis(ax);
        } catch (const ValidationError& e) {
            throw ValidationError(source + ": field 'sweep'" + locate(text, "", "sweep") + ": " +
                                  e.what());
        }
        cfg.sweep = ax;
    }
    return cfg;
}

RunConfig load_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open config file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), path);
}

json to_json(const RunConfig& cfg)
{
    json j;
    if (!cfg.subcommand.empty()) j["subcommand"] = cfg.subcommand;
    json c{{"f_c_hz", cfg.cavity.f_c_hz},
           {"kappa_hz", cfg.cavity.kappa_hz},
           {"eta_c", cfg.cavity.eta_c},
           {"radius_m", cfg.cavity.radius_m},
           {"refractive_index", cfg.cavity.refractive_index}};
    if (cfg.cavity.g0_hz_per_m) c["g0_hz_per_m"] = *cfg.cavity.g0_hz_per_m;
    j["cavity"] = c;
    j["mode"] = json{{"f_m_hz", cfg.mode.f_m_hz},
                     {"gamma_m_hz", cfg.mode.gamma_m_hz},
                     {"m_eff_kg", cfg.mode.m_eff_kg},
                     {"t_bath_k", cfg.mode.t_bath_k}};
    j["drive"] = json{{"p_in_w", cfg.drive.p_in_w}, {"detuning_hz", cfg.drive.detuning_hz}};
    if (cfg.sweep) {
        j["sweep"] = json{{"name", cfg.sweep->name},
                          {"min", cfg.sweep->min},
                          {"max", cfg.sweep->max},
                          {"points", cfg.sweep->points},
                          {"scale", cfg.sweep->scale == AxisScale::log ? "log" : "lin"}};
    }
    if (!cfg.out.empty()) j["out"] = cfg.out;
    j["format"] = cfg.format;
    return j;
}

std::string dump_config(const RunConfig& cfg) { return to_json(cfg).dump(2); }

CavityParams make_cavity(const CavityDoc& doc)
{
    const double omega_c = hz_to_rad(doc.f_c_hz);
    const double g0 = doc.g0_hz_per_m ? hz_to_rad(*doc.g0_hz_per_m) : -omega_c / doc.radius_m;
    return CavityParams(omega_c, hz_to_rad(doc.kappa_hz), doc.eta_c, g0, doc.radius_m);
}

MechMode make_mode(const ModeDoc& doc)
{
    return MechMode(hz_to_rad(doc.f_m_hz), hz_to_rad(doc.gamma_m_hz), doc.m_eff_kg, doc.t_bath_k);
}

Drive make_drive(const CavityDoc& cav, const DriveDoc& doc)
{
    return Drive(doc.p_in_w, hz_to_rad(cav.f_c_hz + doc.detuning_hz), hz_to_rad(doc.detuning_hz));
}

}  // namespace om::cli
