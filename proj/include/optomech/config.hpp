#pragma once

// Parameter documents read by the command-line front end. Frequencies here
// are in Hz (cyclic); conversion to rad/s happens in the make_* helpers.

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "optomech/model.hpp"

namespace om::cli {

struct CavityDoc {
    double f_c_hz = 2.8175e14;
    double kappa_hz = 10e6;
    double eta_c = 0.5;
    std::optional<double> g0_hz_per_m;  // default -f_c / R
    double radius_m = 30e-6;
    double refractive_index = 1.45;

    bool operator==(const CavityDoc&) const = default;
};

struct ModeDoc {
    double f_m_hz = 40.6e6;
    double gamma_m_hz = 1.3e3;
    double m_eff_kg = 10e-12;
    double t_bath_k = 300.0;

    bool operator==(const ModeDoc&) const = default;
};

struct DriveDoc {
    double p_in_w = 100e-6;
    double detuning_hz = -40.6e6;

    bool operator==(const DriveDoc&) const = default;
};

enum class AxisScale { lin, log };

struct SweepAxis {
    std::string name;
    double min = 0.0;
    double max = 0.0;
    int points = 0;
    AxisScale scale = AxisScale::lin;

    bool operator==(const SweepAxis&) const = default;
};

struct RunConfig {
    std::string subcommand;
    CavityDoc cavity;
    ModeDoc mode;
    DriveDoc drive;
    std::optional<SweepAxis> sweep;
    std::string out;             // empty: standard output
    std::string format = "csv";  // csv | json

    bool operator==(const RunConfig&) const = default;
};

// Names a sweep axis may take.
bool known_axis(const std::string& name);
void validate_axis(const SweepAxis& axis);
std::vector<double> axis_values(const SweepAxis& axis);

// Parses a JSON document. Syntax errors report line and column, schema
// errors the offending field path (and its line when it can be located).
// Throws om::ValidationError.
RunConfig parse_config(const std::string& text, const std::string& source = "<config>");
RunConfig load_config(const std::string& path);

nlohmann::json to_json(const RunConfig& cfg);
std::string dump_config(const RunConfig& cfg);

CavityParams make_cavity(const CavityDoc& doc);
MechMode make_mode(const ModeDoc& doc);
// Laser at f_c + detuning.
Drive make_drive(const CavityDoc& cav, const DriveDoc& doc);

}  // namespace om::cli
