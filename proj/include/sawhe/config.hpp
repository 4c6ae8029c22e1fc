#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "sawhe/electrostatics.hpp"
#include "sawhe/fitkit.hpp"
#include "sawhe/helium_film.hpp"
#include "sawhe/pump_sim.hpp"
#include "sawhe/saw_device.hpp"

// Structured scenario configuration: sectioned key = value text with
// comments, a required schema version, and strict rejection of unknown
// keys. Every physical default in the library is overridable here; the
// canonical dump of the effective configuration feeds the scenario hash
// stamped into every output file.

namespace sawhe {

// Parse or schema failure; the message carries "<file>:<line>:".
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

struct RunSettings {
    std::string out_dir;       // empty: CLI flag, env var, or ./out decide
    std::string plot = "svg";  // plot export dialect: "svg" or "data"
};

struct FilmSweep {
    double h = 0.2e-3;     // bulk level depth for the single-point row [m]
    double n = 0.8e13;     // electron density for the charged curve [1/m^2]
    double h_min = 0.5e-4; // sweep range for the thickness curves [m]
    double h_max = 5.0e-4;
    int points = 46;       // includes h = 0.2 mm on the default grid
};

struct TxSettings {
    double sigma = 1.58e-6;        // sheet conductivity [S]
    int nodes = 256;               // discretization of the RC ladder
    double v_ex = 0.1;             // excitation amplitude [V]
    double f_lo = 1e3;             // response sweep range [Hz]
    double f_hi = 1e7;
    int points = 61;               // log-spaced sweep size
    double drive_frequency = 60e3; // FET transfer drive [Hz]
    double gate_lo = 15.0;         // gate sweep range [V]
    double gate_hi = 85.0;
    int gate_steps = 71;
};

struct PumpSettings {
    double power_w = 1e-3;           // RF drive power [W]
    double frequency = 296e6;        // drive frequency [Hz]
    double t_pulse = 30e-6;          // gate-on window [s]
    double t_total = 75e-6;          // simulated span [s]
    int cells = 513;                 // grid cells (513 aligns the detection face)
    double dt = 30e-6 / 4096.0;      // time step [s]
    double launch_gap = 0.9796e-3;   // launcher to sheet edge [m]
    double x_det = 5.9296e-3;        // detection boundary from launcher [m]
    double k2_eff = 3e-4;            // evanescent coupling to the floating sheet
    double drive_scale = 8e-6;       // calibrated drive normalization
    bool semi_implicit = true;
};

struct ScenarioConfig {
    int schema_version = 1;
    RunSettings run;
    PhysicalConstants constants;
    FilmParams film_params;
    FilmSweep film;
    SawMaterial material;
    IdtSpec idt;
    ElectrodeLayout layout;
    ElectrodeStack stack;
    double c_l = 1.08e-7;    // measured layer capacitance per area [F/m^2]
    double n_total = 0.7e9;  // electrons on the sheet
    double mu = 0.52;        // sheet mobility [m^2/Vs]
    std::vector<double> biases = {40.0, 40.0, 40.0};  // source, gate, drain [V]
    TxSettings tx;
    PumpSettings pump;
    fit::FitOptions fit;
};

ScenarioConfig default_config();

// Parse sectioned key = value text. '#' and ';' start comments. A top-level
// schema_version key is required. Unknown sections, unknown keys, duplicate
// keys, and malformed values all raise ConfigError naming file and line.
ScenarioConfig parse_config(const std::string& text,
                            const std::string& name = "<config>");
ScenarioConfig load_config(const std::string& path);

// Every effective key in a fixed order with full precision; two configs
// produce the same dump iff every setting matches.
std::string canonical_dump(const ScenarioConfig& cfg);
std::uint64_t scenario_hash(const ScenarioConfig& cfg);

// Assemble the pump scenario from its sections.
PumpScenario make_pump_scenario(const ScenarioConfig& cfg);

struct RunManifest {
    std::uint64_t hash = 0;       // scenario hash of the run
    std::string version;          // artifact version string
    std::vector<std::string> outputs;
    double wall_seconds = 0.0;
};

std::string manifest_text(const RunManifest& m);

}  // namespace sawhe
