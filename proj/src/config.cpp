#include "sawhe/config.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "sawhe/csv.hpp"
#include "sawhe/hash.hpp"

namespace sawhe {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return {};
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

std::string fmt_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

double parse_double_value(const std::string& v, const std::string& where) {
    char* end = nullptr;
    const double x = std::strtod(v.c_str(), &end);
    if (v.empty() || end != v.c_str() + v.size())
        throw ConfigError(where + ": expected a number, got '" + v + "'");
    return x;
}

int parse_int_value(const std::string& v, const std::string& where) {
    char* end = nullptr;
    const long x = std::strtol(v.c_str(), &end, 10);
    if (v.empty() || end != v.c_str() + v.size())
        throw ConfigError(where + ": expected an integer, got '" + v + "'");
    return static_cast<int>(x);
}

bool parse_bool_value(const std::string& v, const std::string& where) {
    if (v == "true") return true;
    if (v == "false") return false;
    throw ConfigError(where + ": expected true or false, got '" + v + "'");
}

struct KeyBinding {
    std::string key;  // "section.key"
    std::function<void(ScenarioConfig&, const std::string&, const std::string&)> set;
    std::function<std::string(ScenarioConfig)> get;
};

using DRef = std::function<double&(ScenarioConfig&)>;
using IRef = std::function<int&(ScenarioConfig&)>;
using BRef = std::function<bool&(ScenarioConfig&)>;
using SRef = std::function<std::string&(ScenarioConfig&)>;

KeyBinding dbl(std::string key, DRef r) {
    return {std::move(key),
            [r](ScenarioConfig& c, const std::string& v, const std::string& w) {
                r(c) = parse_double_value(v, w);
            },
            [r](ScenarioConfig c) { return fmt_double(r(c)); }};
}

KeyBinding intk(std::string key, IRef r) {
    return {std::move(key),
            [r](ScenarioConfig& c, const std::string& v, const std::string& w) {
                r(c) = parse_int_value(v, w);
            },
            [r](ScenarioConfig c) { return std::to_string(r(c)); }};
}

KeyBinding boolk(std::string key, BRef r) {
    return {std::move(key),
            [r](ScenarioConfig& c, const std::string& v, const std::string& w) {
                r(c) = parse_bool_value(v, w);
            },
            [r](ScenarioConfig c) { return r(c) ? "true" : "false"; }};
}

KeyBinding strk(std::string key, SRef r) {
    return {std::move(key),
            [r](ScenarioConfig& c, const std::string& v, const std::string&) {
                r(c) = v;
            },
            [r](ScenarioConfig c) { return r(c); }};
}

const std::vector<KeyBinding>& bindings() {
    static const std::vector<KeyBinding> b = [] {
        std::vector<KeyBinding> v;
        auto C = [](auto member) {  // member pointer into ScenarioConfig
            return [member](ScenarioConfig& c) -> auto& { return c.*member; };
        };
        v.push_back(strk("run.out", [](ScenarioConfig& c) -> std::string& {
            return c.run.out_dir;
        }));
        v.push_back(strk("run.plot", [](ScenarioConfig& c) -> std::string& {
            return c.run.plot;
        }));

        v.push_back(dbl("constants.e",
                        [](ScenarioConfig& c) -> double& { return c.constants.e; }));
        v.push_back(dbl("constants.eps0", [](ScenarioConfig& c) -> double& {
            return c.constants.eps0;
        }));
        v.push_back(dbl("constants.m_e", [](ScenarioConfig& c) -> double& {
            return c.constants.m_e;
        }));
        v.push_back(dbl("constants.g",
                        [](ScenarioConfig& c) -> double& { return c.constants.g; }));
        v.push_back(dbl("constants.rho_he", [](ScenarioConfig& c) -> double& {
            return c.constants.rho_he;
        }));
        v.push_back(dbl("constants.eps_he", [](ScenarioConfig& c) -> double& {
            return c.constants.eps_he;
        }));

        v.push_back(dbl("film.rho", [](ScenarioConfig& c) -> double& {
            return c.film_params.rho;
        }));
        v.push_back(dbl("film.g", [](ScenarioConfig& c) -> double& {
            return c.film_params.g;
        }));
        v.push_back(dbl("film.alpha", [](ScenarioConfig& c) -> double& {
            return c.film_params.alpha;
        }));
        v.push_back(dbl("film.thin_limit", [](ScenarioConfig& c) -> double& {
            return c.film_params.thin_limit;
        }));
        v.push_back(dbl("film.h",
                        [](ScenarioConfig& c) -> double& { return c.film.h; }));
        v.push_back(dbl("film.n",
                        [](ScenarioConfig& c) -> double& { return c.film.n; }));
        v.push_back(dbl("film.h_min",
                        [](ScenarioConfig& c) -> double& { return c.film.h_min; }));
        v.push_back(dbl("film.h_max",
                        [](ScenarioConfig& c) -> double& { return c.film.h_max; }));
        v.push_back(intk("film.points",
                         [](ScenarioConfig& c) -> int& { return c.film.points; }));

        v.push_back(dbl("material.v0", [](ScenarioConfig& c) -> double& {
            return c.material.v0;
        }));
        v.push_back(dbl("material.k2", [](ScenarioConfig& c) -> double& {
            return c.material.k2;
        }));
        v.push_back(dbl("material.sigma_m", [](ScenarioConfig& c) -> double& {
            return c.material.sigma_m;
        }));
        v.push_back(dbl("material.gamma_he", [](ScenarioConfig& c) -> double& {
            return c.material.gamma_he;
        }));

        v.push_back(intk("idt.finger_pairs", [](ScenarioConfig& c) -> int& {
            return c.idt.finger_pairs;
        }));
        v.push_back(dbl("idt.pitch",
                        [](ScenarioConfig& c) -> double& { return c.idt.pitch; }));
        v.push_back(dbl("idt.aperture", [](ScenarioConfig& c) -> double& {
            return c.idt.aperture;
        }));
        v.push_back(dbl("idt.alpha_l", [](ScenarioConfig& c) -> double& {
            return c.idt.alpha_l;
        }));

        v.push_back(dbl("electrodes.width", [](ScenarioConfig& c) -> double& {
            return c.layout.width;
        }));
        v.push_back(dbl("electrodes.length", [](ScenarioConfig& c) -> double& {
            return c.layout.length;
        }));
        v.push_back(intk("electrodes.count", [](ScenarioConfig& c) -> int& {
            return c.layout.count;
        }));
        v.push_back(dbl("electrodes.d_g",
                        [](ScenarioConfig& c) -> double& { return c.stack.d_g; }));
        v.push_back(dbl("electrodes.d_s",
                        [](ScenarioConfig& c) -> double& { return c.stack.d_s; }));
        v.push_back(dbl("electrodes.eps11", [](ScenarioConfig& c) -> double& {
            return c.stack.eps11;
        }));
        v.push_back(dbl("electrodes.eps33", [](ScenarioConfig& c) -> double& {
            return c.stack.eps33;
        }));
        v.push_back(dbl("electrodes.eps13", [](ScenarioConfig& c) -> double& {
            return c.stack.eps13;
        }));
        v.push_back(dbl("electrodes.d_film", [](ScenarioConfig& c) -> double& {
            return c.stack.d_film;
        }));
        v.push_back(dbl("electrodes.c_l", C(&ScenarioConfig::c_l)));
        v.push_back(dbl("electrodes.n_total", C(&ScenarioConfig::n_total)));
        v.push_back(dbl("electrodes.mu", C(&ScenarioConfig::mu)));

        v.push_back(dbl("biases.source", [](ScenarioConfig& c) -> double& {
            return c.biases[0];
        }));
        v.push_back(dbl("biases.gate", [](ScenarioConfig& c) -> double& {
            return c.biases[1];
        }));
        v.push_back(dbl("biases.drain", [](ScenarioConfig& c) -> double& {
            return c.biases[2];
        }));

        v.push_back(dbl("txline.sigma",
                        [](ScenarioConfig& c) -> double& { return c.tx.sigma; }));
        v.push_back(intk("txline.nodes",
                         [](ScenarioConfig& c) -> int& { return c.tx.nodes; }));
        v.push_back(dbl("txline.v_ex",
                        [](ScenarioConfig& c) -> double& { return c.tx.v_ex; }));
        v.push_back(dbl("txline.f_lo",
                        [](ScenarioConfig& c) -> double& { return c.tx.f_lo; }));
        v.push_back(dbl("txline.f_hi",
                        [](ScenarioConfig& c) -> double& { return c.tx.f_hi; }));
        v.push_back(intk("txline.points",
                         [](ScenarioConfig& c) -> int& { return c.tx.points; }));
        v.push_back(dbl("txline.drive_frequency", [](ScenarioConfig& c) -> double& {
            return c.tx.drive_frequency;
        }));
        v.push_back(dbl("txline.gate_lo",
                        [](ScenarioConfig& c) -> double& { return c.tx.gate_lo; }));
        v.push_back(dbl("txline.gate_hi",
                        [](ScenarioConfig& c) -> double& { return c.tx.gate_hi; }));
        v.push_back(intk("txline.gate_steps", [](ScenarioConfig& c) -> int& {
            return c.tx.gate_steps;
        }));

        v.push_back(dbl("pump.power_w", [](ScenarioConfig& c) -> double& {
            return c.pump.power_w;
        }));
        v.push_back(dbl("pump.frequency", [](ScenarioConfig& c) -> double& {
            return c.pump.frequency;
        }));
        v.push_back(dbl("pump.t_pulse", [](ScenarioConfig& c) -> double& {
            return c.pump.t_pulse;
        }));
        v.push_back(dbl("pump.t_total", [](ScenarioConfig& c) -> double& {
            return c.pump.t_total;
        }));
        v.push_back(intk("pump.cells",
                         [](ScenarioConfig& c) -> int& { return c.pump.cells; }));
        v.push_back(dbl("pump.dt",
                        [](ScenarioConfig& c) -> double& { return c.pump.dt; }));
        v.push_back(dbl("pump.launch_gap", [](ScenarioConfig& c) -> double& {
            return c.pump.launch_gap;
        }));
        v.push_back(dbl("pump.x_det", [](ScenarioConfig& c) -> double& {
            return c.pump.x_det;
        }));
        v.push_back(dbl("pump.k2_eff", [](ScenarioConfig& c) -> double& {
            return c.pump.k2_eff;
        }));
        v.push_back(dbl("pump.drive_scale", [](ScenarioConfig& c) -> double& {
            return c.pump.drive_scale;
        }));
        v.push_back(boolk("pump.semi_implicit", [](ScenarioConfig& c) -> bool& {
            return c.pump.semi_implicit;
        }));

        v.push_back(intk("fit.max_iterations", [](ScenarioConfig& c) -> int& {
            return c.fit.max_iterations;
        }));
        v.push_back(dbl("fit.gtol",
                        [](ScenarioConfig& c) -> double& { return c.fit.gtol; }));
        v.push_back(dbl("fit.xtol",
                        [](ScenarioConfig& c) -> double& { return c.fit.xtol; }));
        v.push_back(dbl("fit.fd_rel_step", [](ScenarioConfig& c) -> double& {
            return c.fit.fd_rel_step;
        }));
        return v;
    }();
    return b;
}

const std::map<std::string, const KeyBinding*>& binding_index() {
    static const std::map<std::string, const KeyBinding*> idx = [] {
        std::map<std::string, const KeyBinding*> m;
        for (const auto& b : bindings()) m[b.key] = &b;
        return m;
    }();
    return idx;
}

const std::set<std::string>& known_sections() {
    static const std::set<std::string> s = [] {
        std::set<std::string> out;
        for (const auto& b : bindings())
            out.insert(b.key.substr(0, b.key.find('.')));
        return out;
    }();
    return s;
}

void validate(const ScenarioConfig& cfg, const std::string& name) {
    if (cfg.run.plot != "svg" && cfg.run.plot != "data")
        throw ConfigError(name + ": run.plot must be svg or data, got '" +
                          cfg.run.plot + "'");
    if (cfg.layout.count != 3)
        throw ConfigError(name +
                          ": electrodes.count must be 3; the biases schema "
                          "names source, gate, drain");
    if (cfg.film.points < 2 || cfg.tx.points < 2 || cfg.tx.gate_steps < 2)
        throw ConfigError(name + ": sweep point counts must be at least 2");
}

}  // namespace

ScenarioConfig default_config() { return ScenarioConfig{}; }

ScenarioConfig parse_config(const std::string& text, const std::string& name) {
    ScenarioConfig cfg;
    std::istringstream in(text);
    std::string line, section;
    std::set<std::string> seen;
    bool have_version = false;
    int lineno = 0;

    while (std::getline(in, line)) {
        ++lineno;
        const auto cut = line.find_first_of("#;");
        std::string t = trim(cut == std::string::npos ? line : line.substr(0, cut));
        if (t.empty()) continue;
        const std::string where = name + ":" + std::to_string(lineno);

        if (t.front() == '[') {
            if (t.back() != ']')
                throw ConfigError(where + ": unterminated section header");
            section = trim(t.substr(1, t.size() - 2));
            if (!known_sections().count(section))
                throw ConfigError(where + ": unknown section '" + section + "'");
            continue;
        }

        const auto eq = t.find('=');
        if (eq == std::string::npos)
            throw ConfigError(where + ": expected key = value");
        const std::string key = trim(t.substr(0, eq));
        const std::string value = trim(t.substr(eq + 1));
        if (key.empty()) throw ConfigError(where + ": empty key");

        if (section.empty()) {
            if (key != "schema_version")
                throw ConfigError(where + ": key '" + key +
                                  "' must live inside a section");
            if (have_version)
                throw ConfigError(where + ": duplicate schema_version");
            if (parse_int_value(value, where) != 1)
                throw ConfigError(where + ": unsupported schema_version '" +
                                  value + "' (this build reads version 1)");
            have_version = true;
            continue;
        }

        const std::string full = section + "." + key;
        if (!seen.insert(full).second)
            throw ConfigError(where + ": duplicate key '" + full + "'");
        const auto it = binding_index().find(full);
        if (it == binding_index().end())
            throw ConfigError(where + ": unknown key '" + full + "'");
        it->second->set(cfg, value, where);
    }

    if (!have_version)
        throw ConfigError(name + ": missing required key schema_version");
    validate(cfg, name);
    return cfg;
}

ScenarioConfig load_config(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw ConfigError("load_config: cannot open " + path);
    std::ostringstream buf;
    buf << f.rdbuf();
    return parse_config(buf.str(), path);
}

std::string canonical_dump(const ScenarioConfig& cfg) {
    std::string out = "schema_version = " + std::to_string(cfg.schema_version) + "\n";
    for (const auto& b : bindings()) out += b.key + " = " + b.get(cfg) + "\n";
    return out;
}

std::uint64_t scenario_hash(const ScenarioConfig& cfg) {
    return fnv1a(canonical_dump(cfg));
}

PumpScenario make_pump_scenario(const ScenarioConfig& cfg) {
    PumpScenario sc;
    sc.drive.power_w = cfg.pump.power_w;
    sc.drive.frequency = cfg.pump.frequency;
    sc.drive.gated = true;
    sc.drive.t_pulse = cfg.pump.t_pulse;
    sc.material = cfg.material;
    sc.idt = cfg.idt;
    sc.layout = cfg.layout;
    sc.biases = cfg.biases;
    sc.n_total = cfg.n_total;
    sc.mu = cfg.mu;
    sc.c_l = cfg.c_l;
    sc.launch_gap = cfg.pump.launch_gap;
    sc.x_det = cfg.pump.x_det;
    sc.k2_eff = cfg.pump.k2_eff;
    sc.drive_scale = cfg.pump.drive_scale;
    sc.t_total = cfg.pump.t_total;
    sc.semi_implicit = cfg.pump.semi_implicit;
    return sc;
}

std::string manifest_text(const RunManifest& m) {
    std::string out = "scenario_hash = " + hash_hex(m.hash) + "\n";
    out += "version = " + m.version + "\n";
    for (const auto& f : m.outputs) out += "output = " + f + "\n";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", m.wall_seconds);
    out += std::string("wall_seconds = ") + buf + "\n";
    return out;
}

}  // namespace sawhe
