#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "sawhe/config.hpp"
#include "sawhe/csv.hpp"
#include "sawhe/plot.hpp"

using namespace sawhe;

namespace {

// canonical_dump emits flat "section.key = value" lines; regroup them under
// [section] headers so the dump itself exercises every parser binding
std::string sectioned(const std::string& dump) {
    std::istringstream in(dump);
    std::string line, section, out;
    while (std::getline(in, line)) {
        const auto dot = line.find('.');
        if (dot == std::string::npos || dot > line.find(' ')) {
            out += line + "\n";  // the schema_version line
            continue;
        }
        const std::string sec = line.substr(0, dot);
        if (sec != section) {
            section = sec;
            out += "[" + sec + "]\n";
        }
        out += line.substr(dot + 1) + "\n";
    }
    return out;
}

std::size_t count_of(const std::string& hay, const std::string& needle) {
    std::size_t n = 0;
    for (auto p = hay.find(needle); p != std::string::npos;
         p = hay.find(needle, p + needle.size()))
        ++n;
    return n;
}

}  // namespace

TEST_CASE("a config with only the schema line reproduces the defaults") {
    const ScenarioConfig cfg = parse_config("schema_version = 1\n");
    CHECK(canonical_dump(cfg) == canonical_dump(default_config()));
    CHECK(scenario_hash(cfg) == scenario_hash(default_config()));
}

TEST_CASE("the canonical dump parses back to an identical dump") {
    const std::string dump = canonical_dump(default_config());
    const ScenarioConfig cfg = parse_config(sectioned(dump), "dump.cfg");
    CHECK(canonical_dump(cfg) == dump);
}

TEST_CASE("overrides land in their fields and move the scenario hash") {
    const std::string text =
        "schema_version = 1        # version gate\n"
        "\n"
        "[pump]\n"
        "power_w = 2e-3\n"
        "semi_implicit = false\n"
        "cells = 129   ; inline comment\n"
        "[electrodes]\n"
        "n_total = 1.2e9\n"
        "[biases]\n"
        "gate = 55\n"
        "[run]\n"
        "plot = data\n";
    const ScenarioConfig cfg = parse_config(text);
    CHECK(cfg.pump.power_w == 2e-3);
    CHECK(cfg.pump.semi_implicit == false);
    CHECK(cfg.pump.cells == 129);
    CHECK(cfg.n_total == 1.2e9);
    CHECK(cfg.biases[0] == 40.0);
    CHECK(cfg.biases[1] == 55.0);
    CHECK(cfg.run.plot == "data");
    CHECK(scenario_hash(cfg) != scenario_hash(default_config()));
}

TEST_CASE("parse errors name the file and line") {
    using doctest::Contains;
    CHECK_THROWS_WITH_AS(parse_config("[pump]\ncells = 5\n", "a.cfg"),
                         Contains("a.cfg: missing required key schema_version"),
                         ConfigError);
    CHECK_THROWS_WITH_AS(parse_config("schema_version = 2\n", "b.cfg"),
                         Contains("b.cfg:1: unsupported schema_version"),
                         ConfigError);
    CHECK_THROWS_WITH_AS(
        parse_config("schema_version = 1\nschema_version = 1\n", "c.cfg"),
        Contains("c.cfg:2: duplicate schema_version"), ConfigError);
    CHECK_THROWS_WITH_AS(parse_config("schema_version = 1\n[waves]\n", "d.cfg"),
                         Contains("d.cfg:2: unknown section 'waves'"),
                         ConfigError);
    CHECK_THROWS_WITH_AS(
        parse_config("schema_version = 1\n[pump]\nquux = 3\n", "e.cfg"),
        Contains("e.cfg:3: unknown key 'pump.quux'"), ConfigError);
    CHECK_THROWS_WITH_AS(
        parse_config("schema_version = 1\n[pump]\ncells = 1\ncells = 2\n",
                     "f.cfg"),
        Contains("f.cfg:4: duplicate key 'pump.cells'"), ConfigError);
    CHECK_THROWS_WITH_AS(parse_config("schema_version = 1\n[pump\n", "g.cfg"),
                         Contains("g.cfg:2: unterminated section"), ConfigError);
    CHECK_THROWS_WITH_AS(
        parse_config("schema_version = 1\n[pump]\ndt = fast\n", "h.cfg"),
        Contains("h.cfg:3: expected a number, got 'fast'"), ConfigError);
    CHECK_THROWS_WITH_AS(parse_config("schema_version = 1\ncells = 5\n", "i.cfg"),
                         Contains("i.cfg:2: key 'cells' must live inside"),
                         ConfigError);
    CHECK_THROWS_WITH_AS(
        parse_config("schema_version = 1\n[run]\nplot = png\n", "j.cfg"),
        Contains("run.plot must be svg or data"), ConfigError);
    CHECK_THROWS_WITH_AS(
        parse_config("schema_version = 1\n[electrodes]\ncount = 2\n", "k.cfg"),
        Contains("source, gate, drain"), ConfigError);
}

TEST_CASE("the pump scenario collects its sections") {
    const ScenarioConfig cfg = parse_config(
        "schema_version = 1\n"
        "[pump]\n"
        "power_w = 0.5e-3\n"
        "t_total = 50e-6\n"
        "x_det = 6e-3\n"
        "[electrodes]\n"
        "mu = 0.4\n");
    const PumpScenario sc = make_pump_scenario(cfg);
    CHECK(sc.drive.gated);
    CHECK(sc.drive.power_w == 0.5e-3);
    CHECK(sc.drive.frequency == cfg.pump.frequency);
    CHECK(sc.drive.t_pulse == cfg.pump.t_pulse);
    CHECK(sc.t_total == 50e-6);
    CHECK(sc.x_det == 6e-3);
    CHECK(sc.mu == 0.4);
    CHECK(sc.n_total == cfg.n_total);
    CHECK(sc.c_l == cfg.c_l);
    CHECK(sc.biases == cfg.biases);
    CHECK(sc.launch_gap == cfg.pump.launch_gap);
    CHECK(sc.semi_implicit == cfg.pump.semi_implicit);
}

TEST_CASE("configs load from disk and name the path on failure") {
    const std::string path = "test_config_tmp.cfg";
    {
        std::ofstream f(path);
        f << "schema_version = 1\n[txline]\nnodes = 64\n";
    }
    const ScenarioConfig cfg = load_config(path);
    CHECK(cfg.tx.nodes == 64);
    std::remove(path.c_str());
    CHECK_THROWS_WITH_AS(load_config("no_such_file.cfg"),
                         doctest::Contains("cannot open"), ConfigError);
}

TEST_CASE("the run manifest lists hash, version, outputs, and timing") {
    RunManifest m;
    m.hash = 0xdeadbeefull;
    m.version = "sawhe 1.0";
    m.outputs = {"out/film.csv", "out/pump_trace.csv"};
    m.wall_seconds = 1.25;
    CHECK(manifest_text(m) ==
          "scenario_hash = 00000000deadbeef\n"
          "version = sawhe 1.0\n"
          "output = out/film.csv\n"
          "output = out/pump_trace.csv\n"
          "wall_seconds = 1.250\n");
}

TEST_CASE("csv text carries header, full-precision rows, and the hash trailer") {
    CHECK(hash_hex(0) == "0000000000000000");
    CHECK(hash_hex(0xffffffffffffffffull) == "ffffffffffffffff");
    const std::string text =
        csv_text({"a", "b"}, {{1.0, 0.5}, {-3.5, 0.1}}, 0x1234abcdull);
    CHECK(text ==
          "a,b\n"
          "1,0.5\n"
          "-3.5,0.10000000000000001\n"
          "# scenario_hash=000000001234abcd\n");
    CHECK_THROWS_AS(csv_text({}, {}, 0), std::invalid_argument);
    CHECK_THROWS_AS(csv_text({"a", "b"}, {{1.0}}, 0), std::invalid_argument);
}

TEST_CASE("frequency response files round trip exactly") {
    const std::vector<double> f{1e3, 6e4, 2.5e6};
    const std::vector<double> re{1.0, -0.25, 3.3e-8};
    const std::vector<double> im{0.0, 0.125, -1e-300};
    std::vector<std::vector<double>> rows;
    for (std::size_t i = 0; i < f.size(); ++i)
        rows.push_back({f[i], re[i], im[i]});

    const std::string path = "test_roundtrip_tmp.csv";
    const std::size_t bytes =
        write_csv(path, {"f_hz", "re_amp", "im_amp"}, rows, 7ull);
    const FreqResponseData data = read_freq_response_csv(path);
    REQUIRE(data.f_hz.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(data.f_hz[i] == f[i]);
        CHECK(data.re_amp[i] == re[i]);
        CHECK(data.im_amp[i] == im[i]);
    }

    std::ifstream in(path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    CHECK(buf.str().size() == bytes);
    CHECK(buf.str() == csv_text({"f_hz", "re_amp", "im_amp"}, rows, 7ull));
    std::remove(path.c_str());
}

TEST_CASE("frequency response parse errors are line precise") {
    using doctest::Contains;
    CHECK_THROWS_WITH_AS(parse_freq_response_csv("", "z.csv"),
                         Contains("z.csv: missing f_hz"), std::runtime_error);
    CHECK_THROWS_WITH_AS(parse_freq_response_csv("f_hz,amp\n", "z.csv"),
                         Contains("z.csv:1: expected header"),
                         std::runtime_error);
    CHECK_THROWS_WITH_AS(
        parse_freq_response_csv("f_hz,re_amp,im_amp\n1,2\n", "z.csv"),
        Contains("z.csv:2: expected three columns"), std::runtime_error);
    CHECK_THROWS_WITH_AS(
        parse_freq_response_csv("f_hz,re_amp,im_amp\n1,2,3,4\n", "z.csv"),
        Contains("z.csv:2: expected three columns"), std::runtime_error);
    CHECK_THROWS_WITH_AS(
        parse_freq_response_csv("f_hz,re_amp,im_amp\n1,x,3\n", "z.csv"),
        Contains("z.csv:2: bad number 'x'"), std::runtime_error);

    // comments, blank lines, and the trailing hash comment are skipped
    const FreqResponseData d = parse_freq_response_csv(
        "# preamble\n\nf_hz,re_amp,im_amp\n10,0.5,-0.5\n# scenario_hash=00\n");
    CHECK(d.f_hz == std::vector<double>{10.0});
    CHECK(d.re_amp == std::vector<double>{0.5});
    CHECK(d.im_amp == std::vector<double>{-0.5});
}

TEST_CASE("svg charts draw one polyline per series with escaped labels") {
    const std::vector<double> x{0.0, 1.0, 2.0};
    const std::vector<PlotSeries> series{{"I<on>", {1.0, 2.0, 1.5}},
                                         {"off", {0.0, -1.0, 0.5}}};
    const std::string svg = svg_line_chart("t&i", "t [s]", "i [A]", x, series);
    CHECK(svg.rfind("<svg ", 0) == 0);
    CHECK(svg.find("</svg>") != std::string::npos);
    CHECK(count_of(svg, "<polyline") == 2);
    CHECK(svg.find("I&lt;on&gt;") != std::string::npos);
    CHECK(svg.find("t&amp;i") != std::string::npos);
    CHECK(svg.find("nan") == std::string::npos);
}

TEST_CASE("flat series still produce a finite drawable band") {
    const std::string svg =
        svg_line_chart("c", "x", "y", {1.0, 2.0}, {{"s", {3.0, 3.0}}});
    CHECK(svg.find("nan") == std::string::npos);
    CHECK(svg.find("inf") == std::string::npos);
    CHECK_THROWS_AS(
        svg_line_chart("c", "x", "y", {1.0, 2.0}, {{"s", {3.0}}}),
        std::invalid_argument);
    CHECK_THROWS_AS(svg_line_chart("c", "x", "y", {}, {}),
                    std::invalid_argument);
}

TEST_CASE("gnuplot export is plain labeled columns") {
    CHECK(gnuplot_data({1.0, 2.0}, {{"s1", {0.5, 6.25}}, {"s2", {-1.0, 0.0}}}) ==
          "# x s1 s2\n"
          "1 0.5 -1\n"
          "2 6.25 0\n");
    CHECK_THROWS_AS(gnuplot_data({1.0}, {{"s", {1.0, 2.0}}}),
                    std::invalid_argument);
}

TEST_CASE("shipped default config reproduces the built-in scenario") {
    const ScenarioConfig cfg =
        load_config(std::string(SAWHE_DATA_DIR) + "/default.cfg");
    CHECK(canonical_dump(cfg) == canonical_dump(default_config()));
    CHECK(scenario_hash(cfg) == scenario_hash(default_config()));
}

TEST_CASE("shipped fet config overrides only the transfer-curve scenario") {
    const ScenarioConfig cfg =
        load_config(std::string(SAWHE_DATA_DIR) + "/fet.cfg");
    CHECK(cfg.n_total == doctest::Approx(1.6038e8).epsilon(1e-12).scale(0));
    CHECK(cfg.biases == std::vector<double>{80.0, 80.0, 80.0});
    CHECK(cfg.tx.nodes == 96);
    CHECK(cfg.tx.gate_lo == 40.0);
    CHECK(cfg.tx.gate_hi == 120.0);
    CHECK(cfg.tx.gate_steps == 321);
    // everything else stays at the defaults the acceptance scenario assumes
    CHECK(cfg.c_l == default_config().c_l);
    CHECK(cfg.mu == default_config().mu);
    CHECK(cfg.tx.v_ex == default_config().tx.v_ex);
    CHECK(cfg.tx.drive_frequency == default_config().tx.drive_frequency);
}
