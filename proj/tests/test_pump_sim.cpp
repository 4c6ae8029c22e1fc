#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "doctest.h"
#include "sawhe/pump_sim.hpp"

using namespace sawhe;

namespace {

constexpr int kCells = 513;  // detection face lands exactly on a cell boundary

PumpScenario reference_scenario() {
    PumpScenario sc;
    sc.drive.gated = true;
    sc.drive.power_w = 1e-3;
    sc.n_total = 0.7e9;
    return sc;
}

double step_size(const PumpScenario& sc) { return sc.drive.t_pulse / 4096.0; }

const TraceResult& reference_trace() {
    static const TraceResult tr = [] {
        PumpScenario sc = reference_scenario();
        return simulate_gated_pump(sc, make_grid(sc.layout, sc.launch_gap, kCells),
                                   step_size(sc));
    }();
    return tr;
}

double peak_abs(const std::vector<double>& v) {
    double p = 0.0;
    for (double x : v) p = std::max(p, std::abs(x));
    return p;
}

}  // namespace

TEST_CASE("grid covers the electrode span in equal cells") {
    ElectrodeLayout layout;
    Grid1D g = make_grid(layout, 0.9796e-3, kCells);
    CHECK(g.cells == kCells);
    CHECK(g.dx == doctest::Approx(layout.span() / kCells).epsilon(1e-12).scale(0));
    CHECK(g.x0 == doctest::Approx(0.9796e-3).epsilon(1e-12).scale(0));
    // 513 = 3 * 171 cells: electrode boundaries coincide with faces
    CHECK(g.electrode[0] == 0);
    CHECK(g.electrode[170] == 0);
    CHECK(g.electrode[171] == 1);
    CHECK(g.electrode[341] == 1);
    CHECK(g.electrode[342] == 2);
    CHECK(g.electrode[512] == 2);
    CHECK_THROWS_AS(make_grid(layout, 0.0, 8), std::invalid_argument);
    CHECK_THROWS_AS(make_grid(layout, -1e-3, 64), std::invalid_argument);
}

TEST_CASE("arrival delay is distance over velocity") {
    CHECK(arrival_delay(0.0, 3488.0) == 0.0);
    CHECK(arrival_delay(5.9296e-3, 3488.0) == doctest::Approx(1.7e-6).epsilon(1e-12).scale(0));
    CHECK(arrival_delay(3.2e-3, 3488.0) == doctest::Approx(0.91743e-6).epsilon(1e-4).scale(0));
    CHECK_THROWS_AS(arrival_delay(-1.0, 3488.0), std::invalid_argument);
    CHECK_THROWS_AS(arrival_delay(1.0, 0.0), std::invalid_argument);
}

TEST_CASE("scenario validation") {
    PumpScenario sc = reference_scenario();
    Grid1D g = make_grid(sc.layout, sc.launch_gap, 64);
    CHECK_THROWS_AS(simulate_gated_pump(sc, g, 0.0), std::invalid_argument);
    PumpScenario bad = sc;
    bad.x_det = 20e-3;  // beyond the sheet
    CHECK_THROWS_AS(simulate_gated_pump(bad, g, 1e-8), std::invalid_argument);
    bad = sc;
    bad.biases = {40.0, 40.0};
    CHECK_THROWS_AS(simulate_gated_pump(bad, g, 1e-8), std::invalid_argument);
    bad = sc;
    bad.t_total = 1e-6;  // shorter than the pulse
    CHECK_THROWS_AS(simulate_gated_pump(bad, g, 1e-8), std::invalid_argument);
}

TEST_CASE("zero drive power leaves the sheet quiescent") {
    PumpScenario sc = reference_scenario();
    sc.drive.power_w = 0.0;
    Grid1D g = make_grid(sc.layout, sc.launch_gap, kCells);
    TraceResult tr = simulate_gated_pump(sc, g, step_size(sc));
    CHECK(peak_abs(tr.i_ae) < 1e-15);        // solver roundoff only
    CHECK(std::abs(tr.delta_n.back()) < 1e-3);
    CHECK(tr.max_conservation_drift < 1e-10);  // roundoff accumulated over 1e4 steps
    const double n0 = sc.n_total / (sc.layout.span() * sc.layout.length);
    CHECK(tr.min_density == doctest::Approx(n0).epsilon(1e-9));
}

TEST_CASE("onset of the detected current is the acoustic arrival time") {
    const PumpScenario sc = reference_scenario();
    const double dt = step_size(sc);
    const double t_d = arrival_delay(sc.x_det, sc.material.v0);
    const double onset = onset_time(reference_trace());
    CHECK(std::abs(onset - t_d) <= dt);
    CHECK(onset == doctest::Approx(1.69921875e-6).epsilon(1e-9).scale(0));
}

TEST_CASE("gated drive produces a bipolar current trace") {
    const PumpScenario sc = reference_scenario();
    const TraceResult& tr = reference_trace();
    const double t_d = arrival_delay(sc.x_det, sc.material.v0);
    const double t_off = sc.drive.t_pulse + t_d;

    double on_peak = 0.0, off_min = 0.0, off_min_t = 0.0;
    for (std::size_t i = 0; i < tr.t.size(); ++i) {
        if (tr.t[i] <= t_off) on_peak = std::max(on_peak, tr.i_ae[i]);
        if (tr.t[i] > t_off && tr.i_ae[i] < off_min) {
            off_min = tr.i_ae[i];
            off_min_t = tr.t[i];
        }
    }
    CHECK(on_peak > 0.0);
    CHECK(off_min < 0.0);                    // opposite polarity after gate-off
    CHECK(off_min_t > t_off);
    CHECK(-off_min > 0.5 * on_peak);         // comparable magnitude
    CHECK(std::abs(tr.i_ae.back()) < 1e-3 * on_peak);  // fully relaxed

    // calibrated current scale: tens of pA at 0 dBm
    CHECK(on_peak > 5e-12);
    CHECK(on_peak < 1e-10);
    CHECK(on_peak == doctest::Approx(2.681222e-11).epsilon(1e-3).scale(0));
}

TEST_CASE("transported charge returns to zero over a full cycle") {
    const PumpScenario sc = reference_scenario();
    const double t_d = arrival_delay(sc.x_det, sc.material.v0);
    DeltaNResult dn = delta_N(reference_trace(), t_d, sc.drive.t_pulse);
    const double pk = peak_abs(dn.delta_n);
    CHECK(std::abs(dn.delta_n.back()) <= 1e-3 * pk);
    CHECK(dn.plateau);
    CHECK(dn.flatness < 0.05);
    CHECK(dn.sat == doctest::Approx(1145.752).epsilon(2e-3));
    // a thousand electrons pumped out of 0.7e9 stored: tiny relative depletion
    CHECK(std::abs(dn.sat) / sc.n_total < 1e-4);
}

TEST_CASE("charge is conserved and densities stay nonnegative") {
    const TraceResult& tr = reference_trace();
    CHECK(tr.max_conservation_drift < 1e-9);
    CHECK(tr.min_density >= 0.0);
    CHECK(tr.final_profile.size() == kCells);
}

TEST_CASE("runs are deterministic without any seed") {
    PumpScenario sc = reference_scenario();
    Grid1D g = make_grid(sc.layout, sc.launch_gap, kCells);
    TraceResult again = simulate_gated_pump(sc, g, step_size(sc));
    CHECK(again.hash == reference_trace().hash);
    CHECK(again.i_ae == reference_trace().i_ae);
}

TEST_CASE("response is linear in drive power") {
    const PumpScenario ref = reference_scenario();
    const double t_d = arrival_delay(ref.x_det, ref.material.v0);
    DeltaNResult base = delta_N(reference_trace(), t_d, ref.drive.t_pulse);
    const double base_peak = peak_abs(reference_trace().i_ae);

    for (double p : {0.25e-3, 2.5e-3}) {  // spans a decade around 0 dBm
        PumpScenario sc = ref;
        sc.drive.power_w = p;
        Grid1D g = make_grid(sc.layout, sc.launch_gap, kCells);
        TraceResult tr = simulate_gated_pump(sc, g, step_size(sc));
        DeltaNResult dn = delta_N(tr, t_d, sc.drive.t_pulse);
        const double scale = p / ref.drive.power_w;
        CHECK(dn.sat == doctest::Approx(base.sat * scale).epsilon(0.05));
        CHECK(peak_abs(tr.i_ae) ==
              doctest::Approx(base_peak * scale).epsilon(0.05).scale(0));
    }
}

TEST_CASE("fitted time constants sit near the distributed-RC estimate") {
    const PumpScenario sc = reference_scenario();
    const double t_d = arrival_delay(sc.x_det, sc.material.v0);
    const double transit = arrival_delay(sc.layout.span(), sc.material.v0);
    TimeConstants tc =
        fit_time_constants(reference_trace(), t_d, sc.drive.t_pulse, transit);
    CHECK(tc.pump.converged);
    CHECK(tc.rel.converged);
    CHECK(tc.pump.tau == doctest::Approx(6.0408e-6).epsilon(1e-3).scale(0));
    CHECK(tc.rel.tau == doctest::Approx(5.9119e-6).epsilon(1e-3).scale(0));
    // both within a factor of two of the 7.69 us open-ended Elmore delay
    for (double tau : {tc.pump.tau, tc.rel.tau}) {
        CHECK(tau > 0.5 * 7.69e-6);
        CHECK(tau < 2.0 * 7.69e-6);
    }

    // power independence: the transport operator does not see the drive level
    for (double p : {0.25e-3, 2.0e-3}) {
        PumpScenario s2 = sc;
        s2.drive.power_w = p;
        Grid1D g = make_grid(s2.layout, s2.launch_gap, kCells);
        TraceResult tr = simulate_gated_pump(s2, g, step_size(s2));
        TimeConstants t2 = fit_time_constants(tr, t_d, s2.drive.t_pulse, transit);
        CHECK(t2.pump.tau == doctest::Approx(tc.pump.tau).epsilon(0.15).scale(0));
        CHECK(t2.rel.tau == doctest::Approx(tc.rel.tau).epsilon(0.15).scale(0));
    }
}

TEST_CASE("halving the cell size and step changes the peak by under 2%") {
    PumpScenario sc = reference_scenario();
    Grid1D fine = make_grid(sc.layout, sc.launch_gap, 2 * kCells);
    TraceResult tr = simulate_gated_pump(sc, fine, 0.5 * step_size(sc));
    const double t_d = arrival_delay(sc.x_det, sc.material.v0);
    const double pk_coarse = peak_abs(reference_trace().i_ae);
    const double pk_fine = peak_abs(tr.i_ae);
    CHECK(std::abs(pk_coarse - pk_fine) / pk_fine < 0.02);
    DeltaNResult a = delta_N(reference_trace(), t_d, sc.drive.t_pulse);
    DeltaNResult b = delta_N(tr, t_d, sc.drive.t_pulse);
    CHECK(a.sat == doctest::Approx(b.sat).epsilon(0.01));
}

TEST_CASE("explicit update honors the diffusive stability bound") {
    PumpScenario sc = reference_scenario();
    sc.semi_implicit = false;
    Grid1D g = make_grid(sc.layout, sc.launch_gap, 32);
    const double n0 = sc.n_total / (sc.layout.span() * sc.layout.length);
    const PhysicalConstants pc;
    const double dt_max = 0.4 * g.dx * g.dx * sc.c_l / (pc.e * sc.mu * n0);

    CHECK_THROWS_WITH_AS(simulate_gated_pump(sc, g, 1.01 * dt_max),
                         doctest::Contains("need dt <="), std::invalid_argument);

    TraceResult ex = simulate_gated_pump(sc, g, 0.9 * dt_max);
    CHECK(ex.max_conservation_drift < 1e-12);
    CHECK(ex.min_density >= 0.0);

    // both one-step schemes are first order in dt, so their peak currents
    // bracket the true value; compare well inside the stability bound where
    // the O(dt) gap has shrunk below the band
    TraceResult ex3 = simulate_gated_pump(sc, g, 0.3 * dt_max);
    PumpScenario si = sc;
    si.semi_implicit = true;
    TraceResult im = simulate_gated_pump(si, g, 0.3 * dt_max);
    CHECK(peak_abs(ex3.i_ae) == doctest::Approx(peak_abs(im.i_ae)).epsilon(0.10).scale(0));
}

TEST_CASE("drift orders the profile along a bias ramp") {
    for (bool rising : {true, false}) {
        PumpScenario sc = reference_scenario();
        sc.drive.power_w = 0.0;
        sc.biases = rising ? std::vector<double>{30.0, 40.0, 50.0}
                           : std::vector<double>{50.0, 40.0, 30.0};
        sc.t_total = 40e-6;
        Grid1D g = make_grid(sc.layout, sc.launch_gap, 99);
        TraceResult tr = simulate_gated_pump(sc, g, 2e-8);
        CHECK(tr.max_conservation_drift < 1e-9);
        CHECK(tr.min_density >= 0.0);
        const double slack = 1e-9 * sc.n_total / sc.layout.area();
        for (std::size_t i = 1; i < tr.final_profile.size(); ++i) {
            const double step = tr.final_profile[i] - tr.final_profile[i - 1];
            if (rising)
                CHECK(step >= -slack);
            else
                CHECK(step <= slack);
        }
    }
}

TEST_CASE("saturation counting on a rectangular current pulse") {
    TraceResult tr;
    const double dt = 1e-8, i0 = 4e-11;
    const int steps = 4000, k0 = 100, k1 = 2100;
    tr.t.resize(steps + 1);
    tr.i_ae.assign(steps + 1, 0.0);
    for (int i = 0; i <= steps; ++i) {
        tr.t[i] = i * dt;
        if (i >= k0 && i <= k1) tr.i_ae[i] = i0;
    }
    const PhysicalConstants pc;
    // trapezoid of a grid-aligned rectangle: interior intervals plus the two
    // half-height ramp edges give i0 * (k1 - k0 + 1) * dt
    DeltaNResult dn = delta_N(tr, k0 * dt, (k1 - k0) * dt);
    const double expect = i0 * (k1 - k0 + 1) * dt / pc.e;
    CHECK(dn.delta_n.back() == doctest::Approx(expect).epsilon(1e-12));
    CHECK(dn.plateau == false);  // ramp keeps rising through the window
    // with the pulse twice as long as the window, the tail is flat
    DeltaNResult flat = delta_N(tr, k0 * dt, 2.0 * (k1 - k0) * dt);
    CHECK(flat.plateau);
    CHECK(flat.sat == doctest::Approx(expect).epsilon(1e-9));
}

TEST_CASE("window fits recover synthetic decay constants") {
    const double t_d = 1.7e-6, t_p = 30e-6, transit = 4.258e-6;
    const double tau_on = 5.0e-6, tau_off = 3.5e-6;
    TraceResult tr;
    const double dt = 5e-8;
    const int steps = 1500;  // out to 75 us
    tr.t.resize(steps + 1);
    tr.i_ae.assign(steps + 1, 0.0);
    for (int i = 0; i <= steps; ++i) {
        const double t = i * dt;
        tr.t[i] = t;
        if (t >= t_d && t <= t_p + t_d)
            tr.i_ae[i] = 3e-11 * std::exp(-(t - t_d) / tau_on) + 2e-12;
        else if (t > t_p + t_d)
            tr.i_ae[i] = -2.5e-11 * std::exp(-(t - t_p - t_d) / tau_off);
    }
    TimeConstants tc = fit_time_constants(tr, t_d, t_p, transit);
    CHECK(tc.pump.converged);
    CHECK(tc.pump.tau == doctest::Approx(tau_on).epsilon(1e-6).scale(0));
    CHECK(tc.pump.offset == doctest::Approx(2e-12).epsilon(1e-4).scale(0));
    CHECK(tc.rel.converged);
    CHECK(tc.rel.tau == doctest::Approx(tau_off).epsilon(1e-6).scale(0));

    TraceResult stub;
    stub.t = {0.0, 1e-6};
    stub.i_ae = {0.0, 0.0};
    CHECK_THROWS_AS(fit_time_constants(stub, t_d, t_p, transit),
                    std::invalid_argument);
}
