#pragma once

#include <cstdint>
#include <vector>

#include "sawhe/constants.hpp"
#include "sawhe/electrostatics.hpp"
#include "sawhe/fitkit.hpp"
#include "sawhe/saw_device.hpp"

// Time-domain 1D transport of the electron sheet under a gated traveling
// SAW drive: continuity equation with upwinded drift, self-consistent
// restoring diffusion (D = sigma/c_l), and a traveling drive window per
// cell. Detection is the electron flux crossing a configurable boundary,
// equal to the rate of change of image charge behind it.

namespace sawhe {

struct Grid1D {
    int cells = 0;
    double dx = 0.0;             // [m]
    double x0 = 0.0;             // sheet entry, measured from the launcher [m]
    std::vector<int> electrode;  // electrode index per cell
};

// Uniform cells over the electrode span, x measured from the launcher IDT.
Grid1D make_grid(const ElectrodeLayout& layout, double launch_gap, int cells);

struct PumpScenario {
    SawDrive drive;                    // gated envelope, power, frequency
    SawMaterial material;
    IdtSpec idt;
    ElectrodeLayout layout;
    std::vector<double> biases = {40.0, 40.0, 40.0};  // [V]
    double n_total = 0.8e9;            // electrons on the sheet
    double mu = 0.52;                  // [m^2/Vs]
    double c_l = 1.08e-7;              // [F/m^2]
    double launch_gap = 0.9796e-3;     // launcher to sheet edge [m]
    double x_det = 5.9296e-3;          // detection boundary from launcher [m]
    double k2_eff = 3e-4;              // evanescent coupling to the floating sheet
    double drive_scale = 8e-6;         // drive normalization, calibrated to the
                                       // measured tens-of-pA current scale
    double t_total = 75e-6;            // [s]
    bool semi_implicit = true;         // explicit update needs the dt bound
};

struct TraceResult {
    std::vector<double> t;        // [s], strictly increasing, t[0] = 0
    std::vector<double> i_ae;     // [A], positive = electrons entering detection
    std::vector<double> delta_n;  // transported electrons, delta_n[0] = 0
    double power_w = 0.0;
    double t_pulse = 0.0;
    std::uint64_t hash = 0;       // seed-free determinism fingerprint
    // per-step diagnostics accumulated during the run
    double max_conservation_drift = 0.0;  // relative charge imbalance
    double min_density = 0.0;             // most negative cell density seen
    std::vector<double> final_profile;    // [1/m^2] per cell at t_total
};

// Leading-edge arrival time distance/v.
double arrival_delay(double distance, double v);

// Integrate the gated pump. dt must be positive; the explicit scheme
// additionally requires dt <= 0.4 dx^2 c_l / sigma_max and reports the
// admissible maximum when violated.
TraceResult simulate_gated_pump(const PumpScenario& scenario, const Grid1D& grid,
                                double dt, const PhysicalConstants& pc = {});

struct DeltaNResult {
    std::vector<double> delta_n;  // running transported-electron count
    double sat = 0.0;             // plateau value (mean of last on-quarter)
    double flatness = 0.0;        // (max-min)/|sat| over the plateau window
    bool plateau = false;         // flatness below 5%
};

// Trapezoidal integral of i_ae/e with plateau detection over the final
// quarter of the drive-on window [t_d, t_d + t_pulse].
DeltaNResult delta_N(const TraceResult& trace, double t_d, double t_pulse);

// Time of the steepest positive step of i_ae: the leading-edge drive jump
// at the detection boundary.
double onset_time(const TraceResult& trace);

struct TimeConstants {
    fit::ExpFitResult pump;  // decay during the drive-on window
    fit::ExpFitResult rel;   // relaxation after the trailing edge passes
};

// Exponential fits over [t_d + transit, t_p] and [t_p + t_d + transit, end].
TimeConstants fit_time_constants(const TraceResult& trace, double t_d, double t_p,
                                 double transit);

}  // namespace sawhe
