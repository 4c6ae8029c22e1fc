#pragma once

#include <vector>

#include "sawhe/constants.hpp"

// Electrostatics of the electron layer above a row of biased electrodes.
// The layer is treated as an equipotential conductor capacitively coupled
// to each electrode through the same layered dielectric stack.

namespace sawhe {

struct ElectrodeStack {
    double d_g = 70e-6;   // helium-filled gap between electrodes and substrate [m]
    double d_s = 0.5e-3;  // substrate thickness [m]
    double eps11 = 44.3;  // substrate permittivity tensor components
    double eps33 = 27.6;
    double eps13 = 0.0;
    double d_film = 0.0;  // helium film above the substrate [m]
};

struct ElectrodeLayout {
    double width = 4.95e-3;  // electrode extent along transport [m]
    double length = 9e-3;    // transverse extent [m]
    int count = 3;           // source, gate, drain
    double area() const { return width * length; }
    double span() const { return width * count; }
};

struct BiasConfig {
    double v_source = 40.0;  // [V]
    double v_gate = 40.0;
    double v_drain = 40.0;
    double v_guard = -3.2;   // confinement only; no capacitive role in the model
};

// Densities over each electrode plus the common layer potential.
struct DensityProfile {
    std::vector<double> n;  // [1/m^2], one entry per electrode
    double v_e = 0.0;       // electron layer potential [V]
};

// Effective permittivity of an anisotropic half-space: sqrt(e11*e33 - e13^2).
double effective_substrate_permittivity(const ElectrodeStack& s);

// Series capacitance per area between layer and electrode plane [F/m^2].
double layer_capacitance(const ElectrodeStack& s, const PhysicalConstants& pc = {});

// Uniform density from a symmetric three-electrode bias sweep offset:
// n = (2 c_l / 3e) dV. Inverse provided for convenience.
double density_from_sweep(double c_l, double delta_v, const PhysicalConstants& pc = {});
double sweep_from_density(double c_l, double n, const PhysicalConstants& pc = {});

// Charge-balance equilibrium: find V_e with
//   n_i = (c_l/e) max(0, V_i - V_e),  sum_i A_i n_i = N_total.
// Bisection to 1e-12 relative charge balance. N_total must be >= 0.
DensityProfile equilibrium_density(const ElectrodeLayout& layout,
                                   const std::vector<double>& biases,
                                   double n_total, double c_l,
                                   const PhysicalConstants& pc = {});

// Smallest gate bias at which the gate region starts to charge, i.e. the
// layer potential of the source/drain-only equilibrium.
double fet_threshold(const ElectrodeLayout& layout, double v_source, double v_drain,
                     double n_total, double c_l, const PhysicalConstants& pc = {});

struct TransferPoint {
    double v_g = 0.0;       // [V]
    double current = 0.0;   // transfer current magnitude [A]
    DensityProfile profile;
};

// Gate sweep of the capacitively coupled FET: equilibrium density per point,
// then the sheet conductivities feed the distributed-RC transfer model.
std::vector<TransferPoint> fet_transfer_curve(
    const ElectrodeLayout& layout, double v_source, double v_drain,
    const std::vector<double>& v_gate_grid, double n_total, double c_l, double mu,
    double v_ex, double frequency, int nodes, const PhysicalConstants& pc = {});

}  // namespace sawhe
