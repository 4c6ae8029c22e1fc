#pragma once

#include <Eigen/Dense>
#include <complex>
#include <string>
#include <vector>

#include "sawhe/constants.hpp"
#include "sawhe/electrostatics.hpp"

// Distributed-RC description of the electron layer: sheet resistance along
// the transport direction, capacitance per area down to the biased
// electrodes. Drive is injected capacitively under the source electrode and
// the drain current is read at virtual ground (transimpedance detection).

namespace sawhe {

struct RcLadder {
    int nodes = 0;             // N cells of width dx = span/N
    double dx = 0.0;           // [m]
    double width = 0.0;        // transverse width W [m]
    Eigen::VectorXd c_source;  // per-node capacitance to the source electrode [F]
    Eigen::VectorXd c_gate;    // ... to the gate (AC ground) [F]
    Eigen::VectorXd c_drain;   // ... to the drain (virtual ground) [F]
    Eigen::VectorXd g_series;  // node-to-node conductance [S], size N-1, 0 = open
    bool conducting = false;   // at least one resistive link
};

struct FreqResponse {
    std::vector<double> f_hz;
    std::vector<std::complex<double>> current;  // drain current per frequency [A]
};

// Uniform sheet: r = 1/(sigma W) per length, c = c_l W per length.
// sigma and the node count must be positive.
RcLadder build_ladder(double sigma, double c_l, const ElectrodeLayout& layout,
                      int nodes);

// Per-electrode densities (e.g. an equilibrium profile); depleted segments
// become open circuits. mu converts density to sheet conductivity.
RcLadder build_ladder_profile(const std::vector<double>& n_per_segment, double mu,
                              double c_l, const ElectrodeLayout& layout, int nodes,
                              const PhysicalConstants& pc = {});

// Complex drain current at one frequency (f > 0). Solves the tridiagonal
// nodal system; a fully depleted line yields an explicit zero.
std::complex<double> frequency_response(const RcLadder& ladder, double f,
                                        double v_ex);

FreqResponse frequency_sweep(const RcLadder& ladder,
                             const std::vector<double>& f_hz, double v_ex);

struct SigmaFit {
    double sigma = 0.0;      // [S]
    bool converged = false;
    int iterations = 0;
    double residual_norm = 0.0;
    std::string message;
};

// Recover sheet conductivity from a measured transfer curve by least
// squares against the ladder model. sigma0 seeds the search; data with no
// frequency dependence is rejected as unidentifiable.
SigmaFit fit_conductivity(const FreqResponse& data, double c_l,
                          const ElectrodeLayout& layout, int nodes, double v_ex,
                          double sigma0);

// Distributed delay of an N-section RC ladder:
// tau = r (c_l W) L^2 (1+N)/(2N)  ->  R_tot C_tot / 2 for large N.
double elmore_delay(double r_per_m, double c_l, double line_length, double width,
                    int sections);

// Drude estimate mu = sigma / (n e)  [m^2/Vs]
double mobility_from_sigma(double sigma, double n, const PhysicalConstants& pc = {});

// Gas-atom collision rate limiting the mobility: 1/tau = e / (mu m_e)  [1/s]
double vapor_collision_rate(double mu, const PhysicalConstants& pc = {});

}  // namespace sawhe
