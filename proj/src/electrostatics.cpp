#include "sawhe/electrostatics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "sawhe/txline.hpp"

namespace sawhe {

double effective_substrate_permittivity(const ElectrodeStack& s) {
    const double det = s.eps11 * s.eps33 - s.eps13 * s.eps13;
    if (det <= 0.0)
        throw std::invalid_argument("substrate permittivity tensor not positive");
    return std::sqrt(det);
}

double layer_capacitance(const ElectrodeStack& s, const PhysicalConstants& pc) {
    if (s.d_g <= 0.0 || s.d_s < 0.0 || s.d_film < 0.0)
        throw std::invalid_argument("layer_capacitance: bad stack geometry");
    const double eps_s = effective_substrate_permittivity(s);
    const double t = s.d_g / pc.eps_he + s.d_s / eps_s + s.d_film / pc.eps_he;
    return pc.eps0 / t;
}

double density_from_sweep(double c_l, double delta_v, const PhysicalConstants& pc) {
    return 2.0 * c_l * delta_v / (3.0 * pc.e);
}

double sweep_from_density(double c_l, double n, const PhysicalConstants& pc) {
    return 3.0 * pc.e * n / (2.0 * c_l);
}

namespace {

// total electron count held at layer potential v_e (non-increasing in v_e)
double count_at(double v_e, const std::vector<double>& biases, double area,
                double c_l, double e) {
    double total = 0.0;
    for (double v : biases) total += area * c_l / e * std::max(0.0, v - v_e);
    return total;
}

}  // namespace

DensityProfile equilibrium_density(const ElectrodeLayout& layout,
                                   const std::vector<double>& biases,
                                   double n_total, double c_l,
                                   const PhysicalConstants& pc) {
    if (biases.empty())
        throw std::invalid_argument("equilibrium_density: no electrodes");
    if (n_total < 0.0)
        throw std::invalid_argument("equilibrium_density: negative electron count");
    if (c_l <= 0.0) throw std::invalid_argument("equilibrium_density: c_l <= 0");
    const double area = layout.area();

    DensityProfile prof;
    prof.n.assign(biases.size(), 0.0);
    const double v_max = *std::max_element(biases.begin(), biases.end());
    if (n_total == 0.0) {
        prof.v_e = v_max;
        return prof;
    }

    // Bracket: count(v_max) = 0 < N; pushing v_e below every bias by the
    // total-charge offset guarantees count >= N.
    double hi = v_max;
    double lo = *std::min_element(biases.begin(), biases.end()) -
                n_total * pc.e / (c_l * area * biases.size()) - 1.0;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (count_at(mid, biases, area, c_l, pc.e) > n_total)
            lo = mid;
        else
            hi = mid;
        if (std::abs(count_at(lo, biases, area, c_l, pc.e) - n_total) <=
            1e-14 * n_total)
            break;
    }
    // lo and hi straddle the root within ~1e-60 of the bracket; either endpoint
    // meets the 1e-12 charge-balance contract
    prof.v_e = 0.5 * (lo + hi);
    for (size_t i = 0; i < biases.size(); ++i)
        prof.n[i] = c_l / pc.e * std::max(0.0, biases[i] - prof.v_e);
    return prof;
}

double fet_threshold(const ElectrodeLayout& layout, double v_source, double v_drain,
                     double n_total, double c_l, const PhysicalConstants& pc) {
    // the gate begins to charge once it rises above the layer potential set
    // by the source/drain-only equilibrium
    const DensityProfile sd = equilibrium_density(layout, {v_source, v_drain},
                                                  n_total, c_l, pc);
    return sd.v_e;
}

std::vector<TransferPoint> fet_transfer_curve(
    const ElectrodeLayout& layout, double v_source, double v_drain,
    const std::vector<double>& v_gate_grid, double n_total, double c_l, double mu,
    double v_ex, double frequency, int nodes, const PhysicalConstants& pc) {
    std::vector<TransferPoint> out;
    out.reserve(v_gate_grid.size());
    for (double vg : v_gate_grid) {
        TransferPoint pt;
        pt.v_g = vg;
        pt.profile = equilibrium_density(layout, {v_source, vg, v_drain}, n_total,
                                         c_l, pc);
        const RcLadder lad =
            build_ladder_profile(pt.profile.n, mu, c_l, layout, nodes, pc);
        pt.current = std::abs(frequency_response(lad, frequency, v_ex));
        out.push_back(std::move(pt));
    }
    return out;
}

}  // namespace sawhe
