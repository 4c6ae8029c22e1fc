#include "sawhe/txline.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "sawhe/fitkit.hpp"
#include "sawhe/tridiag.hpp"

namespace sawhe {

using std::numbers::pi;
using Complex = std::complex<double>;

namespace {

// Resistance of the sheet between positions a and b, walking the piecewise
// constant conductivity regions. Returns infinity across a depleted stretch.
double path_resistance(double a, double b, const std::vector<double>& sigma_seg,
                       double seg_width, double w) {
    double r = 0.0;
    for (size_t s = 0; s < sigma_seg.size(); ++s) {
        const double lo = s * seg_width, hi = (s + 1) * seg_width;
        const double len = std::min(b, hi) - std::max(a, lo);
        if (len <= 0.0) continue;
        if (sigma_seg[s] <= 0.0) return std::numeric_limits<double>::infinity();
        r += len / (sigma_seg[s] * w);
    }
    return r;
}

RcLadder assemble(const std::vector<double>& sigma_seg, double c_l,
                  const ElectrodeLayout& layout, int nodes) {
    if (nodes < 1) throw std::invalid_argument("build_ladder: need at least one node");
    if (c_l <= 0.0) throw std::invalid_argument("build_ladder: c_l must be positive");
    if (static_cast<int>(sigma_seg.size()) != layout.count)
        throw std::invalid_argument("build_ladder: one conductivity per electrode");

    RcLadder lad;
    lad.nodes = nodes;
    lad.width = layout.length;
    lad.dx = layout.span() / nodes;
    lad.c_source = Eigen::VectorXd::Zero(nodes);
    lad.c_gate = Eigen::VectorXd::Zero(nodes);
    lad.c_drain = Eigen::VectorXd::Zero(nodes);
    lad.g_series = Eigen::VectorXd::Zero(std::max(nodes - 1, 0));

    const double c_per_len = c_l * lad.width;
    for (int i = 0; i < nodes; ++i) {
        const double x0 = i * lad.dx, x1 = (i + 1) * lad.dx;
        // split the cell capacitance by overlap with each electrode
        for (int s = 0; s < layout.count; ++s) {
            const double lo = s * layout.width, hi = (s + 1) * layout.width;
            const double len = std::min(x1, hi) - std::max(x0, lo);
            if (len <= 0.0) continue;
            const double c = c_per_len * len;
            if (s == 0) lad.c_source[i] += c;
            else if (s == layout.count - 1) lad.c_drain[i] += c;
            else lad.c_gate[i] += c;
        }
    }
    for (int i = 0; i + 1 < nodes; ++i) {
        const double r = path_resistance((i + 0.5) * lad.dx, (i + 1.5) * lad.dx,
                                         sigma_seg, layout.width, lad.width);
        lad.g_series[i] = std::isfinite(r) ? 1.0 / r : 0.0;
        if (lad.g_series[i] > 0.0) lad.conducting = true;
    }
    if (nodes == 1) lad.conducting = true;  // single lumped cell, no internal link
    return lad;
}

}  // namespace

RcLadder build_ladder(double sigma, double c_l, const ElectrodeLayout& layout,
                      int nodes) {
    if (sigma <= 0.0)
        throw std::invalid_argument("build_ladder: sigma must be positive");
    return assemble(std::vector<double>(layout.count, sigma), c_l, layout, nodes);
}

RcLadder build_ladder_profile(const std::vector<double>& n_per_segment, double mu,
                              double c_l, const ElectrodeLayout& layout, int nodes,
                              const PhysicalConstants& pc) {
    if (mu <= 0.0) throw std::invalid_argument("build_ladder_profile: mu <= 0");
    std::vector<double> sigma(n_per_segment.size());
    for (size_t i = 0; i < sigma.size(); ++i) {
        if (n_per_segment[i] < 0.0)
            throw std::invalid_argument("build_ladder_profile: negative density");
        sigma[i] = n_per_segment[i] * pc.e * mu;
    }
    return assemble(sigma, c_l, layout, nodes);
}

std::complex<double> frequency_response(const RcLadder& ladder, double f,
                                        double v_ex) {
    if (f <= 0.0) throw std::invalid_argument("frequency_response: f must be > 0");
    const int n = ladder.nodes;
    if (n == 0) throw std::invalid_argument("frequency_response: empty ladder");
    const Complex jw(0.0, 2.0 * pi * f);

    using VecC = Eigen::VectorXcd;
    VecC lower = VecC::Zero(n), diag = VecC::Zero(n), upper = VecC::Zero(n),
         rhs = VecC::Zero(n);
    for (int i = 0; i < n; ++i) {
        double g_l = (i > 0) ? ladder.g_series[i - 1] : 0.0;
        double g_r = (i + 1 < n) ? ladder.g_series[i] : 0.0;
        diag[i] = g_l + g_r +
                  jw * (ladder.c_source[i] + ladder.c_gate[i] + ladder.c_drain[i]);
        if (i > 0) lower[i] = -ladder.g_series[i - 1];
        if (i + 1 < n) upper[i] = -ladder.g_series[i];
        rhs[i] = jw * ladder.c_source[i] * v_ex;
    }
    const VecC v = solve_tridiagonal<Complex>(lower, diag, upper, rhs);
    Complex i_drain(0.0, 0.0);
    for (int i = 0; i < n; ++i) i_drain += jw * ladder.c_drain[i] * v[i];
    return i_drain;
}

FreqResponse frequency_sweep(const RcLadder& ladder,
                             const std::vector<double>& f_hz, double v_ex) {
    FreqResponse out;
    out.f_hz = f_hz;
    out.current.reserve(f_hz.size());
    for (double f : f_hz) out.current.push_back(frequency_response(ladder, f, v_ex));
    return out;
}

SigmaFit fit_conductivity(const FreqResponse& data, double c_l,
                          const ElectrodeLayout& layout, int nodes, double v_ex,
                          double sigma0) {
    SigmaFit out;
    const size_t m = data.f_hz.size();
    if (m < 3) {
        out.message = "need at least 3 frequency points";
        return out;
    }
    if (sigma0 <= 0.0) {
        out.message = "initial sigma must be positive";
        return out;
    }
    double amin = std::numeric_limits<double>::infinity(), amax = 0.0;
    for (const auto& z : data.current) {
        amin = std::min(amin, std::abs(z));
        amax = std::max(amax, std::abs(z));
    }
    if (!(amax > 0.0) || (amax - amin) < 1e-9 * amax) {
        out.message = "flat response: conductivity not identifiable";
        return out;
    }

    fit::FitProblem prob;
    prob.x0 = Eigen::VectorXd::Constant(1, sigma0);
    prob.lower = Eigen::VectorXd::Constant(1, sigma0 * 1e-6);
    prob.upper = Eigen::VectorXd::Constant(1, sigma0 * 1e6);
    prob.residual = [&](const Eigen::VectorXd& x) {
        const RcLadder lad = build_ladder(x[0], c_l, layout, nodes);
        Eigen::VectorXd r(2 * m);
        for (size_t i = 0; i < m; ++i) {
            const Complex model = frequency_response(lad, data.f_hz[i], v_ex);
            r[2 * i] = model.real() - data.current[i].real();
            r[2 * i + 1] = model.imag() - data.current[i].imag();
        }
        return r;
    };
    const fit::FitResult r = fit::least_squares(prob);
    out.sigma = r.x[0];
    out.converged = r.converged;
    out.iterations = r.iterations;
    out.residual_norm = r.residual_norm;
    if (!r.converged) out.message = "fit did not converge";
    return out;
}

double elmore_delay(double r_per_m, double c_l, double line_length, double width,
                    int sections) {
    if (sections < 1) throw std::invalid_argument("elmore_delay: sections < 1");
    const double c_per_m = c_l * width;
    return r_per_m * c_per_m * line_length * line_length * (1.0 + sections) /
           (2.0 * sections);
}

double mobility_from_sigma(double sigma, double n, const PhysicalConstants& pc) {
    if (sigma < 0.0 || n <= 0.0)
        throw std::invalid_argument("mobility_from_sigma: need sigma >= 0, n > 0");
    return sigma / (n * pc.e);
}

double vapor_collision_rate(double mu, const PhysicalConstants& pc) {
    if (mu <= 0.0) throw std::invalid_argument("vapor_collision_rate: mu <= 0");
    return pc.e / (mu * pc.m_e);
}

}  // namespace sawhe
