#include "sawhe/pump_sim.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "sawhe/hash.hpp"
#include "sawhe/tridiag.hpp"

namespace sawhe {

using std::numbers::pi;

Grid1D make_grid(const ElectrodeLayout& layout, double launch_gap, int cells) {
    if (cells < 16) throw std::invalid_argument("make_grid: need at least 16 cells");
    if (launch_gap < 0.0) throw std::invalid_argument("make_grid: negative gap");
    Grid1D g;
    g.cells = cells;
    g.dx = layout.span() / cells;
    g.x0 = launch_gap;
    g.electrode.resize(cells);
    for (int i = 0; i < cells; ++i) {
        const double center = (i + 0.5) * g.dx;
        int e = static_cast<int>(center / layout.width);
        g.electrode[i] = std::min(e, layout.count - 1);
    }
    return g;
}

double arrival_delay(double distance, double v) {
    if (distance < 0.0 || v <= 0.0)
        throw std::invalid_argument("arrival_delay: need distance >= 0, v > 0");
    return distance / v;
}

namespace {

// overlap of [a0, a1] with [b0, b1] as a fraction of [a0, a1]
double overlap_fraction(double a0, double a1, double b0, double b1) {
    const double lo = std::max(a0, b0), hi = std::min(a1, b1);
    return hi > lo ? (hi - lo) / (a1 - a0) : 0.0;
}

}  // namespace

TraceResult simulate_gated_pump(const PumpScenario& sc, const Grid1D& grid,
                                double dt, const PhysicalConstants& pc) {
    const int m = grid.cells;
    if (m < 16 || static_cast<int>(grid.electrode.size()) != m)
        throw std::invalid_argument("simulate_gated_pump: bad grid");
    if (dt <= 0.0) throw std::invalid_argument("simulate_gated_pump: dt <= 0");
    if (sc.drive.t_pulse <= 0.0)
        throw std::invalid_argument("simulate_gated_pump: t_pulse <= 0");
    if (sc.t_total < sc.drive.t_pulse)
        throw std::invalid_argument("simulate_gated_pump: t_total < t_pulse");
    if (sc.n_total < 0.0)
        throw std::invalid_argument("simulate_gated_pump: negative electron count");
    if (sc.mu <= 0.0 || sc.c_l <= 0.0)
        throw std::invalid_argument("simulate_gated_pump: need mu, c_l > 0");
    if (static_cast<int>(sc.biases.size()) != sc.layout.count)
        throw std::invalid_argument("simulate_gated_pump: one bias per electrode");
    const double span = sc.layout.span();
    if (sc.x_det <= grid.x0 || sc.x_det >= grid.x0 + span)
        throw std::invalid_argument("simulate_gated_pump: x_det outside the sheet");

    const double w = sc.layout.length;
    const double dx = grid.dx;
    const double v = sc.material.v0;

    // initial condition: electrostatic equilibrium over the biased electrodes
    const DensityProfile eq =
        equilibrium_density(sc.layout, sc.biases, sc.n_total, sc.c_l, pc);
    Eigen::VectorXd n(m);
    for (int i = 0; i < m; ++i) n[i] = eq.n[grid.electrode[i]];

    const double sigma_max0 = pc.e * sc.mu * n.maxCoeff();
    if (!sc.semi_implicit && sigma_max0 > 0.0) {
        const double dt_max = 0.4 * dx * dx * sc.c_l / sigma_max0;
        if (dt > dt_max) {
            std::ostringstream msg;
            msg << "simulate_gated_pump: explicit scheme unstable, need dt <= "
                << dt_max << " s (got " << dt << " s)";
            throw std::invalid_argument(msg.str());
        }
    }

    // drive coupling: the evanescent field above the surface couples far
    // more weakly than the bulk K^2; k2_eff absorbs that reduction
    SawMaterial eff = sc.material;
    eff.k2 = sc.k2_eff;
    const double k_wave = 2.0 * pi * sc.drive.frequency / v;

    // per-cell electrode potential for the drift term
    Eigen::VectorXd v_el(m);
    for (int i = 0; i < m; ++i) v_el[i] = sc.biases[grid.electrode[i]];

    const int steps = static_cast<int>(std::llround(sc.t_total / dt));
    const int f_det = std::clamp(
        static_cast<int>(std::llround((sc.x_det - grid.x0) / dx)), 1, m - 1);

    TraceResult out;
    out.power_w = sc.drive.power_w;
    out.t_pulse = sc.drive.t_pulse;
    out.t.resize(steps + 1);
    out.i_ae.assign(steps + 1, 0.0);
    out.delta_n.assign(steps + 1, 0.0);
    out.min_density = n.minCoeff();

    const double n_ref = sc.n_total / (span * w) + 1.0;
    const double charge0 = n.sum() * dx;

    Eigen::VectorXd gamma(m), att(m + 1), d_face(m), u_face(m), phi_saw(m);
    Eigen::VectorXd lower(m), upper(m), rhs(m);
    Eigen::VectorXd diag(m);

    // face arrays indexed by the left cell: face f sits between cells f-1, f
    for (int f = 1; f < m; ++f)
        u_face[f] = sc.mu * (v_el[f] - v_el[f - 1]) / dx;

    for (int step = 0; step <= steps; ++step) out.t[step] = step * dt;

    for (int step = 0; step < steps; ++step) {
        const double t_now = out.t[step];
        const double t_next = out.t[step + 1];

        // quasi-static electronic attenuation along the current profile
        for (int i = 0; i < m; ++i)
            gamma[i] = electronic_attenuation(k_wave, eff, pc.e * sc.mu * n[i]);
        att[0] = std::exp(-sc.material.gamma_he * grid.x0);
        for (int f = 1; f <= m; ++f)
            att[f] = att[f - 1] *
                     std::exp(-(gamma[f - 1] + sc.material.gamma_he) * dx);

        // traveling gated drive, donor-cell form, positivity-limited
        for (int f = 1; f < m; ++f) {
            const double x_f = grid.x0 + f * dx;
            const double frac = overlap_fraction(t_now, t_next, x_f / v,
                                                 x_f / v + sc.drive.t_pulse);
            if (frac == 0.0 || sc.drive.power_w == 0.0) {
                phi_saw[f] = 0.0;
                continue;
            }
            const double intensity =
                sc.idt.alpha_l * sc.drive.power_w / sc.idt.aperture * att[f];
            const double j_ae =
                acoustoelectric_drive(sc.mu, v, gamma[f - 1], intensity);
            double phi = sc.drive_scale * j_ae / pc.e * frac;
            phi = std::min(phi, 0.5 * n[f - 1] * dx / dt);
            phi_saw[f] = phi;
        }

        for (int f = 1; f < m; ++f)
            d_face[f] = pc.e * sc.mu * 0.5 * (n[f - 1] + n[f]) / sc.c_l;

        const auto saw = [&](int f) {
            return (f >= 1 && f < m) ? phi_saw[f] : 0.0;  // zero-flux walls
        };

        if (sc.semi_implicit) {
            // backward-Euler drift and diffusion with coefficients frozen at
            // the current profile; rows form an M-matrix, so the update
            // preserves nonnegativity of the limited right-hand side
            for (int i = 0; i < m; ++i) {
                double di = dx / dt;
                double lo = 0.0, up = 0.0;
                double r = dx / dt * n[i] - (saw(i + 1) - saw(i));
                if (i > 0) {
                    const double u = u_face[i], dc = d_face[i] / dx;
                    di += std::max(-u, 0.0) + dc;
                    lo = -(std::max(u, 0.0) + dc);
                }
                if (i + 1 < m) {
                    const double u = u_face[i + 1], dc = d_face[i + 1] / dx;
                    di += std::max(u, 0.0) + dc;
                    up = -(std::max(-u, 0.0) + dc);
                }
                diag[i] = di;
                lower[i] = lo;
                upper[i] = up;
                rhs[i] = r;
            }
            n = solve_tridiagonal<double>(lower, diag, upper, rhs);
        } else {
            Eigen::VectorXd flux = Eigen::VectorXd::Zero(m + 1);
            for (int f = 1; f < m; ++f) {
                const double up_n = u_face[f] >= 0.0 ? n[f - 1] : n[f];
                flux[f] = u_face[f] * up_n -
                          d_face[f] * (n[f] - n[f - 1]) / dx + phi_saw[f];
            }
            for (int i = 0; i < m; ++i)
                n[i] -= dt / dx * (flux[i + 1] - flux[i]);
        }

        // diagnostics and tiny-negative cleanup (roundoff only)
        double n_min = n.minCoeff();
        out.min_density = std::min(out.min_density, n_min);
        if (n_min < -1e-9 * n_ref) {
            std::ostringstream msg;
            msg << "simulate_gated_pump: negative density " << n_min << " at t="
                << t_next;
            throw std::runtime_error(msg.str());
        }
        n = n.cwiseMax(0.0);
        out.max_conservation_drift =
            std::max(out.max_conservation_drift,
                     std::abs(n.sum() * dx - charge0) / (charge0 + 1e-300));

        // detection: electron flux crossing the boundary face, evaluated on
        // the updated profile for the implicit terms
        const double f_drift = u_face[f_det] * (u_face[f_det] >= 0.0
                                                    ? n[f_det - 1]
                                                    : n[f_det]);
        const double f_diff = -d_face[f_det] * (n[f_det] - n[f_det - 1]) / dx;
        out.i_ae[step + 1] = pc.e * w * (f_drift + f_diff + phi_saw[f_det]);
    }

    for (int step = 1; step <= steps; ++step)
        out.delta_n[step] = out.delta_n[step - 1] +
                            0.5 * (out.i_ae[step] + out.i_ae[step - 1]) * dt / pc.e;

    out.final_profile.assign(n.data(), n.data() + m);

    std::uint64_t h = fnv1a_seed;
    for (double t : out.t) h = fnv1a_append(h, t);
    for (double i : out.i_ae) h = fnv1a_append(h, i);
    out.hash = h;
    return out;
}

DeltaNResult delta_N(const TraceResult& trace, double t_d, double t_pulse) {
    const std::size_t k = trace.t.size();
    if (k < 2 || trace.i_ae.size() != k)
        throw std::invalid_argument("delta_N: malformed trace");
    DeltaNResult out;
    out.delta_n.assign(k, 0.0);
    const PhysicalConstants pc;
    for (std::size_t i = 1; i < k; ++i)
        out.delta_n[i] = out.delta_n[i - 1] +
                         0.5 * (trace.i_ae[i] + trace.i_ae[i - 1]) *
                             (trace.t[i] - trace.t[i - 1]) / pc.e;

    const double w_lo = t_d + 0.75 * t_pulse, w_hi = t_d + t_pulse;
    double acc = 0.0, mn = 0.0, mx = 0.0;
    std::size_t count = 0;
    for (std::size_t i = 0; i < k; ++i) {
        if (trace.t[i] < w_lo || trace.t[i] > w_hi) continue;
        const double d = out.delta_n[i];
        if (count == 0) {
            mn = mx = d;
        } else {
            mn = std::min(mn, d);
            mx = std::max(mx, d);
        }
        acc += d;
        ++count;
    }
    if (count == 0) {
        out.sat = out.delta_n.back();
        out.plateau = false;
        out.flatness = std::numeric_limits<double>::infinity();
        return out;
    }
    out.sat = acc / double(count);
    out.flatness = (mx - mn) / std::max(std::abs(out.sat), 1e-300);
    out.plateau = count >= 4 && out.flatness < 0.05;
    return out;
}

double onset_time(const TraceResult& trace) {
    const std::size_t k = trace.t.size();
    if (k < 2) throw std::invalid_argument("onset_time: trace too short");
    std::size_t best = 1;
    double best_jump = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i + 1 < k; ++i) {
        const double jump = trace.i_ae[i + 1] - trace.i_ae[i];
        if (jump > best_jump) {
            best_jump = jump;
            best = i + 1;
        }
    }
    return trace.t[best];
}

TimeConstants fit_time_constants(const TraceResult& trace, double t_d, double t_p,
                                 double transit) {
    const std::size_t k = trace.t.size();
    if (k < 16) throw std::invalid_argument("fit_time_constants: trace too short");

    const auto window_fit = [&](double lo, double hi) {
        std::vector<double> tw, iw;
        for (std::size_t i = 0; i < k; ++i) {
            if (trace.t[i] < lo || trace.t[i] > hi) continue;
            tw.push_back(trace.t[i]);
            iw.push_back(trace.i_ae[i]);
        }
        if (tw.size() < 8)
            throw std::invalid_argument(
                "fit_time_constants: decay window has fewer than 8 samples");
        Eigen::VectorXd te = Eigen::Map<Eigen::VectorXd>(tw.data(), tw.size());
        Eigen::VectorXd ie = Eigen::Map<Eigen::VectorXd>(iw.data(), iw.size());
        return fit::exp_fit(te, ie, true);
    };

    TimeConstants out;
    out.pump = window_fit(t_d + transit, t_p);
    out.rel = window_fit(t_p + t_d + transit, trace.t.back());
    return out;
}

}  // namespace sawhe
