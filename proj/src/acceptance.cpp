#include "sawhe/acceptance.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdarg>
#include <cstdio>
#include <limits>
#include <numbers>
#include <random>
#include <vector>

#include "sawhe/electrostatics.hpp"
#include "sawhe/fitkit.hpp"
#include "sawhe/helium_film.hpp"
#include "sawhe/pump_sim.hpp"
#include "sawhe/saw_device.hpp"
#include "sawhe/txline.hpp"

namespace sawhe {

namespace {

using std::numbers::pi;

std::string fmt(const char* f, ...) {
    char buf[256];
    va_list ap;
    va_start(ap, f);
    std::vsnprintf(buf, sizeof buf, f, ap);
    va_end(ap);
    return buf;
}

bool within(double value, double target, double rel) {
    return std::abs(value - target) <= rel * std::abs(target);
}

// ---- criterion 1: helium film thickness anchors ----
CriterionResult film_thickness() {
    CriterionResult r{1, "film thickness at the working depth"};
    const double d0 = neutral_thickness(0.2e-3);
    const double d = charged_thickness(0.2e-3, 0.8e13);
    r.pass = within(d0, 77e-9, 1e-9) && d >= 71e-9 && d <= 73e-9;
    r.detail = fmt("d0 = %.2f nm (want 77), charged d = %.2f nm (want 72 +- 1)",
                   d0 * 1e9, d * 1e9);
    return r;
}

// ---- criterion 2: layer capacitance and substrate permittivity ----
CriterionResult capacitance() {
    CriterionResult r{2, "layer capacitance of the electrode stack"};
    const ElectrodeStack stack;  // the measured device stack
    const double eps_s = effective_substrate_permittivity(stack);
    const double c_l = layer_capacitance(stack);
    r.pass = within(c_l, 1.08e-7, 0.02) && std::abs(eps_s - 35.0) <= 0.1;
    r.detail = fmt("c_l = %.4g F/m^2 (want 1.08e-07 +- 2%%), eps_s = %.4f "
                   "(want 35.0 +- 0.1)",
                   c_l, eps_s);
    return r;
}

// ---- criterion 3: Drude chain ----
CriterionResult drude_chain() {
    CriterionResult r{3, "mobility and vapor collision rate"};
    const double mu = mobility_from_sigma(1.58e-6, 1.9e13);
    const double mu_cm = mu * 1e4;
    const double rate = vapor_collision_rate(10.0);  // 1e5 cm^2/Vs
    // 5190.6 cm^2/Vs rounds to the quoted 5.2e3; accept the band that
    // rounds to 5.2-5.3e3 at two significant figures
    const bool mu_ok = mu_cm >= 5.15e3 && mu_cm <= 5.35e3;
    const bool rate_ok = within(rate, 17.6e9, 0.02);
    r.pass = mu_ok && rate_ok;
    r.detail = fmt("mu = %.1f cm^2/Vs (want 5.2-5.3e3 at 2 digits), "
                   "1/tau = %.3f GHz (want 17.6 +- 2%%)",
                   mu_cm, rate * 1e-9);
    return r;
}

// ---- criterion 4: RC ledger of the 15 mm line ----
CriterionResult rc_ledger() {
    CriterionResult r{4, "RC totals and distributed delay"};
    const double sigma = 1.58e-6, w = 9e-3, length = 15e-3, c_l = 1.08e-7;
    const double r_per_m = 1.0 / (sigma * w);
    const double r_tot = r_per_m * length;
    const double c_tot = c_l * w * length;
    const double tau = elmore_delay(r_per_m, c_l, length, w, 1024);
    r.pass = within(r_tot, 1.06e6, 0.01) && within(c_tot, 14.6e-12, 0.01) &&
             within(tau, 7.7e-6, 0.02);
    r.detail = fmt("R = %.4g MOhm, C = %.4g pF, tau = %.4g us "
                   "(want 1.06 +- 1%%, 14.6 +- 1%%, 7.7 +- 2%%)",
                   r_tot * 1e-6, c_tot * 1e12, tau * 1e6);
    return r;
}

// ---- criterion 5: resonance arithmetic and echo delay ----
CriterionResult resonance() {
    CriterionResult r{5, "launcher resonance and edge echo"};
    const SawMaterial m;
    const IdtSpec idt;
    const double f0 = resonant_frequency(m, idt);
    const double t_echo = echo_delay(m, ReflectionSpec{});
    r.pass = std::abs(f0 - 290.7e6) <= 0.05e6 && t_echo >= 0.90e-6 &&
             t_echo <= 0.94e-6;
    r.detail = fmt("f0 = %.4f MHz (want 290.7), echo = %.4f us (want 0.92 +- 0.02)",
                   f0 * 1e-6, t_echo * 1e6);
    return r;
}

// ---- criterion 6: plasmon screening scale ----
CriterionResult plasmon() {
    CriterionResult r{6, "plasma frequency clears the drive"};
    const double fp = plasma_frequency(1e13, 0.5e6);
    const double ratio = fp / 296e6;
    r.pass = fp >= 14e9 && fp <= 15e9 && ratio > 40.0;
    r.detail = fmt("f_p = %.4f GHz (want 14-15), %.1fx the 296 MHz drive (want > 40)",
                   fp * 1e-9, ratio);
    return r;
}

// ---- criterion 7: relaxation-coupling properties ----
CriterionResult coupling_properties() {
    CriterionResult r{7, "attenuation and velocity-shift structure"};
    const SawMaterial m;
    const double k = 2.0 * pi * 296e6 / m.v0;
    bool ok = within(electronic_attenuation(k, m, m.sigma_m), k * m.k2 / 4.0, 1e-12);
    double worst_sym = 0.0, prev_dv = velocity_shift(m, 1e-12 * m.sigma_m);
    ok = ok && within(prev_dv, m.k2 / 2.0, 1e-6);
    bool monotone = true;
    double worst_field = 0.0;
    for (int i = 0; i <= 160; ++i) {
        const double sigma = m.sigma_m * std::pow(10.0, -4.0 + i * 0.05);
        const double g1 = electronic_attenuation(k, m, sigma);
        const double g2 = electronic_attenuation(k, m, m.sigma_m * m.sigma_m / sigma);
        worst_sym = std::max(worst_sym, std::abs(g1 - g2) /
                                            (k * m.k2 / 4.0));
        ok = ok && g1 <= electronic_attenuation(k, m, m.sigma_m) * (1.0 + 1e-12);
        const double dv = velocity_shift(m, sigma);
        monotone = monotone && dv <= prev_dv + 1e-15;
        prev_dv = dv;
        const double s = sigma / m.sigma_m;
        const double mag2 = std::norm(effective_field(1.0, m, sigma));
        worst_field = std::max(worst_field, std::abs(mag2 * (1.0 + s * s) - 1.0));
    }
    ok = ok && worst_sym <= 1e-12 && monotone && prev_dv <= 1e-6 * m.k2 / 2.0 &&
         worst_field <= 1e-12;
    r.pass = ok;
    r.detail = fmt("peak kK^2/4 ok, symmetry dev %.1e, dv/v monotone %s, "
                   "|E_eff|^2 (1+s^2) dev %.1e",
                   worst_sym, monotone ? "yes" : "no", worst_field);
    return r;
}

// Brute-force check of the charge-balance equilibrium: enumerate every
// candidate set of charged electrodes and keep the KKT-consistent one.
DensityProfile active_set_oracle(const ElectrodeLayout& layout,
                                 const std::vector<double>& biases, double n_total,
                                 double c_l, const PhysicalConstants& pc) {
    const double area = layout.area();
    const int count = layout.count;
    DensityProfile best;
    for (int mask = 1; mask < (1 << count); ++mask) {
        double v_sum = 0.0;
        int members = 0;
        for (int i = 0; i < count; ++i)
            if (mask & (1 << i)) {
                v_sum += biases[i];
                ++members;
            }
        const double v_e =
            (v_sum - pc.e * n_total / (c_l * area)) / double(members);
        bool consistent = true;
        std::vector<double> n(count, 0.0);
        for (int i = 0; i < count; ++i) {
            if (mask & (1 << i)) {
                n[i] = c_l / pc.e * (biases[i] - v_e);
                if (n[i] < -1e-9 * (n_total / area + 1.0)) consistent = false;
            } else if (biases[i] > v_e + 1e-9) {
                consistent = false;  // uncharged electrode must sit below V_e
            }
        }
        if (consistent) {
            best.n = n;
            best.v_e = v_e;
            for (double& x : best.n) x = std::max(x, 0.0);
            return best;
        }
    }
    best.n.assign(count, 0.0);
    best.v_e = *std::max_element(biases.begin(), biases.end());
    return best;
}

// ---- criterion 8: electrostatic equilibrium against the oracle ----
CriterionResult electrostatics_oracle() {
    CriterionResult r{8, "charge-balance equilibrium vs enumeration oracle"};
    const PhysicalConstants pc;
    const ElectrodeLayout layout;
    const double c_l = 1.08e-7;
    std::mt19937 rng(24601);
    std::uniform_real_distribution<double> volt(-20.0, 100.0);
    std::uniform_real_distribution<double> charge(0.0, 2.0e9);
    double worst = 0.0, worst_charge = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
        const std::vector<double> biases = {volt(rng), volt(rng), volt(rng)};
        const double n_total = charge(rng);
        const DensityProfile got =
            equilibrium_density(layout, biases, n_total, c_l, pc);
        const DensityProfile want =
            active_set_oracle(layout, biases, n_total, c_l, pc);
        const double scale = n_total / layout.area() + 1.0;
        for (int i = 0; i < layout.count; ++i)
            worst = std::max(worst, std::abs(got.n[i] - want.n[i]) / scale);
        double total = 0.0;
        for (double n : got.n) total += n * layout.area();
        worst_charge =
            std::max(worst_charge, std::abs(total - n_total) / (n_total + 1.0));
    }
    const double dv = sweep_from_density(c_l, 0.8e13, pc);
    const double n_back = density_from_sweep(c_l, dv, pc);
    const bool sweep_ok =
        std::abs(dv - 17.8) <= 0.05 && within(n_back, 0.8e13, 1e-12);
    r.pass = worst <= 1e-6 && worst_charge <= 1e-9 && sweep_ok;
    r.detail = fmt("density dev %.1e (want <= 1e-6), charge dev %.1e (want <= "
                   "1e-9), sweep 0.8e13 m^-2 <-> %.3f V (want 17.8)",
                   worst, worst_charge, dv);
    return r;
}

// ---- criterion 9: FET transfer shape ----
CriterionResult fet_shape() {
    CriterionResult r{9, "gate sweep of the capacitive FET"};
    const PhysicalConstants pc;
    const ElectrodeLayout layout;
    const double c_l = 1.08e-7, mu = 0.52, v_u = 80.0;
    const double n_total = 1.2e12 * layout.span() * layout.length;
    const double v_th = fet_threshold(layout, v_u, v_u, n_total, c_l, pc);

    std::vector<double> grid;
    for (double v = 40.0; v <= 120.0 + 1e-9; v += 0.25) grid.push_back(v);
    const auto curve = fet_transfer_curve(layout, v_u, v_u, grid, n_total, c_l,
                                          mu, 0.1, 60e3, 96, pc);
    double peak = 0.0, v_peak = 0.0, below = 0.0, tail = 0.0;
    for (const auto& p : curve) {
        if (p.current > peak) {
            peak = p.current;
            v_peak = p.v_g;
        }
        if (p.v_g < v_th - 0.25) below = std::max(below, p.current);
        if (p.v_g >= 110.0) tail = std::max(tail, p.current);
    }
    r.pass = below == 0.0 && std::abs(v_peak - v_u) <= 2.0 &&
             tail <= 1e-2 * peak;
    r.detail = fmt("zero below V_th = %.2f V: %s; peak at %.2f V (bias %.0f "
                   "+- 2); high-gate tail %.1e of peak",
                   v_th, below == 0.0 ? "yes" : "NO", v_peak, v_u, tail);
    return r;
}

// ---- criterion 10: conductivity fit round-trip ----
CriterionResult sigma_roundtrip() {
    CriterionResult r{10, "transmission-line conductivity recovery"};
    const ElectrodeLayout layout{5e-3, 9e-3, 3};  // the 15 mm measurement line
    const double c_l = 1.08e-7, v_ex = 0.1, sigma_true = 1.58e-6;
    const int nodes = 128;
    std::vector<double> f_hz;
    for (int i = 0; i < 25; ++i)
        f_hz.push_back(1e3 * std::pow(10.0, 4.0 * i / 24.0));
    const RcLadder ladder = build_ladder(sigma_true, c_l, layout, nodes);
    const FreqResponse clean = frequency_sweep(ladder, f_hz, v_ex);

    SigmaFit noiseless =
        fit_conductivity(clean, c_l, layout, nodes, v_ex, 3.0 * sigma_true);
    const double err0 = std::abs(noiseless.sigma - sigma_true) / sigma_true;

    std::mt19937 rng(8818);
    std::normal_distribution<double> gauss(0.0, 0.02);
    double sum_sq = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        FreqResponse noisy = clean;
        for (auto& c : noisy.current)
            c *= std::complex<double>(1.0 + gauss(rng), gauss(rng));
        SigmaFit fit =
            fit_conductivity(noisy, c_l, layout, nodes, v_ex, 0.5 * sigma_true);
        const double rel = (fit.sigma - sigma_true) / sigma_true;
        sum_sq += rel * rel;
    }
    const double rms = std::sqrt(sum_sq / 100.0);

    const RcLadder doubled = build_ladder(sigma_true, c_l, layout, 2 * nodes);
    double worst_step = 0.0;
    for (double f : {1e4, 6e4, 3e5, 2e6}) {
        const auto a = frequency_response(ladder, f, v_ex);
        const auto b = frequency_response(doubled, f, v_ex);
        worst_step = std::max(worst_step, std::abs(a - b) / std::abs(b));
    }
    r.pass = noiseless.converged && err0 <= 1e-3 && rms <= 0.05 &&
             worst_step <= 5e-3;
    r.detail = fmt("noiseless err %.1e (want <= 1e-3), noisy RMS %.3f (want <= "
                   "0.05), N-doubling dev %.1e (want <= 5e-3)",
                   err0, rms, worst_step);
    return r;
}

// ---- criterion 11: gated pump dynamics ----
struct PumpRun {
    TraceResult trace;
    DeltaNResult dn;
    TimeConstants tau;
};

CriterionResult pump_dynamics() {
    CriterionResult r{11, "time-of-flight pumping transients"};
    PumpScenario base;
    base.drive.gated = true;
    base.n_total = 0.7e9;
    const Grid1D grid = make_grid(base.layout, base.launch_gap, 513);
    const double dt = base.drive.t_pulse / 4096.0;
    const double t_d = arrival_delay(base.x_det, base.material.v0);
    const double transit = arrival_delay(base.layout.span(), base.material.v0);

    const auto run = [&](double power) {
        PumpScenario sc = base;
        sc.drive.power_w = power;
        PumpRun pr;
        pr.trace = simulate_gated_pump(sc, grid, dt);
        pr.dn = delta_N(pr.trace, t_d, sc.drive.t_pulse);
        pr.tau = fit_time_constants(pr.trace, t_d, sc.drive.t_pulse, transit);
        return pr;
    };

    const PumpRun ref = run(1e-3);

    // (a) onset at the configured flight time
    const double onset = onset_time(ref.trace);
    const bool onset_ok = std::abs(onset - t_d) <= dt;

    // (b) bipolar shape with an opposite-polarity pulse after gate-off
    double on_peak = 0.0, off_min = 0.0;
    const double t_off = base.drive.t_pulse + t_d;
    for (std::size_t i = 0; i < ref.trace.t.size(); ++i) {
        if (ref.trace.t[i] <= t_off)
            on_peak = std::max(on_peak, ref.trace.i_ae[i]);
        else
            off_min = std::min(off_min, ref.trace.i_ae[i]);
    }
    const bool bipolar_ok = on_peak > 0.0 && off_min < -0.3 * on_peak;

    // (c) transported charge returns to zero over the full cycle
    double dn_peak = 0.0;
    for (double x : ref.dn.delta_n) dn_peak = std::max(dn_peak, std::abs(x));
    const bool return_ok = std::abs(ref.dn.delta_n.back()) <= 1e-3 * dn_peak;

    // (d) saturation level linear in power across a decade
    const PumpRun lo = run(0.25e-3), hi = run(2.5e-3);
    const double per_w = ref.dn.sat / 1e-3;
    const bool linear_ok = within(lo.dn.sat / 0.25e-3, per_w, 0.05) &&
                           within(hi.dn.sat / 2.5e-3, per_w, 0.05);

    // (e) time constants power-independent and near the distributed-RC delay
    const double powers[] = {0.25e-3, 0.32e-3, 0.40e-3, 0.50e-3, 0.63e-3,
                             0.79e-3, 1.00e-3, 1.26e-3, 1.58e-3, 2.00e-3};
    double p_lo = 1e9, p_hi = 0.0, q_lo = 1e9, q_hi = 0.0;
    bool band_ok = true;
    for (double p : powers) {
        const PumpRun pr = (p == 1.00e-3) ? ref : run(p);
        p_lo = std::min(p_lo, pr.tau.pump.tau);
        p_hi = std::max(p_hi, pr.tau.pump.tau);
        q_lo = std::min(q_lo, pr.tau.rel.tau);
        q_hi = std::max(q_hi, pr.tau.rel.tau);
        for (double tau : {pr.tau.pump.tau, pr.tau.rel.tau})
            band_ok = band_ok && tau >= 0.5 * 7.7e-6 && tau <= 2.0 * 7.7e-6;
    }
    const bool indep_ok =
        (p_hi - p_lo) <= 0.15 * p_hi && (q_hi - q_lo) <= 0.15 * q_hi;

    r.pass = onset_ok && bipolar_ok && return_ok && linear_ok && band_ok &&
             indep_ok;
    r.detail = fmt("onset %.4f us (flight %.4f +- %.4f), bipolar %s, residue "
                   "%.1e of peak, linear %s, tau_pump %.2f-%.2f us, tau_rel "
                   "%.2f-%.2f us (band 3.85-15.4)",
                   onset * 1e6, t_d * 1e6, dt * 1e6, bipolar_ok ? "yes" : "NO",
                   std::abs(ref.dn.delta_n.back()) / dn_peak,
                   linear_ok ? "yes" : "NO", p_lo * 1e6, p_hi * 1e6, q_lo * 1e6,
                   q_hi * 1e6);
    return r;
}

// ---- criterion 12: exponential fit engine ----
CriterionResult fit_engine() {
    CriterionResult r{12, "exponential decay fitting engine"};
    const int samples = 301;
    Eigen::VectorXd t(samples);
    for (int i = 0; i < samples; ++i) t[i] = 30e-6 * i / (samples - 1);

    double worst_tau = 0.0;
    for (double tau_true : {4.6e-6, 5.2e-6, 5.9e-6, 6.5e-6}) {
        Eigen::VectorXd y =
            3e-11 * (-t.array() / tau_true).exp() + 2e-12;
        const fit::ExpFitResult res = fit::exp_fit(t, y, true);
        worst_tau = std::max(
            worst_tau, std::abs(res.tau - tau_true) / tau_true +
                           (res.converged ? 0.0 : 1.0));
    }

    // residual monotonicity observed through truncated runs: the cost after
    // k iterations never rises with k
    fit::FitProblem prob;
    Eigen::VectorXd y = 3e-11 * (-t.array() / 5.2e-6).exp() + 2e-12;
    prob.x0 = Eigen::VectorXd(3);
    prob.x0 << 1e-11, 2e-6, 0.0;
    prob.residual = [&](const Eigen::VectorXd& th) {
        return Eigen::VectorXd(th[0] * (-t.array() / th[1]).exp() + th[2] -
                               y.array());
    };
    bool monotone = true;
    double prev = std::numeric_limits<double>::infinity();
    for (int k = 1; k <= 12; ++k) {
        fit::FitOptions opts;
        opts.max_iterations = k;
        const fit::FitResult step = fit::least_squares(prob, opts);
        monotone = monotone && step.residual_norm <= prev * (1.0 + 1e-12);
        prev = step.residual_norm;
    }

    // the engine's forward-difference Jacobian must match the analytic one:
    // fits driven by each agree on the recovered parameters
    fit::FitProblem ana = prob;
    ana.jacobian = [&](const Eigen::VectorXd& th) {
        Eigen::MatrixXd J(t.size(), 3);
        const Eigen::ArrayXd ex = (-t.array() / th[1]).exp();
        J.col(0) = ex;
        J.col(1) = th[0] * ex * t.array() / (th[1] * th[1]);
        J.col(2).setOnes();
        return J;
    };
    const fit::FitResult fd = fit::least_squares(prob);
    const fit::FitResult an = fit::least_squares(ana);
    double jac_dev = 0.0;
    for (int j = 0; j < 3; ++j)
        jac_dev = std::max(jac_dev, std::abs(fd.x[j] - an.x[j]) /
                                        (std::abs(an.x[j]) + 1e-30));
    r.pass = worst_tau <= 0.01 && monotone && fd.converged && an.converged &&
             jac_dev <= 1e-4;
    r.detail = fmt("tau err %.1e (want <= 1e-2), accepted-step residual "
                   "monotone %s, FD-vs-analytic dev %.1e (want <= 1e-4)",
                   worst_tau, monotone ? "yes" : "NO", jac_dev);
    return r;
}

}  // namespace

std::vector<CriterionResult> run_acceptance() {
    return {film_thickness(),  capacitance(),    drude_chain(),
            rc_ledger(),       resonance(),      plasmon(),
            coupling_properties(), electrostatics_oracle(), fet_shape(),
            sigma_roundtrip(), pump_dynamics(),  fit_engine()};
}

std::string acceptance_report(const std::vector<CriterionResult>& results,
                              bool* all_pass) {
    std::string out;
    bool all = true;
    for (const auto& c : results) {
        all = all && c.pass;
        out += fmt("[%2d] %s %s: %s\n", c.id, c.pass ? "PASS" : "FAIL",
                   c.label.c_str(), c.detail.c_str());
    }
    const std::size_t passed = static_cast<std::size_t>(
        std::count_if(results.begin(), results.end(),
                      [](const CriterionResult& c) { return c.pass; }));
    out += fmt("%zu/%zu criteria passed\n", passed, results.size());
    if (all_pass) *all_pass = all;
    return out;
}

}  // namespace sawhe
