#include "sawhe/saw_device.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace sawhe {

using std::numbers::pi;

double saw_sigma_m(double v0, double eps_s_eff, const PhysicalConstants& pc) {
    if (v0 <= 0.0 || eps_s_eff <= 0.0)
        throw std::invalid_argument("saw_sigma_m: v0 and eps_s_eff must be positive");
    return v0 * pc.eps0 * (1.0 + eps_s_eff);
}

double resonant_frequency(const SawMaterial& m, const IdtSpec& idt) {
    if (idt.pitch <= 0.0) throw std::invalid_argument("resonant_frequency: pitch <= 0");
    return m.v0 / idt.pitch;
}

double idt_amplitude(double f, double f0, int finger_pairs) {
    if (f0 <= 0.0 || finger_pairs < 1)
        throw std::invalid_argument("idt_amplitude: invalid f0 or finger count");
    const double x = finger_pairs * pi * (f - f0) / f0;
    if (std::abs(x) < 1e-9) return 1.0;  // sinc limit
    return std::abs(std::sin(x) / x);
}

double electronic_attenuation(double k, const SawMaterial& m, double sigma) {
    if (k < 0.0 || sigma < 0.0)
        throw std::invalid_argument("electronic_attenuation: negative k or sigma");
    const double s = sigma / m.sigma_m;
    return k * (m.k2 / 2.0) * s / (1.0 + s * s);
}

double velocity_shift(const SawMaterial& m, double sigma) {
    if (sigma < 0.0) throw std::invalid_argument("velocity_shift: negative sigma");
    const double s = sigma / m.sigma_m;
    return (m.k2 / 2.0) / (1.0 + s * s);
}

std::complex<double> effective_field(double e_p, const SawMaterial& m, double sigma) {
    const double s = sigma / m.sigma_m;
    return e_p / std::complex<double>(1.0, s);
}

std::complex<double> density_modulation(double sigma, std::complex<double> e_eff,
                                        double v, const PhysicalConstants& pc) {
    if (v <= 0.0) throw std::invalid_argument("density_modulation: v <= 0");
    return -sigma * e_eff / (pc.e * v);
}

double intensity_profile(double x, double p_in, double alpha_l, double w,
                         double gamma_tot) {
    if (w <= 0.0) throw std::invalid_argument("intensity_profile: aperture <= 0");
    if (x < 0.0) throw std::invalid_argument("intensity_profile: x < 0");
    return alpha_l * p_in / w * std::exp(-gamma_tot * x);
}

double total_attenuation(double k, const SawMaterial& m, double sigma) {
    return electronic_attenuation(k, m, sigma) + m.gamma_he;
}

double acoustoelectric_drive(double mu, double v, double gamma_el, double intensity) {
    if (v <= 0.0) throw std::invalid_argument("acoustoelectric_drive: v <= 0");
    return mu / v * gamma_el * intensity;
}

double plasma_frequency(double n, double k, const PhysicalConstants& pc) {
    if (n < 0.0 || k < 0.0)
        throw std::invalid_argument("plasma_frequency: negative n or k");
    return std::sqrt(pc.e * pc.e * n / (2.0 * pc.eps0 * pc.m_e)) * std::sqrt(k) /
           (2.0 * pi);
}

double echo_delay(const SawMaterial& m, const ReflectionSpec& refl) {
    return refl.round_trip / m.v0;
}

std::complex<double> cw_response_with_echo(double f, const SawMaterial& m,
                                           const IdtSpec& idt,
                                           const ReflectionSpec& refl) {
    const double f0 = resonant_frequency(m, idt);
    const double a = idt_amplitude(f, f0, idt.finger_pairs);
    const double phase = 2.0 * pi * f * echo_delay(m, refl);
    return a * (1.0 + refl.r * std::exp(std::complex<double>(0.0, phase)));
}

}  // namespace sawhe
