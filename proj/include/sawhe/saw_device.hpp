#pragma once

#include <complex>

#include "sawhe/constants.hpp"

// Surface acoustic wave launcher and its coupling to a conducting sheet
// above the substrate. The relaxation-type interaction is controlled by
// the ratio of sheet conductivity to the material constant sigma_m.

namespace sawhe {

struct SawMaterial {
    double v0 = 3488.0;        // free-surface SAW velocity [m/s]
    double k2 = 0.048;         // piezoelectric coupling K^2 (dimensionless)
    double sigma_m = 1.110779e-6; // v0*eps0*(1+eps_s_eff) for the default stack [S]
    double gamma_he = 0.0;     // background attenuation per length [1/m]
};

struct IdtSpec {
    int finger_pairs = 40;
    double pitch = 12e-6;      // acoustic wavelength at resonance [m]
    double aperture = 4e-3;    // beam width [m]
    double alpha_l = 0.5;      // RF-to-acoustic power conversion at resonance
};

struct SawDrive {
    double power_w = 1e-3;     // RF power into the launcher [W]
    double frequency = 296e6;  // drive frequency [Hz]
    bool gated = false;
    double t_pulse = 30e-6;    // envelope length when gated [s]
};

struct ReflectionSpec {
    double round_trip = 3.2e-3;  // launcher-to-edge round trip path [m]
    double r = 0.15;             // edge reflection amplitude
};

// sigma_m = v0 * eps0 * (1 + eps_s_eff); eps_s_eff is the effective
// permittivity of the substrate half-space.
double saw_sigma_m(double v0, double eps_s_eff, const PhysicalConstants& pc = {});

// Mechanical resonance of an IDT with electrode pitch equal to the wavelength.
double resonant_frequency(const SawMaterial& m, const IdtSpec& idt);

// |sin(N pi delta) / (N pi delta)|, delta = (f - f0)/f0. Equals 1 at f0 and
// has first nulls at delta = 1/N.
double idt_amplitude(double f, double f0, int finger_pairs);

// Gamma_el = k (K^2/2) (sigma/sigma_m) / (1 + (sigma/sigma_m)^2)  [1/m]
double electronic_attenuation(double k, const SawMaterial& m, double sigma);

// Delta v / v0 = (K^2/2) / (1 + (sigma/sigma_m)^2)
double velocity_shift(const SawMaterial& m, double sigma);

// Piezoelectric field screened by the sheet: E_p / (1 + i sigma/sigma_m).
std::complex<double> effective_field(double e_p, const SawMaterial& m, double sigma);

// Carrier density modulation amplitude: -sigma E_eff / (e v).
std::complex<double> density_modulation(double sigma, std::complex<double> e_eff,
                                        double v, const PhysicalConstants& pc = {});

// Acoustic intensity per beam width alpha_l * P / w * exp(-gamma_tot x)  [W/m]
double intensity_profile(double x, double p_in, double alpha_l, double w,
                         double gamma_tot);

double total_attenuation(double k, const SawMaterial& m, double sigma);

// Time-averaged acoustoelectric sheet current (mu/v) * Gamma_el * I  [A/m]
double acoustoelectric_drive(double mu, double v, double gamma_el, double intensity);

// 2D plasmon frequency at wavenumber k: sqrt(e^2 n / (2 eps0 m)) sqrt(k) / (2 pi) [Hz]
double plasma_frequency(double n, double k, const PhysicalConstants& pc = {});

double echo_delay(const SawMaterial& m, const ReflectionSpec& refl);

// IDT lineshape with a delayed edge reflection superposed:
// A(f) * (1 + r exp(i 2 pi f t_echo)). The magnitude carries a corrugation
// of period 1/t_echo across the resonance.
std::complex<double> cw_response_with_echo(double f, const SawMaterial& m,
                                           const IdtSpec& idt,
                                           const ReflectionSpec& refl);

}  // namespace sawhe
