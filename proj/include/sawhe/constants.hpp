#pragma once

#include <cmath>

// Physical constants and unit helpers shared by every module.
// All quantities are SI unless a name says otherwise.

namespace sawhe {

struct PhysicalConstants {
    double e     = 1.602176634e-19;   // elementary charge [C]
    double eps0  = 8.8541878128e-12;  // vacuum permittivity [F/m]
    double m_e   = 9.1093837015e-31;  // electron mass [kg]
    double g     = 9.80665;           // gravitational acceleration [m/s^2]
    double rho_he = 145.0;            // liquid helium density [kg/m^3], T ~ 1.5 K
    double eps_he = 1.057;            // relative permittivity of liquid helium
};

// RF power conversion, dBm referenced to 1 mW.
inline double dbm_to_watts(double p_dbm) {
    return 1.0e-3 * std::pow(10.0, p_dbm / 10.0);
}

inline double watts_to_dbm(double p_w) {
    return 10.0 * std::log10(p_w / 1.0e-3);
}

// Areal density: 1/cm^2 -> 1/m^2.
inline double areal_density_si(double n_per_cm2) {
    return n_per_cm2 * 1.0e4;
}

}  // namespace sawhe
