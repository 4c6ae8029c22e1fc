#pragma once

#include <string>
#include <vector>

#include "sawhe/constants.hpp"

// Thickness of the saturated superfluid film creeping up from the bulk
// level to the device surface, with and without surface charge. The film
// obeys a van der Waals / hydrostatic balance; an electron layer of areal
// density n adds an electrostatic pressing force that thins it.

namespace sawhe {

struct FilmParams {
    double rho = 145.0;           // liquid density [kg/m^3]
    double g = 9.80665;           // [m/s^2]
    double alpha = 9.9972735e-30; // van der Waals constant [Pa m^4],
                                  // calibrated: rho*g*H*d0^4 at H = 0.2 mm, d0 = 77 nm
    double thin_limit = 60e-9;    // below this the 1/d^4 balance is stretched [m]
};

struct FilmState {
    double H = 0.0;    // depth of surface below bulk level [m]
    double n = 0.0;    // electron areal density [1/m^2]
    double d0 = 0.0;   // neutral film thickness [m]
    double d = 0.0;    // charged film thickness [m], 0 < d <= d0, d = d0 iff n = 0
    bool thin_warning = false;  // d below the validity limit of the model
};

// Depression-vs-volume lookup digitized from a fill calibration.
// Volumes strictly increasing, depths strictly decreasing.
struct LevelTable {
    std::vector<double> volume_cc;  // condensed volume [cm^3]
    std::vector<double> H_m;        // bulk level depth below device [m]
};

// Electron pressing pressure n^2 e^2 / (2 eps0) [Pa].
double electron_pressure(double n, const PhysicalConstants& pc = {});

// alpha from a measured (H, d0) pair: alpha = rho*g*H*d0^4.
double calibrate_alpha(double H, double d0, const FilmParams& fp = {});

// d0 = (alpha / (rho*g*H))^(1/4); H must be positive.
double neutral_thickness(double H, const FilmParams& fp = {});

// d = (alpha / (rho*g*H + p_el))^(1/4); n must be nonnegative.
double charged_thickness(double H, double n, const FilmParams& fp = {},
                         const PhysicalConstants& pc = {});

FilmState film_state(double H, double n, const FilmParams& fp = {},
                     const PhysicalConstants& pc = {});

// Table must have >= 2 rows and strict monotonicity in both columns.
LevelTable make_level_table(std::vector<double> volume_cc, std::vector<double> H_m);

// Parse a "volume_cc,H_m" CSV (comment lines starting with '#' are skipped).
LevelTable load_level_table(const std::string& path);

// Piecewise-linear interpolation; volumes outside the table are a range error.
double level_from_volume(const LevelTable& table, double volume_cc);

}  // namespace sawhe
