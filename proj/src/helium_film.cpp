#include "sawhe/helium_film.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace sawhe {

double electron_pressure(double n, const PhysicalConstants& pc) {
    if (n < 0.0) throw std::invalid_argument("electron_pressure: n < 0");
    return n * n * pc.e * pc.e / (2.0 * pc.eps0);
}

double calibrate_alpha(double H, double d0, const FilmParams& fp) {
    if (H <= 0.0 || d0 <= 0.0)
        throw std::invalid_argument("calibrate_alpha: H and d0 must be positive");
    return fp.rho * fp.g * H * d0 * d0 * d0 * d0;
}

double neutral_thickness(double H, const FilmParams& fp) {
    if (H <= 0.0) throw std::invalid_argument("neutral_thickness: H must be positive");
    return std::pow(fp.alpha / (fp.rho * fp.g * H), 0.25);
}

double charged_thickness(double H, double n, const FilmParams& fp,
                         const PhysicalConstants& pc) {
    if (H <= 0.0) throw std::invalid_argument("charged_thickness: H must be positive");
    const double p_total = fp.rho * fp.g * H + electron_pressure(n, pc);
    return std::pow(fp.alpha / p_total, 0.25);
}

FilmState film_state(double H, double n, const FilmParams& fp,
                     const PhysicalConstants& pc) {
    FilmState s;
    s.H = H;
    s.n = n;
    s.d0 = neutral_thickness(H, fp);
    s.d = charged_thickness(H, n, fp, pc);
    s.thin_warning = s.d < fp.thin_limit;
    return s;
}

LevelTable make_level_table(std::vector<double> volume_cc, std::vector<double> H_m) {
    if (volume_cc.size() != H_m.size())
        throw std::invalid_argument("level table: column length mismatch");
    if (volume_cc.size() < 2)
        throw std::invalid_argument("level table: need at least 2 rows");
    for (size_t i = 1; i < volume_cc.size(); ++i) {
        if (!(volume_cc[i] > volume_cc[i - 1]))
            throw std::invalid_argument("level table: volumes must strictly increase");
        if (!(H_m[i] < H_m[i - 1]))
            throw std::invalid_argument("level table: depths must strictly decrease");
    }
    for (double h : H_m)
        if (!(h > 0.0)) throw std::invalid_argument("level table: depths must be positive");
    return LevelTable{std::move(volume_cc), std::move(H_m)};
}

LevelTable load_level_table(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("level table: cannot open " + path);
    std::vector<double> vol, dep;
    std::string line;
    bool header_seen = false;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        if (!header_seen) {
            // header row names the columns; accept whitespace around the comma
            std::string squeezed;
            for (char c : line)
                if (!std::isspace(static_cast<unsigned char>(c))) squeezed += c;
            if (squeezed != "volume_cc,H_m")
                throw std::invalid_argument("level table: expected header volume_cc,H_m at line " +
                                            std::to_string(lineno));
            header_seen = true;
            continue;
        }
        std::istringstream ss(line);
        std::string a, b;
        if (!std::getline(ss, a, ',') || !std::getline(ss, b))
            throw std::invalid_argument("level table: malformed row at line " +
                                        std::to_string(lineno));
        try {
            vol.push_back(std::stod(a));
            dep.push_back(std::stod(b));
        } catch (const std::exception&) {
            throw std::invalid_argument("level table: non-numeric value at line " +
                                        std::to_string(lineno));
        }
    }
    return make_level_table(std::move(vol), std::move(dep));
}

double level_from_volume(const LevelTable& table, double volume_cc) {
    const auto& v = table.volume_cc;
    const auto& h = table.H_m;
    if (volume_cc < v.front() || volume_cc > v.back())
        throw std::out_of_range("level_from_volume: volume outside table range");
    size_t i = 0;
    while (i + 2 < v.size() && volume_cc > v[i + 1]) ++i;
    const double t = (volume_cc - v[i]) / (v[i + 1] - v[i]);
    return h[i] + t * (h[i + 1] - h[i]);
}

}  // namespace sawhe
