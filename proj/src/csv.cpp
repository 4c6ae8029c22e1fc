#include "sawhe/csv.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace sawhe {

namespace {

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return {};
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

double parse_double(const std::string& tok, const std::string& where) {
    const std::string t = trim(tok);
    char* end = nullptr;
    const double v = std::strtod(t.c_str(), &end);
    if (t.empty() || end != t.c_str() + t.size())
        throw std::runtime_error(where + ": bad number '" + tok + "'");
    return v;
}

}  // namespace

std::string hash_hex(std::uint64_t h) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string csv_text(const std::vector<std::string>& columns,
                     const std::vector<std::vector<double>>& rows,
                     std::uint64_t scenario_hash) {
    if (columns.empty()) throw std::invalid_argument("csv_text: no columns");
    std::string out;
    for (std::size_t c = 0; c < columns.size(); ++c) {
        if (c) out += ',';
        out += columns[c];
    }
    out += '\n';
    for (const auto& row : rows) {
        if (row.size() != columns.size())
            throw std::invalid_argument("csv_text: row width differs from header");
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c) out += ',';
            out += format_double(row[c]);
        }
        out += '\n';
    }
    out += "# scenario_hash=" + hash_hex(scenario_hash) + '\n';
    return out;
}

std::size_t write_csv(const std::string& path,
                      const std::vector<std::string>& columns,
                      const std::vector<std::vector<double>>& rows,
                      std::uint64_t scenario_hash) {
    const std::string text = csv_text(columns, rows, scenario_hash);
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("write_csv: cannot open " + path);
    f.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!f) throw std::runtime_error("write_csv: short write to " + path);
    return text.size();
}

FreqResponseData parse_freq_response_csv(const std::string& text,
                                         const std::string& name) {
    FreqResponseData out;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    bool saw_header = false;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        const std::string where = name + ":" + std::to_string(lineno);
        if (!saw_header) {
            if (t != "f_hz,re_amp,im_amp")
                throw std::runtime_error(where +
                                         ": expected header f_hz,re_amp,im_amp");
            saw_header = true;
            continue;
        }
        const auto c1 = t.find(',');
        const auto c2 = c1 == std::string::npos ? c1 : t.find(',', c1 + 1);
        if (c2 == std::string::npos || t.find(',', c2 + 1) != std::string::npos)
            throw std::runtime_error(where + ": expected three columns");
        out.f_hz.push_back(parse_double(t.substr(0, c1), where));
        out.re_amp.push_back(parse_double(t.substr(c1 + 1, c2 - c1 - 1), where));
        out.im_amp.push_back(parse_double(t.substr(c2 + 1), where));
    }
    if (!saw_header)
        throw std::runtime_error(name + ": missing f_hz,re_amp,im_amp header");
    return out;
}

FreqResponseData read_freq_response_csv(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("read_freq_response_csv: cannot open " + path);
    std::ostringstream buf;
    buf << f.rdbuf();
    return parse_freq_response_csv(buf.str(), path);
}

}  // namespace sawhe
