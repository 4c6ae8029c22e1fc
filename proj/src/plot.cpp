#include "sawhe/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace sawhe {

namespace {

constexpr double kWidth = 800.0, kHeight = 500.0;
constexpr double kLeft = 80.0, kRight = 30.0, kTop = 50.0, kBottom = 60.0;

const char* kPalette[] = {"#1f6fb4", "#d1493e", "#3d9970", "#8e5ba6",
                          "#c98a1f", "#4d4d4d"};

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

std::string full(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string escape_xml(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            default: out += c;
        }
    }
    return out;
}

void check_series(const std::vector<double>& x,
                  const std::vector<PlotSeries>& series) {
    if (x.empty() || series.empty())
        throw std::invalid_argument("plot: need data and at least one series");
    for (const auto& s : series)
        if (s.y.size() != x.size())
            throw std::invalid_argument("plot: series '" + s.label +
                                        "' length differs from x grid");
}

struct Range {
    double lo, hi;
    double scale(double v, double px0, double px1) const {
        return px0 + (v - lo) / (hi - lo) * (px1 - px0);
    }
};

Range padded_range(double lo, double hi) {
    if (!(hi > lo)) {  // flat data still needs a drawable band
        const double pad = std::abs(lo) > 0.0 ? 0.1 * std::abs(lo) : 1.0;
        return {lo - pad, hi + pad};
    }
    const double pad = 0.05 * (hi - lo);
    return {lo - pad, hi + pad};
}

}  // namespace

std::string svg_line_chart(const std::string& title, const std::string& x_label,
                           const std::string& y_label,
                           const std::vector<double>& x,
                           const std::vector<PlotSeries>& series) {
    check_series(x, series);

    double x_lo = x[0], x_hi = x[0];
    for (double v : x) {
        x_lo = std::min(x_lo, v);
        x_hi = std::max(x_hi, v);
    }
    double y_lo = series[0].y[0], y_hi = y_lo;
    for (const auto& s : series)
        for (double v : s.y) {
            y_lo = std::min(y_lo, v);
            y_hi = std::max(y_hi, v);
        }
    const Range rx = padded_range(x_lo, x_hi);
    const Range ry = padded_range(y_lo, y_hi);

    const double px0 = kLeft, px1 = kWidth - kRight;
    const double py0 = kHeight - kBottom, py1 = kTop;  // SVG y grows downward

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
        << "\" height=\"" << kHeight << "\" viewBox=\"0 0 " << kWidth << ' '
        << kHeight << "\">\n";
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg << "<text x=\"" << kWidth / 2 << "\" y=\"28\" text-anchor=\"middle\" "
        << "font-family=\"sans-serif\" font-size=\"18\">" << escape_xml(title)
        << "</text>\n";

    // frame and ticks
    svg << "<rect x=\"" << px0 << "\" y=\"" << py1 << "\" width=\"" << px1 - px0
        << "\" height=\"" << py0 - py1
        << "\" fill=\"none\" stroke=\"black\"/>\n";
    constexpr int kTicks = 5;
    for (int i = 0; i <= kTicks; ++i) {
        const double fx = rx.lo + (rx.hi - rx.lo) * i / kTicks;
        const double fy = ry.lo + (ry.hi - ry.lo) * i / kTicks;
        const double qx = rx.scale(fx, px0, px1);
        const double qy = ry.scale(fy, py0, py1);
        svg << "<line x1=\"" << qx << "\" y1=\"" << py0 << "\" x2=\"" << qx
            << "\" y2=\"" << py0 + 6 << "\" stroke=\"black\"/>\n";
        svg << "<text x=\"" << qx << "\" y=\"" << py0 + 22
            << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
               "font-size=\"12\">"
            << num(fx) << "</text>\n";
        svg << "<line x1=\"" << px0 - 6 << "\" y1=\"" << qy << "\" x2=\"" << px0
            << "\" y2=\"" << qy << "\" stroke=\"black\"/>\n";
        svg << "<text x=\"" << px0 - 10 << "\" y=\"" << qy + 4
            << "\" text-anchor=\"end\" font-family=\"sans-serif\" "
               "font-size=\"12\">"
            << num(fy) << "</text>\n";
    }
    svg << "<text x=\"" << (px0 + px1) / 2 << "\" y=\"" << kHeight - 14
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"14\">"
        << escape_xml(x_label) << "</text>\n";
    svg << "<text x=\"20\" y=\"" << (py0 + py1) / 2
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"14\" transform=\"rotate(-90 20 "
        << (py0 + py1) / 2 << ")\">" << escape_xml(y_label) << "</text>\n";

    for (std::size_t s = 0; s < series.size(); ++s) {
        const char* color = kPalette[s % (sizeof kPalette / sizeof *kPalette)];
        svg << "<polyline fill=\"none\" stroke=\"" << color
            << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < x.size(); ++i) {
            if (i) svg << ' ';
            svg << num(rx.scale(x[i], px0, px1)) << ','
                << num(ry.scale(series[s].y[i], py0, py1));
        }
        svg << "\"/>\n";
        const double ly = kTop + 18.0 * double(s);
        svg << "<line x1=\"" << px1 - 150 << "\" y1=\"" << ly + 8 << "\" x2=\""
            << px1 - 120 << "\" y2=\"" << ly + 8 << "\" stroke=\"" << color
            << "\" stroke-width=\"2\"/>\n";
        svg << "<text x=\"" << px1 - 114 << "\" y=\"" << ly + 12
            << "\" font-family=\"sans-serif\" font-size=\"12\">"
            << escape_xml(series[s].label) << "</text>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

std::string gnuplot_data(const std::vector<double>& x,
                         const std::vector<PlotSeries>& series) {
    check_series(x, series);
    std::string out = "# x";
    for (const auto& s : series) out += ' ' + s.label;
    out += '\n';
    for (std::size_t i = 0; i < x.size(); ++i) {
        out += full(x[i]);
        for (const auto& s : series) out += ' ' + full(s.y[i]);
        out += '\n';
    }
    return out;
}

}  // namespace sawhe
