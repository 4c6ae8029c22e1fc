#pragma once

#include <string>
#include <vector>

// Optional plot export: a self-contained SVG line chart or gnuplot-style
// columns of plain numbers. Output depends only on the data passed in.

namespace sawhe {

struct PlotSeries {
    std::string label;
    std::vector<double> y;
};

// Polyline chart with axes, tick labels, and a legend. Series must match
// the x grid in length; throws std::invalid_argument otherwise.
std::string svg_line_chart(const std::string& title, const std::string& x_label,
                           const std::string& y_label,
                           const std::vector<double>& x,
                           const std::vector<PlotSeries>& series);

// "# x <label...>" header then whitespace-separated columns, one row per x.
std::string gnuplot_data(const std::vector<double>& x,
                         const std::vector<PlotSeries>& series);

}  // namespace sawhe
