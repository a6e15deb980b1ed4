#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace benjamin {

struct PlotSeries {
    std::string name;
    std::vector<double> x;
    std::vector<double> y;
};

struct PlotOptions {
    std::string title;
    std::string xlabel;
    std::string ylabel;
    bool log_y = false;
    int width = 640;
    int height = 400;
};

/// Static line plot.  Non-finite points (and non-positive ones on a log
/// axis) are skipped.
void write_svg_plot(std::ostream& out, const std::vector<PlotSeries>& series, const PlotOptions& options);

}  // namespace benjamin
