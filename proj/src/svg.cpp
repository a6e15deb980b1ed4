#include "benjamin/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

namespace benjamin {

namespace {

const char* const kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

std::string escape(const std::string& s) {
    std::string out;
    for (char ch : s) {
        switch (ch) {
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '&': out += "&amp;"; break;
        default: out += ch;
        }
    }
    return out;
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

}  // namespace

void write_svg_plot(std::ostream& out, const std::vector<PlotSeries>& series, const PlotOptions& options) {
    const double left = 70, right = 20, top = 30, bottom = 50;
    const double pw = options.width - left - right;
    const double ph = options.height - top - bottom;
    auto usable = [&](double x, double y) { return std::isfinite(x) && std::isfinite(y) && (!options.log_y || y > 0.0); };
    auto ty = [&](double y) { return options.log_y ? std::log10(y) : y; };

    double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin, ymin = xmin, ymax = -xmin;
    for (const auto& s : series) {
        for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
            if (!usable(s.x[i], s.y[i])) continue;
            xmin = std::min(xmin, s.x[i]);
            xmax = std::max(xmax, s.x[i]);
            ymin = std::min(ymin, ty(s.y[i]));
            ymax = std::max(ymax, ty(s.y[i]));
        }
    }
    if (!std::isfinite(xmin)) xmin = 0, xmax = 1, ymin = 0, ymax = 1;
    if (xmax == xmin) xmax = xmin + 1;
    if (ymax == ymin) ymax = ymin + 1;
    auto px = [&](double x) { return left + (x - xmin) / (xmax - xmin) * pw; };
    auto py = [&](double y) { return top + (1.0 - (ty(y) - ymin) / (ymax - ymin)) * ph; };

    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << options.width << "\" height=\"" << options.height
        << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<text x=\"" << options.width / 2 << "\" y=\"18\" text-anchor=\"middle\">" << escape(options.title)
        << "</text>\n";
    out << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << pw << "\" height=\"" << ph
        << "\" fill=\"none\" stroke=\"black\"/>\n";
    for (int i = 0; i <= 4; ++i) {
        const double fx = xmin + (xmax - xmin) * i / 4.0;
        const double fy = ymin + (ymax - ymin) * i / 4.0;
        const double label_y = options.log_y ? std::pow(10.0, fy) : fy;
        out << "<text x=\"" << left + pw * i / 4.0 << "\" y=\"" << top + ph + 16 << "\" text-anchor=\"middle\">"
            << fmt(fx) << "</text>\n";
        out << "<text x=\"" << left - 6 << "\" y=\"" << top + ph * (1.0 - i / 4.0) + 4 << "\" text-anchor=\"end\">"
            << fmt(label_y) << "</text>\n";
    }
    out << "<text x=\"" << left + pw / 2 << "\" y=\"" << options.height - 10 << "\" text-anchor=\"middle\">"
        << escape(options.xlabel) << "</text>\n";
    out << "<text transform=\"translate(14," << top + ph / 2 << ") rotate(-90)\" text-anchor=\"middle\">"
        << escape(options.ylabel) << "</text>\n";

    for (std::size_t k = 0; k < series.size(); ++k) {
        const auto& s = series[k];
        const char* color = kColors[k % (sizeof kColors / sizeof kColors[0])];
        out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
            if (usable(s.x[i], s.y[i])) out << fmt(px(s.x[i])) << ',' << fmt(py(s.y[i])) << ' ';
        }
        out << "\"/>\n";
        out << "<text x=\"" << left + 10 << "\" y=\"" << top + 16 + 14 * k << "\" fill=\"" << color << "\">"
            << escape(s.name) << "</text>\n";
    }
    out << "</svg>\n";
}

}  // namespace benjamin
