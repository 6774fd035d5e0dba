#include "qks/svg.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "qks/common.hpp"

namespace qks {

namespace {

const char* kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
                          "#9467bd", "#8c564b", "#e377c2"};

std::string num(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

std::string tick_label(double v, bool log_scale) {
    std::ostringstream os;
    if (log_scale) {
        os << "1e" << static_cast<int>(std::lround(v));
    } else {
        os.precision(4);
        os << v;
    }
    return os.str();
}

}  // namespace

void SvgPlot::add_series(const std::string& label, std::vector<double> x, std::vector<double> y) {
    if (x.size() != y.size()) throw ComputeError("svg series: x/y size mismatch");
    series.push_back({label, std::move(x), std::move(y)});
}

std::string SvgPlot::render() const {
    const double width = 760, height = 520;
    const double ml = 80, mr = 30, mt = 46, mb = 60;
    const double pw = width - ml - mr, ph = height - mt - mb;

    double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
    double ymin = std::numeric_limits<double>::infinity(), ymax = -ymin;
    const double log_floor = 1e-16;
    for (const auto& s : series) {
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            double y = s.y[i];
            if (log_y && y <= 0.0) y = log_floor;
            double ty = log_y ? std::log10(y) : y;
            xmin = std::min(xmin, s.x[i]);
            xmax = std::max(xmax, s.x[i]);
            ymin = std::min(ymin, ty);
            ymax = std::max(ymax, ty);
        }
    }
    if (!(xmax > xmin)) xmax = xmin + 1;
    if (!(ymax > ymin)) ymax = ymin + 1;
    double ypad = 0.04 * (ymax - ymin);
    ymin -= ypad;
    ymax += ypad;

    auto px = [&](double x) { return ml + (x - xmin) / (xmax - xmin) * pw; };
    auto py = [&](double y) {
        double t = log_y ? std::log10(std::max(y, log_floor)) : y;
        return mt + (1.0 - (t - ymin) / (ymax - ymin)) * ph;
    };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    if (!title.empty())
        svg << "<text x=\"" << width / 2 << "\" y=\"24\" text-anchor=\"middle\" "
            << "font-family=\"sans-serif\" font-size=\"16\">" << title << "</text>\n";

    // frame
    svg << "<rect x=\"" << ml << "\" y=\"" << mt << "\" width=\"" << pw << "\" height=\"" << ph
        << "\" fill=\"none\" stroke=\"black\"/>\n";

    // y ticks: decades for log scale, 5 even steps otherwise
    std::vector<double> yticks;
    if (log_y) {
        for (int d = static_cast<int>(std::floor(ymin)); d <= static_cast<int>(std::ceil(ymax));
             ++d)
            if (d >= ymin && d <= ymax) yticks.push_back(d);
    } else {
        for (int i = 0; i <= 5; ++i) yticks.push_back(ymin + (ymax - ymin) * i / 5.0);
    }
    for (double t : yticks) {
        double y = mt + (1.0 - (t - ymin) / (ymax - ymin)) * ph;
        svg << "<line x1=\"" << ml - 5 << "\" y1=\"" << num(y) << "\" x2=\"" << ml << "\" y2=\""
            << num(y) << "\" stroke=\"black\"/>\n";
        svg << "<line x1=\"" << ml << "\" y1=\"" << num(y) << "\" x2=\"" << ml + pw << "\" y2=\""
            << num(y) << "\" stroke=\"#dddddd\"/>\n";
        svg << "<text x=\"" << ml - 9 << "\" y=\"" << num(y + 4)
            << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\">"
            << tick_label(t, log_y) << "</text>\n";
    }
    // x ticks: 6 even steps
    for (int i = 0; i <= 5; ++i) {
        double t = xmin + (xmax - xmin) * i / 5.0;
        double x = px(t);
        svg << "<line x1=\"" << num(x) << "\" y1=\"" << mt + ph << "\" x2=\"" << num(x)
            << "\" y2=\"" << mt + ph + 5 << "\" stroke=\"black\"/>\n";
        svg << "<text x=\"" << num(x) << "\" y=\"" << mt + ph + 20
            << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">"
            << tick_label(t, false) << "</text>\n";
    }
    if (!x_label.empty())
        svg << "<text x=\"" << ml + pw / 2 << "\" y=\"" << height - 14
            << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">" << x_label
            << "</text>\n";
    if (!y_label.empty())
        svg << "<text x=\"18\" y=\"" << mt + ph / 2
            << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
            << "transform=\"rotate(-90 18 " << mt + ph / 2 << ")\">" << y_label << "</text>\n";

    for (std::size_t si = 0; si < series.size(); ++si) {
        const auto& s = series[si];
        const char* color = kPalette[si % (sizeof(kPalette) / sizeof(kPalette[0]))];
        svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.6\" points=\"";
        for (std::size_t i = 0; i < s.x.size(); ++i)
            svg << num(px(s.x[i])) << ',' << num(py(s.y[i])) << ' ';
        svg << "\"/>\n";
        double ly = mt + 16 + 18 * static_cast<double>(si);
        svg << "<line x1=\"" << ml + pw - 150 << "\" y1=\"" << num(ly - 4) << "\" x2=\""
            << ml + pw - 120 << "\" y2=\"" << num(ly - 4) << "\" stroke=\"" << color
            << "\" stroke-width=\"2\"/>\n";
        svg << "<text x=\"" << ml + pw - 112 << "\" y=\"" << num(ly)
            << "\" font-family=\"sans-serif\" font-size=\"12\">" << s.label << "</text>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

void SvgPlot::write(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write " + path);
    out << render();
}

}  // namespace qks
