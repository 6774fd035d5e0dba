#pragma once

#include <string>
#include <vector>

namespace qks {

// Minimal self-contained SVG line plot: axes, optional log-scale y, one
// polyline per series, legend. Enough for eigenvalue-curve figures; not a
// general plotting surface.
struct SvgSeries {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
};

struct SvgPlot {
    std::string title;
    std::string x_label;
    std::string y_label;
    bool log_y = false;
    std::vector<SvgSeries> series;

    void add_series(const std::string& label, std::vector<double> x, std::vector<double> y);
    std::string render() const;
    void write(const std::string& path) const;
};

}  // namespace qks
