#pragma once

#include <string>
#include <vector>

namespace ineqlab {

struct Series {
    std::string name;
    std::vector<double> x;
    std::vector<double> y;
};

struct PlotSpec {
    std::string title;
    std::string xlabel;
    std::string ylabel;
    bool logx = true;
    bool logy = true;
};

// Self-contained SVG: axes with ticks, one polyline with markers per series,
// legend. Points with nonpositive coordinates on a log axis are skipped.
std::string svg_plot(const std::vector<Series>& series, const PlotSpec& spec);

// Writes content to path, creating parent directories.
void write_file(const std::string& path, const std::string& content);

std::string format_double(double x);  // %.17g

}  // namespace ineqlab
