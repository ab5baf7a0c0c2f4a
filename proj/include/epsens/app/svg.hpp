#pragma once

// Minimal SVG 1.1 emitter for log-log line plots.

#include <string>
#include <utility>
#include <vector>

namespace epsens::app {

struct Series {
    std::string label;
    std::vector<std::pair<double, double>> points;  // non-positive values are skipped
    bool dashed = false;
};

struct LogLogPlot {
    std::string title;
    std::string x_label;
    std::string y_label;
    std::vector<Series> series;
};

std::string render_svg(const LogLogPlot& plot, int width = 720, int height = 480);

}  // namespace epsens::app
