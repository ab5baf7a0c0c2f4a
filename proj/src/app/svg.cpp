#include "epsens/app/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace epsens::app {

namespace {

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2",
                                    "#17becf"};

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", x);
    return buf;
}

bool usable(double x, double y) { return x > 0.0 && y > 0.0 && std::isfinite(x) && std::isfinite(y); }

}  // namespace

std::string render_svg(const LogLogPlot& plot, int width, int height) {
    double x_lo = std::numeric_limits<double>::infinity(), x_hi = -x_lo, y_lo = x_lo, y_hi = -x_lo;
    for (const auto& s : plot.series)
        for (auto [x, y] : s.points) {
            if (!usable(x, y)) continue;
            x_lo = std::min(x_lo, std::log10(x));
            x_hi = std::max(x_hi, std::log10(x));
            y_lo = std::min(y_lo, std::log10(y));
            y_hi = std::max(y_hi, std::log10(y));
        }
    if (!(x_lo <= x_hi)) x_lo = 0.0, x_hi = 1.0, y_lo = 0.0, y_hi = 1.0;
    x_lo = std::floor(x_lo), x_hi = std::ceil(x_hi);
    y_lo = std::floor(y_lo), y_hi = std::ceil(y_hi);
    if (x_hi == x_lo) x_hi += 1.0;
    if (y_hi == y_lo) y_hi += 1.0;

    const double left = 70, right = 170, top = 40, bottom = 50;
    const double pw = width - left - right, ph = height - top - bottom;
    auto px = [&](double lx) { return left + (lx - x_lo) / (x_hi - x_lo) * pw; };
    auto py = [&](double ly) { return top + (y_hi - ly) / (y_hi - y_lo) * ph; };

    std::ostringstream o;
    o << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << width << "\" height=\"" << height
      << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<text x=\"" << fmt(left + pw / 2) << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">"
      << escape(plot.title) << "</text>\n";

    // decade grid and tick labels
    const int xstep = std::max(1, static_cast<int>((x_hi - x_lo) / 10));
    for (double d = x_lo; d <= x_hi; d += xstep)
        o << "<line x1=\"" << fmt(px(d)) << "\" y1=\"" << fmt(top) << "\" x2=\"" << fmt(px(d)) << "\" y2=\""
          << fmt(top + ph) << "\" stroke=\"#ddd\"/>\n"
          << "<text x=\"" << fmt(px(d)) << "\" y=\"" << fmt(top + ph + 16)
          << "\" text-anchor=\"middle\">1e" << static_cast<int>(d) << "</text>\n";
    const int ystep = std::max(1, static_cast<int>((y_hi - y_lo) / 10));
    for (double d = y_lo; d <= y_hi; d += ystep)
        o << "<line x1=\"" << fmt(left) << "\" y1=\"" << fmt(py(d)) << "\" x2=\"" << fmt(left + pw) << "\" y2=\""
          << fmt(py(d)) << "\" stroke=\"#ddd\"/>\n"
          << "<text x=\"" << fmt(left - 6) << "\" y=\"" << fmt(py(d) + 4) << "\" text-anchor=\"end\">1e"
          << static_cast<int>(d) << "</text>\n";
    o << "<rect x=\"" << fmt(left) << "\" y=\"" << fmt(top) << "\" width=\"" << fmt(pw) << "\" height=\"" << fmt(ph)
      << "\" fill=\"none\" stroke=\"black\"/>\n"
      << "<text x=\"" << fmt(left + pw / 2) << "\" y=\"" << fmt(height - 12.0) << "\" text-anchor=\"middle\">"
      << escape(plot.x_label) << "</text>\n"
      << "<text x=\"16\" y=\"" << fmt(top + ph / 2) << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
      << fmt(top + ph / 2) << ")\">" << escape(plot.y_label) << "</text>\n";

    for (std::size_t k = 0; k < plot.series.size(); ++k) {
        const Series& s = plot.series[k];
        const char* colour = kPalette[k % std::size(kPalette)];
        std::ostringstream pts;
        for (auto [x, y] : s.points)
            if (usable(x, y)) pts << fmt(px(std::log10(x))) << ',' << fmt(py(std::log10(y))) << ' ';
        o << "<polyline fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"1.5\"";
        if (s.dashed) o << " stroke-dasharray=\"6 4\"";
        o << " points=\"" << pts.str() << "\"/>\n";
        const double ly = top + 14.0 * static_cast<double>(k);
        o << "<line x1=\"" << fmt(left + pw + 12) << "\" y1=\"" << fmt(ly) << "\" x2=\"" << fmt(left + pw + 36)
          << "\" y2=\"" << fmt(ly) << "\" stroke=\"" << colour << "\"" << (s.dashed ? " stroke-dasharray=\"6 4\"" : "")
          << "/>\n"
          << "<text x=\"" << fmt(left + pw + 40) << "\" y=\"" << fmt(ly + 4) << "\">" << escape(s.label)
          << "</text>\n";
    }
    o << "</svg>\n";
    return o.str();
}

}  // namespace epsens::app
