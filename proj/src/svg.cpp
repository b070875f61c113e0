#include "qclust/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <limits>
#include <sstream>

namespace qclust::svg {

namespace {

constexpr int kWidth = 640;
constexpr int kHeight = 480;
constexpr int kMarginLeft = 64;
constexpr int kMarginRight = 20;
constexpr int kMarginTop = 40;
constexpr int kMarginBottom = 52;

const char* kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#9467bd", "#8c564b",
                          "#e377c2", "#7f7f7f", "#bcbd22", "#17becf", "#aec7e8"};
constexpr std::size_t kPaletteSize = sizeof(kPalette) / sizeof(kPalette[0]);

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

std::string xml_escape(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c; break;
        }
    }
    return out;
}

struct Range {
    double lo = 0.0;
    double hi = 1.0;
    void expand(double v) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    void pad() {
        if (hi - lo < 1e-12) {
            lo -= 0.5;
            hi += 0.5;
        } else {
            const double p = 0.05 * (hi - lo);
            lo -= p;
            hi += p;
        }
    }
};

struct Frame {
    Range x;
    Range y;
    double px(double v) const {
        return kMarginLeft + (v - x.lo) / (x.hi - x.lo) * (kWidth - kMarginLeft - kMarginRight);
    }
    double py(double v) const {
        return kHeight - kMarginBottom -
               (v - y.lo) / (y.hi - y.lo) * (kHeight - kMarginTop - kMarginBottom);
    }
};

void open_svg(std::ostringstream& out, const std::string& title) {
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
        << kHeight << "\" viewBox=\"0 0 " << kWidth << " " << kHeight << "\">\n";
    out << "<rect width=\"" << kWidth << "\" height=\"" << kHeight << "\" fill=\"white\"/>\n";
    out << "<text x=\"" << kWidth / 2 << "\" y=\"22\" text-anchor=\"middle\" "
           "font-family=\"sans-serif\" font-size=\"15\">"
        << xml_escape(title) << "</text>\n";
}

void draw_axes(std::ostringstream& out, const Frame& f, const std::string& x_label,
               const std::string& y_label) {
    const double x0 = kMarginLeft;
    const double x1 = kWidth - kMarginRight;
    const double y0 = kHeight - kMarginBottom;
    const double y1 = kMarginTop;
    out << "<line x1=\"" << x0 << "\" y1=\"" << y0 << "\" x2=\"" << x1 << "\" y2=\"" << y0
        << "\" stroke=\"black\"/>\n";
    out << "<line x1=\"" << x0 << "\" y1=\"" << y0 << "\" x2=\"" << x0 << "\" y2=\"" << y1
        << "\" stroke=\"black\"/>\n";
    constexpr int kTicks = 5;
    for (int t = 0; t <= kTicks; ++t) {
        const double fx = f.x.lo + (f.x.hi - f.x.lo) * t / kTicks;
        const double fy = f.y.lo + (f.y.hi - f.y.lo) * t / kTicks;
        const double px = f.px(fx);
        const double py = f.py(fy);
        out << "<line x1=\"" << fmt(px) << "\" y1=\"" << y0 << "\" x2=\"" << fmt(px)
            << "\" y2=\"" << y0 + 4 << "\" stroke=\"black\"/>\n";
        out << "<text x=\"" << fmt(px) << "\" y=\"" << y0 + 18
            << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">"
            << fmt(fx) << "</text>\n";
        out << "<line x1=\"" << x0 - 4 << "\" y1=\"" << fmt(py) << "\" x2=\"" << x0
            << "\" y2=\"" << fmt(py) << "\" stroke=\"black\"/>\n";
        out << "<text x=\"" << x0 - 8 << "\" y=\"" << fmt(py + 4)
            << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" << fmt(fy)
            << "</text>\n";
    }
    out << "<text x=\"" << (x0 + x1) / 2 << "\" y=\"" << kHeight - 12
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">"
        << xml_escape(x_label) << "</text>\n";
    out << "<text x=\"16\" y=\"" << (y0 + y1) / 2
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
           "transform=\"rotate(-90 16 "
        << (y0 + y1) / 2 << ")\">" << xml_escape(y_label) << "</text>\n";
}

}  // namespace

std::string scatter_plot(const Dataset& data, const std::vector<int>& assignments,
                         const Dataset& centroids, const std::string& title,
                         const std::string& x_label, const std::string& y_label) {
    if (data.cols < 2) throw UsageError("scatter plot needs at least two feature columns");
    if (assignments.size() != data.rows) throw UsageError("assignments length mismatch");

    Frame f;
    f.x = {std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
    f.y = f.x;
    for (std::size_t i = 0; i < data.rows; ++i) {
        f.x.expand(data.at(i, 0));
        f.y.expand(data.at(i, 1));
    }
    for (std::size_t c = 0; c < centroids.rows; ++c) {
        f.x.expand(centroids.at(c, 0));
        f.y.expand(centroids.at(c, 1));
    }
    f.x.pad();
    f.y.pad();

    std::ostringstream out;
    open_svg(out, title);
    draw_axes(out, f, x_label, y_label);

    for (std::size_t i = 0; i < data.rows; ++i) {
        const char* color = kPalette[static_cast<std::size_t>(assignments[i]) % kPaletteSize];
        out << "<circle cx=\"" << fmt(f.px(data.at(i, 0))) << "\" cy=\""
            << fmt(f.py(data.at(i, 1))) << "\" r=\"3\" fill=\"" << color
            << "\" fill-opacity=\"0.75\"/>\n";
    }

    std::vector<std::size_t> sizes(centroids.rows, 0);
    for (int a : assignments) {
        if (a >= 0 && static_cast<std::size_t>(a) < sizes.size()) ++sizes[a];
    }
    for (std::size_t c = 0; c < centroids.rows; ++c) {
        if (sizes[c] == 0) {
            std::cerr << "qclust: warning: cluster " << c << " is empty, no centroid marker\n";
            continue;
        }
        const double cx = f.px(centroids.at(c, 0));
        const double cy = f.py(centroids.at(c, 1));
        out << "<path class=\"centroid\" stroke=\"red\" stroke-width=\"2.5\" d=\"M "
            << fmt(cx - 6) << " " << fmt(cy - 6) << " L " << fmt(cx + 6) << " " << fmt(cy + 6)
            << " M " << fmt(cx - 6) << " " << fmt(cy + 6) << " L " << fmt(cx + 6) << " "
            << fmt(cy - 6) << "\"/>\n";
    }
    out << "</svg>\n";
    return out.str();
}

std::string line_plot(const std::vector<std::pair<int, double>>& points,
                      const std::string& title, const std::string& x_label,
                      const std::string& y_label) {
    if (points.empty()) throw UsageError("line plot needs at least one point");

    Frame f;
    f.x = {static_cast<double>(points.front().first), static_cast<double>(points.back().first)};
    f.y = {std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
    for (const auto& [k, v] : points) f.y.expand(v);
    f.x.pad();
    f.y.pad();

    std::ostringstream out;
    open_svg(out, title);
    draw_axes(out, f, x_label, y_label);

    out << "<polyline fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"2\" points=\"";
    for (const auto& [k, v] : points) {
        out << fmt(f.px(k)) << "," << fmt(f.py(v)) << " ";
    }
    out << "\"/>\n";
    for (const auto& [k, v] : points) {
        out << "<circle cx=\"" << fmt(f.px(k)) << "\" cy=\"" << fmt(f.py(v))
            << "\" r=\"3.5\" fill=\"#1f77b4\"/>\n";
    }
    out << "</svg>\n";
    return out.str();
}

}  // namespace qclust::svg
