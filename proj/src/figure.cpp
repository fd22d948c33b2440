#include "barrenlab/figure.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace barrenlab::figure {

namespace {

constexpr int kWidth = 800;
constexpr int kHeight = 500;
constexpr int kLeft = 72;
constexpr int kRight = 20;
constexpr int kTop = 36;
constexpr int kBottom = 56;

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

std::string num(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

struct Axis {
    double lo, hi;
    bool log;

    double to_unit(double v) const {
        if (log) return (std::log10(v) - std::log10(lo)) /
                        (std::log10(hi) - std::log10(lo));
        return (v - lo) / (hi - lo);
    }
};

std::vector<double> linear_ticks(double lo, double hi) {
    const double span = hi - lo;
    const double raw = span / 5.0;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    double step = mag;
    for (double mult : {1.0, 2.0, 5.0, 10.0}) {
        if (mag * mult >= raw) {
            step = mag * mult;
            break;
        }
    }
    std::vector<double> ticks;
    for (double t = std::ceil(lo / step) * step; t <= hi + 1e-12 * span;
         t += step)
        ticks.push_back(std::fabs(t) < 1e-12 * span ? 0.0 : t);
    return ticks;
}

std::vector<double> log_ticks(double lo, double hi) {
    std::vector<double> ticks;
    const int e_lo = static_cast<int>(std::floor(std::log10(lo)));
    const int e_hi = static_cast<int>(std::ceil(std::log10(hi)));
    for (int e = e_lo; e <= e_hi; ++e) {
        const double t = std::pow(10.0, e);
        if (t >= lo * (1 - 1e-12) && t <= hi * (1 + 1e-12)) ticks.push_back(t);
    }
    if (ticks.empty()) ticks = {lo, hi};
    return ticks;
}

std::string escape(const std::string& text) {
    std::string out;
    for (char c : text) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            default: out += c;
        }
    }
    return out;
}

}  // namespace

void emit_svg(const FigureSpec& spec, const std::string& path) {
    if (spec.series.empty())
        throw ValidationError("emit_svg: figure needs at least one series");

    double x_lo = 0, x_hi = 0, y_lo = 0, y_hi = 0;
    bool first = true;
    for (const auto& s : spec.series) {
        if (s.points.empty())
            throw ValidationError("emit_svg: empty series '" + s.label + "'");
        for (const auto& [x, y] : s.points) {
            if (!std::isfinite(x) || !std::isfinite(y))
                throw ValidationError("emit_svg: non-finite data point");
            if (spec.log_x && x <= 0.0)
                throw ValidationError("emit_svg: log x-axis with x <= 0");
            if (spec.log_y && y <= 0.0)
                throw ValidationError("emit_svg: log y-axis with y <= 0");
            if (first) {
                x_lo = x_hi = x;
                y_lo = y_hi = y;
                first = false;
            } else {
                x_lo = std::min(x_lo, x);
                x_hi = std::max(x_hi, x);
                y_lo = std::min(y_lo, y);
                y_hi = std::max(y_hi, y);
            }
        }
    }
    if (x_lo == x_hi) {
        x_lo -= spec.log_x ? 0.0 : 1.0;
        x_hi += 1.0;
        if (spec.log_x) x_lo = x_hi / 10.0;
    }
    if (y_lo == y_hi) {
        y_lo -= spec.log_y ? 0.0 : 1.0;
        y_hi += 1.0;
        if (spec.log_y) y_lo = y_hi / 10.0;
    }
    const Axis ax{x_lo, x_hi, spec.log_x};
    const Axis ay{y_lo, y_hi, spec.log_y};

    const double plot_w = kWidth - kLeft - kRight;
    const double plot_h = kHeight - kTop - kBottom;
    auto px = [&](double v) { return kLeft + ax.to_unit(v) * plot_w; };
    auto py = [&](double v) { return kHeight - kBottom - ay.to_unit(v) * plot_h; };

    std::ostringstream svg;
    svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
        << "\" height=\"" << kHeight << "\" viewBox=\"0 0 " << kWidth << " "
        << kHeight << "\">\n"
        << "<rect width=\"" << kWidth << "\" height=\"" << kHeight
        << "\" fill=\"white\"/>\n";

    if (!spec.title.empty())
        svg << "<text x=\"" << kWidth / 2 << "\" y=\"22\" font-size=\"15\" "
               "text-anchor=\"middle\" font-family=\"sans-serif\">"
            << escape(spec.title) << "</text>\n";

    // frame
    svg << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\""
        << num(plot_w) << "\" height=\"" << num(plot_h)
        << "\" fill=\"none\" stroke=\"black\"/>\n";

    const auto x_ticks =
        spec.log_x ? log_ticks(x_lo, x_hi) : linear_ticks(x_lo, x_hi);
    for (double t : x_ticks) {
        const double x = px(t);
        svg << "<line x1=\"" << num(x) << "\" y1=\"" << kHeight - kBottom
            << "\" x2=\"" << num(x) << "\" y2=\"" << kHeight - kBottom + 5
            << "\" stroke=\"black\"/>\n"
            << "<text x=\"" << num(x) << "\" y=\"" << kHeight - kBottom + 20
            << "\" font-size=\"11\" text-anchor=\"middle\" "
               "font-family=\"sans-serif\">"
            << num(t) << "</text>\n";
    }
    const auto y_ticks =
        spec.log_y ? log_ticks(y_lo, y_hi) : linear_ticks(y_lo, y_hi);
    for (double t : y_ticks) {
        const double y = py(t);
        svg << "<line x1=\"" << kLeft - 5 << "\" y1=\"" << num(y) << "\" x2=\""
            << kLeft << "\" y2=\"" << num(y) << "\" stroke=\"black\"/>\n"
            << "<text x=\"" << kLeft - 8 << "\" y=\"" << num(y + 4)
            << "\" font-size=\"11\" text-anchor=\"end\" "
               "font-family=\"sans-serif\">"
            << num(t) << "</text>\n";
    }

    if (!spec.x_label.empty())
        svg << "<text x=\"" << kLeft + plot_w / 2 << "\" y=\""
            << kHeight - 14
            << "\" font-size=\"13\" text-anchor=\"middle\" "
               "font-family=\"sans-serif\">"
            << escape(spec.x_label) << "</text>\n";
    if (!spec.y_label.empty())
        svg << "<text x=\"18\" y=\"" << kTop + plot_h / 2
            << "\" font-size=\"13\" text-anchor=\"middle\" "
               "font-family=\"sans-serif\" transform=\"rotate(-90 18 "
            << kTop + plot_h / 2 << ")\">" << escape(spec.y_label)
            << "</text>\n";

    for (std::size_t i = 0; i < spec.series.size(); ++i) {
        const char* color = kPalette[i % (sizeof(kPalette) / sizeof(*kPalette))];
        svg << "<polyline fill=\"none\" stroke=\"" << color
            << "\" stroke-width=\"1.5\" points=\"";
        bool first_pt = true;
        for (const auto& [x, y] : spec.series[i].points) {
            if (!first_pt) svg << ' ';
            svg << num(px(x)) << ',' << num(py(y));
            first_pt = false;
        }
        svg << "\"/>\n";
    }

    // legend, top-right corner of the plot area
    const double legend_x = kWidth - kRight - 190;
    for (std::size_t i = 0; i < spec.series.size(); ++i) {
        const double y = kTop + 14 + 16.0 * static_cast<double>(i);
        const char* color = kPalette[i % (sizeof(kPalette) / sizeof(*kPalette))];
        svg << "<line x1=\"" << num(legend_x) << "\" y1=\"" << num(y - 4)
            << "\" x2=\"" << num(legend_x + 22) << "\" y2=\"" << num(y - 4)
            << "\" stroke=\"" << color << "\" stroke-width=\"1.5\"/>\n"
            << "<text x=\"" << num(legend_x + 28) << "\" y=\"" << num(y)
            << "\" font-size=\"11\" font-family=\"sans-serif\">"
            << escape(spec.series[i].label) << "</text>\n";
    }

    svg << "</svg>\n";

    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("emit_svg: cannot open " + path);
    out << svg.str();
    if (!out) throw IoError("emit_svg: write failed for " + path);
}

}  // namespace barrenlab::figure
