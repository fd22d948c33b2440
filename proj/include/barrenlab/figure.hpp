#pragma once

#include <string>
#include <utility>
#include <vector>

#include "barrenlab/errors.hpp"

namespace barrenlab::figure {

struct Series {
    std::string label;
    std::vector<std::pair<double, double>> points;
};

/// Line-chart description; emit_svg renders it 800x500 with axis ticks and
/// a legend, byte-identical for identical specs.
struct FigureSpec {
    std::vector<Series> series;
    std::string x_label;
    std::string y_label;
    std::string title;
    bool log_x = false;
    bool log_y = false;
};

void emit_svg(const FigureSpec& spec, const std::string& path);

}  // namespace barrenlab::figure
