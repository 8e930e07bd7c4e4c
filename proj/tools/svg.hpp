#pragma once

#include <string>
#include <vector>

namespace ouprem::cli {

struct Series {
    std::string label;
    std::vector<double> y;
};

/// Self-contained SVG line plot of one or more series over a common x grid.
std::string render_svg(const std::string& title, const std::string& x_label,
                       const std::vector<double>& x, const std::vector<Series>& series);

}  // namespace ouprem::cli
