#pragma once

#include <string>
#include <vector>

namespace qnslab {

/// Minimal line-plot writer for profile and ratio curves.
struct SvgSeries {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
};

void write_svg_plot(const std::string& path, const std::string& title,
                    const std::vector<SvgSeries>& series, bool log_x = false, bool log_y = false);

}  // namespace qnslab
