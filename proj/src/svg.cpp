#include "qnslab/svg.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

#include "qnslab/util.hpp"

namespace qnslab {

void write_svg_plot(const std::string& path, const std::string& title,
                    const std::vector<SvgSeries>& series, bool log_x, bool log_y) {
    const int W = 640, H = 420, ML = 60, MR = 20, MT = 40, MB = 45;
    auto tx = [&](double v) { return log_x ? std::log10(std::max(v, 1e-300)) : v; };
    auto ty = [&](double v) { return log_y ? std::log10(std::max(std::fabs(v), 1e-300)) : v; };

    double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
    double ymin = xmin, ymax = -xmin;
    for (const auto& s : series)
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            xmin = std::min(xmin, tx(s.x[i]));
            xmax = std::max(xmax, tx(s.x[i]));
            ymin = std::min(ymin, ty(s.y[i]));
            ymax = std::max(ymax, ty(s.y[i]));
        }
    if (!(xmax > xmin)) xmax = xmin + 1.0;
    if (!(ymax > ymin)) ymax = ymin + 1.0;

    auto px = [&](double v) { return ML + (tx(v) - xmin) / (xmax - xmin) * (W - ML - MR); };
    auto py = [&](double v) { return H - MB - (ty(v) - ymin) / (ymax - ymin) * (H - MT - MB); };

    std::ofstream out(path);
    require(static_cast<bool>(out), "write_svg_plot: cannot open " + path);
    out << "<svg xmlns='http://www.w3.org/2000/svg' width='" << W << "' height='" << H << "'>\n";
    out << "<rect width='100%' height='100%' fill='white'/>\n";
    out << "<text x='" << W / 2 << "' y='22' text-anchor='middle' font-size='15'>" << title
        << "</text>\n";
    out << "<line x1='" << ML << "' y1='" << H - MB << "' x2='" << W - MR << "' y2='" << H - MB
        << "' stroke='black'/>\n";
    out << "<line x1='" << ML << "' y1='" << MT << "' x2='" << ML << "' y2='" << H - MB
        << "' stroke='black'/>\n";
    const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};
    int ci = 0;
    int legend_y = MT + 4;
    for (const auto& s : series) {
        out << "<polyline fill='none' stroke='" << colors[ci % 6] << "' stroke-width='1.5' points='";
        for (std::size_t i = 0; i < s.x.size(); ++i) out << px(s.x[i]) << "," << py(s.y[i]) << " ";
        out << "'/>\n";
        out << "<text x='" << W - MR - 150 << "' y='" << legend_y << "' font-size='12' fill='"
            << colors[ci % 6] << "'>" << s.label << "</text>\n";
        legend_y += 16;
        ++ci;
    }
    out << "<text x='" << W / 2 << "' y='" << H - 10 << "' text-anchor='middle' font-size='12'>"
        << (log_x ? "log10 x" : "x") << "</text>\n";
    out << "</svg>\n";
}

}  // namespace qnslab
