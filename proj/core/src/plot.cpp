#include "dimred/plot.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace dimred::cli {

bool write_loglog_svg(const std::string& path, const std::string& title,
                      const std::vector<PlotSeries>& series) {
    try {
        double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
        for (const auto& s : series)
            for (const auto& [x, y] : s.points) {
                if (!(x > 0.0) || !(y > 0.0)) continue;
                xmin = std::min(xmin, std::log10(x));
                xmax = std::max(xmax, std::log10(x));
                ymin = std::min(ymin, std::log10(y));
                ymax = std::max(ymax, std::log10(y));
            }
        if (!(xmin <= xmax) || !(ymin <= ymax)) return false;
        if (xmax - xmin < 1e-9) xmax = xmin + 1.0;
        if (ymax - ymin < 1e-9) ymax = ymin + 1.0;

        const double w = 640, h = 480, m = 60;
        auto px = [&](double lx) { return m + (lx - xmin) / (xmax - xmin) * (w - 2 * m); };
        auto py = [&](double ly) { return h - m - (ly - ymin) / (ymax - ymin) * (h - 2 * m); };
        const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

        std::ostringstream out;
        out << "<svg xmlns='http://www.w3.org/2000/svg' width='" << w << "' height='" << h << "'>\n";
        out << "<rect width='100%' height='100%' fill='white'/>\n";
        out << "<text x='" << w / 2 << "' y='24' text-anchor='middle' font-size='15'>" << title
            << "</text>\n";
        out << "<rect x='" << m << "' y='" << m << "' width='" << w - 2 * m << "' height='"
            << h - 2 * m << "' fill='none' stroke='black'/>\n";
        int ci = 0;
        for (const auto& s : series) {
            out << "<polyline fill='none' stroke='" << colors[ci % 6] << "' stroke-width='1.5' points='";
            for (const auto& [x, y] : s.points)
                if (x > 0.0 && y > 0.0) out << px(std::log10(x)) << "," << py(std::log10(y)) << " ";
            out << "'/>\n";
            out << "<text x='" << w - m + 4 << "' y='" << m + 16 * (ci + 1) << "' font-size='11' fill='"
                << colors[ci % 6] << "'>" << s.label << "</text>\n";
            ++ci;
        }
        out << "<text x='" << w / 2 << "' y='" << h - 16
            << "' text-anchor='middle' font-size='12'>log10 parameter</text>\n";
        out << "</svg>\n";

        std::ofstream f(path, std::ios::binary);
        if (!f) return false;
        f << out.str();
        return static_cast<bool>(f);
    } catch (...) {
        return false;
    }
}

} // namespace dimred::cli
