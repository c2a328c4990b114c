#pragma once

#include <string>
#include <vector>

namespace dimred::cli {

struct PlotSeries {
    std::string label;
    std::vector<std::pair<double, double>> points;
};

/// Minimal static log-log line plot as an SVG file. Returns false instead
/// of throwing: plotting is derived output and never fails a run.
bool write_loglog_svg(const std::string& path, const std::string& title,
                      const std::vector<PlotSeries>& series);

} // namespace dimred::cli
