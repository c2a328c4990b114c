#include "dimred/fit.hpp"

#include <cmath>

namespace dimred::cli {

SlopeFit fit_slope(const std::vector<std::pair<double, double>>& pairs) {
    if (pairs.size() < 3) throw numerical_error("fit_slope: need at least 3 points");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(pairs.size());
    for (const auto& [x, y] : pairs) {
        if (!(x > 0.0) || !(y > 0.0)) throw numerical_error("fit_slope: data must be positive");
        const double lx = std::log(x), ly = std::log(y);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    SlopeFit f;
    const double denom = n * sxx - sx * sx;
    if (std::abs(denom) < 1e-300) throw numerical_error("fit_slope: degenerate abscissae");
    f.slope = (n * sxy - sx * sy) / denom;
    f.intercept = (sy - f.slope * sx) / n;
    double ss = 0.0;
    for (const auto& [x, y] : pairs) {
        const double r = std::log(y) - (f.intercept + f.slope * std::log(x));
        ss += r * r;
    }
    f.residual = std::sqrt(ss / n);
    return f;
}

} // namespace dimred::cli
