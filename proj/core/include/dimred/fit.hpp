#pragma once

#include <vector>

#include "dimred/types.hpp"

namespace dimred::cli {

struct SlopeFit {
    double slope = 0.0;
    double intercept = 0.0;
    double residual = 0.0; // rms residual in log-log space
};

/// Least squares on (log x, log y). Needs >= 3 strictly positive pairs.
SlopeFit fit_slope(const std::vector<std::pair<double, double>>& pairs);

} // namespace dimred::cli
