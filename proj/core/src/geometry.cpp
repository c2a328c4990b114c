#include "dimred/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace dimred::geometry {

CurveProfile::CurveProfile(double kappa0, double delta, double period)
    : period_(period), kappa0_(kappa0), delta_(delta) {
    if (!(period > 0.0)) throw numerical_error("CurveProfile: period must be positive");
    if (delta < 0.0) throw numerical_error("CurveProfile: delta must be nonnegative");
    max_abs_ = std::abs(kappa0) + delta;
    kappa_max_ = kappa0 + delta;
    argmax_ = 0.0;
    const double w = 2.0 * M_PI / period_;
    hess_at_max_ = delta * w * w;
    if (!std::isfinite(max_abs_)) throw numerical_error("CurveProfile: non-finite curvature");
}

CurveProfile CurveProfile::from_samples(const std::vector<double>& samples, double period) {
    if (samples.size() < 4) throw numerical_error("CurveProfile: need at least 4 samples");
    CurveProfile p(0.0, 0.0, period);
    p.samples_ = samples;

    // periodic cubic spline: cyclic tridiagonal system for second derivatives,
    // solved by Thomas elimination plus a rank-one (Sherman-Morrison) update
    const index_t n = static_cast<index_t>(samples.size());
    const double h = period / static_cast<double>(n);
    std::vector<double> rhs(static_cast<size_t>(n));
    for (index_t i = 0; i < n; ++i) {
        const double ym = samples[static_cast<size_t>((i + n - 1) % n)];
        const double y0 = samples[static_cast<size_t>(i)];
        const double yp = samples[static_cast<size_t>((i + 1) % n)];
        rhs[static_cast<size_t>(i)] = 6.0 * (ym - 2.0 * y0 + yp) / (h * h);
    }
    // cyclic system tridiag(1, 4, 1) with unit corners, solved by Thomas
    // elimination on a rank-one-modified tridiagonal (Sherman-Morrison)
    const double diag = 4.0, off = 1.0;
    const double gamma = -diag;
    auto solve_tridiag = [&](std::vector<double> b) {
        std::vector<double> d(static_cast<size_t>(n), diag);
        d[0] = diag - gamma;
        d[static_cast<size_t>(n - 1)] = diag - off * off / gamma;
        for (index_t i = 1; i < n; ++i) {
            const double mfac = off / d[static_cast<size_t>(i - 1)];
            d[static_cast<size_t>(i)] -= mfac * off;
            b[static_cast<size_t>(i)] -= mfac * b[static_cast<size_t>(i - 1)];
        }
        std::vector<double> x(static_cast<size_t>(n));
        x[static_cast<size_t>(n - 1)] = b[static_cast<size_t>(n - 1)] / d[static_cast<size_t>(n - 1)];
        for (index_t i = n - 2; i >= 0; --i)
            x[static_cast<size_t>(i)] = (b[static_cast<size_t>(i)] - off * x[static_cast<size_t>(i + 1)]) /
                                        d[static_cast<size_t>(i)];
        return x;
    };
    std::vector<double> u(static_cast<size_t>(n), 0.0);
    u[0] = gamma;
    u[static_cast<size_t>(n - 1)] = off;
    std::vector<double> x1 = solve_tridiag(rhs);
    std::vector<double> x2 = solve_tridiag(u);
    const double vx1 = x1[0] + (off / gamma) * x1[static_cast<size_t>(n - 1)];
    const double vx2 = 1.0 + x2[0] + (off / gamma) * x2[static_cast<size_t>(n - 1)];
    p.spline_m_.resize(static_cast<size_t>(n));
    for (index_t i = 0; i < n; ++i)
        p.spline_m_[static_cast<size_t>(i)] = x1[static_cast<size_t>(i)] - vx1 / vx2 * x2[static_cast<size_t>(i)];

    // profile extrema and curvature bound from a dense scan
    const int scan = 4096;
    double best = -1e300, max_abs = 0.0, arg = 0.0;
    for (int k = 0; k < scan; ++k) {
        const double s = period * k / scan;
        const double v = p.kappa(s);
        max_abs = std::max(max_abs, std::abs(v));
        if (v > best) { best = v; arg = s; }
    }
    p.max_abs_ = max_abs;
    p.kappa_max_ = best;
    p.argmax_ = arg;
    const double ds = period / scan;
    p.hess_at_max_ = -(p.kappa(arg + ds) - 2.0 * best + p.kappa(arg - ds)) / (ds * ds);
    return p;
}

double CurveProfile::kappa(double s) const {
    if (is_cosine_family()) return kappa0_ + delta_ * std::cos(2.0 * M_PI * s / period_);
    const index_t n = static_cast<index_t>(samples_.size());
    const double h = period_ / static_cast<double>(n);
    double u = std::fmod(s, period_);
    if (u < 0) u += period_;
    const index_t i = std::min<index_t>(static_cast<index_t>(u / h), n - 1);
    const double x = u - static_cast<double>(i) * h;
    const index_t ip = (i + 1) % n;
    const double mi = spline_m_[static_cast<size_t>(i)], mp = spline_m_[static_cast<size_t>(ip)];
    const double yi = samples_[static_cast<size_t>(i)], yp = samples_[static_cast<size_t>(ip)];
    const double a = (mp - mi) / (6.0 * h);
    const double b = mi / 2.0;
    const double c = (yp - yi) / h - h * (2.0 * mi + mp) / 6.0;
    return yi + x * (c + x * (b + x * a));
}

double CurveProfile::kappa_prime(double s) const {
    if (is_cosine_family()) {
        const double w = 2.0 * M_PI / period_;
        return -delta_ * w * std::sin(w * s);
    }
    const index_t n = static_cast<index_t>(samples_.size());
    const double h = period_ / static_cast<double>(n);
    double u = std::fmod(s, period_);
    if (u < 0) u += period_;
    const index_t i = std::min<index_t>(static_cast<index_t>(u / h), n - 1);
    const double x = u - static_cast<double>(i) * h;
    const index_t ip = (i + 1) % n;
    const double mi = spline_m_[static_cast<size_t>(i)], mp = spline_m_[static_cast<size_t>(ip)];
    const double yi = samples_[static_cast<size_t>(i)], yp = samples_[static_cast<size_t>(ip)];
    const double a = (mp - mi) / (6.0 * h);
    const double b = mi / 2.0;
    const double c = (yp - yi) / h - h * (2.0 * mi + mp) / 6.0;
    return c + x * (2.0 * b + 3.0 * a * x);
}

bool CurveProfile::has_unique_nondegenerate_max() const {
    if (is_cosine_family()) return delta_ > 0.0;
    if (!(hess_at_max_ > 0.0)) return false;
    // scan for a second local maximum within 1% of the global one
    const int scan = 4096;
    int near_max = 0;
    for (int k = 0; k < scan; ++k) {
        const double s = period_ * k / scan;
        if (kappa(s) > kappa_max_ - 0.01 * std::max(1.0, std::abs(kappa_max_))) ++near_max;
    }
    // contiguous plateau around one peak only
    return near_max < scan / 8;
}

void CurveProfile::check_closed() const {
    const int nq = 8192;
    double integral = 0.0;
    for (int k = 0; k < nq; ++k) integral += kappa(period_ * k / nq);
    integral *= period_ / nq;
    const double winding = integral / (2.0 * M_PI);
    const double rounded = std::round(winding);
    if (std::abs(rounded) < 0.5 || std::abs(winding - rounded) > 1e-8)
        throw numerical_error("CurveProfile: curvature integral is not 2*pi times a nonzero winding number");
}

double weight(const CurveProfile& profile, double eps, double s, double t) {
    if (!(eps * std::abs(t) * profile.max_abs_kappa() < 1.0))
        throw tubular_error("weight: tubular condition violated");
    return 1.0 - eps * t * profile.kappa(s);
}

double metric_factor(const CurveProfile& profile, double eps, double s, double t) {
    const double w = weight(profile, eps, s, t);
    return 1.0 / (w * w);
}

bool tubular_ok(const CurveProfile& profile, double eps) {
    return eps * profile.max_abs_kappa() < 1.0;
}

} // namespace dimred::geometry
