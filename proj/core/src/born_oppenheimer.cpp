#include "dimred/born_oppenheimer.hpp"

#include <algorithm>
#include <cmath>

#include "dimred/banded.hpp"
#include "dimred/fit.hpp"
#include "dimred/subspace.hpp"

namespace dimred::bo {

using numkernel::BandedLu;
using numkernel::BandedMatrix;
using numkernel::SparseSym;
using numkernel::SymTridiag;

double TwoLevelBOModel::gamma() const {
    // dense scan including s = 0; the default family attains both infima there
    double m1 = 1e300, m2 = 1e300;
    const int nscan = 4001;
    for (int i = 0; i < nscan; ++i) {
        const double s = -radius + 2.0 * radius * i / (nscan - 1);
        m1 = std::min(m1, mu1(s));
        m2 = std::min(m2, mu2(s));
    }
    const double g = m2 - m1;
    if (!(g > 0.0)) throw numerical_error("TwoLevelBOModel: spectral gap is not positive");
    return g;
}

SparseSym assemble_full(const TwoLevelBOModel& model, index_t n) {
    if (n < 1) throw numerical_error("assemble_full: n >= 1 required");
    const double hg = 2.0 * model.radius / static_cast<double>(n + 1);
    const double kin = model.h * model.h / (hg * hg);
    SparseSym a(2 * n);
    for (index_t i = 0; i < n; ++i) {
        const double s = -model.radius + hg * static_cast<double>(i + 1);
        const double c = std::cos(model.theta(s));
        const double sn = std::sin(model.theta(s));
        const double m1 = model.mu1(s), m2 = model.mu2(s);
        const double t00 = c * c * m1 + sn * sn * m2;
        const double t11 = sn * sn * m1 + c * c * m2;
        const double t01 = c * sn * (m2 - m1);
        a.add(2 * i, 2 * i, t00 + 2.0 * kin);
        a.add(2 * i + 1, 2 * i + 1, t11 + 2.0 * kin);
        if (t01 != 0.0) a.add(2 * i, 2 * i + 1, t01);
        if (i + 1 < n) {
            a.add(2 * i, 2 * (i + 1), -kin);
            a.add(2 * i + 1, 2 * (i + 1) + 1, -kin);
        }
    }
    return a;
}

SymTridiag assemble_effective(const TwoLevelBOModel& model, index_t n) {
    if (n < 1) throw numerical_error("assemble_effective: n >= 1 required");
    const double hg = 2.0 * model.radius / static_cast<double>(n + 1);
    const double kin = model.h * model.h / (hg * hg);
    SymTridiag t;
    t.diag.resize(static_cast<size_t>(n));
    t.offdiag.assign(static_cast<size_t>(n - 1), -kin);
    for (index_t i = 0; i < n; ++i) {
        const double s = -model.radius + hg * static_cast<double>(i + 1);
        const double tp = model.theta_prime(s);
        t.diag[static_cast<size_t>(i)] = 2.0 * kin + model.mu1(s) + model.h * model.h * tp * tp;
    }
    return t;
}

namespace {

std::vector<double> full_lowest(const TwoLevelBOModel& model, index_t n, index_t k) {
    SparseSym a = assemble_full(model, n);
    // interleaved components: bandwidth 2 covers fiber and kinetic couplings
    BandedMatrix<double> band(2 * n, 2, 2);
    for (const auto& t : a.triplets()) band.add(t.i, t.j, t.v);
    const double sigma = -0.25 * std::max(model.h, 0.05);
    for (index_t i = 0; i < 2 * n; ++i) band.add(i, i, -sigma);
    BandedLu<double> lu(std::move(band));
    if (lu.singular()) throw numerical_error("full_lowest: shifted operator singular");

    auto solve = [&](const std::vector<double>& x) { return lu.solve(x); };
    auto apply_a = [&](const std::vector<double>& x) { return a.apply(x); };
    std::vector<double> ones(static_cast<size_t>(2 * n), 1.0);
    numkernel::SubspaceOptions opts;
    opts.res_tol = 1e-11;
    return numkernel::lowest_pencil_eigs(solve, apply_a, ones, 2 * n, k, sigma, opts).values;
}

} // namespace

BoEigs lowest_eigs(const TwoLevelBOModel& model, index_t k) {
    if (k > 6) throw numerical_error("lowest_eigs: k <= 6 (low-lying regime)");
    BoEigs out;
    std::vector<double> prev_full, prev_eff;
    bool have_prev_ext = false;
    std::vector<double> ext_full_prev, ext_eff_prev;

    index_t n = model.base_n;
    for (int level = 0; level < 6; ++level) {
        BoLevel lv;
        lv.n = n;
        lv.full = full_lowest(model, n, k);
        lv.effective = numkernel::sym_tridiag_eigs(assemble_effective(model, n), k);
        out.levels.push_back(lv);

        if (!prev_full.empty()) {
            std::vector<double> ext_full(static_cast<size_t>(k)), ext_eff(static_cast<size_t>(k));
            for (index_t i = 0; i < k; ++i) {
                ext_full[static_cast<size_t>(i)] =
                    (4.0 * lv.full[static_cast<size_t>(i)] - prev_full[static_cast<size_t>(i)]) / 3.0;
                ext_eff[static_cast<size_t>(i)] =
                    (4.0 * lv.effective[static_cast<size_t>(i)] - prev_eff[static_cast<size_t>(i)]) / 3.0;
            }
            if (have_prev_ext) {
                double rel = 0.0;
                for (index_t i = 0; i < k; ++i) {
                    const double s1 = std::max(std::abs(ext_full[static_cast<size_t>(i)]), 1e-30);
                    const double s2 = std::max(std::abs(ext_eff[static_cast<size_t>(i)]), 1e-30);
                    rel = std::max(rel, std::abs(ext_full[static_cast<size_t>(i)] - ext_full_prev[static_cast<size_t>(i)]) / s1);
                    rel = std::max(rel, std::abs(ext_eff[static_cast<size_t>(i)] - ext_eff_prev[static_cast<size_t>(i)]) / s2);
                }
                out.error_estimate = rel;
                if (rel < 1e-6) {
                    out.full = ext_full;
                    out.effective = ext_eff;
                    return out;
                }
            }
            ext_full_prev = ext_full;
            ext_eff_prev = ext_eff;
            have_prev_ext = true;
        }
        prev_full = lv.full;
        prev_eff = lv.effective;
        n = 2 * n + 1;
    }
    throw convergence_error("lowest_eigs: refinement did not converge within budget");
}

GapCheckRecord resolvent_gap_check(const TwoLevelBOModel& model, double z, double c0, double C0) {
    if (!(c0 > 0.0) || !(C0 > 0.0)) throw numerical_error("resolvent_gap_check: c0, C0 > 0 required");
    const double g = model.gamma();
    if (!(C0 * model.h < g))
        throw window_error("resolvent_gap_check: window exceeds the spectral gap");
    if (std::abs(z) > C0 * model.h * (1.0 + 1e-12))
        throw window_error("resolvent_gap_check: z outside [-C0 h, C0 h]");

    // effective eigenvalues covering the window
    const index_t k_window = std::min<index_t>(6, static_cast<index_t>((C0 + 1.0) / 2.0) + 2);
    BoEigs eigs = lowest_eigs(model, k_window);
    double dist = 1e300;
    for (double lam : eigs.effective) dist = std::min(dist, std::abs(z - lam));
    if (dist < c0 * model.h * (1.0 - 1e-12))
        throw window_error("resolvent_gap_check: z closer than c0 h to the effective spectrum");

    GapCheckRecord rec;
    rec.a = model.coupling_a();
    rec.gamma = g;
    rec.dist = dist;
    rec.r_hat = 1.0 / (c0 * model.h) + 1.0 / (g - C0 * model.h);
    const auto data = certificates::ReductionData::from_gap_and_commutator(g, rec.a * std::sqrt(g));
    const auto eta = certificates::eta_at(data, cplx(z, 0.0));
    rec.margin = certificates::gate_margin(eta, rec.r_hat);
    rec.gate = rec.margin > 0.0;
    if (rec.gate) {
        rec.certified_inv = certificates::certify_resolvent_bound(eta, rec.r_hat);
        rec.certified_diff = certificates::certify_difference_bound(eta, rec.certified_inv, rec.r_hat);
    }
    return rec;
}

BoFitResult asymptotic_fit(const TwoLevelBOModel& base, const std::vector<double>& h_list, index_t k) {
    if (h_list.size() < 4) throw numerical_error("asymptotic_fit: need >= 4 h values");
    BoFitResult res;
    double max_grid_err = 0.0;
    std::vector<std::pair<double, double>> pts;
    for (double h : h_list) {
        TwoLevelBOModel m = base;
        m.h = h;
        BoEigs e = lowest_eigs(m, k);
        const double diff = std::abs(e.full[static_cast<size_t>(k - 1)] -
                                     e.effective[static_cast<size_t>(k - 1)]);
        res.diffs.push_back(diff);
        res.coefficients.push_back(e.effective.front() / h);
        max_grid_err = std::max(max_grid_err,
                                e.error_estimate * std::abs(e.full[static_cast<size_t>(k - 1)]));
        pts.emplace_back(h, diff);
    }
    for (double d : res.diffs)
        if (d < 10.0 * std::max(max_grid_err, 1e-14)) {
            res.degenerate = true;
            return res;
        }
    res.slope = cli::fit_slope(pts).slope;
    return res;
}

} // namespace dimred::bo
