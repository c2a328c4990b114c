#include "dimred/robin_shell.hpp"

#include <algorithm>
#include <cmath>

#include "dimred/certificates.hpp"
#include "dimred/fit.hpp"
#include "dimred/grid1d.hpp"
#include "dimred/iterative.hpp"
#include "dimred/jacobi.hpp"

namespace dimred::shell {

using numkernel::BandedLu;
using numkernel::BandedMatrix;
using numkernel::RealMatrix;
using numkernel::SymTridiag;

namespace {

index_t default_nt(const ShellModel& m) {
    if (m.nt > 0) return m.nt;
    return std::max<index_t>(64, static_cast<index_t>(std::lround(5.0 * m.alpha)));
}

void check_weight(const CurveProfile& profile) {
    // w_1 = 1 - t kappa(s) must stay positive on t in (0, 1)
    if (!(profile.kappa_max() < 1.0) || !(profile.max_abs_kappa() < 1.0))
        throw numerical_error("shell: weight 1 - t kappa must stay positive (|kappa| < 1)");
}

} // namespace

std::vector<double> shell_t_grid(double alpha, index_t nt) {
    if (nt < 8) throw numerical_error("shell_t_grid: nt >= 8 required");
    const double beta = std::log(1.0 + std::max(alpha, 0.0) / 2.0);
    std::vector<double> t(static_cast<size_t>(nt) + 1);
    for (index_t j = 0; j <= nt; ++j) {
        const double x = static_cast<double>(j) / static_cast<double>(nt);
        t[static_cast<size_t>(j)] = beta < 1e-8 ? x : (std::exp(beta * x) - 1.0) / (std::exp(beta) - 1.0);
    }
    t.front() = 0.0;
    t.back() = 1.0;
    return t;
}

RobinFiber transverse_fiber_robin(const CurveProfile& profile, double s, double alpha, index_t nt) {
    check_weight(profile);
    const std::vector<double> t = shell_t_grid(alpha, nt);
    const double kap = profile.kappa(s);
    RobinFiber f;
    f.stiffness.diag.assign(static_cast<size_t>(nt), 0.0);
    f.stiffness.offdiag.assign(static_cast<size_t>(nt - 1), 0.0);
    f.mass.assign(static_cast<size_t>(nt), 0.0);
    for (index_t c = 0; c < nt; ++c) {
        const double h = t[static_cast<size_t>(c + 1)] - t[static_cast<size_t>(c)];
        const double wm = 1.0 - 0.5 * (t[static_cast<size_t>(c)] + t[static_cast<size_t>(c + 1)]) * kap;
        f.stiffness.diag[static_cast<size_t>(c)] += wm / h;
        if (c + 1 < nt) {
            f.stiffness.diag[static_cast<size_t>(c + 1)] += wm / h;
            f.stiffness.offdiag[static_cast<size_t>(c)] = -wm / h;
        }
        f.mass[static_cast<size_t>(c)] += 0.5 * wm * h;
        if (c + 1 < nt) f.mass[static_cast<size_t>(c + 1)] += 0.5 * wm * h;
    }
    // Robin boundary term -alpha |phi(0)|^2; the plain surface measure has
    // weight w_1(s, 0) = 1
    f.stiffness.diag[0] -= alpha;
    return f;
}

std::vector<double> transverse_eigs_robin_raw(const CurveProfile& profile, double s, double alpha,
                                              index_t j, index_t nt) {
    if (j > nt / 4) throw numerical_error("transverse_eig_robin: j <= nt/4 required");
    RobinFiber f = transverse_fiber_robin(profile, s, alpha, nt);
    SymTridiag sym;
    sym.diag.resize(f.stiffness.diag.size());
    sym.offdiag.resize(f.stiffness.offdiag.size());
    for (size_t i = 0; i < sym.diag.size(); ++i) sym.diag[i] = f.stiffness.diag[i] / f.mass[i];
    for (size_t i = 0; i < sym.offdiag.size(); ++i)
        sym.offdiag[i] = f.stiffness.offdiag[i] / std::sqrt(f.mass[i] * f.mass[i + 1]);
    return numkernel::sym_tridiag_eigs(sym, j);
}

double transverse_eig_robin(const CurveProfile& profile, double s, double alpha, index_t j,
                            index_t nt) {
    const double coarse = transverse_eigs_robin_raw(profile, s, alpha, j, nt).back();
    const double fine = transverse_eigs_robin_raw(profile, s, alpha, j, 2 * nt).back();
    return (4.0 * fine - coarse) / 3.0;
}

std::vector<double> effective_eigs(const CurveProfile& profile, double alpha, index_t j,
                                   index_t ns) {
    auto pot = [&](double s) { return -alpha * profile.kappa(s); };
    return grid1d::periodic_eigs_richardson(pot, ns, profile.period(), j).values;
}

HarmonicFit harmonic_fit(const CurveProfile& profile, const std::vector<double>& alpha_list,
                         index_t j) {
    if (alpha_list.size() < 4) throw numerical_error("harmonic_fit: need >= 4 alpha values");
    HarmonicFit fit;
    if (!profile.has_unique_nondegenerate_max()) {
        fit.degenerate = true;
        return fit;
    }
    fit.target = (2.0 * static_cast<double>(j) - 1.0) * std::sqrt(profile.hess_at_max() / 2.0);
    std::vector<std::pair<double, double>> pts;
    for (double alpha : alpha_list) {
        const double nu = effective_eigs(profile, alpha, j).back();
        const double scaled = (nu + alpha * profile.kappa_max()) / std::sqrt(alpha);
        fit.scaled.push_back(scaled);
        fit.deviations.push_back(std::abs(scaled - fit.target));
        if (fit.deviations.back() > 0.0) pts.emplace_back(alpha, fit.deviations.back());
    }
    if (pts.size() >= 3) fit.deviation_slope = cli::fit_slope(pts).slope;
    return fit;
}

ShellPencil assemble_full(const ShellModel& model) {
    check_weight(model.profile);
    const index_t ns = model.ns, nt = default_nt(model);
    if (ns < 8) throw numerical_error("shell: ns >= 8 required");
    const double hs = model.profile.period() / static_cast<double>(ns);
    const std::vector<double> t = shell_t_grid(model.alpha, nt);
    const index_t dim = ns * nt;

    ShellPencil p{ns, nt, model.alpha, BandedMatrix<double>(dim, ns, ns), {}};
    p.mass.assign(static_cast<size_t>(dim), 0.0);
    auto idx = [ns](index_t i, index_t j) { return j * ns + i; };

    // trapezoid weights on the nonuniform t-grid (Dirichlet end dropped)
    std::vector<double> q(static_cast<size_t>(nt), 0.0);
    for (index_t j = 0; j < nt; ++j) {
        const double hl = j > 0 ? t[static_cast<size_t>(j)] - t[static_cast<size_t>(j - 1)] : 0.0;
        const double hr = t[static_cast<size_t>(j + 1)] - t[static_cast<size_t>(j)];
        q[static_cast<size_t>(j)] = 0.5 * (hl + hr);
    }

    // s-stiffness with (G_1 w_1) = 1 / w_1 at the flux midpoints
    for (index_t i = 0; i < ns; ++i) {
        const double smid = hs * (static_cast<double>(i) + 0.5);
        const double kap = model.profile.kappa(smid);
        const index_t inext = (i + 1) % ns;
        for (index_t j = 0; j < nt; ++j) {
            const double w = 1.0 - t[static_cast<size_t>(j)] * kap;
            const double c = q[static_cast<size_t>(j)] / (hs * w);
            const index_t pp = idx(i, j), qq = idx(inext, j);
            p.a.add(pp, pp, c);
            p.a.add(qq, qq, c);
            p.a.add(pp, qq, -c);
            p.a.add(qq, pp, -c);
        }
    }
    // t-stiffness, Robin term and mass from the shared fiber arrays
    for (index_t i = 0; i < ns; ++i) {
        const double s = hs * static_cast<double>(i);
        RobinFiber f = transverse_fiber_robin(model.profile, s, model.alpha, nt);
        for (index_t j = 0; j < nt; ++j) {
            p.a.add(idx(i, j), idx(i, j), hs * f.stiffness.diag[static_cast<size_t>(j)]);
            if (j + 1 < nt) {
                p.a.add(idx(i, j), idx(i, j + 1), hs * f.stiffness.offdiag[static_cast<size_t>(j)]);
                p.a.add(idx(i, j + 1), idx(i, j), hs * f.stiffness.offdiag[static_cast<size_t>(j)]);
            }
            p.mass[static_cast<size_t>(idx(i, j))] = hs * f.mass[static_cast<size_t>(j)];
        }
    }
    return p;
}

std::vector<double> shell_eigs_raw(const ShellModel& model, index_t jmax) {
    ShellPencil p = assemble_full(model);
    const index_t dim = p.ns * p.nt;
    const double kmax = model.profile.kappa_max();
    double sigma = -model.alpha * model.alpha - model.alpha * kmax;

    std::vector<double> out;
    for (int attempt = 0; attempt < 4; ++attempt) {
        BandedMatrix<double> shifted = p.a;
        for (index_t i = 0; i < dim; ++i) shifted.add(i, i, -sigma * p.mass[static_cast<size_t>(i)]);
        BandedLu<double> lu(std::move(shifted));
        if (lu.singular()) {
            sigma -= 0.37 * std::sqrt(std::max(model.alpha, 1.0)) * (attempt + 1);
            continue;
        }
        auto csolve = [&](const std::vector<cplx>& x) {
            std::vector<double> re(x.size()), im(x.size());
            for (size_t k = 0; k < x.size(); ++k) {
                const cplx mx = x[k];
                re[k] = mx.real() * p.mass[k];
                im[k] = mx.imag() * p.mass[k];
            }
            std::vector<double> yre = lu.solve(std::move(re));
            std::vector<double> yim = lu.solve(std::move(im));
            std::vector<cplx> y(x.size());
            for (size_t k = 0; k < y.size(); ++k) y[k] = {yre[k], yim[k]};
            return y;
        };
        std::vector<std::vector<cplx>> converged;
        out.clear();
        try {
            for (index_t j = 0; j < jmax; ++j) {
                numkernel::ShiftedInverseOptions opts;
                opts.weight = p.mass;
                opts.max_iter = 800;
                opts.seed = 1234 + static_cast<std::uint64_t>(j);
                opts.project = [&](std::vector<cplx>& v) {
                    for (const auto& u : converged) {
                        cplx proj{};
                        for (size_t k = 0; k < v.size(); ++k)
                            proj += p.mass[k] * std::conj(u[k]) * v[k];
                        for (size_t k = 0; k < v.size(); ++k) v[k] -= proj * u[k];
                    }
                };
                std::vector<cplx> vec;
                const cplx lam = numkernel::shifted_inverse_eig(csolve, dim, cplx(sigma, 0.0), 1e-11,
                                                                opts, vec);
                out.push_back(lam.real());
                converged.push_back(std::move(vec));
            }
            std::sort(out.begin(), out.end());
            return out;
        } catch (const singular_matrix_error&) {
            sigma -= 0.37 * std::sqrt(std::max(model.alpha, 1.0)) * (attempt + 1);
        }
    }
    throw convergence_error("shell_eigs: shift kept colliding with an eigenvalue");
}

ShellEigs shell_eigs(const ShellModel& model, index_t jmax) {
    ShellModel ms = model, mt = model;
    ms.ns = 2 * model.ns;
    ms.nt = default_nt(model);
    mt.nt = 2 * default_nt(model);
    ShellModel mb = model;
    mb.nt = default_nt(model);
    const std::vector<double> base = shell_eigs_raw(mb, jmax);
    const std::vector<double> fine_s = shell_eigs_raw(ms, jmax);
    const std::vector<double> fine_t = shell_eigs_raw(mt, jmax);
    ShellEigs out;
    out.values.resize(static_cast<size_t>(jmax));
    for (index_t i = 0; i < jmax; ++i) {
        const size_t qd = static_cast<size_t>(i);
        out.values[qd] = (4.0 * (fine_s[qd] + fine_t[qd]) - 5.0 * base[qd]) / 3.0;
        out.error_estimate = std::max(out.error_estimate,
                                      (std::abs(fine_s[qd] - base[qd]) + std::abs(fine_t[qd] - base[qd])) / 3.0);
    }
    return out;
}

namespace {

std::vector<double> robin_fiber_ground(const RobinFiber& f, double eig) {
    SymTridiag sym;
    sym.diag.resize(f.stiffness.diag.size());
    sym.offdiag.resize(f.stiffness.offdiag.size());
    for (size_t i = 0; i < sym.diag.size(); ++i) sym.diag[i] = f.stiffness.diag[i] / f.mass[i];
    for (size_t i = 0; i < sym.offdiag.size(); ++i)
        sym.offdiag[i] = f.stiffness.offdiag[i] / std::sqrt(f.mass[i] * f.mass[i + 1]);
    std::vector<double> y = numkernel::sym_tridiag_eigenvector(sym, eig);
    double nrm = 0.0, mean = 0.0;
    for (size_t i = 0; i < y.size(); ++i) {
        y[i] /= std::sqrt(f.mass[i]);
        nrm += f.mass[i] * y[i] * y[i];
        mean += f.mass[i] * y[i];
    }
    nrm = std::sqrt(nrm);
    const double sign = mean >= 0 ? 1.0 : -1.0;
    for (double& v : y) v *= sign / nrm;
    return y;
}

} // namespace

ShellWindowRecord resolvent_window_check(const ShellModel& model, double z, double c0, double C0) {
    if (!(c0 > 0.0) || !(C0 > 0.0))
        throw numerical_error("resolvent_window_check: c0, C0 > 0 required");
    const index_t ns = model.ns, nt = default_nt(model);
    const index_t dim = ns * nt;
    const double hs = model.profile.period() / static_cast<double>(ns);
    const std::vector<double> tg = shell_t_grid(model.alpha, nt);

    // node and edge fibers
    std::vector<std::vector<double>> node_u(static_cast<size_t>(ns)), edge_u(static_cast<size_t>(ns));
    std::vector<std::vector<double>> node_mass(static_cast<size_t>(ns)), edge_mass(static_cast<size_t>(ns));
    std::vector<double> mu1(static_cast<size_t>(ns)), mu2(static_cast<size_t>(ns));
    for (index_t i = 0; i < ns; ++i) {
        for (int half = 0; half < 2; ++half) {
            const double s = hs * (static_cast<double>(i) + (half ? 0.5 : 0.0));
            RobinFiber f = transverse_fiber_robin(model.profile, s, model.alpha, nt);
            std::vector<double> eigs = transverse_eigs_robin_raw(model.profile, s, model.alpha, 2, nt);
            std::vector<double> u = robin_fiber_ground(f, eigs.front());
            if (half == 0) {
                node_u[static_cast<size_t>(i)] = std::move(u);
                node_mass[static_cast<size_t>(i)] = f.mass;
                mu1[static_cast<size_t>(i)] = eigs[0];
                mu2[static_cast<size_t>(i)] = eigs[1];
            } else {
                edge_u[static_cast<size_t>(i)] = std::move(u);
                edge_mass[static_cast<size_t>(i)] = f.mass;
            }
        }
    }

    ShellWindowRecord rec;
    rec.mu = *std::min_element(mu1.begin(), mu1.end());
    rec.gamma = *std::min_element(mu2.begin(), mu2.end()) - rec.mu;
    if (!(rec.gamma > c0 * model.alpha))
        throw window_error("resolvent_window_check: window exceeds the gap");
    if (std::abs(z - rec.mu) > c0 * model.alpha * (1.0 + 1e-12))
        throw window_error("resolvent_window_check: z outside |z - mu| <= c0 alpha");

    // compression of the pencil onto the fiber ground states
    ShellPencil p = assemble_full(model);
    auto idx = [ns](index_t i, index_t j) { return j * ns + i; };
    RealMatrix a_eff(ns, ns);
    std::vector<double> m_eff(static_cast<size_t>(ns), 0.0);
    for (index_t i = 0; i < ns; ++i) {
        std::vector<double> col(static_cast<size_t>(dim), 0.0);
        for (index_t j = 0; j < nt; ++j)
            col[static_cast<size_t>(idx(i, j))] = node_u[static_cast<size_t>(i)][static_cast<size_t>(j)];
        std::vector<double> acol = p.a.apply(col);
        for (index_t qi = 0; qi < ns; ++qi) {
            if (!(qi == i || qi == (i + 1) % ns || i == (qi + 1) % ns)) continue;
            double dotv = 0.0;
            for (index_t j = 0; j < nt; ++j)
                dotv += node_u[static_cast<size_t>(qi)][static_cast<size_t>(j)] *
                        acol[static_cast<size_t>(idx(qi, j))];
            a_eff(qi, i) = dotv;
        }
        double mm = 0.0;
        for (index_t j = 0; j < nt; ++j)
            mm += p.mass[static_cast<size_t>(idx(i, j))] *
                  sqr(node_u[static_cast<size_t>(i)][static_cast<size_t>(j)]);
        m_eff[static_cast<size_t>(i)] = mm;
    }
    RealMatrix sym(ns, ns);
    for (index_t i = 0; i < ns; ++i)
        for (index_t j = 0; j < ns; ++j)
            sym(i, j) = 0.5 * (a_eff(i, j) + a_eff(j, i)) /
                        std::sqrt(m_eff[static_cast<size_t>(i)] * m_eff[static_cast<size_t>(j)]);
    std::vector<double> eff_spec = numkernel::jacobi_dense_sym(sym);
    rec.dist = 1e300;
    for (double lam : eff_spec) rec.dist = std::min(rec.dist, std::abs(z - lam));
    if (rec.dist < C0 * (1.0 - 1e-12))
        throw window_error("resolvent_window_check: z closer than C0 to the effective spectrum");

    // commutator between the node and edge fibrations
    std::vector<double> q(static_cast<size_t>(nt), 0.0);
    for (index_t j = 0; j < nt; ++j) {
        const double hl = j > 0 ? tg[static_cast<size_t>(j)] - tg[static_cast<size_t>(j - 1)] : 0.0;
        const double hr = tg[static_cast<size_t>(j + 1)] - tg[static_cast<size_t>(j)];
        q[static_cast<size_t>(j)] = 0.5 * (hl + hr);
    }
    std::vector<double> edge_m(static_cast<size_t>(dim)), node_m(static_cast<size_t>(dim));
    for (index_t i = 0; i < ns; ++i) {
        const double smid = hs * (static_cast<double>(i) + 0.5);
        const double kap_mid = model.profile.kappa(smid);
        for (index_t j = 0; j < nt; ++j) {
            edge_m[static_cast<size_t>(idx(i, j))] =
                hs * q[static_cast<size_t>(j)] * (1.0 - tg[static_cast<size_t>(j)] * kap_mid);
            node_m[static_cast<size_t>(idx(i, j))] = p.mass[static_cast<size_t>(idx(i, j))];
        }
    }
    auto sqrt_g = [&](index_t i, index_t j) {
        const double smid = hs * (static_cast<double>(i) + 0.5);
        return 1.0 / (1.0 - tg[static_cast<size_t>(j)] * model.profile.kappa(smid));
    };
    auto apply_s = [&](const std::vector<double>& x) {
        std::vector<double> y(static_cast<size_t>(dim), 0.0);
        for (index_t i = 0; i < ns; ++i) {
            const index_t inext = (i + 1) % ns;
            for (index_t j = 0; j < nt; ++j)
                y[static_cast<size_t>(idx(i, j))] =
                    sqrt_g(i, j) * (x[static_cast<size_t>(idx(inext, j))] -
                                    x[static_cast<size_t>(idx(i, j))]) / hs;
        }
        return y;
    };
    auto apply_s_t = [&](const std::vector<double>& x) {
        std::vector<double> y(static_cast<size_t>(dim), 0.0);
        for (index_t i = 0; i < ns; ++i) {
            const index_t inext = (i + 1) % ns;
            for (index_t j = 0; j < nt; ++j) {
                const double v = sqrt_g(i, j) * x[static_cast<size_t>(idx(i, j))] / hs;
                y[static_cast<size_t>(idx(inext, j))] += v;
                y[static_cast<size_t>(idx(i, j))] -= v;
            }
        }
        return y;
    };
    auto project = [&](const std::vector<double>& x, const std::vector<std::vector<double>>& u,
                       const std::vector<std::vector<double>>& fm) {
        std::vector<double> y(static_cast<size_t>(dim), 0.0);
        for (index_t i = 0; i < ns; ++i) {
            double c = 0.0;
            for (index_t j = 0; j < nt; ++j)
                c += fm[static_cast<size_t>(i)][static_cast<size_t>(j)] *
                     u[static_cast<size_t>(i)][static_cast<size_t>(j)] *
                     x[static_cast<size_t>(idx(i, j))];
            for (index_t j = 0; j < nt; ++j)
                y[static_cast<size_t>(idx(i, j))] = c * u[static_cast<size_t>(i)][static_cast<size_t>(j)];
        }
        return y;
    };
    auto project_t = [&](const std::vector<double>& x, const std::vector<std::vector<double>>& u,
                         const std::vector<std::vector<double>>& fm) {
        std::vector<double> y(static_cast<size_t>(dim), 0.0);
        for (index_t i = 0; i < ns; ++i) {
            double c = 0.0;
            for (index_t j = 0; j < nt; ++j)
                c += u[static_cast<size_t>(i)][static_cast<size_t>(j)] * x[static_cast<size_t>(idx(i, j))];
            for (index_t j = 0; j < nt; ++j)
                y[static_cast<size_t>(idx(i, j))] =
                    c * fm[static_cast<size_t>(i)][static_cast<size_t>(j)] *
                    u[static_cast<size_t>(i)][static_cast<size_t>(j)];
        }
        return y;
    };
    auto commutator = [&](const std::vector<double>& x) {
        std::vector<double> spix = apply_s(project(x, node_u, node_mass));
        std::vector<double> pisx = project(apply_s(x), edge_u, edge_mass);
        for (size_t t = 0; t < spix.size(); ++t) spix[t] -= pisx[t];
        return spix;
    };
    auto commutator_adj = [&](const std::vector<double>& x) {
        std::vector<double> xe(x.size());
        for (size_t t = 0; t < x.size(); ++t) xe[t] = edge_m[t] * x[t];
        std::vector<double> t1 = project_t(apply_s_t(xe), node_u, node_mass);
        std::vector<double> t2 = apply_s_t(project_t(xe, edge_u, edge_mass));
        std::vector<double> y(x.size());
        for (size_t t = 0; t < y.size(); ++t) y[t] = (t1[t] - t2[t]) / node_m[t];
        return y;
    };
    auto capply = [&](const std::vector<cplx>& x) {
        std::vector<double> re(x.size()), im(x.size());
        for (size_t t = 0; t < x.size(); ++t) {
            re[t] = x[t].real() / std::sqrt(node_m[t]);
            im[t] = x[t].imag() / std::sqrt(node_m[t]);
        }
        std::vector<double> yre = commutator(re), yim = commutator(im);
        std::vector<cplx> y(x.size());
        for (size_t t = 0; t < y.size(); ++t)
            y[t] = cplx(yre[t] * std::sqrt(edge_m[t]), yim[t] * std::sqrt(edge_m[t]));
        return y;
    };
    auto capply_adj = [&](const std::vector<cplx>& x) {
        std::vector<double> re(x.size()), im(x.size());
        for (size_t t = 0; t < x.size(); ++t) {
            re[t] = x[t].real() / std::sqrt(edge_m[t]);
            im[t] = x[t].imag() / std::sqrt(edge_m[t]);
        }
        std::vector<double> yre = commutator_adj(re), yim = commutator_adj(im);
        std::vector<cplx> y(x.size());
        for (size_t t = 0; t < y.size(); ++t)
            y[t] = cplx(yre[t] * std::sqrt(node_m[t]), yim[t] * std::sqrt(node_m[t]));
        return y;
    };
    const double nu = numkernel::operator_norm(capply, capply_adj, dim, 1e-8);
    rec.a = nu / std::sqrt(rec.gamma);

    rec.r_hat = 1.0 / C0 + 1.0 / (rec.gamma - c0 * model.alpha);
    const auto data = certificates::ReductionData::from_gap_and_commutator(rec.gamma, nu);
    const auto eta = certificates::eta_at(data, cplx(z - rec.mu, 0.0));
    rec.margin = certificates::gate_margin(eta, rec.r_hat);
    rec.gate = rec.margin > 0.0;
    if (rec.gate) {
        rec.certified_inv = certificates::certify_resolvent_bound(eta, rec.r_hat);
        rec.certified_diff = certificates::certify_difference_bound(eta, rec.certified_inv, rec.r_hat);
    }
    return rec;
}

} // namespace dimred::shell
