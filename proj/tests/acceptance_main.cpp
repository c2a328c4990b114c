// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Tolerances and runtime budgets are pinned in code.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "dimred/born_oppenheimer.hpp"
#include "dimred/dirichlet_layer.hpp"
#include "dimred/fit.hpp"
#include "dimred/grid1d.hpp"
#include "dimred/iterative.hpp"
#include "dimred/jacobi.hpp"
#include "dimred/lu.hpp"
#include "dimred/ns_robin_layer.hpp"
#include "dimred/parallel.hpp"
#include "dimred/robin_shell.hpp"
#include "dimred/toymodel.hpp"
#include "dimred/tridiag.hpp"

using namespace dimred;
using clk = std::chrono::steady_clock;

namespace {

int failures = 0;

struct Criterion {
    int id;
    std::string name;
    double budget_seconds;
    clk::time_point t0 = clk::now();
    bool ok = true;
    std::vector<std::string> details;

    Criterion(int id_, std::string name_, double budget) : id(id_), name(std::move(name_)), budget_seconds(budget) {}

    void require(bool cond, const std::string& what) {
        if (!cond) details.push_back(what);
        ok = ok && cond;
    }

    void finish() {
        const double elapsed = std::chrono::duration<double>(clk::now() - t0).count();
        if (elapsed > budget_seconds) {
            ok = false;
            details.push_back("runtime " + std::to_string(elapsed) + " s exceeds budget " +
                              std::to_string(budget_seconds) + " s");
        }
        std::printf("[%s] criterion %d: %s (%.1f s)\n", ok ? "PASS" : "FAIL", id, name.c_str(),
                    elapsed);
        for (const auto& d : details) std::printf("       %s\n", d.c_str());
        std::fflush(stdout);
        if (!ok) ++failures;
    }
};

void criterion1_form_inequalities() {
    Criterion c(1, "abstract form inequalities on 1e4 random instances", 60.0);
    const index_t total = 10000;
    auto worker = [&](index_t i) -> int {
        Rng rng(777 + 7919ull * static_cast<std::uint64_t>(i));
        toymodel::ToyInstance inst = toymodel::random_instance(rng, 5, 4, 2.5);
        std::vector<double> phi(static_cast<size_t>(inst.dim())), psi(static_cast<size_t>(inst.dim()));
        for (double& v : phi) v = rng.uniform(-1.0, 1.0);
        for (double& v : psi) v = rng.uniform(-1.0, 1.0);
        const toymodel::PairCheck p26 = toymodel::check_prop26(inst, phi, psi);
        const cplx z{rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0)};
        const toymodel::PairCheck t25 = toymodel::check_theorem25(inst, z, phi, psi);
        return (p26.holds && t25.holds) ? 0 : 1;
    };
    std::vector<int> bad = cli::parallel_map<int>(0, total, worker);
    index_t violations = 0;
    for (int b : bad) violations += b;
    c.require(violations == 0, std::to_string(violations) + " inequality violations");
    c.finish();
}

void criterion2_certificates() {
    Criterion c(2, "certificate soundness on 1e3 instances x 5x5 z-grid", 120.0);
    const index_t total = 1000;
    const double re_grid[5] = {-1.0, -0.25, 0.5, 1.25, 2.0};
    const double im_grid[5] = {-2.0, -1.0, 0.01, 1.0, 2.0};
    auto worker = [&](index_t i) -> std::pair<int, int> {
        Rng rng(31 + 104729ull * static_cast<std::uint64_t>(i));
        toymodel::ToyInstance inst = toymodel::random_instance(rng, 5, 4, 1.5);
        int gated = 0, violations = 0;
        for (double re : re_grid)
            for (double im : im_grid) {
                toymodel::CertificateCheck chk;
                try {
                    chk = toymodel::check_theorem11(inst, cplx{re, im});
                } catch (const window_error&) {
                    continue;
                }
                if (chk.gate) ++gated;
                if (!chk.sound) ++violations;
            }
        return {gated, violations};
    };
    std::vector<std::pair<int, int>> out = cli::parallel_map<std::pair<int, int>>(0, total, worker);
    long gated = 0, violations = 0;
    for (auto [g, v] : out) {
        gated += g;
        violations += v;
    }
    c.require(violations == 0, std::to_string(violations) + " unsound gated samples");
    c.require(gated > 1000, "only " + std::to_string(gated) + " gated samples in the sweep");
    c.finish();
}

void criterion3_born_oppenheimer() {
    Criterion c(3, "semiclassical eigenvalue orders", 300.0);
    const std::vector<double> hs{0.2, 0.1, 0.05, 0.025};
    for (int k = 1; k <= 3; ++k) {
        bo::TwoLevelBOModel base;
        base.theta0 = 0.3;
        bo::BoFitResult fit = bo::asymptotic_fit(base, hs, k);
        c.require(!fit.degenerate, "k=" + std::to_string(k) + ": degenerate fit");
        c.require(fit.slope >= 1.8,
                  "k=" + std::to_string(k) + ": slope " + std::to_string(fit.slope) + " < 1.8");
        if (k == 1)
            c.require(std::abs(fit.coefficients.back() - 1.0) <= 0.05,
                      "harmonic coefficient " + std::to_string(fit.coefficients.back()));
    }
    {
        bo::TwoLevelBOModel m;
        m.theta0 = 0.0;
        m.h = 0.1;
        bo::BoEigs e = bo::lowest_eigs(m, 3);
        for (int k = 0; k < 3; ++k)
            c.require(std::abs(e.full[static_cast<size_t>(k)] - e.effective[static_cast<size_t>(k)]) <= 1e-10,
                      "theta0=0 equality violated at k=" + std::to_string(k + 1));
    }
    c.finish();
}

void criterion4_dirichlet_layer() {
    Criterion c(4, "Dirichlet layer separation and residual order", 600.0);
    // flat profile at the pinned grid reproduces the separated spectrum
    {
        geometry::CurveProfile flat(0.0, 0.0);
        layer::LayerModel m{flat, 0.05, 128, 64};
        layer::LayerEigs e = layer::layer_eigs(m, 5);
        const double base = M_PI * M_PI / (4.0 * 0.05 * 0.05);
        const int modes[5] = {0, 1, 1, 2, 2};
        for (int q = 0; q < 5; ++q) {
            const double exact = base + modes[q] * modes[q];
            c.require(std::abs(e.values[static_cast<size_t>(q)] - exact) <= 1e-4 * exact,
                      "flat-profile eigenvalue " + std::to_string(q + 1) + " off by " +
                          std::to_string(std::abs(e.values[static_cast<size_t>(q)] - exact) / exact));
        }
    }
    // residual slopes for the cosine profile, stable under grid doubling
    {
        geometry::CurveProfile p(1.0, 0.3);
        const std::vector<double> eps{0.05, 0.1, 0.2};
        layer::LayerSweep adaptive = layer::layer_sweep(p, eps, 2, 48, 48);
        layer::LayerSweep coarse = layer::layer_sweep(p, eps, 2, 48, 48, 1);
        layer::LayerSweep doubled = layer::layer_sweep(p, eps, 2, 96, 97, 1);
        for (int k = 1; k <= 2; ++k) {
            const size_t q = static_cast<size_t>(k - 1);
            c.require(!adaptive.degenerate[q], "k=" + std::to_string(k) + ": degenerate");
            c.require(adaptive.slopes[q] >= 0.9, "k=" + std::to_string(k) + ": slope " +
                                                     std::to_string(adaptive.slopes[q]) + " < 0.9");
            c.require(std::abs(coarse.slopes[q] - doubled.slopes[q]) <= 0.05,
                      "k=" + std::to_string(k) + ": slope change under doubling " +
                          std::to_string(std::abs(coarse.slopes[q] - doubled.slopes[q])));
        }
    }
    c.finish();
}

void criterion5_robin_shell() {
    Criterion c(5, "Robin shell fiber, harmonic level, and eigenvalue trend", 600.0);
    {
        geometry::CurveProfile flat(0.0, 0.0);
        const double alpha = 2.0 / std::tanh(2.0);
        const double mu = shell::transverse_eig_robin(flat, 0.3, alpha, 1);
        c.require(std::abs(mu + 4.0) <= 1e-8, "flat fiber eigenvalue off by " + std::to_string(mu + 4.0));
    }
    geometry::CurveProfile p(0.5, 0.3);
    {
        shell::HarmonicFit hf = shell::harmonic_fit(p, {50.0, 100.0, 200.0, 400.0}, 1);
        c.require(std::abs(hf.scaled.back() - std::sqrt(0.15)) <= 0.1 * std::sqrt(0.15),
                  "harmonic level " + std::to_string(hf.scaled.back()));
    }
    {
        auto worker = [&](index_t i) {
            const double alpha = std::vector<double>{10.0, 20.0, 40.0, 80.0}[static_cast<size_t>(i)];
            shell::ShellModel m{p, alpha, 48, 0};
            std::vector<double> lam = shell::shell_eigs(m, 2).values;
            std::vector<double> nu = shell::effective_eigs(p, alpha, 2);
            return std::array<double, 2>{std::abs(lam[0] + alpha * alpha - nu[0]),
                                         std::abs(lam[1] + alpha * alpha - nu[1])};
        };
        std::vector<std::array<double, 2>> res = cli::parallel_map<std::array<double, 2>>(0, 4, worker);
        for (int j = 0; j < 2; ++j) {
            double prior = 0.0;
            for (int i = 0; i < 3; ++i) prior = std::max(prior, res[static_cast<size_t>(i)][static_cast<size_t>(j)]);
            c.require(res[3][static_cast<size_t>(j)] <= 1.5 * prior,
                      "j=" + std::to_string(j + 1) + " trend " + std::to_string(res[3][static_cast<size_t>(j)]) +
                          " vs 1.5 * " + std::to_string(prior));
        }
    }
    c.finish();
}

void criterion6_ns_robin() {
    Criterion c(6, "non-self-adjoint layer: resolvent order, symmetry, accretivity", 900.0);
    geometry::CurveProfile p(0.5, 0.3);
    nsrobin::ComplexRobinModel base{p, 1.0, 0.5, 0.05, 32, 24};

    // resolvent-difference slope at three z points
    const cplx zs[3] = {{-2.0, 0.0}, {-1.5, 0.5}, {-1.0, 1.0}};
    const std::vector<double> eps{0.025, 0.05, 0.1};
    auto worker = [&](index_t q) {
        nsrobin::ComplexRobinModel m = base;
        m.eps = eps[static_cast<size_t>(q) / 3];
        return nsrobin::resolvent_difference_norm(m, zs[static_cast<size_t>(q) % 3]);
    };
    std::vector<double> norms = cli::parallel_map<double>(0, 9, worker);
    for (int zi = 0; zi < 3; ++zi) {
        std::vector<std::pair<double, double>> pts;
        for (size_t e = 0; e < eps.size(); ++e) pts.emplace_back(eps[e], norms[3 * e + static_cast<size_t>(zi)]);
        const double slope = cli::fit_slope(pts).slope;
        c.require(slope >= 0.9, "z-point " + std::to_string(zi) + " slope " + std::to_string(slope));
    }

    const double conj_dev = nsrobin::conjugation_entry_deviation(base);
    c.require(conj_dev <= 1e-14, "conjugation deviation " + std::to_string(conj_dev));

    const double mshift = 10.0 * (1.0 + base.sup_abs_alpha() * base.sup_abs_alpha());
    for (double e : {0.05, 0.025}) {
        nsrobin::ComplexRobinModel m = base;
        m.eps = e;
        nsrobin::AccretivityRecord rec = nsrobin::accretivity_check(m, mshift);
        c.require(rec.holds, "accretivity fails at eps=" + std::to_string(e));
    }

    nsrobin::VariationalGapFit vg = nsrobin::variational_gap_check(base, eps, 100);
    c.require(vg.slope >= 0.9, "variational max-ratio slope " + std::to_string(vg.slope));
    c.finish();
}

void criterion7_kernel_oracles() {
    Criterion c(7, "kernel oracle equivalences", 30.0);
    using namespace dimred::numkernel;
    {
        Rng rng(1207);
        double worst = 0.0;
        for (int trial = 0; trial < 100; ++trial) {
            const index_t n = 2 + static_cast<index_t>(rng.integer(49));
            SymTridiag t;
            t.diag.resize(static_cast<size_t>(n));
            t.offdiag.resize(static_cast<size_t>(n - 1));
            for (double& v : t.diag) v = rng.uniform(-2.0, 2.0);
            for (double& v : t.offdiag) v = rng.uniform(-2.0, 2.0);
            RealMatrix a(n, n);
            for (index_t i = 0; i < n; ++i) a(i, i) = t.diag[static_cast<size_t>(i)];
            for (index_t i = 0; i + 1 < n; ++i) {
                a(i, i + 1) = t.offdiag[static_cast<size_t>(i)];
                a(i + 1, i) = t.offdiag[static_cast<size_t>(i)];
            }
            std::vector<double> sturm = sym_tridiag_eigs(t, n);
            std::vector<double> dense = jacobi_dense_sym(a);
            for (index_t i = 0; i < n; ++i)
                worst = std::max(worst, std::abs(sturm[static_cast<size_t>(i)] - dense[static_cast<size_t>(i)]));
        }
        c.require(worst <= 1e-10, "sturm-vs-jacobi deviation " + std::to_string(worst));
    }
    {
        Rng rng(4117);
        double worst = 0.0;
        for (int trial = 0; trial < 50; ++trial) {
            const index_t n = 2 + static_cast<index_t>(rng.integer(11));
            ComplexMatrix a(n, n);
            for (index_t i = 0; i < n; ++i)
                for (index_t j = 0; j < n; ++j)
                    a(i, j) = cplx{rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
            ComplexMatrix ah = a.adjoint();
            auto apply = [&](const std::vector<cplx>& x) { return a.apply(x); };
            auto applyh = [&](const std::vector<cplx>& x) { return ah.apply(x); };
            const double nrm = operator_norm(apply, applyh, n, 1e-9,
                                             {.seed = 31000 + static_cast<std::uint64_t>(trial)});
            std::vector<double> sv = hermitian_eigs(ah * a);
            const double oracle = std::sqrt(sv.back());
            worst = std::max(worst, std::abs(nrm - oracle) / std::max(1.0, oracle));
        }
        c.require(worst <= 1e-6, "operator-norm-vs-oracle deviation " + std::to_string(worst));
    }
    c.finish();
}

void criterion8_cross_model() {
    Criterion c(8, "cross-model effective-matrix identity", 30.0);
    geometry::CurveProfile p(0.5, 0.3);
    nsrobin::ComplexRobinModel m{p, 1.0, 0.0, 0.05, 48, 16};
    nsrobin::HatAndEffective he = nsrobin::assemble_hat_and_effective(m);
    const double hs = p.period() / static_cast<double>(m.ns);
    auto shell_pot = [&](double s) { return -m.a0 * p.kappa(s); };
    grid1d::PeriodicPencil<double> shell =
        grid1d::periodic_pencil<double>(shell_pot, m.ns, p.period());
    double worst = 0.0;
    for (index_t i = 0; i < m.ns; ++i)
        for (index_t j = 0; j < m.ns; ++j) {
            cplx v = he.a_eff(i, j);
            if (i == j) v += m.a0 * m.a0 * hs;
            worst = std::max(worst, std::abs(v - shell.a(i, j)));
        }
    c.require(worst <= 1e-12, "entrywise deviation " + std::to_string(worst));
    c.finish();
}

} // namespace

int main() {
    std::printf("dimred acceptance suite\n");
    criterion1_form_inequalities();
    criterion2_certificates();
    criterion3_born_oppenheimer();
    criterion4_dirichlet_layer();
    criterion5_robin_shell();
    criterion6_ns_robin();
    criterion7_kernel_oracles();
    criterion8_cross_model();
    if (failures == 0)
        std::printf("all criteria passed\n");
    else
        std::printf("%d criteria FAILED\n", failures);
    return failures == 0 ? 0 : 1;
}
