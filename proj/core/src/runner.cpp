#include "dimred/runner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>

#include "dimred/born_oppenheimer.hpp"
#include "dimred/dirichlet_layer.hpp"
#include "dimred/fit.hpp"
#include "dimred/ns_robin_layer.hpp"
#include "dimred/parallel.hpp"
#include "dimred/plot.hpp"
#include "dimred/robin_shell.hpp"
#include "dimred/toymodel.hpp"

namespace dimred::cli {

namespace {

struct CheckLog {
    bool ok = true;
    std::vector<std::string> messages;

    void require(bool cond, const std::string& what) {
        messages.push_back(std::string(cond ? "[pass] " : "[FAIL] ") + what);
        ok = ok && cond;
    }
    void note(const std::string& what) { messages.push_back("[info] " + what); }
};

RunResult run_toy(const SweepConfig& cfg) {
    RunResult res;
    res.table = CsvTable({"idx", "n", "m", "gamma", "nu", "a", "z_re", "z_im", "gate",
                          "certified_inv", "exact_inv", "certified_diff", "exact_diff", "sound",
                          "prop26_lhs", "prop26_rhs", "prop26_holds"});
    const cplx z{cfg.toy_z_re, cfg.toy_z_im};

    struct Row {
        std::vector<double> values;
        bool sound, p26;
    };
    auto compute = [&](index_t i) {
        Rng rng(cfg.seed + 1000003ull * static_cast<std::uint64_t>(i));
        toymodel::ToyInstance inst =
            toymodel::random_instance(rng, cfg.toy_n_max, cfg.toy_m_max, cfg.toy_scale_max);
        std::vector<double> phi(static_cast<size_t>(inst.dim())), psi(static_cast<size_t>(inst.dim()));
        for (double& v : phi) v = rng.uniform(-1.0, 1.0);
        for (double& v : psi) v = rng.uniform(-1.0, 1.0);
        toymodel::PairCheck p26 = toymodel::check_prop26(inst, phi, psi);
        toymodel::CertificateCheck t11 = toymodel::check_theorem11(inst, z);
        Row row;
        row.sound = t11.sound;
        row.p26 = p26.holds;
        row.values = {static_cast<double>(i), static_cast<double>(inst.n),
                      static_cast<double>(inst.m), inst.data.gamma, inst.data.commutator_norm,
                      inst.data.a, z.real(), z.imag(), t11.gate ? 1.0 : 0.0,
                      t11.gate ? t11.certified_inv : 0.0, t11.exact_inv,
                      t11.gate ? t11.certified_diff : 0.0, t11.exact_diff, t11.sound ? 1.0 : 0.0,
                      p26.lhs, p26.rhs, p26.holds ? 1.0 : 0.0};
        return row;
    };
    std::vector<Row> rows = parallel_map<Row>(cfg.jobs, cfg.toy_instances, compute);

    CheckLog log;
    int gated = 0;
    for (const auto& row : rows) {
        res.table.add_row(row.values);
        if (row.values[8] > 0.5) ++gated;
    }
    if (cfg.check) {
        log.require(std::all_of(rows.begin(), rows.end(), [](const Row& r) { return r.sound; }),
                    "certificate soundness on every instance");
        log.require(std::all_of(rows.begin(), rows.end(), [](const Row& r) { return r.p26; }),
                    "form inequality holds on every instance");
        log.note("gated samples: " + std::to_string(gated) + "/" + std::to_string(rows.size()));
        res.exit_code = log.ok ? 0 : 2;
    }
    res.messages = log.messages;
    return res;
}

RunResult run_bo(const SweepConfig& cfg) {
    RunResult res;
    res.table = CsvTable({"h", "k", "lambda_full", "lambda_eff", "diff", "certified_diff", "gate"});

    struct Point {
        double h;
        bo::BoEigs eigs;
    };
    auto compute = [&](index_t i) {
        bo::TwoLevelBOModel m;
        m.theta0 = cfg.bo_theta0;
        m.h = cfg.bo_h_list[static_cast<size_t>(i)];
        m.radius = cfg.bo_radius;
        m.base_n = cfg.bo_base_n;
        return Point{m.h, bo::lowest_eigs(m, cfg.bo_k_max)};
    };
    std::vector<Point> pts =
        parallel_map<Point>(cfg.jobs, static_cast<index_t>(cfg.bo_h_list.size()), compute);
    std::sort(pts.begin(), pts.end(), [](const Point& a, const Point& b) { return a.h < b.h; });

    std::vector<std::vector<double>> diffs(static_cast<size_t>(cfg.bo_k_max));
    double max_grid_err = 0.0;
    for (const auto& pt : pts) {
        bo::TwoLevelBOModel m;
        m.theta0 = cfg.bo_theta0;
        m.h = pt.h;
        m.radius = cfg.bo_radius;
        m.base_n = cfg.bo_base_n;
        for (int k = 1; k <= cfg.bo_k_max; ++k) {
            const double lam = pt.eigs.full[static_cast<size_t>(k - 1)];
            const double lam_eff = pt.eigs.effective[static_cast<size_t>(k - 1)];
            double certified = 0.0, gate = 0.0;
            // certificate at the standard window point above lambda_eff_k
            const double c0 = cfg.bo_c0;
            const double C0k = std::max(cfg.bo_C0, lam_eff / pt.h + 2.0 * c0);
            try {
                auto rec = bo::resolvent_gap_check(m, lam_eff + c0 * pt.h, c0, C0k);
                gate = rec.gate ? 1.0 : 0.0;
                certified = rec.gate ? rec.certified_diff : 0.0;
            } catch (const window_error&) {
                // window invalid at this h (e.g. C0 h >= gamma): no certificate
            }
            res.table.add_row({pt.h, static_cast<double>(k), lam, lam_eff, lam - lam_eff,
                               certified, gate});
            diffs[static_cast<size_t>(k - 1)].push_back(std::abs(lam - lam_eff));
            max_grid_err = std::max(max_grid_err, pt.eigs.error_estimate * std::abs(lam));
        }
    }

    CheckLog log;
    if (cfg.check) {
        for (int k = 1; k <= cfg.bo_k_max; ++k) {
            const auto& d = diffs[static_cast<size_t>(k - 1)];
            const bool degenerate =
                std::all_of(d.begin(), d.end(), [&](double v) { return v < 10.0 * max_grid_err; });
            if (degenerate) {
                log.note("k=" + std::to_string(k) + ": differences at grid error (degenerate fit)");
                continue;
            }
            std::vector<std::pair<double, double>> fit_pts;
            for (size_t i = 0; i < pts.size(); ++i) fit_pts.emplace_back(pts[i].h, d[i]);
            const double slope = fit_slope(fit_pts).slope;
            log.require(slope >= cfg.bo_check_slope_min,
                        "k=" + std::to_string(k) + " difference slope " + format_g17(slope) +
                            " >= " + format_g17(cfg.bo_check_slope_min));
        }
        const double coeff = pts.front().eigs.effective.front() / pts.front().h;
        log.require(std::abs(coeff - 1.0) <= 0.05,
                    "harmonic coefficient " + format_g17(coeff) + " within 5% of 1");
        res.exit_code = log.ok ? 0 : 2;
    }
    res.messages = log.messages;
    return res;
}

RunResult run_layer(const SweepConfig& cfg) {
    RunResult res;
    res.table = CsvTable({"eps", "k", "lambda_full", "pi2_over_4eps2", "lambda_sigma", "residual",
                          "slope"});
    geometry::CurveProfile profile(cfg.layer_kappa0, cfg.layer_delta);
    std::vector<double> eps_sorted = cfg.layer_eps_list;
    std::sort(eps_sorted.begin(), eps_sorted.end());
    layer::LayerSweep sweep = layer::layer_sweep(profile, eps_sorted, cfg.layer_k_max,
                                                 cfg.layer_base_ns, cfg.layer_base_nt);
    for (size_t e = 0; e < sweep.eps.size(); ++e)
        for (int k = 1; k <= cfg.layer_k_max; ++k)
            res.table.add_row({sweep.eps[e], static_cast<double>(k),
                               sweep.lambdas[e][static_cast<size_t>(k - 1)],
                               M_PI * M_PI / (4.0 * sweep.eps[e] * sweep.eps[e]),
                               sweep.sigma[static_cast<size_t>(k - 1)],
                               sweep.residuals[e][static_cast<size_t>(k - 1)],
                               sweep.slopes[static_cast<size_t>(k - 1)]});

    CheckLog log;
    if (cfg.check) {
        for (int k = 1; k <= cfg.layer_k_max; ++k) {
            if (sweep.degenerate[static_cast<size_t>(k - 1)]) {
                log.note("k=" + std::to_string(k) + ": residuals at grid error (degenerate fit)");
                continue;
            }
            const double slope = sweep.slopes[static_cast<size_t>(k - 1)];
            log.require(slope >= cfg.layer_check_slope_min,
                        "k=" + std::to_string(k) + " residual slope " + format_g17(slope) +
                            " >= " + format_g17(cfg.layer_check_slope_min));
        }
        res.exit_code = log.ok ? 0 : 2;
    }
    res.messages = log.messages;
    return res;
}

RunResult run_shell(const SweepConfig& cfg) {
    RunResult res;
    res.table = CsvTable({"alpha", "j", "mu1_at_smax", "nu_j", "lambda_full", "shifted_residual",
                          "harmonic_scaled"});
    geometry::CurveProfile profile(cfg.shell_kappa0, cfg.shell_delta);

    struct Point {
        double alpha;
        double mu1;
        std::vector<double> nu, lam;
    };
    std::vector<double> alphas = cfg.shell_alpha_list;
    std::sort(alphas.begin(), alphas.end());
    auto compute = [&](index_t i) {
        const double alpha = alphas[static_cast<size_t>(i)];
        shell::ShellModel m{profile, alpha, static_cast<index_t>(cfg.shell_ns), 0};
        Point pt;
        pt.alpha = alpha;
        pt.mu1 = shell::transverse_eig_robin(profile, profile.argmax(), alpha, 1,
                                             std::max<index_t>(200, static_cast<index_t>(5 * alpha)));
        pt.nu = shell::effective_eigs(profile, alpha, cfg.shell_j_max);
        pt.lam = shell::shell_eigs(m, cfg.shell_j_max).values;
        return pt;
    };
    std::vector<Point> pts =
        parallel_map<Point>(cfg.jobs, static_cast<index_t>(alphas.size()), compute);

    std::vector<std::vector<double>> shifted(static_cast<size_t>(cfg.shell_j_max));
    for (const auto& pt : pts)
        for (int j = 1; j <= cfg.shell_j_max; ++j) {
            const double nu = pt.nu[static_cast<size_t>(j - 1)];
            const double lam = pt.lam[static_cast<size_t>(j - 1)];
            const double resid = lam + pt.alpha * pt.alpha - nu;
            res.table.add_row({pt.alpha, static_cast<double>(j), pt.mu1, nu, lam, resid,
                               (nu + pt.alpha * profile.kappa_max()) / std::sqrt(pt.alpha)});
            shifted[static_cast<size_t>(j - 1)].push_back(std::abs(resid));
        }

    CheckLog log;
    if (cfg.check) {
        for (int j = 1; j <= cfg.shell_j_max; ++j) {
            const auto& r = shifted[static_cast<size_t>(j - 1)];
            const double last = r.back();
            const double prior = *std::max_element(r.begin(), r.end() - 1);
            log.require(last <= cfg.shell_check_ratio_max * prior,
                        "j=" + std::to_string(j) + " shifted residual trend " + format_g17(last) +
                            " <= " + format_g17(cfg.shell_check_ratio_max) + " * " +
                            format_g17(prior));
        }
        shell::HarmonicFit hf = shell::harmonic_fit(profile, cfg.shell_harmonic_alpha_list, 1);
        if (hf.degenerate) {
            log.note("harmonic fit degenerate (no unique nondegenerate maximum)");
        } else {
            log.require(std::abs(hf.scaled.back() - hf.target) <=
                            cfg.shell_check_harmonic_tol * std::abs(hf.target),
                        "harmonic level " + format_g17(hf.scaled.back()) + " within " +
                            format_g17(cfg.shell_check_harmonic_tol * 100.0) + "% of " +
                            format_g17(hf.target));
        }
        res.exit_code = log.ok ? 0 : 2;
    }
    res.messages = log.messages;
    return res;
}

RunResult run_nsrobin(const SweepConfig& cfg) {
    RunResult res;
    res.table = CsvTable({"eps", "z_re", "z_im", "diff_norm", "diff_norm_over_eps", "smin_full",
                          "smin_eff"});
    geometry::CurveProfile profile(cfg.ns_kappa0, cfg.ns_delta);

    std::vector<double> eps_sorted = cfg.ns_eps_list;
    std::sort(eps_sorted.begin(), eps_sorted.end());
    const size_t nz = cfg.ns_z_re.size();

    struct Point {
        double eps, zre, zim;
        nsrobin::ResolventDiffRecord rec;
    };
    auto compute = [&](index_t q) {
        const size_t e = static_cast<size_t>(q) / nz;
        const size_t zi = static_cast<size_t>(q) % nz;
        nsrobin::ComplexRobinModel m{profile, cfg.ns_a0, cfg.ns_b0, eps_sorted[e],
                                     static_cast<index_t>(cfg.ns_ns), static_cast<index_t>(cfg.ns_nt)};
        Point pt{eps_sorted[e], cfg.ns_z_re[zi], cfg.ns_z_im[zi], {}};
        pt.rec = nsrobin::resolvent_difference_record(m, cplx{pt.zre, pt.zim});
        return pt;
    };
    std::vector<Point> pts = parallel_map<Point>(
        cfg.jobs, static_cast<index_t>(eps_sorted.size() * nz), compute);

    for (const auto& pt : pts)
        res.table.add_row({pt.eps, pt.zre, pt.zim, pt.rec.norm, pt.rec.norm / pt.eps,
                           pt.rec.smin_full, pt.rec.smin_eff});

    // accretivity report per eps
    CsvTable acc({"eps", "M", "c0_estimate"});
    nsrobin::ComplexRobinModel probe{profile, cfg.ns_a0, cfg.ns_b0, eps_sorted.front(),
                                     static_cast<index_t>(cfg.ns_ns), static_cast<index_t>(cfg.ns_nt)};
    const double mshift = 10.0 * (1.0 + probe.sup_abs_alpha() * probe.sup_abs_alpha());
    std::vector<nsrobin::AccretivityRecord> acc_recs;
    for (double eps : eps_sorted) {
        nsrobin::ComplexRobinModel m = probe;
        m.eps = eps;
        nsrobin::AccretivityRecord rec = nsrobin::accretivity_check(m, mshift);
        acc.add_row({eps, mshift, rec.c0_estimate});
        acc_recs.push_back(rec);
    }
    res.extra.emplace_back("accretivity", acc);

    CheckLog log;
    if (cfg.check) {
        for (size_t zi = 0; zi < nz; ++zi) {
            std::vector<std::pair<double, double>> fit_pts;
            for (const auto& pt : pts)
                if (std::abs(pt.zre - cfg.ns_z_re[zi]) < 1e-15 &&
                    std::abs(pt.zim - cfg.ns_z_im[zi]) < 1e-15)
                    fit_pts.emplace_back(pt.eps, pt.rec.norm);
            const double slope = fit_slope(fit_pts).slope;
            log.require(slope >= cfg.ns_check_slope_min,
                        "z=(" + format_g17(cfg.ns_z_re[zi]) + "," + format_g17(cfg.ns_z_im[zi]) +
                            ") resolvent-difference slope " + format_g17(slope) + " >= " +
                            format_g17(cfg.ns_check_slope_min));
        }
        const double conj_dev = nsrobin::conjugation_entry_deviation(probe);
        log.require(conj_dev <= 1e-14, "conjugation symmetry deviation " + format_g17(conj_dev));
        log.require(std::all_of(acc_recs.begin(), acc_recs.end(),
                                [](const nsrobin::AccretivityRecord& r) { return r.holds; }),
                    "accretivity pencil eigenvalue positive at every eps");
        nsrobin::VariationalGapFit vg =
            nsrobin::variational_gap_check(probe, eps_sorted, cfg.ns_trials);
        log.require(vg.slope >= cfg.ns_check_slope_min,
                    "variational max-ratio slope " + format_g17(vg.slope));
        log.require(vg.sampling_spread <= 0.10,
                    "sampling stability " + format_g17(vg.sampling_spread) + " <= 0.10");
        res.exit_code = log.ok ? 0 : 2;
    }
    res.messages = log.messages;
    return res;
}

void emit_plots(const SweepConfig& cfg, const RunResult& res) {
    if (cfg.plot_dir.empty()) return;
    std::error_code ec;
    std::filesystem::create_directories(cfg.plot_dir, ec);
    const auto& rows = res.table.rows();
    if (rows.empty()) return;
    std::vector<PlotSeries> series;
    if (cfg.model == "bo" || cfg.model == "layer" || cfg.model == "shell") {
        // |residual-like column| vs the sweep parameter, one polyline per index
        const size_t value_col = cfg.model == "bo" ? 4 : 5;
        std::map<int, PlotSeries> by_index;
        for (const auto& row : rows) {
            const int k = static_cast<int>(row[1]);
            by_index[k].label = (cfg.model == "shell" ? "j=" : "k=") + std::to_string(k);
            const double v = std::abs(row[value_col]);
            if (v > 0.0) by_index[k].points.emplace_back(row[0], v);
        }
        for (auto& [k, s] : by_index) series.push_back(std::move(s));
    } else if (cfg.model == "nsrobin") {
        std::map<std::pair<double, double>, PlotSeries> by_z;
        for (const auto& row : rows) {
            auto key = std::make_pair(row[1], row[2]);
            by_z[key].label = "z=(" + format_g17(row[1]) + "," + format_g17(row[2]) + ")";
            by_z[key].points.emplace_back(row[0], row[3]);
        }
        for (auto& [k, s] : by_z) series.push_back(std::move(s));
    } else {
        return; // toy sweeps have no natural log-log content
    }
    const std::string path = cfg.plot_dir + "/" + cfg.model + ".svg";
    if (!write_loglog_svg(path, cfg.model + " sweep", series))
        std::cerr << "warning: could not write plot " << path << "\n";
}

} // namespace

RunResult run_sweep(const SweepConfig& cfg) {
    cfg.validate();
    if (cfg.model == "toy") return run_toy(cfg);
    if (cfg.model == "bo") return run_bo(cfg);
    if (cfg.model == "layer") return run_layer(cfg);
    if (cfg.model == "shell") return run_shell(cfg);
    if (cfg.model == "nsrobin") return run_nsrobin(cfg);
    throw config_error("run_sweep: unknown model " + cfg.model);
}

int run_and_emit(const SweepConfig& cfg) {
    try {
        RunResult res = run_sweep(cfg);
        const std::string out = cfg.out_csv.empty() ? cfg.model + ".csv" : cfg.out_csv;
        res.table.write_file(out);
        for (const auto& [suffix, table] : res.extra) {
            std::string path = out;
            const auto dot = path.rfind(".csv");
            if (dot != std::string::npos)
                path = path.substr(0, dot) + "_" + suffix + ".csv";
            else
                path += "_" + suffix;
            table.write_file(path);
        }
        emit_plots(cfg, res);
        for (const auto& msg : res.messages) std::cout << msg << "\n";
        return res.exit_code;
    } catch (const config_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

} // namespace dimred::cli
