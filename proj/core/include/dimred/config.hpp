#pragma once

#include <map>
#include <string>
#include <vector>

#include "dimred/types.hpp"

namespace dimred::cli {

/// Flat INI-style configuration: [section], key = value, '#' comments.
/// Unknown keys are hard errors so a misspelled physics parameter cannot
/// silently fall back to a default.
struct SweepConfig {
    std::string model; // toy | bo | layer | shell | nsrobin

    std::uint64_t seed = 42;
    int jobs = 0; // 0: logical core count
    bool check = false;
    std::string out_csv;
    std::string plot_dir;

    // toy
    int toy_instances = 100;
    int toy_n_max = 5;
    int toy_m_max = 4;
    double toy_scale_max = 2.5;
    double toy_z_re = -1.0;
    double toy_z_im = 0.35;

    // born-oppenheimer
    double bo_theta0 = 0.3;
    std::vector<double> bo_h_list{0.2, 0.1, 0.05, 0.025};
    int bo_k_max = 3;
    double bo_radius = 8.0;
    int bo_base_n = 511;
    double bo_c0 = 0.4;
    double bo_C0 = 3.0;
    double bo_check_slope_min = 1.8;

    // dirichlet layer
    double layer_kappa0 = 1.0;
    double layer_delta = 0.3;
    std::vector<double> layer_eps_list{0.2, 0.1, 0.05};
    int layer_k_max = 2;
    int layer_base_ns = 48;
    int layer_base_nt = 48;
    double layer_check_slope_min = 0.9;

    // robin shell
    double shell_kappa0 = 0.5;
    double shell_delta = 0.3;
    std::vector<double> shell_alpha_list{10, 20, 40, 80};
    std::vector<double> shell_harmonic_alpha_list{50, 100, 200, 400};
    int shell_j_max = 2;
    int shell_ns = 48;
    double shell_check_ratio_max = 1.5;
    double shell_check_harmonic_tol = 0.10;

    // non-self-adjoint robin layer
    double ns_kappa0 = 0.5;
    double ns_delta = 0.3;
    double ns_a0 = 1.0;
    double ns_b0 = 0.5;
    std::vector<double> ns_eps_list{0.1, 0.05, 0.025};
    std::vector<double> ns_z_re{-2.0, -1.5, -1.0};
    std::vector<double> ns_z_im{0.0, 0.5, 1.0};
    int ns_trials = 100;
    int ns_ns = 32;
    int ns_nt = 24;
    double ns_check_slope_min = 0.9;

    void validate() const;
};

SweepConfig parse_config_file(const std::string& path, const std::string& model);
SweepConfig parse_config_text(const std::string& text, const std::string& model);

} // namespace dimred::cli
