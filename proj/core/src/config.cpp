#include "dimred/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>

namespace dimred::cli {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    const auto b = s.find_last_not_of(" \t\r");
    if (a == std::string::npos) return {};
    return s.substr(a, b - a + 1);
}

double parse_double(const std::string& v, const std::string& key) {
    try {
        size_t pos = 0;
        const double x = std::stod(v, &pos);
        if (pos != v.size() || !std::isfinite(x)) throw std::invalid_argument(v);
        return x;
    } catch (...) {
        throw config_error("config: bad numeric value for " + key + ": '" + v + "'");
    }
}

int parse_int(const std::string& v, const std::string& key) {
    const double x = parse_double(v, key);
    if (x != std::floor(x)) throw config_error("config: integer expected for " + key);
    return static_cast<int>(x);
}

bool parse_bool(const std::string& v, const std::string& key) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw config_error("config: boolean expected for " + key);
}

std::vector<double> parse_list(const std::string& v, const std::string& key) {
    std::vector<double> out;
    std::istringstream in(v);
    std::string tok;
    while (in >> tok) out.push_back(parse_double(tok, key));
    return out;
}

} // namespace

void SweepConfig::validate() const {
    auto positive_list = [](const std::vector<double>& v, const char* name) {
        if (v.empty()) throw config_error(std::string("config: empty list ") + name);
        for (double x : v)
            if (!(x > 0.0)) throw config_error(std::string("config: nonpositive entry in ") + name);
    };
    if (model != "toy" && model != "bo" && model != "layer" && model != "shell" &&
        model != "nsrobin")
        throw config_error("config: unknown model '" + model + "'");
    if (jobs < 0) throw config_error("config: jobs must be >= 0");
    if (model == "toy") {
        if (toy_instances < 1) throw config_error("config: toy.instances must be >= 1");
        if (toy_n_max < 1 || toy_m_max < 1) throw config_error("config: toy n_max, m_max >= 1");
    } else if (model == "bo") {
        positive_list(bo_h_list, "bo.h_list");
        if (bo_k_max < 1 || bo_k_max > 6) throw config_error("config: bo.k_max in 1..6");
        if (bo_base_n < 8) throw config_error("config: bo.base_n >= 8");
    } else if (model == "layer") {
        positive_list(layer_eps_list, "layer.eps_list");
        if (layer_base_ns < 8 || layer_base_nt < 8)
            throw config_error("config: layer grid sizes >= 8");
        if (layer_k_max < 1) throw config_error("config: layer.k_max >= 1");
    } else if (model == "shell") {
        positive_list(shell_alpha_list, "shell.alpha_list");
        positive_list(shell_harmonic_alpha_list, "shell.harmonic_alpha_list");
        if (shell_ns < 8) throw config_error("config: shell.ns >= 8");
        if (shell_j_max < 1) throw config_error("config: shell.j_max >= 1");
    } else if (model == "nsrobin") {
        positive_list(ns_eps_list, "nsrobin.eps_list");
        if (ns_z_re.size() != ns_z_im.size() || ns_z_re.empty())
            throw config_error("config: nsrobin z_re/z_im must be nonempty and equal length");
        if (ns_ns < 8 || ns_nt < 8) throw config_error("config: nsrobin grid sizes >= 8");
        if (ns_trials < 100) throw config_error("config: nsrobin.trials >= 100");
    }
}

SweepConfig parse_config_text(const std::string& text, const std::string& model) {
    SweepConfig cfg;
    cfg.model = model;

    using Setter = std::function<void(SweepConfig&, const std::string&, const std::string&)>;
    std::map<std::string, Setter> setters;
    auto dbl = [](double SweepConfig::* f) {
        return [f](SweepConfig& c, const std::string& v, const std::string& k) {
            c.*f = parse_double(v, k);
        };
    };
    auto intg = [](int SweepConfig::* f) {
        return [f](SweepConfig& c, const std::string& v, const std::string& k) {
            c.*f = parse_int(v, k);
        };
    };
    auto list = [](std::vector<double> SweepConfig::* f) {
        return [f](SweepConfig& c, const std::string& v, const std::string& k) {
            c.*f = parse_list(v, k);
        };
    };
    setters["run.seed"] = [](SweepConfig& c, const std::string& v, const std::string& k) {
        c.seed = static_cast<std::uint64_t>(parse_double(v, k));
    };
    setters["run.jobs"] = intg(&SweepConfig::jobs);
    setters["run.check"] = [](SweepConfig& c, const std::string& v, const std::string& k) {
        c.check = parse_bool(v, k);
    };
    setters["run.out"] = [](SweepConfig& c, const std::string& v, const std::string&) {
        c.out_csv = v;
    };
    setters["run.plot"] = [](SweepConfig& c, const std::string& v, const std::string&) {
        c.plot_dir = v;
    };

    setters["toy.instances"] = intg(&SweepConfig::toy_instances);
    setters["toy.n_max"] = intg(&SweepConfig::toy_n_max);
    setters["toy.m_max"] = intg(&SweepConfig::toy_m_max);
    setters["toy.scale_max"] = dbl(&SweepConfig::toy_scale_max);
    setters["toy.z_re"] = dbl(&SweepConfig::toy_z_re);
    setters["toy.z_im"] = dbl(&SweepConfig::toy_z_im);

    setters["bo.theta0"] = dbl(&SweepConfig::bo_theta0);
    setters["bo.h_list"] = list(&SweepConfig::bo_h_list);
    setters["bo.k_max"] = intg(&SweepConfig::bo_k_max);
    setters["bo.radius"] = dbl(&SweepConfig::bo_radius);
    setters["bo.base_n"] = intg(&SweepConfig::bo_base_n);
    setters["bo.c0"] = dbl(&SweepConfig::bo_c0);
    setters["bo.C0"] = dbl(&SweepConfig::bo_C0);
    setters["bo.check_slope_min"] = dbl(&SweepConfig::bo_check_slope_min);

    setters["layer.kappa0"] = dbl(&SweepConfig::layer_kappa0);
    setters["layer.delta"] = dbl(&SweepConfig::layer_delta);
    setters["layer.eps_list"] = list(&SweepConfig::layer_eps_list);
    setters["layer.k_max"] = intg(&SweepConfig::layer_k_max);
    setters["layer.base_ns"] = intg(&SweepConfig::layer_base_ns);
    setters["layer.base_nt"] = intg(&SweepConfig::layer_base_nt);
    setters["layer.check_slope_min"] = dbl(&SweepConfig::layer_check_slope_min);

    setters["shell.kappa0"] = dbl(&SweepConfig::shell_kappa0);
    setters["shell.delta"] = dbl(&SweepConfig::shell_delta);
    setters["shell.alpha_list"] = list(&SweepConfig::shell_alpha_list);
    setters["shell.harmonic_alpha_list"] = list(&SweepConfig::shell_harmonic_alpha_list);
    setters["shell.j_max"] = intg(&SweepConfig::shell_j_max);
    setters["shell.ns"] = intg(&SweepConfig::shell_ns);
    setters["shell.check_ratio_max"] = dbl(&SweepConfig::shell_check_ratio_max);
    setters["shell.check_harmonic_tol"] = dbl(&SweepConfig::shell_check_harmonic_tol);

    setters["nsrobin.kappa0"] = dbl(&SweepConfig::ns_kappa0);
    setters["nsrobin.delta"] = dbl(&SweepConfig::ns_delta);
    setters["nsrobin.a0"] = dbl(&SweepConfig::ns_a0);
    setters["nsrobin.b0"] = dbl(&SweepConfig::ns_b0);
    setters["nsrobin.eps_list"] = list(&SweepConfig::ns_eps_list);
    setters["nsrobin.z_re"] = list(&SweepConfig::ns_z_re);
    setters["nsrobin.z_im"] = list(&SweepConfig::ns_z_im);
    setters["nsrobin.trials"] = intg(&SweepConfig::ns_trials);
    setters["nsrobin.ns"] = intg(&SweepConfig::ns_ns);
    setters["nsrobin.nt"] = intg(&SweepConfig::ns_nt);
    setters["nsrobin.check_slope_min"] = dbl(&SweepConfig::ns_check_slope_min);

    std::istringstream in(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw config_error("config: malformed section at line " + std::to_string(lineno));
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw config_error("config: expected key = value at line " + std::to_string(lineno));
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        const std::string full = section.empty() ? key : section + "." + key;
        auto it = setters.find(full);
        if (it == setters.end()) throw config_error("config: unknown key '" + full + "'");
        it->second(cfg, value, full);
    }
    cfg.validate();
    return cfg;
}

SweepConfig parse_config_file(const std::string& path, const std::string& model) {
    std::ifstream in(path);
    if (!in) throw config_error("config: cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str(), model);
}

} // namespace dimred::cli
