#include "memkern/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "memkern/csv.hpp"
#include "memkern/errors.hpp"
#include "memkern/spline.hpp"

namespace memk {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

const std::map<std::string, std::set<std::string>> kKnownKeys = {
    {"problem", {"dimension", "r_min", "r_max", "t_max", "bc"}},
    {"grids", {"n_r", "n_t", "n_phi", "n_theta"}},
    {"coefficients", {"family", "a", "b", "d", "c", "series_terms"}},
    {"measurement", {"lambda", "psi", "lambda_radial"}},
    {"manufacture", {"kernel", "state"}},
    {"solver", {"method", "sigma", "picard_tol", "max_iterations", "m_bound"}},
    {"io", {"out_dir"}},
    {"identify", {"u_file", "f_tilde_file", "g_file"}},
};

}  // namespace

ConfigFile ConfigFile::parse_string(const std::string& text) {
    ConfigFile cfg;
    std::istringstream in(text);
    std::string line, section;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find_first_of("#;");
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError("config line " + std::to_string(lineno) + ": bad section");
            section = trim(line.substr(1, line.size() - 2));
            if (!kKnownKeys.count(section))
                throw ConfigError("config: unknown section [" + section + "]");
            cfg.sections_[section];
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(lineno) + ": expected key=value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (section.empty())
            throw ConfigError("config line " + std::to_string(lineno) + ": key outside section");
        if (!kKnownKeys.at(section).count(key))
            throw ConfigError("config: unknown key '" + key + "' in [" + section + "]");
        cfg.sections_[section][key] = value;
    }
    return cfg;
}

ConfigFile ConfigFile::parse_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config: " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_string(ss.str());
}

bool ConfigFile::has(const std::string& section, const std::string& key) const {
    const auto s = sections_.find(section);
    return s != sections_.end() && s->second.count(key) > 0;
}

std::string ConfigFile::get(const std::string& section, const std::string& key,
                            const std::string& fallback) const {
    const auto s = sections_.find(section);
    if (s == sections_.end()) return fallback;
    const auto k = s->second.find(key);
    return k == s->second.end() ? fallback : k->second;
}

double ConfigFile::get_double(const std::string& section, const std::string& key,
                              double fallback) const {
    if (!has(section, key)) return fallback;
    const std::string v = get(section, key, "");
    try {
        std::size_t pos = 0;
        const double x = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw ConfigError("config: '" + v + "' is not a number ([" + section + "] " + key + ")");
    }
}

long ConfigFile::get_long(const std::string& section, const std::string& key,
                          long fallback) const {
    if (!has(section, key)) return fallback;
    const std::string v = get(section, key, "");
    try {
        std::size_t pos = 0;
        const long x = std::stol(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw ConfigError("config: '" + v + "' is not an integer ([" + section + "] " + key +
                          ")");
    }
}

RunConfig RunConfig::from_config(const ConfigFile& cfg) {
    RunConfig rc;
    rc.dimension = static_cast<int>(cfg.get_long("problem", "dimension", 3));
    if (rc.dimension != 2 && rc.dimension != 3)
        throw ConfigError("config: dimension must be 2 or 3");
    rc.r_min = cfg.get_double("problem", "r_min", rc.r_min);
    rc.r_max = cfg.get_double("problem", "r_max", rc.r_max);
    rc.t_max = cfg.get_double("problem", "t_max", rc.t_max);
    rc.bc = cfg.get("problem", "bc", rc.bc);
    if (rc.bc.size() != 2 || (rc.bc[0] != 'D' && rc.bc[0] != 'N') ||
        (rc.bc[1] != 'D' && rc.bc[1] != 'N'))
        throw ConfigError("config: bc must be two letters from {D, N}");
    rc.n_r = static_cast<std::size_t>(cfg.get_long("grids", "n_r", 65));
    rc.n_t = static_cast<std::size_t>(cfg.get_long("grids", "n_t", 64));
    rc.n_phi = static_cast<std::size_t>(cfg.get_long("grids", "n_phi", 16));
    rc.n_theta = static_cast<std::size_t>(cfg.get_long("grids", "n_theta", 8));
    rc.family = cfg.get("coefficients", "family", rc.family);
    rc.a = cfg.get_double("coefficients", "a", rc.a);
    rc.b = cfg.get_double("coefficients", "b", rc.b);
    rc.d = cfg.get_double("coefficients", "d", rc.d);
    rc.c = cfg.get_double("coefficients", "c", rc.c);
    rc.series_terms = static_cast<std::size_t>(cfg.get_long("coefficients", "series_terms", 1));
    rc.lambda_preset = cfg.get("measurement", "lambda", rc.lambda_preset);
    rc.psi_preset = cfg.get("measurement", "psi", rc.psi_preset);
    rc.lambda_radial_preset = cfg.get("measurement", "lambda_radial", rc.lambda_radial_preset);
    rc.kernel_preset = cfg.get("manufacture", "kernel", rc.kernel_preset);
    rc.state_preset = cfg.get("manufacture", "state", rc.state_preset);
    rc.method = cfg.get("solver", "method", rc.method);
    if (rc.method != "time_march" && rc.method != "picard")
        throw ConfigError("config: method must be time_march or picard");
    rc.sigma = cfg.get_double("solver", "sigma", rc.sigma);
    rc.picard_tol = cfg.get_double("solver", "picard_tol", rc.picard_tol);
    rc.max_iterations = cfg.get_long("solver", "max_iterations", rc.max_iterations);
    rc.m_bound = cfg.get_double("solver", "m_bound", rc.m_bound);
    rc.out_dir = cfg.get("io", "out_dir", rc.out_dir);
    rc.u_file = cfg.get("identify", "u_file", "");
    rc.f_tilde_file = cfg.get("identify", "f_tilde_file", "");
    rc.g_file = cfg.get("identify", "g_file", "");
    return rc;
}

RadialGrid make_radial_grid(const RunConfig& cfg) {
    return RadialGrid(cfg.r_min, cfg.r_max, cfg.n_r);
}

TimeGrid make_time_grid(const RunConfig& cfg) { return TimeGrid(cfg.t_max, cfg.n_t); }

AngularGrid make_angular_grid(const RunConfig& cfg) {
    if (cfg.dimension == 2) return AngularGrid(cfg.n_phi);
    return AngularGrid(cfg.n_phi, cfg.n_theta);
}

CoefficientSpec make_coefficient_spec(const RunConfig& cfg) {
    CoefficientSpec spec;
    spec.dimension = cfg.dimension;
    const double a = cfg.a, b = cfg.b, d = cfg.d, c = cfg.c;
    if (cfg.family == "radial_abcd" || cfg.family == "sum") {
        spec.family =
            cfg.family == "sum" ? CoefficientFamily::Sum : CoefficientFamily::RadialABCD;
        spec.a = [a](double) { return a; };
        spec.b = [b](double) { return b; };
        spec.d = [d](double) { return d; };
        spec.c = [c](const double*) { return c; };
    } else if (cfg.family == "polynomial_series") {
        spec.family = CoefficientFamily::PolynomialSeries;
    } else {
        throw ConfigError("config: unknown coefficient family '" + cfg.family + "'");
    }
    if (spec.family != CoefficientFamily::RadialABCD) {
        for (std::size_t n = 0; n < cfg.series_terms; ++n)
            spec.series_weights.push_back([](const double*) { return 1.0; });
    }
    // Default first-order structure: B the Laplacian tensor, C the radial
    // direction field.
    spec.b_tensor = [](const double*, int j, int k) { return j == k ? 1.0 : 0.0; };
    spec.c_vector = [dim = cfg.dimension](const double* x, int j) {
        double r2 = 0.0;
        for (int i = 0; i < dim; ++i) r2 += x[i] * x[i];
        return x[j] / std::sqrt(r2);
    };
    return spec;
}

MeasurementSpec make_measurement(const RunConfig& cfg, const RadialGrid& rg,
                                 const AngularGrid& ag) {
    MeasurementSpec spec;
    const std::string& lp = cfg.lambda_preset;
    if (lp == "const") {
        spec.lambda = MeasurementSpec::sample_lambda(ag, [](double, double) { return 1.0; });
    } else if (lp == "cos_theta") {
        if (cfg.dimension != 3) throw ConfigError("lambda preset cos_theta needs dimension 3");
        spec.lambda =
            MeasurementSpec::sample_lambda(ag, [](double, double th) { return std::cos(th); });
    } else if (lp == "band_limited") {
        spec.lambda = MeasurementSpec::sample_lambda(ag, [dim = cfg.dimension](double phi,
                                                                               double th) {
            if (dim == 2) return 1.0 + 0.4 * std::cos(phi) + 0.2 * std::sin(2.0 * phi);
            return 1.0 + 0.4 * std::cos(th) + 0.3 * std::sin(th) * std::cos(phi);
        });
    } else if (lp.rfind("file:", 0) == 0) {
        const auto [grid, values] = read_radial_profile_csv(lp.substr(5));
        // Angular sample file: first column phi (2D) re-interpolated onto
        // the grid by a spline; 3D tables use bilinear interpolation and are
        // described in the README.
        CubicSpline s(grid.nodes(), values);
        spec.lambda = MeasurementSpec::sample_lambda(
            ag, [s](double phi, double) { return s(phi); });
    } else {
        throw ConfigError("config: unknown lambda preset '" + lp + "'");
    }

    const std::string& pp = cfg.psi_preset;
    const double r1 = rg.r_min(), r2 = rg.r_max();
    const double mid = 0.5 * (r2 - r1);
    auto bump = [r1, r2, mid](double r) { return (r - r1) * (r2 - r) / (mid * mid); };
    if (pp == "bump") {
        spec.psi_kind = MeasurementSpec::PsiKind::Volume;
        spec.psi = AngularField::sample(
            rg, ag, [bump](double r, double, double) { return bump(r); });
    } else if (pp == "bump_swirl") {
        spec.psi_kind = MeasurementSpec::PsiKind::Volume;
        spec.psi = AngularField::sample(rg, ag,
                                        [bump, dim = cfg.dimension](double r, double phi,
                                                                    double th) {
                                            double ang = 1.0 + 0.5 * std::sin(phi);
                                            if (dim == 3) ang += 0.3 * std::cos(th);
                                            return bump(r) * ang;
                                        });
    } else if (pp == "composite") {
        spec.psi_kind = MeasurementSpec::PsiKind::CompositePhi;
        spec.mu.assign(rg.size(), 1.0);
    } else {
        throw ConfigError("config: unknown psi preset '" + pp + "'");
    }
    return spec;
}

std::vector<double> make_radial_lambda(const std::string& preset, const RadialGrid& rg) {
    std::vector<double> out(rg.size());
    if (preset == "const") {
        std::fill(out.begin(), out.end(), 1.0);
    } else if (preset == "linear") {
        for (std::size_t j = 0; j < rg.size(); ++j) out[j] = rg.node(j);
    } else if (preset == "cosine") {
        for (std::size_t j = 0; j < rg.size(); ++j)
            out[j] = 1.0 + 0.5 * std::cos(rg.node(j));
    } else if (preset.rfind("file:", 0) == 0) {
        const auto [grid, values] = read_radial_profile_csv(preset.substr(5));
        CubicSpline s(grid.nodes(), values);
        for (std::size_t j = 0; j < rg.size(); ++j) out[j] = s(rg.node(j));
    } else {
        throw ConfigError("config: unknown radial lambda preset '" + preset + "'");
    }
    return out;
}

std::function<double(double, double)> kernel_preset_fn(const std::string& name) {
    if (name == "exp_linear")
        return [](double t, double r) { return std::exp(-t) * (1.0 + r); };
    if (name == "zero") return [](double, double) { return 0.0; };
    if (name == "cosine_ramp")
        return [](double t, double r) { return (1.0 + 0.5 * t) * (2.0 + std::cos(2.0 * r)); };
    throw ConfigError("config: unknown kernel preset '" + name + "'");
}

std::function<double(double, double)> state_preset_fn(const std::string& name) {
    if (name == "quadratic_drift") return [](double t, double r) { return r * r + t * r; };
    if (name == "exp_profile")
        return [](double t, double r) { return std::exp(0.5 * r) * (1.0 + 0.3 * t); };
    throw ConfigError("config: unknown state preset '" + name + "'");
}

}  // namespace memk
