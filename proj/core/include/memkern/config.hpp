#pragma once

#include <filesystem>
#include <map>
#include <string>

#include "memkern/coefficients.hpp"
#include "memkern/functionals.hpp"
#include "memkern/grids.hpp"

namespace memk {

// Flat sectioned key=value configuration. Grammar: '[section]' headers,
// 'key = value' entries, '#' or ';' comments, blank lines ignored. Unknown
// keys are rejected so typos fail loudly.
class ConfigFile {
public:
    ConfigFile() = default;
    static ConfigFile parse_file(const std::filesystem::path& path);
    static ConfigFile parse_string(const std::string& text);

    bool has(const std::string& section, const std::string& key) const;
    std::string get(const std::string& section, const std::string& key,
                    const std::string& fallback) const;
    double get_double(const std::string& section, const std::string& key, double fallback) const;
    long get_long(const std::string& section, const std::string& key, long fallback) const;

    const std::map<std::string, std::map<std::string, std::string>>& sections() const {
        return sections_;
    }

private:
    std::map<std::string, std::map<std::string, std::string>> sections_;
};

struct RunConfig {
    // [problem]
    int dimension = 3;
    double r_min = 1.0;
    double r_max = 2.0;
    double t_max = 1.0;
    std::string bc = "DD";
    // [grids]
    std::size_t n_r = 65;
    std::size_t n_t = 64;
    std::size_t n_phi = 16;
    std::size_t n_theta = 8;
    // [coefficients]
    std::string family = "radial_abcd";
    double a = 2.0, b = 0.0, d = 0.0, c = 0.0;
    std::size_t series_terms = 1;
    // [measurement]
    std::string lambda_preset = "const";        // angular weight of Phi
    std::string psi_preset = "bump";            // volume weight of Psi
    std::string lambda_radial_preset = "const"; // radial weight of the scalar constraint
    // [manufacture]
    std::string kernel_preset = "exp_linear";
    std::string state_preset = "quadratic_drift";
    // [solver]
    std::string method = "time_march";
    double sigma = 0.0;
    double picard_tol = 1e-10;
    long max_iterations = 200;
    double m_bound = 1e-10;
    // [io]
    std::string out_dir = "out";
    // [identify] input files (empty = read from out_dir)
    std::string u_file, f_tilde_file, g_file;

    static RunConfig from_config(const ConfigFile& cfg);
};

RadialGrid make_radial_grid(const RunConfig& cfg);
TimeGrid make_time_grid(const RunConfig& cfg);
AngularGrid make_angular_grid(const RunConfig& cfg);

CoefficientSpec make_coefficient_spec(const RunConfig& cfg);
MeasurementSpec make_measurement(const RunConfig& cfg, const RadialGrid& rg,
                                 const AngularGrid& ag);

// Radial weight for the scalar kernel constraint, preset or 'file:<path>'.
std::vector<double> make_radial_lambda(const std::string& preset, const RadialGrid& rg);

// Manufactured kernel/state presets, analytic in (t, r).
std::function<double(double, double)> kernel_preset_fn(const std::string& name);
std::function<double(double, double)> state_preset_fn(const std::string& name);

}  // namespace memk
