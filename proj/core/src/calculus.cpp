#include "memkern/calculus.hpp"

#include <cstddef>

#include "memkern/errors.hpp"

namespace memk {

double integrate(std::span<const double> samples, double h, QuadRule rule) {
    const std::size_t n = samples.size();
    if (n < 2) throw ShapeError("integrate: need at least 2 samples");
    switch (rule) {
        case QuadRule::Trapezoid: {
            double s = 0.5 * (samples.front() + samples.back());
            for (std::size_t i = 1; i + 1 < n; ++i) s += samples[i];
            return s * h;
        }
        case QuadRule::Simpson: {
            if (n % 2 == 0)
                throw ConfigError("integrate: Simpson rule needs an odd sample count");
            double s = samples.front() + samples.back();
            for (std::size_t i = 1; i + 1 < n; ++i) s += (i % 2 == 1 ? 4.0 : 2.0) * samples[i];
            return s * h / 3.0;
        }
        case QuadRule::Gauss:
            throw ConfigError("integrate: Gauss rule applies to the theta direction only");
    }
    return 0.0;
}

double integrate(std::span<const double> samples, const RadialGrid& grid) {
    return integrate(samples, grid,
                     grid.size() % 2 == 1 ? QuadRule::Simpson : QuadRule::Trapezoid);
}

double integrate(std::span<const double> samples, const RadialGrid& grid, QuadRule rule) {
    if (samples.size() != grid.size())
        throw ShapeError("integrate: sample count does not match the radial grid");
    return integrate(samples, grid.spacing(), rule);
}

double integrate_theta_sin(std::span<const double> samples, const AngularGrid& grid) {
    if (samples.size() != grid.n_theta())
        throw ShapeError("integrate_theta_sin: sample count does not match n_theta");
    double s = 0.0;
    for (std::size_t l = 0; l < grid.n_theta(); ++l) s += grid.theta_sin_weights()[l] * samples[l];
    return s;
}

double integrate_theta_plain(std::span<const double> samples, const AngularGrid& grid) {
    if (samples.size() != grid.n_theta())
        throw ShapeError("integrate_theta_plain: sample count does not match n_theta");
    double s = 0.0;
    for (std::size_t l = 0; l < grid.n_theta(); ++l)
        s += grid.theta_plain_weights()[l] * samples[l];
    return s;
}

double integrate_phi(std::span<const double> samples, const AngularGrid& grid) {
    if (samples.size() != grid.n_phi())
        throw ShapeError("integrate_phi: sample count does not match n_phi");
    double s = 0.0;
    for (double v : samples) s += v;
    return s * grid.phi_weight();
}

std::vector<double> cumulative_from_right(std::span<const double> samples, double h) {
    const std::size_t n = samples.size();
    if (n < 2) throw ShapeError("cumulative_from_right: need at least 2 samples");
    std::vector<double> out(n);
    out[n - 1] = 0.0;
    for (std::size_t i = n - 1; i-- > 0;)
        out[i] = out[i + 1] + 0.5 * h * (samples[i] + samples[i + 1]);
    return out;
}

std::vector<double> cumulative_from_left(std::span<const double> samples, double h) {
    const std::size_t n = samples.size();
    if (n < 2) throw ShapeError("cumulative_from_left: need at least 2 samples");
    std::vector<double> out(n);
    out[0] = 0.0;
    for (std::size_t i = 1; i < n; ++i)
        out[i] = out[i - 1] + 0.5 * h * (samples[i - 1] + samples[i]);
    return out;
}

std::vector<double> cumulative_from_right(std::span<const double> samples,
                                          const RadialGrid& grid) {
    if (samples.size() != grid.size())
        throw ShapeError("cumulative_from_right: sample count does not match the grid");
    return cumulative_from_right(samples, grid.spacing());
}

std::vector<double> cumulative_from_left(std::span<const double> samples, const RadialGrid& grid) {
    if (samples.size() != grid.size())
        throw ShapeError("cumulative_from_left: sample count does not match the grid");
    return cumulative_from_left(samples, grid.spacing());
}

std::vector<double> derivative_uniform(std::span<const double> samples, double h) {
    const std::size_t n = samples.size();
    if (n < 3) throw ShapeError("derivative_uniform: need at least 3 samples");
    std::vector<double> out(n);
    out[0] = (-3.0 * samples[0] + 4.0 * samples[1] - samples[2]) / (2.0 * h);
    for (std::size_t i = 1; i + 1 < n; ++i) out[i] = (samples[i + 1] - samples[i - 1]) / (2.0 * h);
    out[n - 1] = (3.0 * samples[n - 1] - 4.0 * samples[n - 2] + samples[n - 3]) / (2.0 * h);
    return out;
}

std::vector<double> derivative_r(std::span<const double> samples, const RadialGrid& grid) {
    if (samples.size() != grid.size())
        throw ShapeError("derivative_r: sample count does not match the grid");
    return derivative_uniform(samples, grid.spacing());
}

std::vector<double> derivative_nonuniform(std::span<const double> samples,
                                          std::span<const double> coords) {
    const std::size_t n = samples.size();
    if (n != coords.size()) throw ShapeError("derivative_nonuniform: size mismatch");
    if (n < 3) throw ShapeError("derivative_nonuniform: need at least 3 samples");

    // Lagrange differentiation over a window around i. Cubic stencils keep
    // second order when the result is differentiated again on a non-uniform
    // grid (the quadratic stencil's error coefficient is not smooth enough).
    const std::size_t width = n >= 4 ? 4 : 3;
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t j = (i >= 1) ? i - 1 : 0;
        if (j + width > n) j = n - width;
        const double x = coords[i];
        double acc = 0.0;
        for (std::size_t p = 0; p < width; ++p) {
            // derivative of the p-th Lagrange basis at x
            double dlp = 0.0;
            for (std::size_t q = 0; q < width; ++q) {
                if (q == p) continue;
                double term = 1.0 / (coords[j + p] - coords[j + q]);
                for (std::size_t s = 0; s < width; ++s) {
                    if (s == p || s == q) continue;
                    term *= (x - coords[j + s]) / (coords[j + p] - coords[j + s]);
                }
                dlp += term;
            }
            acc += dlp * samples[j + p];
        }
        out[i] = acc;
    }
    return out;
}

std::vector<double> derivative_periodic(std::span<const double> samples, double h) {
    const std::size_t n = samples.size();
    if (n < 3) throw ShapeError("derivative_periodic: need at least 3 samples");
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double next = samples[(i + 1) % n];
        const double prev = samples[(i + n - 1) % n];
        out[i] = (next - prev) / (2.0 * h);
    }
    return out;
}

std::vector<double> second_derivative_uniform(std::span<const double> samples, double h) {
    const std::size_t n = samples.size();
    if (n < 4) throw ShapeError("second_derivative_uniform: need at least 4 samples");
    std::vector<double> out(n);
    const double h2 = h * h;
    out[0] = (2.0 * samples[0] - 5.0 * samples[1] + 4.0 * samples[2] - samples[3]) / h2;
    for (std::size_t i = 1; i + 1 < n; ++i)
        out[i] = (samples[i + 1] - 2.0 * samples[i] + samples[i - 1]) / h2;
    out[n - 1] = (2.0 * samples[n - 1] - 5.0 * samples[n - 2] + 4.0 * samples[n - 3] -
                  samples[n - 4]) /
                 h2;
    return out;
}

}  // namespace memk
