#include "memkern/grids.hpp"

#include <cmath>
#include <numbers>

#include "memkern/errors.hpp"

namespace memk {

RadialGrid::RadialGrid(double r_min, double r_max, std::size_t n_nodes)
    : r_min_(r_min), r_max_(r_max) {
    if (!(r_min > 0.0)) throw ConfigError("RadialGrid: r_min must be positive");
    if (!(r_max > r_min)) throw ConfigError("RadialGrid: r_max must exceed r_min");
    if (n_nodes < 3) throw ConfigError("RadialGrid: need at least 3 nodes");
    spacing_ = (r_max - r_min) / static_cast<double>(n_nodes - 1);
    nodes_.resize(n_nodes);
    for (std::size_t i = 0; i < n_nodes; ++i)
        nodes_[i] = r_min + spacing_ * static_cast<double>(i);
    nodes_.back() = r_max;
}

TimeGrid::TimeGrid(double t_max, std::size_t n_steps) : t_max_(t_max), n_steps_(n_steps) {
    if (!(t_max > 0.0)) throw ConfigError("TimeGrid: t_max must be positive");
    if (n_steps < 1) throw ConfigError("TimeGrid: need at least one step");
    step_ = t_max / static_cast<double>(n_steps);
    nodes_.resize(n_steps + 1);
    for (std::size_t i = 0; i <= n_steps; ++i) nodes_[i] = step_ * static_cast<double>(i);
    nodes_.back() = t_max;
}

void gauss_legendre(std::size_t n, std::vector<double>& nodes, std::vector<double>& weights) {
    nodes.resize(n);
    weights.resize(n);
    const std::size_t m = (n + 1) / 2;
    for (std::size_t i = 0; i < m; ++i) {
        // Chebyshev initial guess, then Newton on P_n.
        double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) /
                            (static_cast<double>(n) + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * static_cast<double>(j) + 1.0) * x * p1 -
                      static_cast<double>(j) * p2) /
                     (static_cast<double>(j) + 1.0);
            }
            dp = static_cast<double>(n) * (x * p0 - p1) / (x * x - 1.0);
            const double dx = p0 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
}

AngularGrid::AngularGrid(std::size_t n_phi) : n_phi_(n_phi), n_theta_(0) {
    if (n_phi < 4) throw ConfigError("AngularGrid: need at least 4 phi nodes");
    phi_weight_ = 2.0 * std::numbers::pi / static_cast<double>(n_phi);
    phi_.resize(n_phi);
    for (std::size_t m = 0; m < n_phi; ++m) phi_[m] = phi_weight_ * static_cast<double>(m);
}

AngularGrid::AngularGrid(std::size_t n_phi, std::size_t n_theta) : AngularGrid(n_phi) {
    if (n_theta < 2) throw ConfigError("AngularGrid: need at least 2 theta nodes");
    n_theta_ = n_theta;

    std::vector<double> mu, w;
    gauss_legendre(n_theta, mu, w);
    theta_.resize(n_theta);
    w_sin_.resize(n_theta);
    // mu ascending => theta descending; store theta ascending.
    for (std::size_t l = 0; l < n_theta; ++l) {
        theta_[l] = std::acos(mu[n_theta - 1 - l]);
        w_sin_[l] = w[n_theta - 1 - l];
    }

    // Trapezoid in theta over the (non-uniform) nodes; the open pole cells
    // [0, theta_0] and [theta_last, pi] are closed by linear extrapolation
    // from the two nearest nodes.
    w_plain_.assign(n_theta, 0.0);
    for (std::size_t l = 0; l + 1 < n_theta; ++l) {
        const double d = theta_[l + 1] - theta_[l];
        w_plain_[l] += 0.5 * d;
        w_plain_[l + 1] += 0.5 * d;
    }
    {
        const double a = theta_[0];
        const double d = theta_[1] - theta_[0];
        w_plain_[0] += a + a * a / (2.0 * d);
        w_plain_[1] -= a * a / (2.0 * d);
    }
    {
        const double b = std::numbers::pi - theta_[n_theta - 1];
        const double d = theta_[n_theta - 1] - theta_[n_theta - 2];
        w_plain_[n_theta - 1] += b + b * b / (2.0 * d);
        w_plain_[n_theta - 2] -= b * b / (2.0 * d);
    }
}

}  // namespace memk
