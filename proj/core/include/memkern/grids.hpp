#pragma once

#include <cstddef>
#include <vector>

namespace memk {

// Uniform radial grid on [r_min, r_max], both endpoints included.
// r_min > 0: the reduction degenerates at the centre, an annulus/corona
// never touches it.
class RadialGrid {
public:
    RadialGrid(double r_min, double r_max, std::size_t n_nodes);

    double r_min() const { return r_min_; }
    double r_max() const { return r_max_; }
    std::size_t size() const { return nodes_.size(); }
    double spacing() const { return spacing_; }
    double node(std::size_t i) const { return nodes_[i]; }
    const std::vector<double>& nodes() const { return nodes_; }

private:
    double r_min_;
    double r_max_;
    double spacing_;
    std::vector<double> nodes_;
};

// Uniform time grid 0 = t_0 < ... < t_{n_steps} = t_max.
class TimeGrid {
public:
    TimeGrid(double t_max, std::size_t n_steps);

    double t_max() const { return t_max_; }
    std::size_t n_steps() const { return n_steps_; }
    std::size_t size() const { return nodes_.size(); }
    double step() const { return step_; }
    double node(std::size_t i) const { return nodes_[i]; }
    const std::vector<double>& nodes() const { return nodes_; }

private:
    double t_max_;
    std::size_t n_steps_;
    double step_;
    std::vector<double> nodes_;
};

// Angular grid: equispaced periodic phi nodes on [0, 2pi); in 3D additionally
// theta nodes placed at Gauss-Legendre abscissae in cos(theta), so that
// integrals carrying the sin(theta) surface measure are exact for
// polynomials in cos(theta) up to degree 2*n_theta - 1.
class AngularGrid {
public:
    // 2D grid: phi only.
    explicit AngularGrid(std::size_t n_phi);
    // 3D grid: phi x theta.
    AngularGrid(std::size_t n_phi, std::size_t n_theta);

    int dimension() const { return n_theta_ == 0 ? 2 : 3; }
    std::size_t n_phi() const { return n_phi_; }
    std::size_t n_theta() const { return n_theta_; }

    double phi(std::size_t m) const { return phi_[m]; }
    double theta(std::size_t l) const { return theta_[l]; }
    const std::vector<double>& phi_nodes() const { return phi_; }
    const std::vector<double>& theta_nodes() const { return theta_; }

    // Weight of the periodic phi rule (2pi / n_phi, same for all nodes).
    double phi_weight() const { return phi_weight_; }
    // Weights for integral f(theta) sin(theta) dtheta over [0, pi]
    // (Gauss-Legendre in mu = cos theta).
    const std::vector<double>& theta_sin_weights() const { return w_sin_; }
    // Weights for the plain integral f(theta) dtheta over [0, pi]
    // (non-uniform trapezoid over the theta nodes, pole cells closed by
    // linear extrapolation). Second order for smooth integrands.
    const std::vector<double>& theta_plain_weights() const { return w_plain_; }

private:
    std::size_t n_phi_;
    std::size_t n_theta_;
    double phi_weight_;
    std::vector<double> phi_;
    std::vector<double> theta_;
    std::vector<double> w_sin_;
    std::vector<double> w_plain_;
};

// Gauss-Legendre nodes/weights on [-1, 1].
void gauss_legendre(std::size_t n, std::vector<double>& nodes, std::vector<double>& weights);

}  // namespace memk
