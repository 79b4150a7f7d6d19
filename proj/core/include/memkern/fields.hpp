#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "memkern/grids.hpp"

namespace memk {

// Samples v(t_i, r_j) on a time x radial product grid. Row = time slice.
struct SpaceTimeField {
    TimeGrid tgrid;
    RadialGrid rgrid;
    Eigen::MatrixXd values;

    SpaceTimeField(const TimeGrid& tg, const RadialGrid& rg)
        : tgrid(tg), rgrid(rg),
          values(Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(tg.size()),
                                       static_cast<Eigen::Index>(rg.size()))) {}

    double& at(std::size_t it, std::size_t ir) {
        return values(static_cast<Eigen::Index>(it), static_cast<Eigen::Index>(ir));
    }
    double at(std::size_t it, std::size_t ir) const {
        return values(static_cast<Eigen::Index>(it), static_cast<Eigen::Index>(ir));
    }
    std::vector<double> slice(std::size_t it) const {
        std::vector<double> out(rgrid.size());
        for (std::size_t j = 0; j < out.size(); ++j) out[j] = at(it, j);
        return out;
    }
    void set_slice(std::size_t it, const std::vector<double>& v) {
        for (std::size_t j = 0; j < v.size(); ++j) at(it, j) = v[j];
    }

    static SpaceTimeField sample(const TimeGrid& tg, const RadialGrid& rg,
                                 const std::function<double(double, double)>& f);

    bool all_finite() const { return values.allFinite(); }
};

// Samples v(r_j, phi_m [, theta_l]) on the radial x angular product grid.
// In 2D the theta index collapses to a single slot.
class AngularField {
public:
    AngularField(const RadialGrid& rg, const AngularGrid& ag);

    const RadialGrid& rgrid() const { return rgrid_; }
    const AngularGrid& agrid() const { return agrid_; }
    int dimension() const { return agrid_.dimension(); }
    std::size_t n_r() const { return rgrid_.size(); }
    std::size_t n_phi() const { return agrid_.n_phi(); }
    std::size_t n_theta() const { return nth_; }

    double& at(std::size_t ir, std::size_t iphi, std::size_t ith = 0) {
        return values_[(ir * agrid_.n_phi() + iphi) * nth_ + ith];
    }
    double at(std::size_t ir, std::size_t iphi, std::size_t ith = 0) const {
        return values_[(ir * agrid_.n_phi() + iphi) * nth_ + ith];
    }

    std::vector<double>& raw() { return values_; }
    const std::vector<double>& raw() const { return values_; }

    // Sample a function given in the grid's polar/spherical coordinates:
    // f(r, phi) in 2D, f(r, phi, theta) in 3D.
    static AngularField sample(const RadialGrid& rg, const AngularGrid& ag,
                               const std::function<double(double, double, double)>& f);

    // Cartesian coordinates of a node.
    void node_xyz(std::size_t ir, std::size_t iphi, std::size_t ith, double out[3]) const;

private:
    RadialGrid rgrid_;
    AngularGrid agrid_;
    std::size_t nth_;  // 1 in 2D
    std::vector<double> values_;
};

// One AngularField per time node.
struct TimeAngularField {
    TimeGrid tgrid;
    std::vector<AngularField> slices;

    TimeAngularField(const TimeGrid& tg, const RadialGrid& rg, const AngularGrid& ag)
        : tgrid(tg), slices(tg.size(), AngularField(rg, ag)) {}

    AngularField& operator[](std::size_t it) { return slices[it]; }
    const AngularField& operator[](std::size_t it) const { return slices[it]; }
    std::size_t size() const { return slices.size(); }

    static TimeAngularField sample(
        const TimeGrid& tg, const RadialGrid& rg, const AngularGrid& ag,
        const std::function<double(double, double, double, double)>& f);

    // d/dt by second-order finite differences across the slices.
    TimeAngularField time_derivative() const;
};

// Pointwise arithmetic helpers used throughout the reduction.
AngularField operator+(const AngularField& a, const AngularField& b);
AngularField operator-(const AngularField& a, const AngularField& b);
AngularField operator*(double s, const AngularField& a);
// Multiply by a radial profile w(r): (w u)(r,phi,theta) = w(r) u(r,phi,theta).
AngularField scale_by_radial(const std::vector<double>& w, const AngularField& u);

double sup_norm(const AngularField& a);
double sup_norm(const std::vector<double>& v);
double sup_norm(const SpaceTimeField& f);

}  // namespace memk
