#pragma once

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "memkern/fields.hpp"
#include "memkern/grids.hpp"
#include "memkern/spline.hpp"

namespace memk {

enum class CoefficientFamily { RadialABCD, PolynomialSeries, Sum, Custom };

using RadialFn = std::function<double(double)>;
using ScalarFieldFn = std::function<double(const double*)>;  // x[3] -> value

// Parameters of an admissible second-order tensor a_{jk} plus the first-order
// operator coefficients of B and C. Scalar inputs are closures over Cartesian
// coordinates; profiles loaded from sample files are wrapped in cubic splines
// before they get here.
struct CoefficientSpec {
    int dimension = 3;  // 2 or 3
    CoefficientFamily family = CoefficientFamily::RadialABCD;

    // RadialABCD family: a(r) > 0, b(r), d(r); c(x) >= 0.
    RadialFn a;
    RadialFn b;
    RadialFn d;
    ScalarFieldFn c;

    // PolynomialSeries family: non-negative weights d_n(x), n = 1..N.
    std::vector<ScalarFieldFn> series_weights;

    // Custom family: full tensor closure (row-major dim x dim). Accepted only
    // with unchecked = true; the numerical radial-trace test is still run and
    // reported by the diagnostics.
    std::function<void(const double*, double*)> custom_tensor;
    bool unchecked = false;

    // B-coefficients b_{jk}(x) and C-coefficients c_j(x); absent means zero.
    std::function<double(const double*, int, int)> b_tensor;
    std::function<double(const double*, int)> c_vector;

    static CoefficientSpec isotropic(int dimension, double value);
};

// Values of the polar-representation functions at one grid point.
// In 2D only f1, f2, g1, g2, k1, k2 are meaningful (the rest stay zero).
struct SphericalRep {
    std::array<double, 3> f{};
    std::array<double, 3> g{};
    std::array<double, 3> h{};
    std::array<double, 3> k{};
    std::array<double, 3> l{};
};

class CoefficientSet {
public:
    CoefficientSet(const CoefficientSpec& spec, const RadialGrid& rg, const AngularGrid& ag);

    const CoefficientSpec& spec() const { return spec_; }
    const RadialGrid& rgrid() const { return rgrid_; }
    const AngularGrid& agrid() const { return agrid_; }
    int dimension() const { return spec_.dimension; }

    // Tensor a_{jk} at an arbitrary Cartesian point (row-major dim x dim).
    void tensor_at(const double* x, double* out) const;

    // Radial trace  sum_jk x_j x_k a_{jk}(x) / |x|^2.
    double radial_trace(const double* x) const;

    // k1(r): the angle-independent coefficient of the radial part of A.
    const std::vector<double>& trace_profile() const { return k1_; }

    SphericalRep spherical_rep(double r, double phi, double theta) const;
    // Cached representation at a grid node.
    const SphericalRep& rep_at(std::size_t ir, std::size_t iphi, std::size_t ith) const {
        return rep_[(ir * agrid_.n_phi() + iphi) * nth_ + ith];
    }

    // min/max of the quadratic form sum a_{jk} xi_j xi_k over unit directions
    // at the given Cartesian points. Throws AdmissibilityError when the lower
    // estimate is not positive.
    std::pair<double, double> ellipticity_bounds(
        const std::vector<std::array<double, 3>>& points,
        const std::vector<std::array<double, 3>>& directions) const;

    // Scalar multiple of the outward unit radial direction realising the
    // conormal vector on a boundary shell (RadialABCD family only).
    // shell: 1 = inner, 2 = outer; the sign carries the (-1)^l orientation.
    double conormal_factor(int shell) const;

    // Differential operators applied on the product grid by second-order
    // finite differences in spherical/polar coordinates.
    AngularField apply_a(const AngularField& u) const;
    AngularField apply_b(const AngularField& u) const;
    AngularField apply_c(const AngularField& u) const;

    // Conormal derivative trace of u on a boundary shell, one value per
    // angular node (outward orientation).
    std::vector<double> conormal_trace(const AngularField& u, int shell) const;

    double b_at(const double* x, int j, int k) const;
    double c_at(const double* x, int j) const;

private:
    void validate() const;

    CoefficientSpec spec_;
    RadialGrid rgrid_;
    AngularGrid agrid_;
    std::size_t nth_;
    std::vector<SphericalRep> rep_;
    std::vector<double> k1_;
};

// Gradient of a sampled field in Cartesian components, computed from
// finite differences in the grid coordinates (periodic in phi, one-sided at
// the radial and theta ends).
std::array<AngularField, 3> cartesian_gradient(const AngularField& u);

// Divergence-form operator sum_j D_j ( sum_k t_{jk} D_k u ) for an arbitrary
// tensor closure.
AngularField apply_divergence_form(const std::function<double(const double*, int, int)>& tensor,
                                   const AngularField& u);

}  // namespace memk
