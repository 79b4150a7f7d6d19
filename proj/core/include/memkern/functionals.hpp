#pragma once

#include <optional>
#include <vector>

#include "memkern/coefficients.hpp"
#include "memkern/fields.hpp"

namespace memk {

// Measurement weights. lambda lives on the outer-sphere angular grid and
// drives the angular-average functional Phi; the volume functional Psi is
// either a psi-weighted volume integral or (for diagnostics) the composite
// Lambda(Phi[.]) with a radial weight mu, which is exactly the form the
// solvability condition must reject.
struct MeasurementSpec {
    enum class PsiKind { Volume, CompositePhi };

    std::vector<double> lambda;  // size n_phi * max(n_theta, 1)
    PsiKind psi_kind = PsiKind::Volume;
    std::optional<AngularField> psi;
    std::vector<double> mu;  // radial weight of the composite form

    static std::vector<double> sample_lambda(const AngularGrid& ag,
                                             const std::function<double(double, double)>& f);

    // psi = 0 on shells carrying a Dirichlet condition. bc is two characters
    // from {D, N}: first the outer shell, second the inner shell.
    void check_psi_dirichlet(const std::string& bc, double tol = 1e-12) const;
};

// Phi[v](r): angular average of v against lambda on each radial layer.
std::vector<double> phi_apply(const std::vector<double>& lambda, const AngularField& v);

// Psi[v]: volume functional (r^{n-1} radial measure).
double psi_apply(const MeasurementSpec& spec, const AngularField& v);

// Correction operator of the decomposition Phi[A w] = A1 Phi[w] + Phi1[w].
std::vector<double> phi1_apply(const std::vector<double>& lambda, const CoefficientSet& coeffs,
                               const AngularField& w);

// Correction functional of Psi[A w] = Psi1[w]. Valid for w satisfying the
// homogeneous boundary conditions under which psi was admitted.
double psi1_apply(const MeasurementSpec& spec, const CoefficientSet& coeffs,
                  const AngularField& w);

// Antiderivative operator (E q)(r) = integral of q from r to r_max.
std::vector<double> e_apply(const std::vector<double>& q, const RadialGrid& grid);
SpaceTimeField e_apply(const SpaceTimeField& q);

// Radial profiles of the measured operator data attached to u0, plus the
// cached cumulative exponent shared by every nested exponential downstream.
struct U0Data {
    RadialGrid grid;
    std::vector<double> phi_Bu0;
    std::vector<double> phi_Cu0;
    std::vector<double> ratio;         // phi_Bu0 / phi_Cu0
    std::vector<double> exponent;      // X(r) = integral of ratio from r_min to r
    std::vector<double> exp_to_outer;  // exp(X(r_max) - X(r))
    double m_bound = 0.0;              // admitted lower bound for |phi_Cu0|

    static U0Data build(const CoefficientSet& coeffs, const std::vector<double>& lambda,
                        const AngularField& u0, double m_min = 1e-10);
    static U0Data from_profiles(const RadialGrid& grid, std::vector<double> phi_Bu0,
                                std::vector<double> phi_Cu0, double m_min = 1e-10);
};

// L g (r) = integral_r^{rmax} exp(X(eta) - X(r)) g(eta) / Phi[C u0](eta) deta.
// Product integration against the piecewise-linear exponent, so that
// 1 + L Phi[B u0] reproduces exp_to_outer exactly at the nodes.
std::vector<double> l_apply(const std::vector<double>& g, const U0Data& u0);

// Operator handle (I + Phi[B u0] L) / Phi[C u0].
struct J3Operator {
    const U0Data* u0 = nullptr;
    std::vector<double> apply(const std::vector<double>& g) const;
};

struct JQuantities {
    std::vector<double> j0;  // |Phi[C u0]|
    double j1 = 0.0;         // Psi[J(u0)]
    std::vector<double> j2;  // -ratio * exp_to_outer
    J3Operator j3;
};

// The annihilated field J(u0) = (B u0 - ratio C u0) exp_to_outer.
AngularField j_field(const U0Data& u0, const AngularField& Bu0, const AngularField& Cu0);

// Throws DegeneracyError when |Phi[C u0]| dips under the admitted bound and
// SolvabilityError when Psi[J(u0)] vanishes within tolerance.
JQuantities j_quantities(const U0Data& u0, const MeasurementSpec& spec, const AngularField& Bu0,
                         const AngularField& Cu0);

// Radial quadrature weights for the grid's default rule.
std::vector<double> radial_weights(const RadialGrid& grid);

// Domain volume (4/3 pi (R2^3 - R1^3) in 3D, pi (R2^2 - R1^2) in 2D).
double domain_measure(const RadialGrid& grid, int dimension);

// Finite-difference partials of a sampled field in the grid coordinates.
void spherical_partials(const AngularField& u, AngularField& du_dr, AngularField& du_dphi,
                        AngularField* du_dtheta);

}  // namespace memk
