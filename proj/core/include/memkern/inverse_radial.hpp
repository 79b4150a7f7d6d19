#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "memkern/fields.hpp"

namespace memk {

// Known data of the radial kernel-identification problem: the state u, the
// accumulated source f_tilde, the scalar measurement g and its radial weight
// lambda. m_bound is the admitted lower bound for |D_r u(0, .)|.
struct RadialInverseInput {
    SpaceTimeField u;
    SpaceTimeField f_tilde;
    std::vector<double> g;
    std::vector<double> lambda;
    double m_bound = 1e-10;

    RadialInverseInput(const TimeGrid& tg, const RadialGrid& rg)
        : u(tg, rg), f_tilde(tg, rg), g(tg.size(), 0.0), lambda(rg.size(), 1.0) {}
};

// Coefficients of the second-kind Volterra equation obtained by dividing the
// time-differentiated system through D_r u(0, .).
struct AssembledCoefficients {
    RadialGrid rgrid;
    TimeGrid tgrid;
    int dimension = 3;
    std::vector<double> alpha;       // spatial coefficient, time independent
    SpaceTimeField beta;             // local memory coefficient
    SpaceTimeField gamma;            // non-local memory coefficient
    SpaceTimeField source;           // right-hand side f~_1(t, r)
    std::vector<double> lambda;      // radial measurement weight
    std::vector<double> lambda_tail; // integral of lambda from r to r_max
    std::vector<double> alpha_cum;   // integral of alpha from r_min to r
    double kappa = 0.0;              // 1 / integral of lambda
    double kappa1 = 0.0;             // integral of lambda exp(-alpha_cum)

    AssembledCoefficients(const TimeGrid& tg, const RadialGrid& rg)
        : rgrid(rg), tgrid(tg), beta(tg, rg), gamma(tg, rg), source(tg, rg) {}
};

AssembledCoefficients assemble(const RadialInverseInput& input, int dimension);

// Dense kernel inverting the spatial part of the second-kind equation
// (the two-branch formula; the indicator column carries trapezoid-consistent
// half weight on the diagonal). Row = r index, column = rho index; apply it
// with trapezoid weights in rho.
Eigen::MatrixXd green_function(const AssembledCoefficients& ac);

// q = f + integral G(r, rho) f(rho) drho.
std::vector<double> auxiliary_solve(const std::vector<double>& f, const Eigen::MatrixXd& G,
                                    const RadialGrid& grid);

// Time-indexed kernels of the memory part after inversion of the spatial
// operator.
std::vector<Eigen::MatrixXd> g1_kernel(const AssembledCoefficients& ac,
                                       const Eigen::MatrixXd& G);

enum class VolterraMethod { TimeMarch, PicardWeighted };

struct VolterraOptions {
    VolterraMethod method = VolterraMethod::TimeMarch;
    double sigma = 0.0;           // 0 = automatic doubling search
    double picard_tol = 1e-10;    // weighted-norm increment target
    int max_iterations = 200;
};

struct VolterraReport {
    double sigma = 0.0;
    double contraction_bound = 0.0;    // integral of exp(-sigma t) phi(t)
    double measured_contraction = 0.0; // max measured weighted ratio
    int iterations = 0;                // to reach the weighted tolerance
};

// Solve q = w + L1 q with L1 q = -(beta * q) + int G1(t-s) q(s).
// Both methods resolve the same trapezoid-in-time discretisation: the march
// factors the current-node block once and substitutes forward; the Picard
// route iterates globally under the sigma-weighted norm.
SpaceTimeField volterra_solve(const SpaceTimeField& w, const SpaceTimeField& beta,
                              const std::vector<Eigen::MatrixXd>& G1,
                              const VolterraOptions& options, VolterraReport* report = nullptr);

// Weighted-norm machinery shared with the verification suite.
double weighted_profile_norm(const std::vector<double>& v, const RadialGrid& grid);
double weighted_field_norm(const SpaceTimeField& f, double sigma);
// phi(t_k): l-infinity of beta plus the weighted Frobenius norm of G1.
std::vector<double> contraction_majorant(const SpaceTimeField& beta,
                                         const std::vector<Eigen::MatrixXd>& G1);
double contraction_bound(const std::vector<double>& phi, const TimeGrid& tg, double sigma);
// Apply L1 once (full trapezoid in time).
SpaceTimeField apply_l1(const SpaceTimeField& q, const SpaceTimeField& beta,
                        const std::vector<Eigen::MatrixXd>& G1);

struct Reconstruction {
    SpaceTimeField k;
    std::vector<double> h;  // kernel trace on the inner shell
    double constraint_residual = 0.0;
};

Reconstruction reconstruct_k(const SpaceTimeField& q, const std::vector<double>& g, double kappa,
                             const std::vector<double>& lambda,
                             const std::vector<double>& lambda_tail);

struct IdentifyDiagnostics {
    double kappa = 0.0;
    double kappa1 = 0.0;
    double parts_identity_residual = 0.0;  // integration-by-parts identity check
    double green_bound_constant = 0.0;     // closed-form C1 of the kernel bound
    double constraint_residual = 0.0;
    std::string method;
    VolterraReport volterra;
};

struct IdentifyResult {
    SpaceTimeField k;
    SpaceTimeField q;
    std::vector<double> h;
    IdentifyDiagnostics diagnostics;
};

struct IdentifyOptions {
    VolterraOptions volterra;
    double m_bound = 1e-10;
};

IdentifyResult identify(const RadialInverseInput& input, int dimension,
                        const IdentifyOptions& options = {});

// Closed-form constant of the pointwise kernel bound |G| <= C1 |alpha|,
// assembled from kappa1 and the L1 norms of alpha and lambda.
double green_bound_constant(const AssembledCoefficients& ac);

// Residual of the integration-by-parts identity relating kappa and kappa1,
// evaluated from the assembled (sampled) coefficients.
double parts_identity_residual(const AssembledCoefficients& ac);

// Residual of the original (time-differentiated) first-kind system for a
// candidate kernel, in sup norm over the grid.
double first_kind_residual(const SpaceTimeField& k, const SpaceTimeField& u,
                           const SpaceTimeField& f_tilde, int dimension);

}  // namespace memk
