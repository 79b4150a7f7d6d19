#pragma once

#include <string>
#include <vector>

#include "memkern/coefficients.hpp"
#include "memkern/fields.hpp"
#include "memkern/functionals.hpp"

namespace memk {

// Data of the full identification problem: operators, measurements, initial
// and boundary data, and the two measured histories g1 (radial) and g2
// (scalar). Derived quantities shared by the initial-kernel formula and the
// fixed-point operators are prepared once at construction.
struct ProblemData {
    CoefficientSet coeffs;
    MeasurementSpec measurement;
    AngularField u0;
    TimeAngularField u1;
    TimeAngularField f;
    SpaceTimeField g1;
    std::vector<double> g2;
    char bc_outer = 'D';
    char bc_inner = 'D';

    // Derived.
    TimeAngularField dt_u1;
    TimeAngularField dt_f;
    AngularField Bu0;
    AngularField Cu0;
    AngularField v0;  // A u0 + f(0,.) - D_t u1(0,.)
    U0Data u0data;

    ProblemData(CoefficientSet coeffs_, MeasurementSpec measurement_, AngularField u0_,
                TimeAngularField u1_, TimeAngularField f_, SpaceTimeField g1_,
                std::vector<double> g2_, char bc_outer_ = 'D', char bc_inner_ = 'D',
                double m_min = 1e-10);

    const RadialGrid& rgrid() const { return u0.rgrid(); }
    const AngularGrid& agrid() const { return u0.agrid(); }
    const TimeGrid& tgrid() const { return u1.tgrid; }
    int dimension() const { return coeffs.dimension(); }
    std::string bc() const { return std::string{bc_outer, bc_inner}; }
};

struct ConditionResidual {
    std::string name;
    double residual = 0.0;  // relative to the data scale
    double tolerance = 0.0;
    bool pass = false;
};

struct ConsistencyReport {
    std::vector<ConditionResidual> conditions;
    bool pass = true;
};

// Residuals of the t = 0 compatibility conditions between u0, u1, g1, g2 and
// the derived v0. Report-only: nothing throws.
ConsistencyReport validate_consistency(const ProblemData& data, double tol = 1e-6);

struct SourceTermsT0 {
    std::vector<double> data_source_radial;  // radial source profile at t = 0
    double data_source_scalar = 0.0;         // scalar source at t = 0
    std::vector<double> init_ode_rhs;        // right-hand side of the k(0,.) equation
};

SourceTermsT0 source_terms_t0(const ProblemData& data);

struct InitialKernel {
    std::vector<double> k0;
    double constant = 0.0;                  // integration constant of the first-order equation
    SourceTermsT0 sources;
    double regularity_aggregate_sup = 0.0;  // sup of the reported compatibility field
};

// Closed-form initial kernel k(0, .) from the measured data.
InitialKernel compute_k0(const ProblemData& data);

struct InitialHQ {
    double h0 = 0.0;               // kernel value on the outer shell
    std::vector<double> q0;        // radial derivative profile
};

InitialHQ initial_hq(const std::vector<double>& k0, const RadialGrid& grid);

// The radial second-order operator D_r [ k1(r) D_r . ].
std::vector<double> apply_radial_part(const std::vector<double>& profile,
                                      const std::vector<double>& k1, const RadialGrid& grid);

}  // namespace memk
