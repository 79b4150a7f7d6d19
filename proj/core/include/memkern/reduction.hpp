#pragma once

#include <vector>

#include "memkern/kernel_init.hpp"

namespace memk {

// State of the reduced fixed-point system: the differentiated field v, the
// outer-shell kernel trace h(t), the kernel slope q(t,r), and the boundary
// forcing fields.
struct ReductionState {
    TimeAngularField v;
    std::vector<double> h;
    SpaceTimeField q;
    TimeAngularField z0;  // D_t B u1
    TimeAngularField z1;  // D_t C u1

    ReductionState(const TimeGrid& tg, const RadialGrid& rg, const AngularGrid& ag)
        : v(tg, rg, ag), h(tg.size(), 0.0), q(tg, rg), z0(tg, rg, ag), z1(tg, rg, ag) {}

    static ReductionState from_problem(const ProblemData& data);
};

// Memory aggregate N1(v,h,q)(t) = -h * (Bv + z0) + (Eq) * (Bv + z0)
//                                 - q * (Cv + z1),
// with * the trapezoid time convolution; vanishes at t = 0.
TimeAngularField n1_eval(const ReductionState& state, const ProblemData& data);

struct SourceProfiles {
    SpaceTimeField data_source_radial;   // radial source profile per time
    std::vector<double> data_source_scalar;
    SpaceTimeField inverted_source;      // J3 applied to the radial source
    std::vector<double> scalar_aggregate;
    std::vector<double> h0;              // forcing of the h fixed-point equation
    SpaceTimeField q0;                   // forcing of the q fixed-point equation
};

SourceProfiles source_profiles(const ProblemData& data);

struct SweepResult {
    std::vector<double> h;
    SpaceTimeField q;
};

// One application of the fixed-point map for (h, q) at frozen v.
SweepResult picard_update(const ReductionState& state, const ProblemData& data,
                          const SourceProfiles& sources);

// Scalar correction linking the t = 0 slice of the fixed-point forcing to the
// closed-form initial kernel values.
double j4_correction(const ProblemData& data);

}  // namespace memk
