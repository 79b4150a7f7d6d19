#pragma once

#include <vector>

#include "memkern/fields.hpp"

namespace memk {

enum class TimeScheme { ImplicitEuler, CrankNicolson };

// Radial initial-boundary value problem for the heat equation with memory:
//   D_t u = Lap_n u + (k * Lap_n u) + (D_r k * D_r u) + f,
// where * is convolution in time and Lap_n = D_r^2 + (n-1)/r D_r.
//
// Boundary data are prescribed per shell and time node. 'D' rows impose the
// value, 'N' rows impose the outward normal derivative (for the radial
// Laplacian the conormal is the normal).
struct ForwardProblem {
    int dimension = 3;
    SpaceTimeField kernel;
    SpaceTimeField source;
    std::vector<double> u0;
    char bc_outer = 'D';
    char bc_inner = 'D';
    std::vector<double> data_outer;  // per time node
    std::vector<double> data_inner;
    TimeScheme scheme = TimeScheme::CrankNicolson;

    ForwardProblem(const TimeGrid& tg, const RadialGrid& rg)
        : kernel(tg, rg), source(tg, rg), u0(rg.size(), 0.0),
          data_outer(tg.size(), 0.0), data_inner(tg.size(), 0.0) {}
};

// Implicit diffusion step with the memory convolution treated explicitly
// (current-time kernel value applied to a linear extrapolation of the state).
SpaceTimeField solve_forward(const ForwardProblem& problem);

// Synthesise the data of the kernel-identification problem from a chosen
// kernel and state: f_tilde is the memory operator applied to u, and g is the
// lambda-average of the kernel.
struct ManufacturedData {
    SpaceTimeField f_tilde;
    std::vector<double> g;
};

ManufacturedData manufacture(const SpaceTimeField& k_true, const SpaceTimeField& u, int dimension,
                             const std::vector<double>& lambda);

}  // namespace memk
