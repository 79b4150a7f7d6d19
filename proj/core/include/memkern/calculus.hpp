#pragma once

#include <span>
#include <vector>

#include "memkern/grids.hpp"

namespace memk {

enum class QuadRule { Trapezoid, Simpson, Gauss };

// Composite quadrature over uniformly spaced samples with spacing h.
// Simpson requires an odd sample count.
double integrate(std::span<const double> samples, double h, QuadRule rule = QuadRule::Trapezoid);

// Quadrature over a radial grid. Default picks Simpson when the node count is
// odd and trapezoid otherwise.
double integrate(std::span<const double> samples, const RadialGrid& grid);
double integrate(std::span<const double> samples, const RadialGrid& grid, QuadRule rule);

// integral f(theta) sin(theta) dtheta over [0, pi] via the grid's Gauss rule.
double integrate_theta_sin(std::span<const double> samples, const AngularGrid& grid);
// integral f(theta) dtheta over [0, pi] (plain measure).
double integrate_theta_plain(std::span<const double> samples, const AngularGrid& grid);
// integral f(phi) dphi over [0, 2pi) (periodic equispaced rule).
double integrate_phi(std::span<const double> samples, const AngularGrid& grid);

// F(r_i) = integral from r_i to r_max of the sampled function, reverse
// cumulative trapezoid. F(r_max) = 0.
std::vector<double> cumulative_from_right(std::span<const double> samples, const RadialGrid& grid);
// F(r_i) = integral from r_min to r_i, cumulative trapezoid. F(r_min) = 0.
std::vector<double> cumulative_from_left(std::span<const double> samples, const RadialGrid& grid);

std::vector<double> cumulative_from_right(std::span<const double> samples, double h);
std::vector<double> cumulative_from_left(std::span<const double> samples, double h);

// Second-order finite difference on uniformly spaced samples: central in the
// interior, one-sided three-point at the ends. Exact on quadratics.
std::vector<double> derivative_uniform(std::span<const double> samples, double h);

std::vector<double> derivative_r(std::span<const double> samples, const RadialGrid& grid);

// Second-order finite difference on arbitrarily spaced coordinates.
std::vector<double> derivative_nonuniform(std::span<const double> samples,
                                          std::span<const double> coords);

// Central differences for a periodic sample set over a period-long uniform
// grid (last node omitted, as in the phi direction).
std::vector<double> derivative_periodic(std::span<const double> samples, double h);

// Second derivative, second order: three-point central interior, four-point
// one-sided at the ends.
std::vector<double> second_derivative_uniform(std::span<const double> samples, double h);

}  // namespace memk
