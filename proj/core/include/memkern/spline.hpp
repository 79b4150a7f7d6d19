#pragma once

#include <span>
#include <vector>

namespace memk {

// Natural cubic spline through (x_i, y_i), x strictly increasing.
// Evaluation outside [x_front, x_back] extrapolates linearly.
class CubicSpline {
public:
    CubicSpline() = default;
    CubicSpline(std::span<const double> x, std::span<const double> y);

    double operator()(double x) const;
    double derivative(double x) const;

private:
    std::vector<double> x_, y_, m_;  // m_: second derivatives at the knots
};

}  // namespace memk
