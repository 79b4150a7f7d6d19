#include "memkern/spline.hpp"

#include <algorithm>
#include <cstddef>

#include "memkern/errors.hpp"

namespace memk {

CubicSpline::CubicSpline(std::span<const double> x, std::span<const double> y)
    : x_(x.begin(), x.end()), y_(y.begin(), y.end()) {
    const std::size_t n = x_.size();
    if (n != y_.size()) throw ShapeError("CubicSpline: size mismatch");
    if (n < 3) throw ShapeError("CubicSpline: need at least 3 knots");
    for (std::size_t i = 1; i < n; ++i)
        if (!(x_[i] > x_[i - 1])) throw ShapeError("CubicSpline: knots must increase");

    // Tridiagonal solve for the natural spline second derivatives.
    std::vector<double> a(n, 0.0), b(n, 0.0), c(n, 0.0), d(n, 0.0);
    b[0] = b[n - 1] = 1.0;
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double hl = x_[i] - x_[i - 1];
        const double hr = x_[i + 1] - x_[i];
        a[i] = hl / 6.0;
        b[i] = (hl + hr) / 3.0;
        c[i] = hr / 6.0;
        d[i] = (y_[i + 1] - y_[i]) / hr - (y_[i] - y_[i - 1]) / hl;
    }
    m_.assign(n, 0.0);
    std::vector<double> cp(n, 0.0), dp(n, 0.0);
    cp[0] = c[0] / b[0];
    dp[0] = d[0] / b[0];
    for (std::size_t i = 1; i < n; ++i) {
        const double den = b[i] - a[i] * cp[i - 1];
        cp[i] = c[i] / den;
        dp[i] = (d[i] - a[i] * dp[i - 1]) / den;
    }
    m_[n - 1] = dp[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) m_[i] = dp[i] - cp[i] * m_[i + 1];
}

double CubicSpline::operator()(double x) const {
    const std::size_t n = x_.size();
    if (x <= x_.front()) {
        return y_.front() + derivative(x_.front()) * (x - x_.front());
    }
    if (x >= x_.back()) {
        return y_.back() + derivative(x_.back()) * (x - x_.back());
    }
    const auto it = std::upper_bound(x_.begin(), x_.end(), x);
    const std::size_t i = static_cast<std::size_t>(it - x_.begin()) - 1;
    const double h = x_[i + 1] - x_[i];
    const double u = (x_[i + 1] - x) / h;
    const double v = (x - x_[i]) / h;
    return u * y_[i] + v * y_[i + 1] +
           ((u * u * u - u) * m_[i] + (v * v * v - v) * m_[i + 1]) * h * h / 6.0;
}

double CubicSpline::derivative(double x) const {
    const std::size_t n = x_.size();
    std::size_t i;
    if (x <= x_.front())
        i = 0;
    else if (x >= x_.back())
        i = n - 2;
    else
        i = static_cast<std::size_t>(std::upper_bound(x_.begin(), x_.end(), x) - x_.begin()) - 1;
    const double h = x_[i + 1] - x_[i];
    const double xc = std::clamp(x, x_[i], x_[i + 1]);
    const double u = (x_[i + 1] - xc) / h;
    const double v = (xc - x_[i]) / h;
    return (y_[i + 1] - y_[i]) / h +
           h / 6.0 * ((3.0 * v * v - 1.0) * m_[i + 1] - (3.0 * u * u - 1.0) * m_[i]);
}

}  // namespace memk
