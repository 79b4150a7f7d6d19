#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "memkern/calculus.hpp"
#include "memkern/errors.hpp"

using namespace memk;

namespace {

std::vector<double> sample(const RadialGrid& g, double (*f)(double)) {
    std::vector<double> v(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) v[i] = f(g.node(i));
    return v;
}

}  // namespace

TEST_CASE("quadrature basics") {
    RadialGrid g(1.0, 2.0, 11);
    std::vector<double> one(g.size(), 1.0);
    CHECK(integrate({one.data(), one.size()}, g) == doctest::Approx(1.0).epsilon(1e-14));

    // Simpson is exact on cubics: integral of r^2 over [1,2] = 7/3.
    auto r2 = sample(g, [](double r) { return r * r; });
    CHECK(integrate({r2.data(), r2.size()}, g, QuadRule::Simpson) ==
          doctest::Approx(7.0 / 3.0).epsilon(1e-14));

    std::vector<double> short_v(3, 1.0);
    CHECK_THROWS_AS(integrate({short_v.data(), 2}, g), ShapeError);
    RadialGrid even(1.0, 2.0, 10);
    std::vector<double> ten(10, 1.0);
    CHECK_THROWS_AS(integrate({ten.data(), 10}, even, QuadRule::Simpson), ConfigError);
}

TEST_CASE("quadrature convergence orders") {
    // Halving the spacing cuts the trapezoid error ~4x and Simpson ~16x.
    auto err = [](std::size_t n, QuadRule rule) {
        RadialGrid g(1.0, 2.0, n);
        std::vector<double> v(g.size());
        for (std::size_t i = 0; i < g.size(); ++i) v[i] = std::sin(g.node(i));
        const double exact = std::cos(1.0) - std::cos(2.0);
        return std::abs(integrate({v.data(), v.size()}, g, rule) - exact);
    };
    const double t1 = err(17, QuadRule::Trapezoid), t2 = err(33, QuadRule::Trapezoid);
    CHECK(t1 / t2 > 3.0);
    CHECK(t1 / t2 < 5.0);
    const double s1 = err(17, QuadRule::Simpson), s2 = err(33, QuadRule::Simpson);
    CHECK(s1 / s2 > 12.0);
    CHECK(s1 / s2 < 20.0);
}

TEST_CASE("cumulative integrals") {
    RadialGrid g(1.0, 2.0, 21);
    std::vector<double> one(g.size(), 1.0);
    auto right = cumulative_from_right({one.data(), one.size()}, g);
    for (std::size_t i = 0; i < g.size(); ++i)
        CHECK(right[i] == doctest::Approx(2.0 - g.node(i)).epsilon(1e-14));
    CHECK(right.back() == 0.0);

    auto lin = sample(g, [](double r) { return 2.0 * r; });
    right = cumulative_from_right({lin.data(), lin.size()}, g);
    for (std::size_t i = 0; i < g.size(); ++i)
        CHECK(right[i] ==
              doctest::Approx(4.0 - g.node(i) * g.node(i)).epsilon(1e-12));

    auto left = cumulative_from_left({one.data(), one.size()}, g);
    for (std::size_t i = 0; i < g.size(); ++i)
        CHECK(left[i] == doctest::Approx(g.node(i) - 1.0).epsilon(1e-14));

    // Additivity: left + right = total at every node, exactly.
    auto f = sample(g, [](double r) { return std::exp(r) * std::sin(3.0 * r); });
    const auto l = cumulative_from_left({f.data(), f.size()}, g);
    const auto rr = cumulative_from_right({f.data(), f.size()}, g);
    const double total = integrate({f.data(), f.size()}, g, QuadRule::Trapezoid);
    for (std::size_t i = 0; i < g.size(); ++i)
        CHECK(l[i] + rr[i] == doctest::Approx(total).epsilon(1e-13));
}

TEST_CASE("cumulative matches refined quadrature on smooth profiles") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> coef(-1.0, 1.0);
    const double c0 = coef(rng), c1 = coef(rng), c2 = coef(rng);
    auto f = [&](double r) { return 1.0 + c0 * r + c1 * std::sin(3.0 * r) + c2 * r * r; };

    RadialGrid coarse(1.0, 2.0, 33);
    std::vector<double> fc(coarse.size());
    for (std::size_t i = 0; i < coarse.size(); ++i) fc[i] = f(coarse.node(i));
    const auto right = cumulative_from_right({fc.data(), fc.size()}, coarse);

    // Oracle: same integral on a 10x refined grid.
    RadialGrid fine(1.0, 2.0, 321);
    std::vector<double> ff(fine.size());
    for (std::size_t i = 0; i < fine.size(); ++i) ff[i] = f(fine.node(i));
    const auto right_fine = cumulative_from_right({ff.data(), ff.size()}, fine);

    const double h2 = coarse.spacing() * coarse.spacing();
    for (std::size_t i = 0; i < coarse.size(); ++i)
        CHECK(std::abs(right[i] - right_fine[10 * i]) < 5.0 * h2);
}

TEST_CASE("radial derivative") {
    RadialGrid g(1.0, 2.0, 11);
    auto r2 = sample(g, [](double r) { return r * r; });
    const auto d = derivative_r({r2.data(), r2.size()}, g);
    for (std::size_t i = 0; i < g.size(); ++i)
        CHECK(d[i] == doctest::Approx(2.0 * g.node(i)).epsilon(1e-12));

    std::vector<double> c(g.size(), 4.0);
    for (double v : derivative_r({c.data(), c.size()}, g)) CHECK(v == doctest::Approx(0.0));

    RadialGrid fine(1.0, 2.0, 101);
    auto s = sample(fine, [](double r) { return std::sin(r); });
    const auto ds = derivative_r({s.data(), s.size()}, fine);
    double worst = 0.0;
    for (std::size_t i = 0; i < fine.size(); ++i)
        worst = std::max(worst, std::abs(ds[i] - std::cos(fine.node(i))));
    CHECK(worst < 1e-4);

    std::vector<double> two(2, 0.0);
    CHECK_THROWS_AS(derivative_uniform({two.data(), 2}, 0.1), ShapeError);
}

TEST_CASE("derivative of right-cumulative returns the negated input") {
    RadialGrid g(1.0, 2.0, 41);
    auto f = sample(g, [](double r) { return std::cos(2.0 * r); });
    const auto F = cumulative_from_right({f.data(), f.size()}, g);
    const auto dF = derivative_r({F.data(), F.size()}, g);
    const double h2 = g.spacing() * g.spacing();
    for (std::size_t i = 0; i < g.size(); ++i) CHECK(std::abs(dF[i] + f[i]) < 4.0 * h2);
}

TEST_CASE("nonuniform and periodic derivatives") {
    // Non-uniform: exact on quadratics.
    std::vector<double> x = {0.0, 0.1, 0.25, 0.5, 0.9, 1.0};
    std::vector<double> y(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) y[i] = 3.0 * x[i] * x[i] - x[i];
    const auto dnu = derivative_nonuniform({y.data(), y.size()}, {x.data(), x.size()});
    for (std::size_t i = 0; i < x.size(); ++i)
        CHECK(dnu[i] == doctest::Approx(6.0 * x[i] - 1.0).epsilon(1e-11));

    const std::size_t n = 32;
    const double h = 2.0 * std::numbers::pi / n;
    std::vector<double> p(n);
    for (std::size_t m = 0; m < n; ++m) p[m] = std::sin(m * h);
    const auto dp = derivative_periodic({p.data(), n}, h);
    for (std::size_t m = 0; m < n; ++m)
        CHECK(std::abs(dp[m] - std::cos(m * h)) < 1.05 * h * h / 6.0);
}

TEST_CASE("second derivative") {
    RadialGrid g(1.0, 2.0, 21);
    auto r3 = sample(g, [](double r) { return r * r * r; });
    const auto d2 = second_derivative_uniform({r3.data(), r3.size()}, g.spacing());
    for (std::size_t i = 0; i < g.size(); ++i)
        CHECK(d2[i] == doctest::Approx(6.0 * g.node(i)).epsilon(1e-9));
}
