#include <doctest.h>

#include <cmath>
#include <numbers>

#include "memkern/calculus.hpp"
#include "memkern/errors.hpp"
#include "memkern/grids.hpp"

using namespace memk;

TEST_CASE("radial grid basics") {
    RadialGrid g(1.0, 2.0, 11);
    CHECK(g.node(0) == doctest::Approx(1.0));
    CHECK(g.node(10) == doctest::Approx(2.0));
    CHECK(g.spacing() == doctest::Approx(0.1));
    for (std::size_t i = 1; i < g.size(); ++i) CHECK(g.node(i) > g.node(i - 1));

    CHECK_THROWS_AS(RadialGrid(0.0, 1.0, 5), ConfigError);
    CHECK_THROWS_AS(RadialGrid(2.0, 1.0, 5), ConfigError);
    CHECK_THROWS_AS(RadialGrid(1.0, 2.0, 2), ConfigError);
}

TEST_CASE("time grid basics") {
    TimeGrid g(1.0, 64);
    CHECK(g.node(0) == 0.0);
    CHECK(g.node(64) == doctest::Approx(1.0));
    CHECK(g.step() == doctest::Approx(1.0 / 64.0));
}

TEST_CASE("gauss rule integrates polynomials in cos(theta) exactly") {
    AngularGrid ag(8, 6);
    // integral over [0, pi] of cos^k(theta) sin(theta) dtheta, k <= 2n-1.
    for (int k = 0; k <= 11; ++k) {
        std::vector<double> f(ag.n_theta());
        for (std::size_t l = 0; l < ag.n_theta(); ++l)
            f[l] = std::pow(std::cos(ag.theta(l)), k);
        const double exact = (k % 2 == 0) ? 2.0 / (k + 1) : 0.0;
        CHECK(integrate_theta_sin({f.data(), f.size()}, ag) ==
              doctest::Approx(exact).epsilon(1e-12));
    }
}

TEST_CASE("plain theta rule converges on smooth integrands") {
    // integral over [0, pi] of cos(theta) + 2 dtheta = 2 pi.
    double err_prev = 0.0;
    for (std::size_t n : {8, 16, 32}) {
        AngularGrid ag(4, n);
        std::vector<double> f(n);
        for (std::size_t l = 0; l < n; ++l) f[l] = std::cos(ag.theta(l)) + 2.0;
        const double got = integrate_theta_plain({f.data(), n}, ag);
        const double err = std::abs(got - 2.0 * std::numbers::pi);
        if (err_prev > 0.0) CHECK(err < err_prev / 2.5);
        err_prev = err;
    }
}

TEST_CASE("phi rule is exact for trigonometric polynomials") {
    AngularGrid ag(16);
    std::vector<double> f(16);
    for (std::size_t m = 0; m < 16; ++m)
        f[m] = 1.0 + std::cos(ag.phi(m)) + 0.5 * std::sin(3.0 * ag.phi(m));
    CHECK(integrate_phi({f.data(), f.size()}, ag) ==
          doctest::Approx(2.0 * std::numbers::pi).epsilon(1e-13));
}
