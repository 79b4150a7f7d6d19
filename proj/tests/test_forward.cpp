#include <doctest.h>

#include <cmath>
#include <numbers>

#include "memkern/forward.hpp"

using namespace memk;

TEST_CASE("constant steady state with zero-flux walls") {
    TimeGrid tg(1.0, 32);
    RadialGrid rg(1.0, 2.0, 33);
    ForwardProblem p(tg, rg);
    p.dimension = 3;
    p.bc_outer = p.bc_inner = 'N';
    std::fill(p.u0.begin(), p.u0.end(), 4.2);
    for (auto scheme : {TimeScheme::CrankNicolson, TimeScheme::ImplicitEuler}) {
        p.scheme = scheme;
        const auto u = solve_forward(p);
        for (std::size_t i = 0; i < tg.size(); ++i)
            for (std::size_t j = 0; j < rg.size(); ++j)
                CHECK(std::abs(u.at(i, j) - 4.2) < 1e-12);
    }
}

TEST_CASE("heat decay eigenfunction") {
    // u0 = sin(pi (r - R1) / L) / r is an eigenfunction of the radial
    // 3d Laplacian with homogeneous Dirichlet walls.
    const double L = 1.0;
    const double mu = std::numbers::pi / L;
    TimeGrid tg(1.0, 64);
    RadialGrid rg(1.0, 2.0, 65);
    ForwardProblem p(tg, rg);
    p.dimension = 3;
    p.scheme = TimeScheme::CrankNicolson;
    for (std::size_t j = 0; j < rg.size(); ++j)
        p.u0[j] = std::sin(mu * (rg.node(j) - 1.0)) / rg.node(j);
    const auto u = solve_forward(p);
    double worst = 0.0, scale = 0.0;
    for (std::size_t i = 0; i < tg.size(); ++i)
        for (std::size_t j = 0; j < rg.size(); ++j) {
            const double exact = std::exp(-mu * mu * tg.node(i)) * p.u0[j];
            worst = std::max(worst, std::abs(u.at(i, j) - exact));
            scale = std::max(scale, std::abs(exact));
        }
    CHECK(worst / scale < 0.01);
}

TEST_CASE("temporal order via Richardson differences") {
    // Fixed spatial grid; compare solutions at dt, dt/2, dt/4 on the shared
    // coarse time nodes. Memory kernel active.
    const RadialGrid rg(1.0, 2.0, 33);
    auto run = [&](std::size_t nt, TimeScheme scheme) {
        TimeGrid tg(0.5, nt);
        ForwardProblem p(tg, rg);
        p.dimension = 3;
        p.scheme = scheme;
        p.kernel = SpaceTimeField::sample(
            tg, rg, [](double t, double r) { return std::exp(-t) * (1.0 + 0.5 * r); });
        p.source = SpaceTimeField::sample(tg, rg, [](double t, double r) {
            return std::sin(2.0 * r) * std::exp(-t);
        });
        for (std::size_t j = 0; j < rg.size(); ++j)
            p.u0[j] = std::sin(std::numbers::pi * (rg.node(j) - 1.0)) / rg.node(j);
        return solve_forward(p);
    };
    for (auto scheme : {TimeScheme::CrankNicolson, TimeScheme::ImplicitEuler}) {
        const auto u1 = run(32, scheme);
        const auto u2 = run(64, scheme);
        const auto u3 = run(128, scheme);
        double d12 = 0.0, d23 = 0.0;
        for (std::size_t i = 0; i < u1.tgrid.size(); ++i)
            for (std::size_t j = 0; j < rg.size(); ++j) {
                d12 = std::max(d12, std::abs(u1.at(i, j) - u2.at(2 * i, j)));
                d23 = std::max(d23, std::abs(u2.at(2 * i, j) - u3.at(4 * i, j)));
            }
        const double order = std::log2(d12 / d23);
        if (scheme == TimeScheme::CrankNicolson) {
            CHECK(order > 1.6);
        } else {
            CHECK(order > 0.8);
            CHECK(order < 1.6);
        }
    }
}

TEST_CASE("manufacture: zero kernel, vanishing start, closed form") {
    TimeGrid tg(1.0, 32);
    RadialGrid rg(1.0, 2.0, 33);
    const auto u =
        SpaceTimeField::sample(tg, rg, [](double t, double r) { return r * r + t * r; });

    SUBCASE("zero kernel gives zero data") {
        SpaceTimeField k0(tg, rg);
        const auto md = manufacture(k0, u, 3, std::vector<double>(rg.size(), 1.0));
        CHECK(sup_norm(md.f_tilde) == 0.0);
        for (double v : md.g) CHECK(v == 0.0);
    }

    SUBCASE("accumulated source always vanishes at t = 0") {
        const auto k = SpaceTimeField::sample(
            tg, rg, [](double t, double r) { return std::cos(t) * (2.0 + std::sin(3.0 * r)); });
        const auto md = manufacture(k, u, 3, std::vector<double>(rg.size(), 1.0));
        for (std::size_t j = 0; j < rg.size(); ++j) CHECK(md.f_tilde.at(0, j) == 0.0);
    }

    SUBCASE("matches the symbolic integral for the exponential kernel") {
        const auto k = SpaceTimeField::sample(
            tg, rg, [](double t, double r) { return std::exp(-t) * (1.0 + r); });
        const auto md = manufacture(k, u, 3, std::vector<double>(rg.size(), 1.0));
        double worst = 0.0;
        for (std::size_t i = 0; i < tg.size(); ++i)
            for (std::size_t j = 0; j < rg.size(); ++j) {
                const double t = tg.node(i), r = rg.node(j);
                const double exact = (8.0 * r + 6.0) * (1.0 - std::exp(-t)) +
                                     (3.0 + 2.0 / r) * (t - 1.0 + std::exp(-t));
                worst = std::max(worst, std::abs(md.f_tilde.at(i, j) - exact));
            }
        const double h2 = tg.step() * tg.step();
        CHECK(worst < 5.0 * h2);
        // g(t) = 2.5 exp(-t) for lambda = 1.
        for (std::size_t i = 0; i < tg.size(); ++i)
            CHECK(md.g[i] == doctest::Approx(2.5 * std::exp(-tg.node(i))).epsilon(1e-6));
    }
}
