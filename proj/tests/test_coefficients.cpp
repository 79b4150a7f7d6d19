#include <doctest.h>

#include <array>
#include <cmath>
#include <random>

#include "memkern/coefficients.hpp"
#include "memkern/errors.hpp"

using namespace memk;

namespace {

CoefficientSpec radial_abcd_3d(double a, double b, double d, double c = 0.0) {
    CoefficientSpec s;
    s.dimension = 3;
    s.family = CoefficientFamily::RadialABCD;
    s.a = [a](double) { return a; };
    s.b = [b](double) { return b; };
    s.d = [d](double) { return d; };
    s.c = [c](const double*) { return c; };
    return s;
}

CoefficientSpec random_radial_abcd(std::mt19937_64& rng, int dim) {
    std::uniform_real_distribution<double> u(-0.3, 0.3);
    const double b0 = u(rng), b1 = u(rng), d0 = u(rng), d1 = u(rng), c0 = 0.15 + 0.1 * u(rng);
    CoefficientSpec s;
    s.dimension = dim;
    s.family = CoefficientFamily::RadialABCD;
    s.a = [](double r) { return 2.0 + 0.5 * std::sin(2.0 * r); };
    s.b = [b0, b1](double r) { return b0 + b1 * std::cos(r); };
    s.d = [d0, d1](double r) { return d0 + d1 * std::sin(3.0 * r); };
    s.c = [c0](const double* x) {
        return c0 * (1.0 + 0.5 * std::sin(x[0]) * std::cos(x[1]));
    };
    return s;
}

}  // namespace

TEST_CASE("isotropic tensor") {
    RadialGrid rg(1.0, 2.0, 9);
    AngularGrid ag(8, 4);
    CoefficientSet cs(CoefficientSpec::isotropic(3, 2.0), rg, ag);

    double x[3] = {1.2, -0.4, 0.9};
    double t[9];
    cs.tensor_at(x, t);
    for (int j = 0; j < 3; ++j)
        for (int k = 0; k < 3; ++k)
            CHECK(t[3 * j + k] == doctest::Approx(j == k ? 2.0 : 0.0));
    CHECK(cs.radial_trace(x) == doctest::Approx(2.0));

    const auto rep = cs.spherical_rep(1.5, 0.7, 1.1);
    CHECK(rep.f[0] == doctest::Approx(2.0 * std::cos(0.7) * std::sin(1.1)));
    CHECK(rep.k[0] == doctest::Approx(2.0));
    CHECK(rep.k[1] == doctest::Approx(0.0));
    CHECK(rep.k[2] == doctest::Approx(0.0));

    const auto [lo, hi] = cs.ellipticity_bounds({{1.2, -0.4, 0.9}},
                                                {{1.0, 0.0, 0.0}, {0.5, 0.5, -0.7}});
    CHECK(lo == doctest::Approx(2.0));
    CHECK(hi == doctest::Approx(2.0));
}

TEST_CASE("radial_abcd trace and projector form") {
    RadialGrid rg(1.0, 2.0, 9);
    AngularGrid ag(8, 4);
    // a=1, d=1, b=c=0: tensor is identity plus the radial projector.
    CoefficientSet cs(radial_abcd_3d(1.0, 0.0, 1.0), rg, ag);
    double x[3] = {0.8, 0.9, -0.7};
    const double r2 = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
    double t[9];
    cs.tensor_at(x, t);
    for (int j = 0; j < 3; ++j)
        for (int k = 0; k < 3; ++k)
            CHECK(t[3 * j + k] ==
                  doctest::Approx((j == k ? 1.0 : 0.0) + x[j] * x[k] / r2).epsilon(1e-13));
    CHECK(cs.radial_trace(x) == doctest::Approx(2.0));  // a + d
}

TEST_CASE("radial trace equals a+d for random admissible families") {
    std::mt19937_64 rng(11);
    for (int dim : {2, 3}) {
        RadialGrid rg(1.0, 2.0, 7);
        AngularGrid ag = dim == 2 ? AngularGrid(10) : AngularGrid(10, 6);
        const auto spec = random_radial_abcd(rng, dim);
        CoefficientSet cs(spec, rg, ag);
        AngularField probe(rg, ag);
        for (std::size_t ir = 0; ir < rg.size(); ++ir)
            for (std::size_t m = 0; m < ag.n_phi(); ++m)
                for (std::size_t l = 0; l < probe.n_theta(); ++l) {
                    double x[3];
                    probe.node_xyz(ir, m, l, x);
                    const double r = rg.node(ir);
                    CHECK(std::abs(cs.radial_trace(x) - (spec.a(r) + spec.d(r))) < 1e-12);
                }
        // k1 is angle independent and equals the trace profile.
        for (std::size_t ir = 0; ir < rg.size(); ++ir)
            for (std::size_t m = 0; m < ag.n_phi(); ++m)
                for (std::size_t l = 0; l < probe.n_theta(); ++l)
                    CHECK(std::abs(cs.rep_at(ir, m, l).k[0] - cs.trace_profile()[ir]) < 1e-12);
    }
}

TEST_CASE("polynomial series: zero trace, positive form, sum-of-squares oracle") {
    RadialGrid rg(1.0, 2.0, 5);
    AngularGrid ag(8, 4);
    CoefficientSpec s;
    s.dimension = 3;
    s.family = CoefficientFamily::PolynomialSeries;
    s.series_weights = {[](const double*) { return 1.0; }};
    CoefficientSet cs(s, rg, ag);

    // Trace annihilation at the sample point of the admissibility discussion.
    double x[3] = {1.0, 1.0, 1.0};
    double t[9];
    cs.tensor_at(x, t);
    CHECK(t[0] == doctest::Approx(2.0));
    double trace = 0.0;
    for (int j = 0; j < 3; ++j)
        for (int k = 0; k < 3; ++k) trace += x[j] * x[k] * t[3 * j + k];
    CHECK(std::abs(trace) < 1e-12);

    // Quadratic form at xi = (1,-1,0)/sqrt(2) equals 3 by the
    // sum-of-squares expansion.
    const double s2 = std::sqrt(0.5);
    double q = 0.0;
    const double xi[3] = {s2, -s2, 0.0};
    for (int j = 0; j < 3; ++j)
        for (int k = 0; k < 3; ++k) q += t[3 * j + k] * xi[j] * xi[k];
    CHECK(q == doctest::Approx(3.0));

    // 1e4 random pairs: form stays non-negative and matches the
    // sum-of-squares oracle.
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> ux(-1.5, 1.5);
    for (int trial = 0; trial < 10000; ++trial) {
        double p[3] = {ux(rng), ux(rng), ux(rng)};
        double xi2[3] = {ux(rng), ux(rng), ux(rng)};
        cs.tensor_at(p, t);
        double form = 0.0;
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k) form += t[3 * j + k] * xi2[j] * xi2[k];
        const double t1 = xi2[0] * p[1] * p[2] - p[0] * xi2[1] * p[2];
        const double t2 = p[0] * xi2[1] * p[2] - p[0] * p[1] * xi2[2];
        const double t3 = p[0] * p[1] * xi2[2] - xi2[0] * p[1] * p[2];
        const double oracle = t1 * t1 + t2 * t2 + t3 * t3;
        CHECK(form >= -1e-12);
        CHECK(form == doctest::Approx(oracle).epsilon(1e-10));
        double tr = 0.0;
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k) tr += p[j] * p[k] * t[3 * j + k];
        CHECK(std::abs(tr) < 1e-10);
    }
}

TEST_CASE("ellipticity lower bound for radial_abcd") {
    RadialGrid rg(1.0, 2.0, 9);
    AngularGrid ag(8, 4);
    CoefficientSet cs(radial_abcd_3d(3.0, 1.0, -1.0), rg, ag);
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<std::array<double, 3>> pts, dirs;
    for (int i = 0; i < 50; ++i) {
        double x[3] = {u(rng), u(rng), u(rng)};
        const double n = std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
        const double r = 1.0 + 0.9 * std::abs(u(rng));
        pts.push_back({r * x[0] / n, r * x[1] / n, r * x[2] / n});
        dirs.push_back({u(rng), u(rng), u(rng)});
    }
    const auto [lo, hi] = cs.ellipticity_bounds(pts, dirs);
    CHECK(lo >= 1.0 - 1e-12);  // min(a - b^+ - d^-) = 3 - 1 - 1
    CHECK(hi >= lo);
}

TEST_CASE("admissibility violations are named") {
    RadialGrid rg(1.0, 2.0, 9);
    AngularGrid ag(8, 4);
    // a - b^+ - d^- = 1 - 2 < 0 everywhere.
    CHECK_THROWS_AS(CoefficientSet(radial_abcd_3d(1.0, 2.0, 0.0), rg, ag), AdmissibilityError);
    // custom tensors require the unchecked flag.
    CoefficientSpec s;
    s.dimension = 3;
    s.family = CoefficientFamily::Custom;
    s.custom_tensor = [](const double*, double* out) {
        for (int i = 0; i < 9; ++i) out[i] = i % 4 == 0 ? 1.0 : 0.0;
    };
    CHECK_THROWS_AS(CoefficientSet(s, rg, ag), AdmissibilityError);
    s.unchecked = true;
    CHECK_NOTHROW(CoefficientSet(s, rg, ag));
}

TEST_CASE("conormal factor matches the direct normal contraction") {
    RadialGrid rg(1.0, 2.0, 9);
    AngularGrid ag(8, 4);
    SUBCASE("a=2, d=0") {
        CoefficientSet cs(radial_abcd_3d(2.0, 0.0, 0.0), rg, ag);
        CHECK(cs.conormal_factor(2) == doctest::Approx(2.0));
        CHECK(cs.conormal_factor(1) == doctest::Approx(2.0));
    }
    SUBCASE("a=1, d=0 inner") {
        CoefficientSet cs(radial_abcd_3d(1.0, 0.0, 0.0), rg, ag);
        CHECK(cs.conormal_factor(1) == doctest::Approx(1.0));
    }
    SUBCASE("direct oracle: sum_k a_jk n_k is the factor times the normal") {
        std::mt19937_64 rng(17);
        const auto spec = random_radial_abcd(rng, 3);
        CoefficientSet cs(spec, rg, ag);
        for (int shell : {1, 2}) {
            const double r = shell == 1 ? rg.r_min() : rg.r_max();
            const double x[3] = {r * 0.48, r * 0.64, r * 0.6};  // |x| = r
            double t[9];
            cs.tensor_at(x, t);
            for (int j = 0; j < 3; ++j) {
                double nu_j = 0.0;
                for (int k = 0; k < 3; ++k) nu_j += t[3 * j + k] * x[k] / r;
                CHECK(nu_j ==
                      doctest::Approx(cs.conormal_factor(shell) * x[j] / r).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("symmetry of all families") {
    RadialGrid rg(1.0, 2.0, 5);
    AngularGrid ag(6, 4);
    std::mt19937_64 rng(23);
    auto spec = random_radial_abcd(rng, 3);
    spec.family = CoefficientFamily::Sum;
    spec.series_weights = {[](const double* x) { return 0.3 + 0.1 * std::sin(x[0]); },
                           [](const double* x) { return 0.2 + 0.1 * std::cos(x[2]); }};
    CoefficientSet cs(spec, rg, ag);
    std::uniform_real_distribution<double> u(-1.2, 1.2);
    for (int trial = 0; trial < 200; ++trial) {
        double x[3] = {1.0 + 0.5 * std::abs(u(rng)), u(rng), u(rng)};
        double t[9];
        cs.tensor_at(x, t);
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k) CHECK(t[3 * j + k] == t[3 * k + j]);
    }
}

TEST_CASE("operator application reproduces analytic laplacian") {
    // Isotropic unit tensor: A u = Lap u. Test on u = x1^2 + x2 x3 (Lap = 2).
    auto worst_err = [](std::size_t nr, std::size_t np, std::size_t nt) {
        RadialGrid rg(1.0, 2.0, nr);
        AngularGrid ag(np, nt);
        CoefficientSet cs(CoefficientSpec::isotropic(3, 1.0), rg, ag);
        const auto u = AngularField::sample(rg, ag, [](double r, double phi, double th) {
            const double x1 = r * std::cos(phi) * std::sin(th);
            const double x2 = r * std::sin(phi) * std::sin(th);
            const double x3 = r * std::cos(th);
            return x1 * x1 + x2 * x3;
        });
        const auto au = cs.apply_a(u);
        double worst = 0.0;
        for (std::size_t ir = 1; ir + 1 < rg.size(); ++ir)
            for (std::size_t m = 0; m < ag.n_phi(); ++m)
                for (std::size_t l = 2; l + 2 < ag.n_theta(); ++l)
                    worst = std::max(worst, std::abs(au.at(ir, m, l) - 2.0));
        return worst;
    };
    const double coarse = worst_err(33, 24, 12);
    const double fine = worst_err(65, 48, 24);
    CHECK(fine < coarse / 2.5);
    CHECK(fine < 0.1);
}

TEST_CASE("2d spherical rep matches the identity tensor") {
    RadialGrid rg(1.0, 2.0, 5);
    AngularGrid ag(8);
    CoefficientSet cs(CoefficientSpec::isotropic(2, 1.0), rg, ag);
    CHECK(cs.trace_profile()[0] == doctest::Approx(1.0));
    const auto rep = cs.spherical_rep(1.5, 0.9, 0.0);
    CHECK(rep.k[0] == doctest::Approx(1.0));
    CHECK(rep.k[1] == doctest::Approx(0.0));
}
