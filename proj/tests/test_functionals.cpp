#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "memkern/errors.hpp"
#include "memkern/calculus.hpp"
#include "memkern/functionals.hpp"
#include "memkern/kernel_init.hpp"

using namespace memk;

namespace {

constexpr double kPi = std::numbers::pi;

// Random smooth field, polynomial/trigonometric in the Cartesian coordinates
// so that angular derivatives vanish properly at the poles.
std::function<double(double, double, double)> random_cartesian_field(std::mt19937_64& rng,
                                                                     int dim) {
    std::uniform_real_distribution<double> u(-0.5, 0.5);
    const double c0 = 1.0 + u(rng), c1 = u(rng), c2 = u(rng), c3 = u(rng), c4 = u(rng);
    return [=](double r, double phi, double th) {
        const double st = dim == 3 ? std::sin(th) : 1.0;
        const double x1 = r * std::cos(phi) * st;
        const double x2 = r * std::sin(phi) * st;
        const double x3 = dim == 3 ? r * std::cos(th) : 0.0;
        return c0 + c1 * x1 + c2 * x2 * x3 + c3 * std::sin(x1) * std::cos(x2) +
               c4 * x3 * x3 / 4.0;
    };
}

CoefficientSpec random_spec(std::mt19937_64& rng, int dim) {
    std::uniform_real_distribution<double> u(-0.25, 0.25);
    const double b0 = u(rng), d0 = u(rng), c0 = 0.2 + 0.15 * u(rng);
    CoefficientSpec s;
    s.dimension = dim;
    s.family = CoefficientFamily::RadialABCD;
    s.a = [](double r) { return 2.0 + 0.4 * std::sin(2.0 * r); };
    s.b = [b0](double r) { return b0 * std::cos(r); };
    s.d = [d0](double r) { return d0 + 0.1 * std::sin(r); };
    s.c = [c0](const double* x) { return c0 * (1.0 + 0.4 * std::sin(x[0] + x[1])); };
    s.b_tensor = [](const double*, int j, int k) { return j == k ? 1.0 : 0.0; };
    s.c_vector = [dim](const double* x, int j) {
        double r2 = 0.0;
        for (int i = 0; i < dim; ++i) r2 += x[i] * x[i];
        return x[j] / std::sqrt(r2);
    };
    return s;
}

}  // namespace

TEST_CASE("phi of radial fields is the full angular measure") {
    RadialGrid rg(1.0, 2.0, 9);
    SUBCASE("3d") {
        AngularGrid ag(12, 6);
        const auto lambda = MeasurementSpec::sample_lambda(ag, [](double, double) { return 1.0; });
        const auto v =
            AngularField::sample(rg, ag, [](double r, double, double) { return r * r; });
        const auto phi = phi_apply(lambda, v);
        for (std::size_t i = 0; i < rg.size(); ++i)
            CHECK(phi[i] == doctest::Approx(4.0 * kPi * rg.node(i) * rg.node(i)).epsilon(1e-12));

        // Odd component in cos(theta) integrates to zero.
        const auto odd = AngularField::sample(
            rg, ag, [](double r, double, double th) { return r * std::cos(th); });
        for (double x : phi_apply(lambda, odd)) CHECK(std::abs(x) < 1e-13);

        // lambda = cos(theta) against a constant field.
        const auto lam_cos =
            MeasurementSpec::sample_lambda(ag, [](double, double th) { return std::cos(th); });
        const auto ones =
            AngularField::sample(rg, ag, [](double, double, double) { return 1.0; });
        for (double x : phi_apply(lam_cos, ones)) CHECK(std::abs(x) < 1e-13);
    }
    SUBCASE("2d") {
        AngularGrid ag(12);
        const auto lambda = MeasurementSpec::sample_lambda(ag, [](double, double) { return 1.0; });
        const auto v = AngularField::sample(rg, ag, [](double r, double, double) { return r; });
        const auto phi = phi_apply(lambda, v);
        for (std::size_t i = 0; i < rg.size(); ++i)
            CHECK(phi[i] == doctest::Approx(2.0 * kPi * rg.node(i)).epsilon(1e-12));
    }
}

TEST_CASE("psi volume functional") {
    RadialGrid rg(1.0, 2.0, 33);
    AngularGrid ag(8, 4);
    MeasurementSpec spec;
    spec.lambda = MeasurementSpec::sample_lambda(ag, [](double, double) { return 1.0; });
    spec.psi_kind = MeasurementSpec::PsiKind::Volume;
    spec.psi = AngularField::sample(rg, ag, [](double, double, double) { return 1.0; });

    const auto ones = AngularField::sample(rg, ag, [](double, double, double) { return 1.0; });
    CHECK(psi_apply(spec, ones) ==
          doctest::Approx(4.0 * kPi * 7.0 / 3.0).epsilon(1e-6));

    spec.psi = AngularField::sample(rg, ag, [](double, double, double) { return 0.0; });
    CHECK(psi_apply(spec, ones) == 0.0);

    // psi = v = r: 4 pi (R2^5 - R1^5)/5.
    spec.psi = AngularField::sample(rg, ag, [](double r, double, double) { return r; });
    const auto v = AngularField::sample(rg, ag, [](double r, double, double) { return r; });
    CHECK(psi_apply(spec, v) == doctest::Approx(4.0 * kPi * 31.0 / 5.0).epsilon(1e-6));
}

TEST_CASE("phi multiplicativity and derivative commutation") {
    RadialGrid rg(1.0, 2.0, 17);
    AngularGrid ag(10, 6);
    std::mt19937_64 rng(41);
    const auto f = random_cartesian_field(rng, 3);
    const auto u = AngularField::sample(rg, ag, f);
    const auto lambda = MeasurementSpec::sample_lambda(
        ag, [](double phi, double th) { return 1.0 + 0.3 * std::sin(th) * std::cos(phi); });

    // Phi[w u] = w Phi[u] exactly for radial w.
    std::vector<double> w(rg.size());
    for (std::size_t i = 0; i < rg.size(); ++i) w[i] = std::exp(rg.node(i));
    const auto lhs = phi_apply(lambda, scale_by_radial(w, u));
    const auto rhs = phi_apply(lambda, u);
    for (std::size_t i = 0; i < rg.size(); ++i)
        CHECK(lhs[i] == doctest::Approx(w[i] * rhs[i]).epsilon(1e-13));

    // D_r Phi[u] = Phi[D_r u] exactly (the discrete operators commute).
    AngularField ur(rg, ag), up(rg, ag), ut(rg, ag);
    spherical_partials(u, ur, up, &ut);
    const auto d_phi = derivative_r({rhs.data(), rhs.size()}, rg);
    const auto phi_d = phi_apply(lambda, ur);
    for (std::size_t i = 0; i < rg.size(); ++i)
        CHECK(d_phi[i] == doctest::Approx(phi_d[i]).epsilon(1e-12));
}

TEST_CASE("antiderivative operator") {
    RadialGrid rg(1.0, 2.0, 21);
    std::vector<double> q(rg.size(), 1.0);
    const auto eq = e_apply(q, rg);
    for (std::size_t i = 0; i < rg.size(); ++i)
        CHECK(eq[i] == doctest::Approx(2.0 - rg.node(i)).epsilon(1e-14));
    CHECK(eq.back() == 0.0);
}

TEST_CASE("exponential identity of the weighted antiderivative") {
    RadialGrid rg(1.0, 2.0, 201);
    SUBCASE("unit profiles give exp(R2 - r) to machine precision") {
        std::vector<double> ones(rg.size(), 1.0);
        const auto u0 = U0Data::from_profiles(rg, ones, ones);
        const auto lg = l_apply(u0.phi_Bu0, u0);
        for (std::size_t i = 0; i < rg.size(); ++i)
            CHECK(1.0 + lg[i] ==
                  doctest::Approx(std::exp(2.0 - rg.node(i))).epsilon(1e-12));
    }
    SUBCASE("vanishing ratio reduces to the plain tail integral") {
        std::vector<double> zeros(rg.size(), 0.0), ones(rg.size(), 1.0);
        const auto u0 = U0Data::from_profiles(rg, zeros, ones);
        std::vector<double> g(rg.size());
        for (std::size_t i = 0; i < rg.size(); ++i) g[i] = std::sin(rg.node(i));
        const auto lg = l_apply(g, u0);
        const double h2 = rg.spacing() * rg.spacing();
        for (std::size_t i = 0; i < rg.size(); ++i)
            CHECK(std::abs(lg[i] - (std::cos(rg.node(i)) - std::cos(2.0))) < 2.0 * h2);
        const auto lz = l_apply(zeros, u0);
        for (double v : lz) CHECK(v == 0.0);
    }
    SUBCASE("random admissible profiles satisfy the identity to machine precision") {
        std::mt19937_64 rng(4242);
        std::uniform_real_distribution<double> u(-0.8, 0.8);
        for (int trial = 0; trial < 20; ++trial) {
            std::vector<double> pb(rg.size()), pc(rg.size());
            const double a0 = u(rng), a1 = u(rng), c0 = 1.0 + 0.3 * u(rng);
            for (std::size_t i = 0; i < rg.size(); ++i) {
                const double r = rg.node(i);
                pb[i] = a0 + a1 * std::sin(2.0 * r);
                pc[i] = c0 + 0.2 * std::cos(r);
            }
            const auto u0 = U0Data::from_profiles(rg, pb, pc);
            const auto lg = l_apply(u0.phi_Bu0, u0);
            for (std::size_t i = 0; i < rg.size(); ++i)
                CHECK(std::abs(1.0 + lg[i] - u0.exp_to_outer[i]) <
                      1e-12 * std::max(1.0, u0.exp_to_outer[i]));
        }
    }
}

TEST_CASE("j quantities: annihilation and solvability") {
    RadialGrid rg(1.0, 2.0, 17);
    AngularGrid ag(12, 6);
    std::mt19937_64 rng(99);
    const auto spec = random_spec(rng, 3);
    CoefficientSet cs(spec, rg, ag);

    // Non-radial smooth initial state with a monotone radial part.
    const auto u0f = [](double r, double phi, double th) {
        return r * r * (1.0 + 0.3 * std::cos(phi) * std::sin(th));
    };
    const auto u0 = AngularField::sample(rg, ag, u0f);

    MeasurementSpec meas;
    meas.lambda = MeasurementSpec::sample_lambda(
        ag, [](double phi, double th) { return 1.0 + 0.3 * std::cos(phi) * std::sin(th); });
    meas.psi_kind = MeasurementSpec::PsiKind::Volume;
    meas.psi = AngularField::sample(rg, ag, [](double r, double phi, double) {
        return (r - 1.0) * (2.0 - r) * (1.0 + 0.5 * std::sin(phi));
    });

    const auto data = U0Data::build(cs, meas.lambda, u0);
    const auto Bu0 = cs.apply_b(u0);
    const auto Cu0 = cs.apply_c(u0);

    // Phi annihilates the J field to rounding.
    const auto j = j_field(data, Bu0, Cu0);
    const auto phi_j = phi_apply(meas.lambda, j);
    const double scale = sup_norm(Bu0);
    for (double v : phi_j) CHECK(std::abs(v) <= 1e-8 * scale);

    const auto jq = j_quantities(data, meas, Bu0, Cu0);
    CHECK(std::abs(jq.j1) > 0.0);
    for (std::size_t i = 0; i < rg.size(); ++i)
        CHECK(jq.j2[i] ==
              doctest::Approx(-data.ratio[i] * data.exp_to_outer[i]).epsilon(1e-13));

    // A composite Psi = Lambda(Phi[.]) must trigger the solvability error.
    MeasurementSpec composite = meas;
    composite.psi_kind = MeasurementSpec::PsiKind::CompositePhi;
    composite.mu.assign(rg.size(), 1.0);
    CHECK_THROWS_AS(j_quantities(data, composite, Bu0, Cu0), SolvabilityError);
}

TEST_CASE("correction operator of phi on constants vanishes for admissible families") {
    RadialGrid rg(1.0, 2.0, 17);
    std::mt19937_64 rng(7);
    SUBCASE("3d") {
        AngularGrid ag(12, 8);
        CoefficientSet cs(random_spec(rng, 3), rg, ag);
        const auto lambda = MeasurementSpec::sample_lambda(
            ag, [](double phi, double th) { return 1.0 + 0.2 * std::sin(th) * std::sin(phi); });
        const auto ones =
            AngularField::sample(rg, ag, [](double, double, double) { return 1.0; });
        const auto p1 = phi1_apply(lambda, cs, ones);
        for (double v : p1) CHECK(std::abs(v) < 1e-10);
    }
    SUBCASE("2d") {
        AngularGrid ag(16);
        CoefficientSet cs(random_spec(rng, 2), rg, ag);
        const auto lambda = MeasurementSpec::sample_lambda(
            ag, [](double phi, double) { return 1.0 + 0.2 * std::sin(phi); });
        const auto ones =
            AngularField::sample(rg, ag, [](double, double, double) { return 1.0; });
        const auto p1 = phi1_apply(lambda, cs, ones);
        for (double v : p1) CHECK(std::abs(v) < 1e-10);
    }
}

TEST_CASE("phi1 matches the isotropic radial closed form") {
    // Isotropic a(r): Phi1[w](r) = 4 pi (2 a(r) / r) D_r w for radial w,
    // lambda = 1.
    RadialGrid rg(1.0, 2.0, 41);
    AngularGrid ag(64, 24);
    CoefficientSpec s = CoefficientSpec::isotropic(3, 1.0);
    s.a = [](double r) { return 1.5 + 0.5 * std::sin(r); };
    CoefficientSet cs(s, rg, ag);
    const auto lambda = MeasurementSpec::sample_lambda(ag, [](double, double) { return 1.0; });
    const auto w =
        AngularField::sample(rg, ag, [](double r, double, double) { return r * r * r; });
    const auto p1 = phi1_apply(lambda, cs, w);
    double worst = 0.0;
    for (std::size_t i = 0; i < rg.size(); ++i) {
        const double r = rg.node(i);
        const double expected = 4.0 * kPi * 2.0 * s.a(r) / r * 3.0 * r * r;
        worst = std::max(worst, std::abs(p1[i] - expected) / std::abs(expected));
    }
    CHECK(worst < 1e-2);
}

TEST_CASE("decompositions of phi and psi against the direct route") {
    std::mt19937_64 rng(2026);
    for (int dim : {2, 3}) {
        CAPTURE(dim);
        std::vector<double> resid_phi_levels, resid_psi_levels;
        for (const auto& [nr, np, nth] :
             {std::array<std::size_t, 3>{17, 12, 12}, std::array<std::size_t, 3>{33, 24, 24},
              std::array<std::size_t, 3>{65, 48, 48}}) {
            RadialGrid rg(1.0, 2.0, nr);
            AngularGrid ag = dim == 2 ? AngularGrid(np) : AngularGrid(np, nth);
            std::mt19937_64 case_rng(777);
            CoefficientSet cs(random_spec(case_rng, dim), rg, ag);
            const auto lambda = MeasurementSpec::sample_lambda(ag, [](double phi, double th) {
                return 1.0 + 0.3 * std::cos(phi) + 0.2 * std::cos(th);
            });
            const auto smooth = random_cartesian_field(case_rng, dim);
            // Homogeneous Dirichlet window so the volume decomposition holds.
            const auto wfun = [&](double r, double phi, double th) {
                return (r - 1.0) * (2.0 - r) * smooth(r, phi, th);
            };
            const auto w = AngularField::sample(rg, ag, wfun);
            MeasurementSpec meas;
            meas.lambda = lambda;
            meas.psi_kind = MeasurementSpec::PsiKind::Volume;
            meas.psi = AngularField::sample(rg, ag, [](double r, double phi, double) {
                return (r - 1.0) * (2.0 - r) * (1.0 + 0.4 * std::sin(phi));
            });

            const auto aw = cs.apply_a(w);
            const auto phi_aw = phi_apply(lambda, aw);
            const auto phi_w = phi_apply(lambda, w);
            const auto a1_phi_w = apply_radial_part(phi_w, cs.trace_profile(), rg);
            const auto p1 = phi1_apply(lambda, cs, w);
            double resid_phi = 0.0;
            // Radial one-sided stencils at the ends double-dip with the
            // angular quadrature; compare on the interior.
            for (std::size_t i = 2; i + 2 < rg.size(); ++i)
                resid_phi = std::max(resid_phi, std::abs(phi_aw[i] - a1_phi_w[i] - p1[i]));

            const double psi_aw = psi_apply(meas, aw);
            const double psi1_w = psi1_apply(meas, cs, w);
            const double resid_psi = std::abs(psi_aw - psi1_w);

            resid_phi_levels.push_back(resid_phi);
            resid_psi_levels.push_back(resid_psi);
        }
        // Decay between the two finest levels; the planar case is
        // summation-by-parts exact and sits at rounding noise.
        const double noise = 1e-11;
        const std::size_t L = resid_phi_levels.size();
        CHECK((resid_phi_levels[L - 1] < resid_phi_levels[L - 2] / 2.5 ||
               resid_phi_levels[L - 1] < noise));
        CHECK((resid_psi_levels[L - 1] < resid_psi_levels[L - 2] / 2.5 ||
               resid_psi_levels[L - 1] < noise));
    }
}

TEST_CASE("psi rejects a weight that does not vanish on Dirichlet shells") {
    RadialGrid rg(1.0, 2.0, 9);
    AngularGrid ag(8, 4);
    MeasurementSpec meas;
    meas.lambda = MeasurementSpec::sample_lambda(ag, [](double, double) { return 1.0; });
    meas.psi_kind = MeasurementSpec::PsiKind::Volume;
    meas.psi = AngularField::sample(rg, ag, [](double, double, double) { return 1.0; });
    CHECK_THROWS_AS(meas.check_psi_dirichlet("DD"), AdmissibilityError);
    CHECK_NOTHROW(meas.check_psi_dirichlet("NN"));
}
