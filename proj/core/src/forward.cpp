#include "memkern/forward.hpp"

#include <Eigen/Dense>
#include <cmath>

#include "memkern/calculus.hpp"
#include "memkern/errors.hpp"

namespace memk {

namespace {

// Dense operator of the radial Laplacian with boundary rows replaced by the
// boundary conditions. Rows 0 and n-1 hold the constraint stencils.
Eigen::MatrixXd laplacian_matrix(const RadialGrid& rg, int dimension) {
    const std::size_t n = rg.size();
    const double h = rg.spacing();
    Eigen::MatrixXd lap = Eigen::MatrixXd::Zero(n, n);
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double r = rg.node(i);
        const double drift = (dimension - 1) / r;
        lap(i, i - 1) = 1.0 / (h * h) - drift / (2.0 * h);
        lap(i, i) = -2.0 / (h * h);
        lap(i, i + 1) = 1.0 / (h * h) + drift / (2.0 * h);
    }
    return lap;
}

void boundary_rows(Eigen::MatrixXd& m, const ForwardProblem& p, double diag_scale) {
    const std::size_t n = p.u0.size();
    const double h = p.kernel.rgrid.spacing();
    m.row(0).setZero();
    m.row(n - 1).setZero();
    if (p.bc_inner == 'D') {
        m(0, 0) = 1.0;
    } else {
        // outward normal at the inner shell points toward the centre
        m(0, 0) = 3.0 / (2.0 * h);
        m(0, 1) = -4.0 / (2.0 * h);
        m(0, 2) = 1.0 / (2.0 * h);
    }
    if (p.bc_outer == 'D') {
        m(n - 1, n - 1) = 1.0;
    } else {
        m(n - 1, n - 1) = 3.0 / (2.0 * h);
        m(n - 1, n - 2) = -4.0 / (2.0 * h);
        m(n - 1, n - 3) = 1.0 / (2.0 * h);
    }
    (void)diag_scale;
}

}  // namespace

SpaceTimeField solve_forward(const ForwardProblem& p) {
    const TimeGrid& tg = p.kernel.tgrid;
    const RadialGrid& rg = p.kernel.rgrid;
    const std::size_t nt = tg.size();
    const std::size_t nr = rg.size();
    const double dt = tg.step();
    const bool cn = p.scheme == TimeScheme::CrankNicolson;

    const Eigen::MatrixXd lap = laplacian_matrix(rg, p.dimension);

    Eigen::MatrixXd lhs = Eigen::MatrixXd::Identity(nr, nr) - (cn ? 0.5 : 1.0) * dt * lap;
    boundary_rows(lhs, p, 1.0);
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(lhs);
    if (std::abs(lu.determinant()) < 1e-300)
        throw SolvabilityError("forward solver: boundary conditions make the step singular");

    SpaceTimeField u(tg, rg);
    u.set_slice(0, p.u0);

    // Kernel slice derivatives, reused across the march.
    std::vector<std::vector<double>> k_slice(nt), dk_slice(nt);
    for (std::size_t i = 0; i < nt; ++i) {
        k_slice[i] = p.kernel.slice(i);
        dk_slice[i] = derivative_uniform({k_slice[i].data(), nr}, rg.spacing());
    }

    // Per-slice spatial derivatives of the state accumulate as time marches.
    std::vector<std::vector<double>> lap_u(nt), dr_u(nt);
    auto spatial_terms = [&](const std::vector<double>& v, std::vector<double>& lapv,
                             std::vector<double>& drv) {
        drv = derivative_uniform({v.data(), v.size()}, rg.spacing());
        const auto d2 = second_derivative_uniform({v.data(), v.size()}, rg.spacing());
        lapv.resize(nr);
        for (std::size_t j = 0; j < nr; ++j)
            lapv[j] = d2[j] + (p.dimension - 1) / rg.node(j) * drv[j];
    };
    spatial_terms(p.u0, lap_u[0], dr_u[0]);

    // Trapezoid convolution over s in [0, t_m] against the stored slices.
    auto memory_at = [&](std::size_t m, std::vector<double>& out) {
        out.assign(nr, 0.0);
        if (m == 0) return;
        for (std::size_t s = 0; s <= m; ++s) {
            const double w = (s == 0 || s == m) ? 0.5 * dt : dt;
            const std::size_t lag = m - s;
            for (std::size_t j = 0; j < nr; ++j)
                out[j] += w * (k_slice[lag][j] * lap_u[s][j] + dk_slice[lag][j] * dr_u[s][j]);
        }
    };

    std::vector<double> mem_prev(nr, 0.0), mem_curr(nr, 0.0), extrap(nr);
    for (std::size_t m = 1; m < nt; ++m) {
        // Extrapolated state closes the convolution at s = t_m explicitly.
        const auto um1 = u.slice(m - 1);
        if (m >= 2) {
            const auto um2 = u.slice(m - 2);
            for (std::size_t j = 0; j < nr; ++j) extrap[j] = 2.0 * um1[j] - um2[j];
        } else {
            extrap = um1;
        }
        spatial_terms(extrap, lap_u[m], dr_u[m]);
        memory_at(m, mem_curr);

        Eigen::Map<const Eigen::VectorXd> uprev(um1.data(), nr);
        Eigen::VectorXd b;
        if (cn) {
            b = uprev + 0.5 * dt * (lap * uprev);
            for (std::size_t j = 0; j < nr; ++j)
                b[j] += 0.5 * dt *
                        (mem_curr[j] + mem_prev[j] + p.source.at(m, j) + p.source.at(m - 1, j));
        } else {
            b = uprev;
            for (std::size_t j = 0; j < nr; ++j)
                b[j] += dt * (mem_curr[j] + p.source.at(m, j));
        }
        // Boundary rows carry the data, with the inner-shell normal flipped.
        b[0] = p.bc_inner == 'D' ? p.data_inner[m] : -p.data_inner[m];
        b[nr - 1] = p.data_outer[m];

        const Eigen::VectorXd x = lu.solve(b);
        std::vector<double> xs(nr);
        for (std::size_t j = 0; j < nr; ++j) xs[j] = x[j];
        u.set_slice(m, xs);
        // Replace the extrapolated spatial terms with the solved state and
        // refresh the trailing memory value for the next half step.
        spatial_terms(xs, lap_u[m], dr_u[m]);
        if (cn) memory_at(m, mem_prev);
    }
    return u;
}

ManufacturedData manufacture(const SpaceTimeField& k_true, const SpaceTimeField& u, int dimension,
                             const std::vector<double>& lambda) {
    const TimeGrid& tg = u.tgrid;
    const RadialGrid& rg = u.rgrid;
    const std::size_t nt = tg.size(), nr = rg.size();
    const double dt = tg.step();
    if (k_true.tgrid.size() != nt || k_true.rgrid.size() != nr)
        throw ShapeError("manufacture: kernel/state grids differ");
    if (lambda.size() != nr) throw ShapeError("manufacture: lambda length mismatch");

    // Per-slice spatial derivatives.
    std::vector<std::vector<double>> dr_k(nt), dr_u(nt), ell_u(nt);
    for (std::size_t i = 0; i < nt; ++i) {
        const auto ks = k_true.slice(i);
        dr_k[i] = derivative_uniform({ks.data(), ks.size()}, rg.spacing());
        const auto us = u.slice(i);
        dr_u[i] = derivative_uniform({us.data(), us.size()}, rg.spacing());
        const auto d2 = second_derivative_uniform({us.data(), us.size()}, rg.spacing());
        ell_u[i].resize(nr);
        for (std::size_t j = 0; j < nr; ++j)
            ell_u[i][j] = d2[j] + (dimension - 1) / rg.node(j) * dr_u[i][j];
    }

    ManufacturedData out{SpaceTimeField(tg, rg), std::vector<double>(nt, 0.0)};
    for (std::size_t m = 0; m < nt; ++m) {
        if (m > 0) {
            for (std::size_t s = 0; s <= m; ++s) {
                const double w = (s == 0 || s == m) ? 0.5 * dt : dt;
                const std::size_t lag = m - s;
                for (std::size_t j = 0; j < nr; ++j)
                    out.f_tilde.at(m, j) += w * (dr_k[lag][j] * dr_u[s][j] +
                                                 k_true.at(lag, j) * ell_u[s][j]);
            }
        }
        const auto ks = k_true.slice(m);
        std::vector<double> lk(nr);
        for (std::size_t j = 0; j < nr; ++j) lk[j] = lambda[j] * ks[j];
        out.g[m] = integrate({lk.data(), nr}, rg);
    }
    return out;
}

}  // namespace memk
