#include "memkern/inverse_radial.hpp"

#include <cmath>
#include <string>

#include "memkern/calculus.hpp"
#include "memkern/errors.hpp"

namespace memk {

namespace {

std::vector<double> trapezoid_weights(const RadialGrid& rg) {
    std::vector<double> w(rg.size(), rg.spacing());
    w.front() = w.back() = 0.5 * rg.spacing();
    return w;
}

// Trapezoid-consistent indicator of [r_min, r_i] against full-range weights.
double chi_weight(std::size_t i, std::size_t j, std::size_t n) {
    if (j > i) return 0.0;
    if (j < i) return 1.0;
    if (i == 0) return 0.0;
    return (i == n - 1) ? 1.0 : 0.5;
}

}  // namespace

AssembledCoefficients assemble(const RadialInverseInput& input, int dimension) {
    const RadialGrid& rg = input.u.rgrid;
    const TimeGrid& tg = input.u.tgrid;
    const std::size_t nr = rg.size(), nt = tg.size();
    if (input.g.size() != nt) throw ShapeError("assemble: g length mismatch");
    if (input.lambda.size() != nr) throw ShapeError("assemble: lambda length mismatch");

    AssembledCoefficients ac(tg, rg);
    ac.dimension = dimension;
    ac.lambda = input.lambda;

    // Spatial derivatives of the state, slice by slice.
    std::vector<std::vector<double>> dr_u(nt), d2_u(nt);
    for (std::size_t i = 0; i < nt; ++i) {
        const auto us = input.u.slice(i);
        dr_u[i] = derivative_uniform({us.data(), nr}, rg.spacing());
        d2_u[i] = second_derivative_uniform({us.data(), nr}, rg.spacing());
    }
    const std::vector<double>& du0 = dr_u[0];
    for (std::size_t j = 0; j < nr; ++j)
        if (std::abs(du0[j]) < input.m_bound)
            throw DegeneracyError("|D_r u(0, r)| below the admitted bound at node r=" +
                                  std::to_string(rg.node(j)));

    ac.alpha.resize(nr);
    for (std::size_t j = 0; j < nr; ++j)
        ac.alpha[j] =
            (d2_u[0][j] + (dimension - 1) / rg.node(j) * dr_u[0][j]) / du0[j];

    // Mixed time derivatives by differencing the spatial-derivative slices.
    const double dt = tg.step();
    auto time_derivative_rows = [&](const std::vector<std::vector<double>>& rows,
                                    SpaceTimeField& out, bool with_drift) {
        std::vector<double> col(nt);
        for (std::size_t j = 0; j < nr; ++j) {
            for (std::size_t i = 0; i < nt; ++i) col[i] = rows[i][j];
            const auto d = derivative_uniform({col.data(), nt}, dt);
            for (std::size_t i = 0; i < nt; ++i) out.at(i, j) = d[i];
        }
        (void)with_drift;
    };
    SpaceTimeField dt_dr_u(tg, rg), dt_d2_u(tg, rg);
    time_derivative_rows(dr_u, dt_dr_u, false);
    time_derivative_rows(d2_u, dt_d2_u, false);
    for (std::size_t i = 0; i < nt; ++i)
        for (std::size_t j = 0; j < nr; ++j) {
            ac.beta.at(i, j) = dt_dr_u.at(i, j) / du0[j];
            ac.gamma.at(i, j) = (dt_d2_u.at(i, j) +
                                 (dimension - 1) / rg.node(j) * dt_dr_u.at(i, j)) /
                                du0[j];
        }

    // Measurement scalars.
    const double lam_int = integrate({ac.lambda.data(), nr}, rg);
    const double lam_scale = sup_norm(ac.lambda) * (rg.r_max() - rg.r_min());
    if (std::abs(lam_int) < 1e-12 * std::max(lam_scale, 1e-300))
        throw SolvabilityError("integral of lambda vanishes, kappa is undefined");
    ac.kappa = 1.0 / lam_int;
    ac.lambda_tail = cumulative_from_right({ac.lambda.data(), nr}, rg);
    ac.alpha_cum = cumulative_from_left({ac.alpha.data(), nr}, rg);
    std::vector<double> lam_damped(nr);
    for (std::size_t j = 0; j < nr; ++j)
        lam_damped[j] = ac.lambda[j] * std::exp(-ac.alpha_cum[j]);
    ac.kappa1 = integrate({lam_damped.data(), nr}, rg);
    if (std::abs(ac.kappa1) < 1e-12 * std::max(sup_norm(lam_damped) * (rg.r_max() - rg.r_min()),
                                               1e-300))
        throw SolvabilityError("damped lambda average vanishes, kappa1 is undefined");

    // Right-hand side: time derivative of f_tilde over D_r u(0, .) minus the
    // measured terms, with the gamma convolution by trapezoid.
    SpaceTimeField dt_f(tg, rg);
    {
        std::vector<double> col(nt);
        for (std::size_t j = 0; j < nr; ++j) {
            for (std::size_t i = 0; i < nt; ++i) col[i] = input.f_tilde.at(i, j);
            const auto d = derivative_uniform({col.data(), nt}, dt);
            for (std::size_t i = 0; i < nt; ++i) dt_f.at(i, j) = d[i];
        }
    }
    for (std::size_t m = 0; m < nt; ++m)
        for (std::size_t j = 0; j < nr; ++j) {
            double conv = 0.0;
            for (std::size_t s = 0; s <= m && m > 0; ++s) {
                const double w = (s == 0 || s == m) ? 0.5 * dt : dt;
                conv += w * ac.gamma.at(m - s, j) * input.g[s];
            }
            ac.source.at(m, j) = dt_f.at(m, j) / du0[j] - ac.kappa * input.g[m] * ac.alpha[j] -
                                 ac.kappa * conv;
        }
    return ac;
}

Eigen::MatrixXd green_function(const AssembledCoefficients& ac) {
    const std::size_t n = ac.rgrid.size();
    // S(rho) = (1/kappa1) integral_rho^{rmax} lambda(s) exp(A(rho) - A(s)) ds,
    // carried here without the exp(A(rho)) factor which joins the common
    // exp(A(rho) - A(r)) envelope below.
    std::vector<double> lam_damped(n);
    for (std::size_t j = 0; j < n; ++j)
        lam_damped[j] = ac.lambda[j] * std::exp(-ac.alpha_cum[j]);
    const auto tail = cumulative_from_right({lam_damped.data(), n}, ac.rgrid);
    std::vector<double> S(n);
    for (std::size_t j = 0; j < n; ++j) S[j] = tail[j] / ac.kappa1;

    Eigen::MatrixXd G(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            const double e = std::exp(ac.alpha_cum[j] - ac.alpha_cum[i]);
            G(i, j) = ac.alpha[i] * e * (S[j] - chi_weight(i, j, n));
        }
    return G;
}

std::vector<double> auxiliary_solve(const std::vector<double>& f, const Eigen::MatrixXd& G,
                                    const RadialGrid& grid) {
    const std::size_t n = grid.size();
    if (f.size() != n) throw ShapeError("auxiliary_solve: profile length mismatch");
    const auto w = trapezoid_weights(grid);
    std::vector<double> q(n);
    for (std::size_t i = 0; i < n; ++i) {
        double s = f[i];
        for (std::size_t j = 0; j < n; ++j) s += w[j] * G(i, j) * f[j];
        q[i] = s;
    }
    return q;
}

std::vector<Eigen::MatrixXd> g1_kernel(const AssembledCoefficients& ac,
                                       const Eigen::MatrixXd& G) {
    const std::size_t nr = ac.rgrid.size(), nt = ac.tgrid.size();
    const auto w = trapezoid_weights(ac.rgrid);
    std::vector<Eigen::MatrixXd> out(nt, Eigen::MatrixXd(nr, nr));
    std::vector<double> grow(nr), tailrow(nr);
    for (std::size_t k = 0; k < nt; ++k) {
        const auto gam = ac.gamma.slice(k);
        const auto bet = ac.beta.slice(k);
        Eigen::MatrixXd& M = out[k];
        for (std::size_t i = 0; i < nr; ++i) {
            // integral G(r_i, xi) gamma(xi) over the whole interval and its
            // suffix tails.
            for (std::size_t j = 0; j < nr; ++j) grow[j] = G(i, j) * gam[j];
            const auto tails = cumulative_from_right({grow.data(), nr}, ac.rgrid);
            const double full = tails.front();
            for (std::size_t j = 0; j < nr; ++j) {
                M(i, j) = ac.kappa * gam[i] * ac.lambda_tail[j] -
                          gam[i] * chi_weight(i, j, nr) - bet[j] * G(i, j) +
                          ac.kappa * ac.lambda_tail[j] * full - tails[j];
            }
        }
        (void)w;
    }
    return out;
}

double weighted_profile_norm(const std::vector<double>& v, const RadialGrid& grid) {
    const auto w = trapezoid_weights(grid);
    double s = 0.0;
    for (std::size_t j = 0; j < v.size(); ++j) s += w[j] * v[j] * v[j];
    return std::sqrt(s);
}

double weighted_field_norm(const SpaceTimeField& f, double sigma) {
    double best = 0.0;
    for (std::size_t m = 0; m < f.tgrid.size(); ++m)
        best = std::max(best, std::exp(-sigma * f.tgrid.node(m)) *
                                  weighted_profile_norm(f.slice(m), f.rgrid));
    return best;
}

std::vector<double> contraction_majorant(const SpaceTimeField& beta,
                                         const std::vector<Eigen::MatrixXd>& G1) {
    const std::size_t nt = beta.tgrid.size(), nr = beta.rgrid.size();
    const auto w = trapezoid_weights(beta.rgrid);
    std::vector<double> phi(nt, 0.0);
    for (std::size_t k = 0; k < nt; ++k) {
        double bmax = 0.0;
        for (std::size_t j = 0; j < nr; ++j) bmax = std::max(bmax, std::abs(beta.at(k, j)));
        double frob = 0.0;
        for (std::size_t i = 0; i < nr; ++i)
            for (std::size_t j = 0; j < nr; ++j)
                frob += w[i] * w[j] * G1[k](i, j) * G1[k](i, j);
        phi[k] = bmax + std::sqrt(frob);
    }
    return phi;
}

double contraction_bound(const std::vector<double>& phi, const TimeGrid& tg, double sigma) {
    std::vector<double> damped(phi.size());
    for (std::size_t k = 0; k < phi.size(); ++k)
        damped[k] = std::exp(-sigma * tg.node(k)) * phi[k];
    return integrate({damped.data(), damped.size()}, tg.step(), QuadRule::Trapezoid);
}

SpaceTimeField apply_l1(const SpaceTimeField& q, const SpaceTimeField& beta,
                        const std::vector<Eigen::MatrixXd>& G1) {
    const std::size_t nt = q.tgrid.size(), nr = q.rgrid.size();
    const double dt = q.tgrid.step();
    const auto w = trapezoid_weights(q.rgrid);
    SpaceTimeField out(q.tgrid, q.rgrid);
    for (std::size_t m = 1; m < nt; ++m) {
        for (std::size_t s = 0; s <= m; ++s) {
            const double tw = (s == 0 || s == m) ? 0.5 * dt : dt;
            const std::size_t lag = m - s;
            for (std::size_t i = 0; i < nr; ++i) {
                double v = -beta.at(lag, i) * q.at(s, i);
                double conv = 0.0;
                for (std::size_t j = 0; j < nr; ++j) conv += w[j] * G1[lag](i, j) * q.at(s, j);
                out.at(m, i) += tw * (v + conv);
            }
        }
    }
    return out;
}

SpaceTimeField volterra_solve(const SpaceTimeField& w, const SpaceTimeField& beta,
                              const std::vector<Eigen::MatrixXd>& G1,
                              const VolterraOptions& options, VolterraReport* report) {
    const TimeGrid& tg = w.tgrid;
    const RadialGrid& rg = w.rgrid;
    const std::size_t nt = tg.size(), nr = rg.size();
    const double dt = tg.step();
    const auto wq = trapezoid_weights(rg);

    if (options.method == VolterraMethod::TimeMarch) {
        // Current-node block of the trapezoid discretisation.
        Eigen::MatrixXd M = Eigen::MatrixXd::Identity(nr, nr);
        for (std::size_t i = 0; i < nr; ++i) {
            M(i, i) += 0.5 * dt * beta.at(0, i);
            for (std::size_t j = 0; j < nr; ++j) M(i, j) -= 0.5 * dt * G1[0](i, j) * wq[j];
        }
        Eigen::PartialPivLU<Eigen::MatrixXd> lu(M);
        SpaceTimeField q(tg, rg);
        q.set_slice(0, w.slice(0));
        Eigen::VectorXd rhs(nr);
        for (std::size_t m = 1; m < nt; ++m) {
            for (std::size_t i = 0; i < nr; ++i) rhs[i] = w.at(m, i);
            for (std::size_t s = 0; s < m; ++s) {
                const double tw = (s == 0) ? 0.5 * dt : dt;
                const std::size_t lag = m - s;
                for (std::size_t i = 0; i < nr; ++i) {
                    double v = -beta.at(lag, i) * q.at(s, i);
                    for (std::size_t j = 0; j < nr; ++j)
                        v += wq[j] * G1[lag](i, j) * q.at(s, j);
                    rhs[i] += tw * v;
                }
            }
            const Eigen::VectorXd x = lu.solve(rhs);
            for (std::size_t i = 0; i < nr; ++i) q.at(m, i) = x[i];
        }
        if (report) {
            report->sigma = 0.0;
            report->iterations = 0;
        }
        return q;
    }

    // Picard iteration under the sigma-weighted norm.
    const auto phi = contraction_majorant(beta, G1);
    double sigma = options.sigma;
    double bound = 0.0;
    if (sigma <= 0.0) {
        sigma = 1.0;
        bool found = false;
        for (int tries = 0; tries < 60; ++tries) {
            bound = contraction_bound(phi, tg, sigma);
            if (bound <= 0.5) {
                found = true;
                break;
            }
            sigma *= 2.0;
        }
        if (!found)
            throw IterationError(
                "no weight makes the memory operator a contraction on this grid "
                "(time step too coarse: floor " +
                std::to_string(0.5 * dt * phi[0]) + ")");
    } else {
        bound = contraction_bound(phi, tg, sigma);
    }

    SpaceTimeField q = w;
    double measured = 0.0;
    int iters_to_tol = -1;
    const double wnorm = std::max(weighted_field_norm(w, sigma), 1e-300);
    int it = 0;
    double prev_unweighted = 1e300;
    for (; it < options.max_iterations; ++it) {
        const SpaceTimeField l1q = apply_l1(q, beta, G1);
        const double qs = weighted_field_norm(q, sigma);
        if (qs > 0.0) measured = std::max(measured, weighted_field_norm(l1q, sigma) / qs);
        SpaceTimeField next(tg, rg);
        next.values = w.values + l1q.values;
        SpaceTimeField diff(tg, rg);
        diff.values = next.values - q.values;
        const double incr_w = weighted_field_norm(diff, sigma);
        const double incr_u = sup_norm(diff);
        const double scale_u = std::max(sup_norm(next), 1e-300);
        q = next;
        if (iters_to_tol < 0 && incr_w <= options.picard_tol * std::max(1.0, wnorm))
            iters_to_tol = it + 1;
        // Polish to the fixed point for cross-method agreement; stop on
        // stagnation.
        if (incr_u <= 1e-13 * scale_u) break;
        if (incr_u >= prev_unweighted && iters_to_tol >= 0) break;
        prev_unweighted = incr_u;
    }
    if (iters_to_tol < 0)
        throw IterationError("Picard iteration did not meet the weighted tolerance in " +
                             std::to_string(options.max_iterations) +
                             " iterations (measured contraction " + std::to_string(measured) +
                             ")");
    if (report) {
        report->sigma = sigma;
        report->contraction_bound = bound;
        report->measured_contraction = measured;
        report->iterations = iters_to_tol;
    }
    return q;
}

Reconstruction reconstruct_k(const SpaceTimeField& q, const std::vector<double>& g, double kappa,
                             const std::vector<double>& lambda,
                             const std::vector<double>& lambda_tail) {
    const TimeGrid& tg = q.tgrid;
    const RadialGrid& rg = q.rgrid;
    const std::size_t nt = tg.size(), nr = rg.size();
    const auto w = trapezoid_weights(rg);
    Reconstruction rec{SpaceTimeField(tg, rg), std::vector<double>(nt, 0.0), 0.0};
    for (std::size_t m = 0; m < nt; ++m) {
        double tailavg = 0.0;
        for (std::size_t j = 0; j < nr; ++j) tailavg += w[j] * lambda_tail[j] * q.at(m, j);
        rec.h[m] = kappa * g[m] - kappa * tailavg;
        const auto qs = q.slice(m);
        const auto Q = cumulative_from_left({qs.data(), nr}, rg);
        for (std::size_t j = 0; j < nr; ++j) rec.k.at(m, j) = rec.h[m] + Q[j];
        // Re-verify the measurement constraint.
        double lk = 0.0;
        for (std::size_t j = 0; j < nr; ++j) lk += w[j] * lambda[j] * rec.k.at(m, j);
        rec.constraint_residual = std::max(rec.constraint_residual, std::abs(lk - g[m]));
    }
    return rec;
}

double green_bound_constant(const AssembledCoefficients& ac) {
    const std::size_t n = ac.rgrid.size();
    std::vector<double> abs_alpha(n), abs_lambda(n);
    for (std::size_t j = 0; j < n; ++j) {
        abs_alpha[j] = std::abs(ac.alpha[j]);
        abs_lambda[j] = std::abs(ac.lambda[j]);
    }
    const double m_alpha =
        integrate({abs_alpha.data(), n}, ac.rgrid.spacing(), QuadRule::Trapezoid);
    const double l1_lambda =
        integrate({abs_lambda.data(), n}, ac.rgrid.spacing(), QuadRule::Trapezoid);
    return std::exp(2.0 * m_alpha) *
           (std::exp(2.0 * m_alpha) * l1_lambda / std::abs(ac.kappa1) + 1.0);
}

double parts_identity_residual(const AssembledCoefficients& ac) {
    const std::size_t n = ac.rgrid.size();
    std::vector<double> integrand(n);
    for (std::size_t j = 0; j < n; ++j)
        integrand[j] = ac.lambda_tail[j] * ac.alpha[j] * std::exp(-ac.alpha_cum[j]);
    const double lhs = 1.0 - ac.kappa * integrate({integrand.data(), n}, ac.rgrid);
    return std::abs(lhs - ac.kappa * ac.kappa1);
}

double first_kind_residual(const SpaceTimeField& k, const SpaceTimeField& u,
                           const SpaceTimeField& f_tilde, int dimension) {
    const TimeGrid& tg = u.tgrid;
    const RadialGrid& rg = u.rgrid;
    const std::size_t nt = tg.size(), nr = rg.size();
    const double dt = tg.step();

    std::vector<std::vector<double>> dr_u(nt), d2_u(nt), dr_k(nt);
    for (std::size_t i = 0; i < nt; ++i) {
        const auto us = u.slice(i);
        dr_u[i] = derivative_uniform({us.data(), nr}, rg.spacing());
        d2_u[i] = second_derivative_uniform({us.data(), nr}, rg.spacing());
        const auto ks = k.slice(i);
        dr_k[i] = derivative_uniform({ks.data(), nr}, rg.spacing());
    }
    SpaceTimeField dt_dr_u(tg, rg), dt_ell_u(tg, rg), dt_f(tg, rg);
    {
        std::vector<double> col(nt);
        for (std::size_t j = 0; j < nr; ++j) {
            for (std::size_t i = 0; i < nt; ++i) col[i] = dr_u[i][j];
            auto d = derivative_uniform({col.data(), nt}, dt);
            for (std::size_t i = 0; i < nt; ++i) dt_dr_u.at(i, j) = d[i];
            for (std::size_t i = 0; i < nt; ++i)
                col[i] = d2_u[i][j] + (dimension - 1) / rg.node(j) * dr_u[i][j];
            d = derivative_uniform({col.data(), nt}, dt);
            for (std::size_t i = 0; i < nt; ++i) dt_ell_u.at(i, j) = d[i];
            for (std::size_t i = 0; i < nt; ++i) col[i] = f_tilde.at(i, j);
            d = derivative_uniform({col.data(), nt}, dt);
            for (std::size_t i = 0; i < nt; ++i) dt_f.at(i, j) = d[i];
        }
    }
    double worst = 0.0;
    for (std::size_t m = 0; m < nt; ++m)
        for (std::size_t j = 0; j < nr; ++j) {
            double conv = 0.0;
            for (std::size_t s = 0; s <= m && m > 0; ++s) {
                const double w = (s == 0 || s == m) ? 0.5 * dt : dt;
                conv += w * (dr_k[m - s][j] * dt_dr_u.at(s, j) +
                             k.at(m - s, j) * dt_ell_u.at(s, j));
            }
            const double local = dr_k[m][j] * dr_u[0][j] +
                                 k.at(m, j) * (d2_u[0][j] +
                                               (dimension - 1) / rg.node(j) * dr_u[0][j]);
            worst = std::max(worst, std::abs(conv + local - dt_f.at(m, j)));
        }
    return worst;
}

IdentifyResult identify(const RadialInverseInput& input, int dimension,
                        const IdentifyOptions& options) {
    RadialInverseInput in = input;
    in.m_bound = options.m_bound;
    const AssembledCoefficients ac = assemble(in, dimension);
    const Eigen::MatrixXd G = green_function(ac);
    const auto G1 = g1_kernel(ac, G);

    // w(t, .) = (I + G) f~_1(t, .), slice by slice.
    SpaceTimeField w(ac.tgrid, ac.rgrid);
    for (std::size_t m = 0; m < ac.tgrid.size(); ++m)
        w.set_slice(m, auxiliary_solve(ac.source.slice(m), G, ac.rgrid));

    VolterraReport rep;
    const SpaceTimeField q = volterra_solve(w, ac.beta, G1, options.volterra, &rep);
    Reconstruction rec = reconstruct_k(q, in.g, ac.kappa, ac.lambda, ac.lambda_tail);

    IdentifyResult res{std::move(rec.k), q, std::move(rec.h), {}};
    res.diagnostics.kappa = ac.kappa;
    res.diagnostics.kappa1 = ac.kappa1;
    res.diagnostics.parts_identity_residual = parts_identity_residual(ac);
    res.diagnostics.green_bound_constant = green_bound_constant(ac);
    res.diagnostics.constraint_residual = rec.constraint_residual;
    res.diagnostics.method =
        options.volterra.method == VolterraMethod::TimeMarch ? "time_march" : "picard";
    res.diagnostics.volterra = rep;
    return res;
}

}  // namespace memk
