#include "memkern/functionals.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "memkern/calculus.hpp"
#include "memkern/errors.hpp"

namespace memk {

std::vector<double> MeasurementSpec::sample_lambda(
    const AngularGrid& ag, const std::function<double(double, double)>& f) {
    const std::size_t nth = ag.dimension() == 3 ? ag.n_theta() : 1;
    std::vector<double> out(ag.n_phi() * nth);
    for (std::size_t m = 0; m < ag.n_phi(); ++m)
        for (std::size_t l = 0; l < nth; ++l)
            out[m * nth + l] = f(ag.phi(m), ag.dimension() == 3 ? ag.theta(l) : 0.0);
    return out;
}

void MeasurementSpec::check_psi_dirichlet(const std::string& bc, double tol) const {
    if (psi_kind != PsiKind::Volume || !psi) return;
    const AngularField& p = *psi;
    const double scale = std::max(1.0, sup_norm(p));
    auto check_shell = [&](std::size_t ir, char cond, const char* name) {
        if (cond != 'D') return;
        for (std::size_t m = 0; m < p.n_phi(); ++m)
            for (std::size_t l = 0; l < p.n_theta(); ++l)
                if (std::abs(p.at(ir, m, l)) > tol * scale)
                    throw AdmissibilityError(std::string("psi must vanish on the ") + name +
                                             " shell carrying a Dirichlet condition");
    };
    // bc convention: first letter outer shell, second letter inner shell.
    check_shell(p.n_r() - 1, bc.size() > 0 ? bc[0] : 'D', "outer");
    check_shell(0, bc.size() > 1 ? bc[1] : 'D', "inner");
}

std::vector<double> phi_apply(const std::vector<double>& lambda, const AngularField& v) {
    const AngularGrid& ag = v.agrid();
    const std::size_t nth = v.n_theta();
    if (lambda.size() != ag.n_phi() * nth)
        throw ShapeError("phi_apply: lambda length does not match the angular grid");
    std::vector<double> out(v.n_r(), 0.0);
    for (std::size_t i = 0; i < v.n_r(); ++i) {
        double s = 0.0;
        if (v.dimension() == 2) {
            for (std::size_t m = 0; m < ag.n_phi(); ++m) s += lambda[m] * v.at(i, m, 0);
            s *= ag.phi_weight();
        } else {
            for (std::size_t l = 0; l < nth; ++l) {
                double sl = 0.0;
                for (std::size_t m = 0; m < ag.n_phi(); ++m)
                    sl += lambda[m * nth + l] * v.at(i, m, l);
                s += ag.theta_sin_weights()[l] * sl * ag.phi_weight();
            }
        }
        out[i] = s;
    }
    return out;
}

std::vector<double> radial_weights(const RadialGrid& grid) {
    const std::size_t n = grid.size();
    const double h = grid.spacing();
    std::vector<double> w(n);
    if (n % 2 == 1) {
        w[0] = w[n - 1] = h / 3.0;
        for (std::size_t i = 1; i + 1 < n; ++i) w[i] = (i % 2 == 1 ? 4.0 : 2.0) * h / 3.0;
    } else {
        w.assign(n, h);
        w[0] = w[n - 1] = 0.5 * h;
    }
    return w;
}

double domain_measure(const RadialGrid& grid, int dimension) {
    const double r1 = grid.r_min(), r2 = grid.r_max();
    if (dimension == 3) return 4.0 * std::numbers::pi * (r2 * r2 * r2 - r1 * r1 * r1) / 3.0;
    return std::numbers::pi * (r2 * r2 - r1 * r1);
}

double psi_apply(const MeasurementSpec& spec, const AngularField& v) {
    const RadialGrid& rg = v.rgrid();
    const auto wq = radial_weights(rg);
    if (spec.psi_kind == MeasurementSpec::PsiKind::CompositePhi) {
        if (spec.mu.size() != rg.size())
            throw ShapeError("psi_apply: composite weight length mismatch");
        const auto phi = phi_apply(spec.lambda, v);
        double s = 0.0;
        for (std::size_t i = 0; i < rg.size(); ++i) s += wq[i] * spec.mu[i] * phi[i];
        return s;
    }
    if (!spec.psi) throw ShapeError("psi_apply: psi weight missing");
    const AngularField& p = *spec.psi;
    if (p.raw().size() != v.raw().size()) throw ShapeError("psi_apply: psi/field shape mismatch");
    const AngularGrid& ag = v.agrid();
    double total = 0.0;
    for (std::size_t i = 0; i < rg.size(); ++i) {
        const double r = rg.node(i);
        double s = 0.0;
        if (v.dimension() == 2) {
            for (std::size_t m = 0; m < ag.n_phi(); ++m) s += p.at(i, m, 0) * v.at(i, m, 0);
            s *= ag.phi_weight() * r;
        } else {
            for (std::size_t l = 0; l < v.n_theta(); ++l) {
                double sl = 0.0;
                for (std::size_t m = 0; m < ag.n_phi(); ++m)
                    sl += p.at(i, m, l) * v.at(i, m, l);
                s += ag.theta_sin_weights()[l] * sl * ag.phi_weight();
            }
            s *= r * r;
        }
        total += wq[i] * s;
    }
    return total;
}

void spherical_partials(const AngularField& u, AngularField& du_dr, AngularField& du_dphi,
                        AngularField* du_dtheta) {
    const RadialGrid& rg = u.rgrid();
    const AngularGrid& ag = u.agrid();
    const std::size_t nr = u.n_r(), np = u.n_phi(), nt = u.n_theta();
    std::vector<double> tmp(std::max({nr, np, nt}));
    for (std::size_t m = 0; m < np; ++m)
        for (std::size_t l = 0; l < nt; ++l) {
            for (std::size_t i = 0; i < nr; ++i) tmp[i] = u.at(i, m, l);
            const auto d = derivative_uniform({tmp.data(), nr}, rg.spacing());
            for (std::size_t i = 0; i < nr; ++i) du_dr.at(i, m, l) = d[i];
        }
    for (std::size_t i = 0; i < nr; ++i)
        for (std::size_t l = 0; l < nt; ++l) {
            for (std::size_t m = 0; m < np; ++m) tmp[m] = u.at(i, m, l);
            const auto d = derivative_periodic({tmp.data(), np}, ag.phi_weight());
            for (std::size_t m = 0; m < np; ++m) du_dphi.at(i, m, l) = d[m];
        }
    if (du_dtheta != nullptr && u.dimension() == 3) {
        for (std::size_t i = 0; i < nr; ++i)
            for (std::size_t m = 0; m < np; ++m) {
                for (std::size_t l = 0; l < nt; ++l) tmp[l] = u.at(i, m, l);
                const auto d =
                    derivative_nonuniform({tmp.data(), nt}, {ag.theta_nodes().data(), nt});
                for (std::size_t l = 0; l < nt; ++l) du_dtheta->at(i, m, l) = d[l];
            }
    }
}

namespace {

// d/dphi of a per-(phi,theta) table, periodic in phi.
std::vector<double> dphi_table(const std::vector<double>& table, const AngularGrid& ag,
                               std::size_t nth) {
    const std::size_t np = ag.n_phi();
    std::vector<double> out(np * nth);
    std::vector<double> tmp(np);
    for (std::size_t l = 0; l < nth; ++l) {
        for (std::size_t m = 0; m < np; ++m) tmp[m] = table[m * nth + l];
        const auto d = derivative_periodic({tmp.data(), np}, ag.phi_weight());
        for (std::size_t m = 0; m < np; ++m) out[m * nth + l] = d[m];
    }
    return out;
}

// d/dtheta of a per-(phi,theta) table.
std::vector<double> dtheta_table(const std::vector<double>& table, const AngularGrid& ag) {
    const std::size_t np = ag.n_phi(), nth = ag.n_theta();
    std::vector<double> out(np * nth);
    std::vector<double> tmp(nth);
    for (std::size_t m = 0; m < np; ++m) {
        for (std::size_t l = 0; l < nth; ++l) tmp[l] = table[m * nth + l];
        const auto d = derivative_nonuniform({tmp.data(), nth}, {ag.theta_nodes().data(), nth});
        for (std::size_t l = 0; l < nth; ++l) out[m * nth + l] = d[l];
    }
    return out;
}

}  // namespace

std::vector<double> phi1_apply(const std::vector<double>& lambda, const CoefficientSet& coeffs,
                               const AngularField& w) {
    const RadialGrid& rg = w.rgrid();
    const AngularGrid& ag = w.agrid();
    const std::size_t nr = w.n_r(), np = w.n_phi(), nth = w.n_theta();
    if (lambda.size() != np * nth) throw ShapeError("phi1_apply: lambda length mismatch");
    const bool is3d = w.dimension() == 3;

    AngularField wr(rg, ag), wp(rg, ag), wt(rg, ag);
    spherical_partials(w, wr, wp, is3d ? &wt : nullptr);

    // lambda-product tables, independent of r.
    std::vector<double> lam_sin(np * nth), lam_cos(np * nth);
    for (std::size_t m = 0; m < np; ++m)
        for (std::size_t l = 0; l < nth; ++l) {
            lam_sin[m * nth + l] = lambda[m * nth + l] * std::sin(ag.phi(m));
            lam_cos[m * nth + l] = lambda[m * nth + l] * std::cos(ag.phi(m));
        }
    const auto Ps = dphi_table(lam_sin, ag, nth);  // D_phi [lambda sin phi]
    const auto Pc = dphi_table(lam_cos, ag, nth);  // D_phi [lambda cos phi]
    std::vector<double> T2, T1;
    if (is3d) {
        std::vector<double> l_sin2(np * nth), l_s2t(np * nth);
        for (std::size_t m = 0; m < np; ++m)
            for (std::size_t l = 0; l < nth; ++l) {
                const double st = std::sin(ag.theta(l));
                l_sin2[m * nth + l] = lambda[m * nth + l] * st * st;
                l_s2t[m * nth + l] = lambda[m * nth + l] * std::sin(2.0 * ag.theta(l));
            }
        T2 = dtheta_table(l_sin2, ag);  // D_theta [lambda sin^2 theta]
        T1 = dtheta_table(l_s2t, ag);   // D_theta [lambda sin 2theta]
    }

    // lambda k_2 and lambda k_3 sin(theta) products and their derivatives.
    AngularField Aphi(rg, ag), Atheta(rg, ag);
    {
        AngularField lk2(rg, ag), lk3s(rg, ag);
        for (std::size_t i = 0; i < nr; ++i)
            for (std::size_t m = 0; m < np; ++m)
                for (std::size_t l = 0; l < nth; ++l) {
                    const SphericalRep& rep = coeffs.rep_at(i, m, l);
                    lk2.at(i, m, l) = lambda[m * nth + l] * rep.k[1];
                    if (is3d)
                        lk3s.at(i, m, l) =
                            lambda[m * nth + l] * rep.k[2] * std::sin(ag.theta(l));
                }
        // Only the phi derivative of lk2 and theta derivative of lk3s are used.
        std::vector<double> tmp(std::max({nr, np, nth}));
        for (std::size_t i = 0; i < nr; ++i)
            for (std::size_t l = 0; l < nth; ++l) {
                for (std::size_t m = 0; m < np; ++m) tmp[m] = lk2.at(i, m, l);
                const auto d = derivative_periodic({tmp.data(), np}, ag.phi_weight());
                for (std::size_t m = 0; m < np; ++m) Aphi.at(i, m, l) = d[m];
            }
        if (is3d)
            for (std::size_t i = 0; i < nr; ++i)
                for (std::size_t m = 0; m < np; ++m) {
                    for (std::size_t l = 0; l < nth; ++l) tmp[l] = lk3s.at(i, m, l);
                    const auto d = derivative_nonuniform({tmp.data(), nth},
                                                         {ag.theta_nodes().data(), nth});
                    for (std::size_t l = 0; l < nth; ++l) Atheta.at(i, m, l) = d[l];
                }
    }
    AngularField DrAphi(rg, ag), DrAtheta(rg, ag);
    {
        std::vector<double> tmp(nr);
        for (std::size_t m = 0; m < np; ++m)
            for (std::size_t l = 0; l < nth; ++l) {
                for (std::size_t i = 0; i < nr; ++i) tmp[i] = Aphi.at(i, m, l);
                auto d = derivative_uniform({tmp.data(), nr}, rg.spacing());
                for (std::size_t i = 0; i < nr; ++i) DrAphi.at(i, m, l) = d[i];
                if (is3d) {
                    for (std::size_t i = 0; i < nr; ++i) tmp[i] = Atheta.at(i, m, l);
                    d = derivative_uniform({tmp.data(), nr}, rg.spacing());
                    for (std::size_t i = 0; i < nr; ++i) DrAtheta.at(i, m, l) = d[i];
                }
            }
    }

    const double wphi = ag.phi_weight();
    std::vector<double> out(nr, 0.0);
    for (std::size_t i = 0; i < nr; ++i) {
        const double r = rg.node(i);
        double acc = 0.0;
        for (std::size_t l = 0; l < nth; ++l) {
            const double wth = is3d ? ag.theta_plain_weights()[l] : 1.0;
            const double st = is3d ? std::sin(ag.theta(l)) : 1.0;
            double row = 0.0;
            for (std::size_t m = 0; m < np; ++m) {
                const std::size_t a = m * nth + l;
                const SphericalRep& rep = coeffs.rep_at(i, m, l);
                const double t2 = is3d ? T2[a] : 0.0;
                const double t1 = is3d ? T1[a] : 0.0;
                const double aphi = Aphi.at(i, m, l);
                const double atheta = is3d ? Atheta.at(i, m, l) : 0.0;

                double term = w.at(i, m, l) / r *
                              (aphi / r + atheta / r - DrAphi.at(i, m, l) -
                               (is3d ? DrAtheta.at(i, m, l) : 0.0));
                term += wr.at(i, m, l) *
                        (rep.f[0] * Ps[a] / r - rep.g[0] * Pc[a] / r + rep.h[0] * t2 / r -
                         rep.l[0] * t1 / (2.0 * r) - aphi / r - atheta / r);
                term += wp.at(i, m, l) / (r * st) *
                        (rep.f[1] * Ps[a] / r - rep.g[1] * Pc[a] / r + rep.h[1] * t2 / r -
                         rep.l[1] * t1 / (2.0 * r));
                if (is3d)
                    term += wt.at(i, m, l) / r *
                            (rep.f[2] * Ps[a] / r - rep.g[2] * Pc[a] / r + rep.h[2] * t2 / r -
                             rep.l[2] * t1 / (2.0 * r));
                row += term;
            }
            acc += wth * row;
        }
        out[i] = acc * wphi;
    }
    return out;
}

double psi1_apply(const MeasurementSpec& spec, const CoefficientSet& coeffs,
                  const AngularField& w) {
    if (spec.psi_kind != MeasurementSpec::PsiKind::Volume || !spec.psi)
        throw ShapeError("psi1_apply: needs a volume psi weight");
    const AngularField& psi = *spec.psi;
    const RadialGrid& rg = w.rgrid();
    const AngularGrid& ag = w.agrid();
    const std::size_t nr = w.n_r(), np = w.n_phi(), nth = w.n_theta();
    if (psi.raw().size() != w.raw().size()) throw ShapeError("psi1_apply: psi shape mismatch");
    const bool is3d = w.dimension() == 3;

    AngularField wr(rg, ag), wp(rg, ag), wt(rg, ag);
    spherical_partials(w, wr, wp, is3d ? &wt : nullptr);

    // psi-product fields and their derivatives.
    AngularField psi_sin(rg, ag), psi_cos(rg, ag), rpow_psi(rg, ag);
    AngularField psi_sin2(rg, ag), psi_s2t(rg, ag);
    for (std::size_t i = 0; i < nr; ++i) {
        const double r = rg.node(i);
        const double rpow = is3d ? r * r : r;
        for (std::size_t m = 0; m < np; ++m) {
            const double sp = std::sin(ag.phi(m)), cp = std::cos(ag.phi(m));
            for (std::size_t l = 0; l < nth; ++l) {
                const double p = psi.at(i, m, l);
                psi_sin.at(i, m, l) = p * sp;
                psi_cos.at(i, m, l) = p * cp;
                rpow_psi.at(i, m, l) = rpow * p;
                if (is3d) {
                    const double st = std::sin(ag.theta(l));
                    psi_sin2.at(i, m, l) = p * st * st;
                    psi_s2t.at(i, m, l) = p * std::sin(2.0 * ag.theta(l));
                }
            }
        }
    }
    AngularField Qs(rg, ag), Qc(rg, ag), Q2(rg, ag), Q1(rg, ag), DrP(rg, ag);
    {
        AngularField scratch_r(rg, ag), scratch_t(rg, ag);
        spherical_partials(psi_sin, scratch_r, Qs, nullptr);
        spherical_partials(psi_cos, scratch_r, Qc, nullptr);
        spherical_partials(rpow_psi, DrP, scratch_t, nullptr);
        if (is3d) {
            AngularField dphi_unused(rg, ag);
            spherical_partials(psi_sin2, scratch_r, dphi_unused, &Q2);
            spherical_partials(psi_s2t, scratch_r, dphi_unused, &Q1);
        }
    }

    const auto wq = radial_weights(rg);
    const double wphi = ag.phi_weight();
    double total = 0.0;
    for (std::size_t i = 0; i < nr; ++i) {
        const double r = rg.node(i);
        double acc = 0.0;
        for (std::size_t l = 0; l < nth; ++l) {
            const double wth = is3d ? ag.theta_plain_weights()[l] : 1.0;
            const double st = is3d ? std::sin(ag.theta(l)) : 1.0;
            double row = 0.0;
            for (std::size_t m = 0; m < np; ++m) {
                const SphericalRep& rep = coeffs.rep_at(i, m, l);
                const double drp = DrP.at(i, m, l);
                const double qs = Qs.at(i, m, l), qc = Qc.at(i, m, l);
                const double q2 = is3d ? Q2.at(i, m, l) : 0.0;
                const double q1 = is3d ? Q1.at(i, m, l) : 0.0;

                double brace1, brace2, brace3 = 0.0;
                if (is3d) {
                    brace1 = rep.k[0] * drp * st / r - rep.f[0] * qs + rep.g[0] * qc -
                             rep.h[0] * q2 + rep.l[0] * q1 / 2.0;
                    brace2 = rep.k[1] * drp * st / r - rep.f[1] * qs + rep.g[1] * qc -
                             rep.h[1] * q2 + rep.l[1] * q1 / 2.0;
                    brace3 = rep.k[2] * drp * st / r - rep.f[2] * qs + rep.g[2] * qc -
                             rep.h[2] * q2 + rep.l[2] * q1 / 2.0;
                } else {
                    brace1 = rep.k[0] * drp - rep.f[0] * qs + rep.g[0] * qc;
                    brace2 = rep.k[1] * drp - rep.f[1] * qs + rep.g[1] * qc;
                }
                double term = wr.at(i, m, l) * brace1;
                term += wp.at(i, m, l) / (r * st) * brace2;
                if (is3d) term += wt.at(i, m, l) / r * brace3;
                row += term;
            }
            acc += wth * row;
        }
        total += wq[i] * (is3d ? r : 1.0) * acc * wphi;
    }
    return -total;
}

std::vector<double> e_apply(const std::vector<double>& q, const RadialGrid& grid) {
    return cumulative_from_right({q.data(), q.size()}, grid);
}

SpaceTimeField e_apply(const SpaceTimeField& q) {
    SpaceTimeField out(q.tgrid, q.rgrid);
    for (std::size_t it = 0; it < q.tgrid.size(); ++it)
        out.set_slice(it, e_apply(q.slice(it), q.rgrid));
    return out;
}

U0Data U0Data::build(const CoefficientSet& coeffs, const std::vector<double>& lambda,
                     const AngularField& u0, double m_min) {
    return from_profiles(u0.rgrid(), phi_apply(lambda, coeffs.apply_b(u0)),
                         phi_apply(lambda, coeffs.apply_c(u0)), m_min);
}

U0Data U0Data::from_profiles(const RadialGrid& grid, std::vector<double> phi_Bu0,
                             std::vector<double> phi_Cu0, double m_min) {
    if (phi_Bu0.size() != grid.size() || phi_Cu0.size() != grid.size())
        throw ShapeError("U0Data: profile length mismatch");
    U0Data u0{grid, std::move(phi_Bu0), std::move(phi_Cu0), {}, {}, {}, m_min};
    for (std::size_t i = 0; i < grid.size(); ++i)
        if (std::abs(u0.phi_Cu0[i]) < m_min)
            throw DegeneracyError("|Phi[C u0]| below the admitted bound at node r=" +
                                  std::to_string(grid.node(i)));
    u0.ratio.resize(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) u0.ratio[i] = u0.phi_Bu0[i] / u0.phi_Cu0[i];
    u0.exponent = cumulative_from_left({u0.ratio.data(), u0.ratio.size()}, grid);
    u0.exp_to_outer.resize(grid.size());
    const double xmax = u0.exponent.back();
    for (std::size_t i = 0; i < grid.size(); ++i)
        u0.exp_to_outer[i] = std::exp(xmax - u0.exponent[i]);
    return u0;
}

std::vector<double> l_apply(const std::vector<double>& g, const U0Data& u0) {
    const std::size_t n = u0.grid.size();
    if (g.size() != n) throw ShapeError("l_apply: profile length mismatch");
    const double h = u0.grid.spacing();
    // Product integration against the piecewise-linear exponent: each cell
    // contributes mean(g/PhiC) * integral of exp(X) over the cell, which
    // telescopes exactly when g/PhiC equals the ratio itself.
    std::vector<double> out(n, 0.0);
    for (std::size_t j = n - 1; j-- > 0;) {
        const double rho = 0.5 * (u0.ratio[j] + u0.ratio[j + 1]);
        const double delta = h * rho;  // equals X_{j+1} - X_j by construction
        double cell_exp;               // integral of exp(X(eta) - X_j) over the cell
        if (std::abs(delta) > 1e-12)
            cell_exp = std::expm1(delta) / rho;
        else
            cell_exp = h * (1.0 + 0.5 * delta + delta * delta / 6.0);
        const double gbar = 0.5 * (g[j] / u0.phi_Cu0[j] + g[j + 1] / u0.phi_Cu0[j + 1]);
        out[j] = gbar * cell_exp + std::exp(delta) * out[j + 1];
    }
    return out;
}

std::vector<double> J3Operator::apply(const std::vector<double>& g) const {
    const auto lg = l_apply(g, *u0);
    std::vector<double> out(g.size());
    for (std::size_t i = 0; i < g.size(); ++i)
        out[i] = (g[i] + u0->phi_Bu0[i] * lg[i]) / u0->phi_Cu0[i];
    return out;
}

AngularField j_field(const U0Data& u0, const AngularField& Bu0, const AngularField& Cu0) {
    AngularField j = Bu0 - scale_by_radial(u0.ratio, Cu0);
    return scale_by_radial(u0.exp_to_outer, j);
}

JQuantities j_quantities(const U0Data& u0, const MeasurementSpec& spec, const AngularField& Bu0,
                         const AngularField& Cu0) {
    JQuantities out;
    out.j0.resize(u0.grid.size());
    for (std::size_t i = 0; i < u0.grid.size(); ++i) {
        out.j0[i] = std::abs(u0.phi_Cu0[i]);
        if (out.j0[i] < u0.m_bound)
            throw DegeneracyError("measurement degenerates at node r=" +
                                  std::to_string(u0.grid.node(i)));
    }
    const AngularField j = j_field(u0, Bu0, Cu0);
    out.j1 = psi_apply(spec, j);
    const double scale =
        sup_norm(j) * domain_measure(u0.grid, Bu0.dimension());
    if (std::abs(out.j1) < 1e-10 * std::max(scale, 1e-300))
        throw SolvabilityError("Psi[J(u0)] vanishes: Psi cannot separate the kernel data "
                               "(is Psi a composite of Phi?)");
    out.j2.resize(u0.grid.size());
    for (std::size_t i = 0; i < u0.grid.size(); ++i)
        out.j2[i] = -u0.ratio[i] * u0.exp_to_outer[i];
    out.j3 = J3Operator{&u0};
    return out;
}

}  // namespace memk
