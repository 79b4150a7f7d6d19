#include "memkern/coefficients.hpp"

#include <cmath>
#include <string>

#include "memkern/calculus.hpp"
#include "memkern/errors.hpp"

namespace memk {

namespace {

double ipow(double x, int n) {
    double r = 1.0;
    for (int i = 0; i < n; ++i) r *= x;
    return r;
}

// One term of the polynomial series in 3D. The entries realise the
// sum-of-squares expansion
//   (x1 x2 x3)^{2n-2} [ (xi1 x2 x3 - x1 xi2 x3)^2 + (x1 xi2 x3 - x1 x2 xi3)^2
//                       + (x1 x2 xi3 - xi1 x2 x3)^2 ],
// which also annihilates the radial trace.
void series_term_3d(const double* x, int n, double* out) {
    const double p1 = ipow(x[0], 2 * n - 2), p2 = ipow(x[1], 2 * n - 2),
                 p3 = ipow(x[2], 2 * n - 2);
    const double q1 = ipow(x[0], 2 * n), q2 = ipow(x[1], 2 * n), q3 = ipow(x[2], 2 * n);
    const double o1 = ipow(x[0], 2 * n - 1), o2 = ipow(x[1], 2 * n - 1),
                 o3 = ipow(x[2], 2 * n - 1);
    out[0] = 2.0 * p1 * q2 * q3;
    out[4] = 2.0 * q1 * p2 * q3;
    out[8] = 2.0 * q1 * q2 * p3;
    out[1] = out[3] = -o1 * o2 * q3;
    out[2] = out[6] = -o1 * q2 * o3;
    out[5] = out[7] = -q1 * o2 * o3;
}

// Planar analogue built from 2 (x1 x2)^{2n-2} (xi1 x2 - x1 xi2)^2.
void series_term_2d(const double* x, int n, double* out) {
    const double p1 = ipow(x[0], 2 * n - 2), p2 = ipow(x[1], 2 * n - 2);
    const double q1 = ipow(x[0], 2 * n), q2 = ipow(x[1], 2 * n);
    const double o1 = ipow(x[0], 2 * n - 1), o2 = ipow(x[1], 2 * n - 1);
    out[0] = 2.0 * p1 * q2;
    out[3] = 2.0 * q1 * p2;
    out[1] = out[2] = -2.0 * o1 * o2;
}

double norm3(const double* x, int dim) {
    double s = 0.0;
    for (int j = 0; j < dim; ++j) s += x[j] * x[j];
    return std::sqrt(s);
}

}  // namespace

CoefficientSpec CoefficientSpec::isotropic(int dimension, double value) {
    CoefficientSpec s;
    s.dimension = dimension;
    s.family = CoefficientFamily::RadialABCD;
    s.a = [value](double) { return value; };
    s.b = [](double) { return 0.0; };
    s.d = [](double) { return 0.0; };
    s.c = [](const double*) { return 0.0; };
    return s;
}

CoefficientSet::CoefficientSet(const CoefficientSpec& spec, const RadialGrid& rg,
                               const AngularGrid& ag)
    : spec_(spec), rgrid_(rg), agrid_(ag), nth_(ag.dimension() == 3 ? ag.n_theta() : 1) {
    if (spec_.dimension != ag.dimension())
        throw ShapeError("CoefficientSet: spec dimension does not match the angular grid");
    validate();

    rep_.resize(rg.size() * ag.n_phi() * nth_);
    k1_.assign(rg.size(), 0.0);
    for (std::size_t ir = 0; ir < rg.size(); ++ir) {
        for (std::size_t m = 0; m < ag.n_phi(); ++m)
            for (std::size_t l = 0; l < nth_; ++l)
                rep_[(ir * ag.n_phi() + m) * nth_ + l] = spherical_rep(
                    rg.node(ir), ag.phi(m), spec_.dimension == 3 ? ag.theta(l) : 0.0);
        k1_[ir] = rep_[(ir * ag.n_phi()) * nth_].k[0];
    }
}

void CoefficientSet::validate() const {
    const bool needs_abcd = spec_.family == CoefficientFamily::RadialABCD ||
                            spec_.family == CoefficientFamily::Sum;
    const bool needs_series = spec_.family == CoefficientFamily::PolynomialSeries ||
                              spec_.family == CoefficientFamily::Sum;
    if (spec_.family == CoefficientFamily::Custom) {
        if (!spec_.unchecked)
            throw AdmissibilityError(
                "custom coefficient tensors are accepted only with unchecked=true");
        if (!spec_.custom_tensor)
            throw AdmissibilityError("custom family without a tensor closure");
        return;
    }
    if (needs_abcd) {
        if (!spec_.a || !spec_.b || !spec_.d || !spec_.c)
            throw AdmissibilityError("RadialABCD family needs a, b, d and c");
        for (std::size_t i = 0; i < rgrid_.size(); ++i) {
            const double r = rgrid_.node(i);
            const double av = spec_.a(r);
            if (!(av > 0.0))
                throw AdmissibilityError("a(r) must be positive, violated at node r=" +
                                         std::to_string(r));
            const double margin =
                av - std::max(spec_.b(r), 0.0) - std::max(-spec_.d(r), 0.0);
            if (!(margin > 0.0))
                throw AdmissibilityError("a - b^+ - d^- must be positive, violated at node r=" +
                                         std::to_string(r));
        }
    }
    if (needs_series && spec_.series_weights.empty())
        throw AdmissibilityError("PolynomialSeries family without weights");
    // Pointwise sign checks on the product grid.
    AngularField probe(rgrid_, agrid_);
    for (std::size_t ir = 0; ir < rgrid_.size(); ++ir)
        for (std::size_t m = 0; m < agrid_.n_phi(); ++m)
            for (std::size_t l = 0; l < nth_; ++l) {
                double x[3];
                probe.node_xyz(ir, m, l, x);
                if (needs_abcd && spec_.c(x) < 0.0)
                    throw AdmissibilityError("c(x) must be non-negative, violated at r=" +
                                             std::to_string(rgrid_.node(ir)));
                if (needs_series)
                    for (const auto& dn : spec_.series_weights)
                        if (dn(x) < 0.0)
                            throw AdmissibilityError(
                                "series weight must be non-negative, violated at r=" +
                                std::to_string(rgrid_.node(ir)));
            }
}

void CoefficientSet::tensor_at(const double* x, double* out) const {
    const int dim = spec_.dimension;
    const int nn = dim * dim;
    for (int i = 0; i < nn; ++i) out[i] = 0.0;

    if (spec_.family == CoefficientFamily::Custom) {
        spec_.custom_tensor(x, out);
        return;
    }

    const double r2 = [&] {
        double s = 0.0;
        for (int j = 0; j < dim; ++j) s += x[j] * x[j];
        return s;
    }();
    const double r = std::sqrt(r2);

    if (spec_.family == CoefficientFamily::RadialABCD ||
        spec_.family == CoefficientFamily::Sum) {
        const double av = spec_.a(r), bv = spec_.b(r), dv = spec_.d(r), cv = spec_.c(x);
        for (int j = 0; j < dim; ++j) {
            out[j * dim + j] =
                av + (r2 - x[j] * x[j]) * (cv - bv) / r2 + x[j] * x[j] * dv / r2;
            for (int k = j + 1; k < dim; ++k) {
                const double off = x[j] * x[k] * (bv - cv + dv) / r2;
                out[j * dim + k] = off;
                out[k * dim + j] = off;
            }
        }
    }
    if (spec_.family == CoefficientFamily::PolynomialSeries ||
        spec_.family == CoefficientFamily::Sum) {
        double term[9];
        for (std::size_t n = 0; n < spec_.series_weights.size(); ++n) {
            const double w = spec_.series_weights[n](x);
            if (dim == 3)
                series_term_3d(x, static_cast<int>(n) + 1, term);
            else
                series_term_2d(x, static_cast<int>(n) + 1, term);
            for (int i = 0; i < nn; ++i) out[i] += w * term[i];
        }
    }
}

double CoefficientSet::radial_trace(const double* x) const {
    const int dim = spec_.dimension;
    double t[9];
    tensor_at(x, t);
    double s = 0.0, r2 = 0.0;
    for (int j = 0; j < dim; ++j) {
        r2 += x[j] * x[j];
        for (int k = 0; k < dim; ++k) s += x[j] * x[k] * t[j * dim + k];
    }
    return s / r2;
}

SphericalRep CoefficientSet::spherical_rep(double r, double phi, double theta) const {
    SphericalRep rep;
    const double cp = std::cos(phi), sp = std::sin(phi);
    if (spec_.dimension == 2) {
        const double x[3] = {r * cp, r * sp, 0.0};
        double t[4];
        tensor_at(x, t);
        rep.f[0] = t[0] * cp + t[1] * sp;
        rep.f[1] = t[1] * cp - t[0] * sp;
        rep.g[0] = t[2] * cp + t[3] * sp;
        rep.g[1] = t[3] * cp - t[2] * sp;
        for (int j = 0; j < 2; ++j) rep.k[j] = rep.f[j] * cp + rep.g[j] * sp;
        return rep;
    }
    const double ct = std::cos(theta), st = std::sin(theta);
    const double x[3] = {r * cp * st, r * sp * st, r * ct};
    double t[9];
    tensor_at(x, t);
    const double* a1 = t;
    const double* a2 = t + 3;
    const double* a3 = t + 6;
    rep.f[0] = a1[0] * cp * st + a1[1] * sp * st + a1[2] * ct;
    rep.f[1] = a1[1] * cp - a1[0] * sp;
    rep.f[2] = a1[0] * cp * ct + a1[1] * sp * ct - a1[2] * st;
    rep.g[0] = a2[0] * cp * st + a2[1] * sp * st + a2[2] * ct;
    rep.g[1] = a2[1] * cp - a2[0] * sp;
    rep.g[2] = a2[0] * cp * ct + a2[1] * sp * ct - a2[2] * st;
    rep.h[0] = a3[0] * cp * st + a3[1] * sp * st + a3[2] * ct;
    rep.h[1] = a3[1] * cp - a3[0] * sp;
    rep.h[2] = a3[0] * cp * ct + a3[1] * sp * ct - a3[2] * st;
    for (int j = 0; j < 3; ++j) {
        rep.k[j] = rep.f[j] * cp * st + rep.g[j] * sp * st + rep.h[j] * ct;
        rep.l[j] = rep.f[j] * cp + rep.g[j] * sp;
    }
    return rep;
}

std::pair<double, double> CoefficientSet::ellipticity_bounds(
    const std::vector<std::array<double, 3>>& points,
    const std::vector<std::array<double, 3>>& directions) const {
    if (points.empty() || directions.empty())
        throw ShapeError("ellipticity_bounds: empty sample set");
    const int dim = spec_.dimension;
    double lo = 1e300, hi = -1e300;
    double t[9];
    for (const auto& p : points) {
        tensor_at(p.data(), t);
        for (const auto& xi : directions) {
            double q = 0.0, n2 = 0.0;
            for (int j = 0; j < dim; ++j) {
                n2 += xi[j] * xi[j];
                for (int k = 0; k < dim; ++k) q += t[j * dim + k] * xi[j] * xi[k];
            }
            q /= n2;
            lo = std::min(lo, q);
            hi = std::max(hi, q);
        }
    }
    if (!(lo > 0.0) && !spec_.unchecked)
        throw AdmissibilityError("quadratic form is not positive definite on the sample set");
    return {lo, hi};
}

double CoefficientSet::conormal_factor(int shell) const {
    if (spec_.family != CoefficientFamily::RadialABCD)
        throw AdmissibilityError(
            "conormal factor reduces to a radial multiple for RadialABCD only");
    const double r = shell == 1 ? rgrid_.r_min() : rgrid_.r_max();
    // sum_k a_{jk} n_k = (a + d) n_j for this family; b and c cancel.
    return spec_.a(r) + spec_.d(r);
}

double CoefficientSet::b_at(const double* x, int j, int k) const {
    return spec_.b_tensor ? spec_.b_tensor(x, j, k) : 0.0;
}

double CoefficientSet::c_at(const double* x, int j) const {
    return spec_.c_vector ? spec_.c_vector(x, j) : 0.0;
}

std::array<AngularField, 3> cartesian_gradient(const AngularField& u) {
    const RadialGrid& rg = u.rgrid();
    const AngularGrid& ag = u.agrid();
    const std::size_t nr = u.n_r(), np = u.n_phi(), nt = u.n_theta();
    const bool is3d = u.dimension() == 3;

    AngularField ur(rg, ag), uphi(rg, ag), uth(rg, ag);

    std::vector<double> tmp(std::max({nr, np, nt}));
    // d/dr
    for (std::size_t m = 0; m < np; ++m)
        for (std::size_t l = 0; l < nt; ++l) {
            for (std::size_t i = 0; i < nr; ++i) tmp[i] = u.at(i, m, l);
            const auto d = derivative_uniform({tmp.data(), nr}, rg.spacing());
            for (std::size_t i = 0; i < nr; ++i) ur.at(i, m, l) = d[i];
        }
    // d/dphi (periodic)
    for (std::size_t i = 0; i < nr; ++i)
        for (std::size_t l = 0; l < nt; ++l) {
            for (std::size_t m = 0; m < np; ++m) tmp[m] = u.at(i, m, l);
            const auto d = derivative_periodic({tmp.data(), np}, ag.phi_weight());
            for (std::size_t m = 0; m < np; ++m) uphi.at(i, m, l) = d[m];
        }
    // d/dtheta (non-uniform nodes)
    if (is3d) {
        for (std::size_t i = 0; i < nr; ++i)
            for (std::size_t m = 0; m < np; ++m) {
                for (std::size_t l = 0; l < nt; ++l) tmp[l] = u.at(i, m, l);
                const auto d = derivative_nonuniform({tmp.data(), nt},
                                                     {ag.theta_nodes().data(), nt});
                for (std::size_t l = 0; l < nt; ++l) uth.at(i, m, l) = d[l];
            }
    }

    AngularField g1(rg, ag), g2(rg, ag), g3(rg, ag);
    for (std::size_t i = 0; i < nr; ++i) {
        const double r = rg.node(i);
        for (std::size_t m = 0; m < np; ++m) {
            const double cp = std::cos(ag.phi(m)), sp = std::sin(ag.phi(m));
            for (std::size_t l = 0; l < nt; ++l) {
                const double dr = ur.at(i, m, l);
                const double dp = uphi.at(i, m, l);
                if (!is3d) {
                    g1.at(i, m, l) = cp * dr - sp / r * dp;
                    g2.at(i, m, l) = sp * dr + cp / r * dp;
                } else {
                    const double th = ag.theta(l);
                    const double ct = std::cos(th), st = std::sin(th);
                    const double dt = uth.at(i, m, l);
                    g1.at(i, m, l) = cp * st * dr - sp / (r * st) * dp + cp * ct / r * dt;
                    g2.at(i, m, l) = sp * st * dr + cp / (r * st) * dp + sp * ct / r * dt;
                    g3.at(i, m, l) = ct * dr - st / r * dt;
                }
            }
        }
    }
    return {g1, g2, g3};
}

AngularField apply_divergence_form(const std::function<double(const double*, int, int)>& tensor,
                                   const AngularField& u) {
    const int dim = u.dimension();
    const auto grad = cartesian_gradient(u);

    std::array<AngularField, 3> w{AngularField(u.rgrid(), u.agrid()),
                                  AngularField(u.rgrid(), u.agrid()),
                                  AngularField(u.rgrid(), u.agrid())};
    double x[3];
    for (std::size_t i = 0; i < u.n_r(); ++i)
        for (std::size_t m = 0; m < u.n_phi(); ++m)
            for (std::size_t l = 0; l < u.n_theta(); ++l) {
                u.node_xyz(i, m, l, x);
                for (int j = 0; j < dim; ++j) {
                    double s = 0.0;
                    for (int k = 0; k < dim; ++k) s += tensor(x, j, k) * grad[k].at(i, m, l);
                    w[j].at(i, m, l) = s;
                }
            }

    AngularField out(u.rgrid(), u.agrid());
    for (int j = 0; j < dim; ++j) {
        const auto dwj = cartesian_gradient(w[j]);
        for (std::size_t p = 0; p < out.raw().size(); ++p) out.raw()[p] += dwj[j].raw()[p];
    }
    return out;
}

AngularField CoefficientSet::apply_a(const AngularField& u) const {
    return apply_divergence_form(
        [this](const double* x, int j, int k) {
            double t[9];
            tensor_at(x, t);
            return t[j * spec_.dimension + k];
        },
        u);
}

AngularField CoefficientSet::apply_b(const AngularField& u) const {
    if (!spec_.b_tensor) return AngularField(u.rgrid(), u.agrid());
    return apply_divergence_form(
        [this](const double* x, int j, int k) { return spec_.b_tensor(x, j, k); }, u);
}

AngularField CoefficientSet::apply_c(const AngularField& u) const {
    AngularField out(u.rgrid(), u.agrid());
    if (!spec_.c_vector) return out;
    const auto grad = cartesian_gradient(u);
    double x[3];
    for (std::size_t i = 0; i < u.n_r(); ++i)
        for (std::size_t m = 0; m < u.n_phi(); ++m)
            for (std::size_t l = 0; l < u.n_theta(); ++l) {
                u.node_xyz(i, m, l, x);
                double s = 0.0;
                for (int j = 0; j < spec_.dimension; ++j)
                    s += spec_.c_vector(x, j) * grad[j].at(i, m, l);
                out.at(i, m, l) = s;
            }
    return out;
}

std::vector<double> CoefficientSet::conormal_trace(const AngularField& u, int shell) const {
    const std::size_t ir = shell == 1 ? 0 : u.n_r() - 1;
    const double sign = shell == 1 ? -1.0 : 1.0;
    const double r = rgrid_.node(ir);
    const std::size_t np = u.n_phi(), nt = u.n_theta(), nr = u.n_r();
    const bool is3d = dimension() == 3;

    std::vector<double> out(np * nt, 0.0);
    std::vector<double> tmp(std::max({nr, np, nt}));
    // Radial derivative at the shell, one-sided.
    std::vector<double> dr(np * nt);
    for (std::size_t m = 0; m < np; ++m)
        for (std::size_t l = 0; l < nt; ++l) {
            for (std::size_t i = 0; i < nr; ++i) tmp[i] = u.at(i, m, l);
            dr[m * nt + l] = derivative_uniform({tmp.data(), nr}, rgrid_.spacing())[ir];
        }
    for (std::size_t m = 0; m < np; ++m) {
        for (std::size_t l = 0; l < nt; ++l) {
            const SphericalRep& rep = rep_at(ir, m, l);
            double v = rep.k[0] * dr[m * nt + l];
            // d/dphi term
            for (std::size_t mm = 0; mm < np; ++mm) tmp[mm] = u.at(ir, mm, l);
            const double dphi =
                derivative_periodic({tmp.data(), np}, agrid_.phi_weight())[m];
            if (is3d) {
                const double st = std::sin(agrid_.theta(l));
                v += rep.k[1] / (r * st) * dphi;
                for (std::size_t ll = 0; ll < nt; ++ll) tmp[ll] = u.at(ir, m, ll);
                const double dth = derivative_nonuniform(
                    {tmp.data(), nt}, {agrid_.theta_nodes().data(), nt})[l];
                v += rep.k[2] / r * dth;
            } else {
                v += rep.k[1] / r * dphi;
            }
            out[m * nt + l] = sign * v;
        }
    }
    return out;
}

}  // namespace memk
