#include "memkern/kernel_init.hpp"

#include <cmath>

#include "memkern/calculus.hpp"
#include "memkern/errors.hpp"

namespace memk {

ProblemData::ProblemData(CoefficientSet coeffs_, MeasurementSpec measurement_, AngularField u0_,
                         TimeAngularField u1_, TimeAngularField f_, SpaceTimeField g1_,
                         std::vector<double> g2_, char bc_outer_, char bc_inner_, double m_min)
    : coeffs(std::move(coeffs_)), measurement(std::move(measurement_)), u0(std::move(u0_)),
      u1(std::move(u1_)), f(std::move(f_)), g1(std::move(g1_)), g2(std::move(g2_)),
      bc_outer(bc_outer_), bc_inner(bc_inner_), dt_u1(u1.time_derivative()),
      dt_f(f.time_derivative()), Bu0(coeffs.apply_b(u0)), Cu0(coeffs.apply_c(u0)),
      v0(coeffs.apply_a(u0) + f[0] - dt_u1[0]),
      u0data(U0Data::build(coeffs, measurement.lambda, u0, m_min)) {
    if (g1.tgrid.size() != tgrid().size() || g1.rgrid.size() != rgrid().size())
        throw ShapeError("ProblemData: g1 grids do not match");
    if (g2.size() != tgrid().size()) throw ShapeError("ProblemData: g2 length mismatch");
    if (tgrid().size() < 4) throw DataError("ProblemData: need at least 4 time nodes");
    measurement.check_psi_dirichlet(bc());
}

namespace {

double relative(double resid, double scale) { return resid / std::max(1.0, scale); }

double shell_residual(const ProblemData& d, const AngularField& field, char cond, int shell) {
    if (cond == 'D') {
        const std::size_t ir = shell == 1 ? 0 : field.n_r() - 1;
        double worst = 0.0;
        for (std::size_t m = 0; m < field.n_phi(); ++m)
            for (std::size_t l = 0; l < field.n_theta(); ++l)
                worst = std::max(worst, std::abs(field.at(ir, m, l)));
        return worst;
    }
    const auto trace = d.coeffs.conormal_trace(field, shell);
    return sup_norm(trace);
}

}  // namespace

ConsistencyReport validate_consistency(const ProblemData& data, double tol) {
    ConsistencyReport rep;
    auto push = [&](const std::string& name, double resid, double scale) {
        ConditionResidual c{name, relative(resid, scale), tol, false};
        c.pass = c.residual <= tol;
        rep.conditions.push_back(c);
        rep.pass = rep.pass && c.pass;
    };

    const double u_scale = std::max(sup_norm(data.u0), sup_norm(data.u1[0]));
    const AngularField mismatch = data.u0 - data.u1[0];
    push("initial/boundary trace, outer shell",
         shell_residual(data, mismatch, data.bc_outer, 2), u_scale);
    push("initial/boundary trace, inner shell",
         shell_residual(data, mismatch, data.bc_inner, 1), u_scale);

    {
        const auto phi_u0 = phi_apply(data.measurement.lambda, data.u0);
        double worst = 0.0;
        for (std::size_t j = 0; j < phi_u0.size(); ++j)
            worst = std::max(worst, std::abs(phi_u0[j] - data.g1.at(0, j)));
        push("radial measurement of u0 matches g1(0,.)", worst, sup_norm(data.g1));
    }
    push("volume measurement of u0 matches g2(0)",
         std::abs(psi_apply(data.measurement, data.u0) - data.g2[0]), sup_norm(data.g2));

    push("v0 trace, outer shell", shell_residual(data, data.v0, data.bc_outer, 2),
         sup_norm(data.v0));
    push("v0 trace, inner shell", shell_residual(data, data.v0, data.bc_inner, 1),
         sup_norm(data.v0));

    {
        // Phi[v0] = D_t g1(0,.) - Phi[D_t u1(0,.)].
        const auto phi_v0 = phi_apply(data.measurement.lambda, data.v0);
        const auto phi_du1 = phi_apply(data.measurement.lambda, data.dt_u1[0]);
        const std::size_t nt = data.tgrid().size();
        std::vector<double> col(nt);
        double worst = 0.0, scale = 0.0;
        for (std::size_t j = 0; j < phi_v0.size(); ++j) {
            for (std::size_t i = 0; i < nt; ++i) col[i] = data.g1.at(i, j);
            const auto d = derivative_uniform({col.data(), nt}, data.tgrid().step());
            worst = std::max(worst, std::abs(phi_v0[j] - d[0] + phi_du1[j]));
            scale = std::max(scale, std::abs(d[0]));
        }
        push("radial measurement of v0 matches D_t g1(0,.)", worst, scale);
    }
    {
        const double psi_v0 = psi_apply(data.measurement, data.v0);
        const double psi_du1 = psi_apply(data.measurement, data.dt_u1[0]);
        const auto dg2 =
            derivative_uniform({data.g2.data(), data.g2.size()}, data.tgrid().step());
        push("volume measurement of v0 matches D_t g2(0)",
             std::abs(psi_v0 - dg2[0] + psi_du1), std::abs(dg2[0]));
    }
    return rep;
}

std::vector<double> apply_radial_part(const std::vector<double>& profile,
                                      const std::vector<double>& k1, const RadialGrid& grid) {
    auto d = derivative_r({profile.data(), profile.size()}, grid);
    for (std::size_t j = 0; j < d.size(); ++j) d[j] *= k1[j];
    return derivative_r({d.data(), d.size()}, grid);
}

SourceTermsT0 source_terms_t0(const ProblemData& data) {
    const std::size_t nt = data.tgrid().size();
    const std::size_t nr = data.rgrid().size();
    if (nt < 4) throw DataError("source_terms_t0: need at least 4 time nodes for D_t^2");
    const double dt = data.tgrid().step();

    SourceTermsT0 out;
    // Column-wise time derivatives of g1 at t = 0.
    std::vector<double> col(nt), dt_g1_0(nr), dt2_g1_0(nr);
    for (std::size_t j = 0; j < nr; ++j) {
        for (std::size_t i = 0; i < nt; ++i) col[i] = data.g1.at(i, j);
        dt_g1_0[j] = derivative_uniform({col.data(), nt}, dt)[0];
        dt2_g1_0[j] = second_derivative_uniform({col.data(), nt}, dt)[0];
    }
    const auto a1_dtg1 = apply_radial_part(dt_g1_0, data.coeffs.trace_profile(), data.rgrid());
    const auto phi1_du1 = phi1_apply(data.measurement.lambda, data.coeffs, data.dt_u1[0]);
    const auto phi_df = phi_apply(data.measurement.lambda, data.dt_f[0]);

    out.data_source_radial.resize(nr);
    for (std::size_t j = 0; j < nr; ++j)
        out.data_source_radial[j] = dt2_g1_0[j] - a1_dtg1[j] - phi1_du1[j] - phi_df[j];

    const double dt2_g2_0 =
        second_derivative_uniform({data.g2.data(), nt}, dt)[0];
    out.data_source_scalar = dt2_g2_0 - psi1_apply(data.measurement, data.coeffs, data.dt_u1[0]) -
                             psi_apply(data.measurement, data.dt_f[0]);

    const auto phi1_v0 = phi1_apply(data.measurement.lambda, data.coeffs, data.v0);
    out.init_ode_rhs.resize(nr);
    for (std::size_t j = 0; j < nr; ++j)
        out.init_ode_rhs[j] = out.data_source_radial[j] - phi1_v0[j];
    return out;
}

InitialKernel compute_k0(const ProblemData& data) {
    const auto jq = j_quantities(data.u0data, data.measurement, data.Bu0, data.Cu0);
    InitialKernel out;
    out.sources = source_terms_t0(data);

    const auto& l1 = out.sources.init_ode_rhs;
    const auto Ll1 = l_apply(l1, data.u0data);
    const auto j3_l1 = jq.j3.apply(l1);

    // Constraint field combining the measured scalar condition with the
    // particular solution of the first-order equation.
    AngularField l2 = scale_by_radial(j3_l1, data.Cu0) - scale_by_radial(Ll1, data.Bu0);
    const double psi1_v0 = psi1_apply(data.measurement, data.coeffs, data.v0);
    out.constant =
        (psi_apply(data.measurement, l2) + out.sources.data_source_scalar - psi1_v0) / jq.j1;

    const std::size_t nr = data.rgrid().size();
    out.k0.resize(nr);
    for (std::size_t j = 0; j < nr; ++j)
        out.k0[j] = out.constant * data.u0data.exp_to_outer[j] - Ll1[j];

    // Reported compatibility aggregate: k0' C u0 + k0 B u0 + A^2 u0
    // + A f(0,.) - D_t^2 u1(0,.) + D_t f(0,.). No membership test is made.
    {
        const auto dk0 = derivative_r({out.k0.data(), nr}, data.rgrid());
        AngularField agg = scale_by_radial(dk0, data.Cu0) + scale_by_radial(out.k0, data.Bu0);
        const AngularField a2u0 = data.coeffs.apply_a(data.coeffs.apply_a(data.u0));
        const AngularField af0 = data.coeffs.apply_a(data.f[0]);
        // Second time derivative of u1 at t = 0.
        const std::size_t nt = data.tgrid().size();
        AngularField dt2_u1(data.rgrid(), data.agrid());
        std::vector<double> col(nt);
        for (std::size_t p = 0; p < dt2_u1.raw().size(); ++p) {
            for (std::size_t i = 0; i < nt; ++i) col[i] = data.u1[i].raw()[p];
            dt2_u1.raw()[p] =
                second_derivative_uniform({col.data(), nt}, data.tgrid().step())[0];
        }
        agg = agg + a2u0 + af0 - dt2_u1 + data.dt_f[0];
        out.regularity_aggregate_sup = sup_norm(agg);
    }
    return out;
}

InitialHQ initial_hq(const std::vector<double>& k0, const RadialGrid& grid) {
    InitialHQ out;
    out.h0 = k0.back();
    out.q0 = derivative_r({k0.data(), k0.size()}, grid);
    return out;
}

}  // namespace memk
