#include "memkern/reduction.hpp"

#include "memkern/calculus.hpp"
#include "memkern/errors.hpp"

namespace memk {

ReductionState ReductionState::from_problem(const ProblemData& data) {
    ReductionState st(data.tgrid(), data.rgrid(), data.agrid());
    for (std::size_t it = 0; it < data.tgrid().size(); ++it) {
        st.z0[it] = data.coeffs.apply_b(data.dt_u1[it]);
        st.z1[it] = data.coeffs.apply_c(data.dt_u1[it]);
    }
    return st;
}

TimeAngularField n1_eval(const ReductionState& state, const ProblemData& data) {
    const TimeGrid& tg = data.tgrid();
    const std::size_t nt = tg.size();
    const double dt = tg.step();

    // Slice-wise operator applications, shared across all convolutions.
    std::vector<AngularField> bv, cv;
    bv.reserve(nt);
    cv.reserve(nt);
    for (std::size_t s = 0; s < nt; ++s) {
        bv.push_back(data.coeffs.apply_b(state.v[s]) + state.z0[s]);
        cv.push_back(data.coeffs.apply_c(state.v[s]) + state.z1[s]);
    }
    const SpaceTimeField eq = e_apply(state.q);

    TimeAngularField out(tg, data.rgrid(), data.agrid());
    for (std::size_t m = 1; m < nt; ++m) {
        AngularField acc(data.rgrid(), data.agrid());
        for (std::size_t s = 0; s <= m; ++s) {
            const double w = (s == 0 || s == m) ? 0.5 * dt : dt;
            const std::size_t lag = m - s;
            const auto eq_lag = eq.slice(lag);
            const auto q_lag = state.q.slice(lag);
            for (std::size_t ir = 0; ir < data.rgrid().size(); ++ir)
                for (std::size_t p = 0; p < data.agrid().n_phi(); ++p)
                    for (std::size_t l = 0; l < acc.n_theta(); ++l)
                        acc.at(ir, p, l) +=
                            w * ((eq_lag[ir] - state.h[lag]) * bv[s].at(ir, p, l) -
                                 q_lag[ir] * cv[s].at(ir, p, l));
        }
        out[m] = acc;
    }
    return out;
}

SourceProfiles source_profiles(const ProblemData& data) {
    const TimeGrid& tg = data.tgrid();
    const RadialGrid& rg = data.rgrid();
    const std::size_t nt = tg.size(), nr = rg.size();
    const double dt = tg.step();
    const auto jq = j_quantities(data.u0data, data.measurement, data.Bu0, data.Cu0);

    SourceProfiles out{SpaceTimeField(tg, rg), std::vector<double>(nt, 0.0),
                       SpaceTimeField(tg, rg), std::vector<double>(nt, 0.0),
                       std::vector<double>(nt, 0.0), SpaceTimeField(tg, rg)};

    // Time derivatives of the measured histories.
    std::vector<double> col(nt);
    SpaceTimeField dt_g1(tg, rg), dt2_g1(tg, rg);
    for (std::size_t j = 0; j < nr; ++j) {
        for (std::size_t i = 0; i < nt; ++i) col[i] = data.g1.at(i, j);
        const auto d1 = derivative_uniform({col.data(), nt}, dt);
        const auto d2 = second_derivative_uniform({col.data(), nt}, dt);
        for (std::size_t i = 0; i < nt; ++i) {
            dt_g1.at(i, j) = d1[i];
            dt2_g1.at(i, j) = d2[i];
        }
    }
    const auto dt2_g2 = second_derivative_uniform({data.g2.data(), nt}, dt);

    for (std::size_t i = 0; i < nt; ++i) {
        const auto a1 = apply_radial_part(dt_g1.slice(i), data.coeffs.trace_profile(), rg);
        const auto phi1_du1 = phi1_apply(data.measurement.lambda, data.coeffs, data.dt_u1[i]);
        const auto phi_df = phi_apply(data.measurement.lambda, data.dt_f[i]);
        for (std::size_t j = 0; j < nr; ++j)
            out.data_source_radial.at(i, j) = dt2_g1.at(i, j) - a1[j] - phi1_du1[j] - phi_df[j];
        out.data_source_scalar[i] = dt2_g2[i] -
                                    psi1_apply(data.measurement, data.coeffs, data.dt_u1[i]) -
                                    psi_apply(data.measurement, data.dt_f[i]);

        const auto inv = jq.j3.apply(out.data_source_radial.slice(i));
        out.inverted_source.set_slice(i, inv);
        const auto e_inv = e_apply(inv, rg);
        out.scalar_aggregate[i] =
            out.data_source_scalar[i] -
            psi_apply(data.measurement, scale_by_radial(inv, data.Cu0)) -
            psi_apply(data.measurement, scale_by_radial(e_inv, data.Bu0));
        out.h0[i] = out.scalar_aggregate[i] / jq.j1;
        for (std::size_t j = 0; j < nr; ++j)
            out.q0.at(i, j) = jq.j2[j] * out.h0[i] + inv[j];
    }
    return out;
}

SweepResult picard_update(const ReductionState& state, const ProblemData& data,
                          const SourceProfiles& sources) {
    const TimeGrid& tg = data.tgrid();
    const RadialGrid& rg = data.rgrid();
    const std::size_t nt = tg.size(), nr = rg.size();
    const auto jq = j_quantities(data.u0data, data.measurement, data.Bu0, data.Cu0);

    const TimeAngularField n1 = n1_eval(state, data);

    SweepResult out{std::vector<double>(nt, 0.0), SpaceTimeField(tg, rg)};
    for (std::size_t i = 0; i < nt; ++i) {
        const auto phi_n1 = phi_apply(data.measurement.lambda, n1[i]);
        const auto phi1_v = phi1_apply(data.measurement.lambda, data.coeffs, state.v[i]);
        std::vector<double> diff(nr);
        for (std::size_t j = 0; j < nr; ++j) diff[j] = phi_n1[j] - phi1_v[j];
        const auto n2 = jq.j3.apply(diff);
        const auto e_n2 = e_apply(n2, rg);

        const double n3 = (psi_apply(data.measurement, n1[i]) -
                           psi_apply(data.measurement, scale_by_radial(n2, data.Cu0)) +
                           psi_apply(data.measurement, scale_by_radial(e_n2, data.Bu0)) -
                           psi1_apply(data.measurement, data.coeffs, state.v[i])) /
                          jq.j1;

        out.h[i] = sources.h0[i] + n3;
        for (std::size_t j = 0; j < nr; ++j)
            out.q.at(i, j) = sources.q0.at(i, j) + jq.j2[j] * n3 + n2[j];
    }
    return out;
}

double j4_correction(const ProblemData& data) {
    const auto jq = j_quantities(data.u0data, data.measurement, data.Bu0, data.Cu0);
    const auto phi1_v0 = phi1_apply(data.measurement.lambda, data.coeffs, data.v0);
    const auto inv = jq.j3.apply(phi1_v0);
    const auto e_inv = e_apply(inv, data.rgrid());
    return (psi_apply(data.measurement, scale_by_radial(inv, data.Cu0)) -
            psi_apply(data.measurement, scale_by_radial(e_inv, data.Bu0)) -
            psi1_apply(data.measurement, data.coeffs, data.v0)) /
           jq.j1;
}

}  // namespace memk
