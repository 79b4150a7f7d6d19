#include "memkern/fields.hpp"

#include <cmath>
#include <cstdlib>

#include "memkern/calculus.hpp"
#include "memkern/errors.hpp"

namespace memk {

SpaceTimeField SpaceTimeField::sample(const TimeGrid& tg, const RadialGrid& rg,
                                      const std::function<double(double, double)>& f) {
    SpaceTimeField out(tg, rg);
    for (std::size_t i = 0; i < tg.size(); ++i)
        for (std::size_t j = 0; j < rg.size(); ++j) out.at(i, j) = f(tg.node(i), rg.node(j));
    return out;
}

AngularField::AngularField(const RadialGrid& rg, const AngularGrid& ag)
    : rgrid_(rg), agrid_(ag), nth_(ag.dimension() == 3 ? ag.n_theta() : 1),
      values_(rg.size() * ag.n_phi() * nth_, 0.0) {}

AngularField AngularField::sample(const RadialGrid& rg, const AngularGrid& ag,
                                  const std::function<double(double, double, double)>& f) {
    AngularField out(rg, ag);
    for (std::size_t ir = 0; ir < rg.size(); ++ir)
        for (std::size_t m = 0; m < ag.n_phi(); ++m)
            for (std::size_t l = 0; l < out.nth_; ++l)
                out.at(ir, m, l) =
                    f(rg.node(ir), ag.phi(m), ag.dimension() == 3 ? ag.theta(l) : 0.0);
    return out;
}

void AngularField::node_xyz(std::size_t ir, std::size_t iphi, std::size_t ith,
                            double out[3]) const {
    const double r = rgrid_.node(ir);
    const double phi = agrid_.phi(iphi);
    if (dimension() == 2) {
        out[0] = r * std::cos(phi);
        out[1] = r * std::sin(phi);
        out[2] = 0.0;
    } else {
        const double th = agrid_.theta(ith);
        out[0] = r * std::cos(phi) * std::sin(th);
        out[1] = r * std::sin(phi) * std::sin(th);
        out[2] = r * std::cos(th);
    }
}

TimeAngularField TimeAngularField::sample(
    const TimeGrid& tg, const RadialGrid& rg, const AngularGrid& ag,
    const std::function<double(double, double, double, double)>& f) {
    TimeAngularField out(tg, rg, ag);
    for (std::size_t it = 0; it < tg.size(); ++it) {
        const double t = tg.node(it);
        out[it] = AngularField::sample(
            rg, ag, [&](double r, double phi, double th) { return f(t, r, phi, th); });
    }
    return out;
}

TimeAngularField TimeAngularField::time_derivative() const {
    const std::size_t nt = slices.size();
    if (nt < 3) throw ShapeError("time_derivative: need at least 3 time nodes");
    TimeAngularField out(tgrid, slices[0].rgrid(), slices[0].agrid());
    const double h = tgrid.step();
    const std::size_t n = slices[0].raw().size();
    for (std::size_t k = 0; k < n; ++k) {
        out[0].raw()[k] =
            (-3.0 * slices[0].raw()[k] + 4.0 * slices[1].raw()[k] - slices[2].raw()[k]) /
            (2.0 * h);
        for (std::size_t it = 1; it + 1 < nt; ++it)
            out[it].raw()[k] = (slices[it + 1].raw()[k] - slices[it - 1].raw()[k]) / (2.0 * h);
        out[nt - 1].raw()[k] = (3.0 * slices[nt - 1].raw()[k] - 4.0 * slices[nt - 2].raw()[k] +
                                slices[nt - 3].raw()[k]) /
                               (2.0 * h);
    }
    return out;
}

static void check_same_shape(const AngularField& a, const AngularField& b, const char* what) {
    if (a.raw().size() != b.raw().size() || a.n_r() != b.n_r() || a.n_phi() != b.n_phi())
        throw ShapeError(std::string(what) + ": field shapes differ");
}

AngularField operator+(const AngularField& a, const AngularField& b) {
    check_same_shape(a, b, "operator+");
    AngularField out = a;
    for (std::size_t k = 0; k < out.raw().size(); ++k) out.raw()[k] += b.raw()[k];
    return out;
}

AngularField operator-(const AngularField& a, const AngularField& b) {
    check_same_shape(a, b, "operator-");
    AngularField out = a;
    for (std::size_t k = 0; k < out.raw().size(); ++k) out.raw()[k] -= b.raw()[k];
    return out;
}

AngularField operator*(double s, const AngularField& a) {
    AngularField out = a;
    for (double& v : out.raw()) v *= s;
    return out;
}

AngularField scale_by_radial(const std::vector<double>& w, const AngularField& u) {
    if (w.size() != u.n_r()) throw ShapeError("scale_by_radial: profile length mismatch");
    AngularField out = u;
    for (std::size_t ir = 0; ir < u.n_r(); ++ir)
        for (std::size_t m = 0; m < u.n_phi(); ++m)
            for (std::size_t l = 0; l < u.n_theta(); ++l) out.at(ir, m, l) *= w[ir];
    return out;
}

double sup_norm(const AngularField& a) {
    double s = 0.0;
    for (double v : a.raw()) s = std::max(s, std::abs(v));
    return s;
}

double sup_norm(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s = std::max(s, std::abs(x));
    return s;
}

double sup_norm(const SpaceTimeField& f) { return f.values.cwiseAbs().maxCoeff(); }

}  // namespace memk
