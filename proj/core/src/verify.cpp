#include "memkern/verify.hpp"

namespace memk {

CheckResult make_check(const std::string& name, double value, double threshold,
                       bool larger_is_ok, const std::string& note) {
    CheckResult c{name, value, threshold, larger_is_ok, false, note};
    c.pass = larger_is_ok ? value >= threshold : value <= threshold;
    return c;
}

std::vector<CheckResult> verify_all(std::uint64_t seed) {
    std::vector<CheckResult> out;
    auto append = [&out](std::vector<CheckResult> v) {
        out.insert(out.end(), v.begin(), v.end());
    };
    append(verify_grid_quadrature());
    append(verify_coefficient_invariants(seed));
    append(verify_functional_identities(seed));
    append(verify_parts_identity(seed));
    append(verify_decomposition(seed));
    append(verify_green_kernels(seed));
    append(verify_contraction(seed));
    append(verify_forward_solver());
    append(verify_manufactured_roundtrip({16, 32, 64}));
    append(verify_initial_kernel(seed));
    append(verify_cross_method());
    return out;
}

}  // namespace memk
