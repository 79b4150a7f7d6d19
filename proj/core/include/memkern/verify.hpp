#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace memk {

struct CheckResult {
    std::string name;
    double value = 0.0;      // measured residual / ratio / error
    double threshold = 0.0;  // pass bound (interpretation per check)
    bool larger_is_ok = false;
    bool pass = false;
    std::string note;
};

CheckResult make_check(const std::string& name, double value, double threshold,
                       bool larger_is_ok = false, const std::string& note = "");

// Invariant suites. Each returns one entry per verified property; seeds make
// the randomised cases reproducible.
std::vector<CheckResult> verify_grid_quadrature();
std::vector<CheckResult> verify_coefficient_invariants(std::uint64_t seed);
std::vector<CheckResult> verify_functional_identities(std::uint64_t seed);
std::vector<CheckResult> verify_parts_identity(std::uint64_t seed, std::size_t n_cases = 20,
                                               std::size_t n_r = 201);
std::vector<CheckResult> verify_decomposition(std::uint64_t seed, std::size_t n_cases = 5);
std::vector<CheckResult> verify_green_kernels(std::uint64_t seed);
std::vector<CheckResult> verify_contraction(std::uint64_t seed, std::size_t n_cases = 10);
std::vector<CheckResult> verify_forward_solver();
std::vector<CheckResult> verify_manufactured_roundtrip(const std::vector<std::size_t>& sweep,
                                                       double* seconds = nullptr);
std::vector<CheckResult> verify_initial_kernel(std::uint64_t seed);
std::vector<CheckResult> verify_cross_method();

// The whole battery, in a stable order.
std::vector<CheckResult> verify_all(std::uint64_t seed);

}  // namespace memk
