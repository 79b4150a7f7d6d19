#pragma once

#include <stdexcept>
#include <string>

namespace memk {

// Error taxonomy mirrored by the CLI exit codes (see tools/).
struct ShapeError : std::runtime_error {
    explicit ShapeError(const std::string& msg) : std::runtime_error(msg) {}
};

struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

struct IoError : std::runtime_error {
    explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

// Coefficient family violates positivity / admissibility requirements.
struct AdmissibilityError : std::runtime_error {
    explicit AdmissibilityError(const std::string& msg) : std::runtime_error(msg) {}
};

// A measurement weight degenerates (lower bound on |Phi[C u0]| or |D_r u(0,.)| fails).
struct DegeneracyError : std::runtime_error {
    explicit DegeneracyError(const std::string& msg) : std::runtime_error(msg) {}
};

// A scalar the reduction must divide by vanishes (kappa, kappa1, J1).
struct SolvabilityError : std::runtime_error {
    explicit SolvabilityError(const std::string& msg) : std::runtime_error(msg) {}
};

// Fixed-point iteration failed to converge within the iteration budget.
struct IterationError : std::runtime_error {
    explicit IterationError(const std::string& msg) : std::runtime_error(msg) {}
};

struct DataError : std::runtime_error {
    explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace memk
