#pragma once

#include <stdexcept>
#include <string>

namespace specgeo {

// Mesh construction / topology / quality failures. CLI maps these to exit 3.
struct MeshError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Eigensolver failures (factorization, non-convergence). CLI maps to exit 4.
struct SolverError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Parameter preconditions use std::domain_error (CLI exit 3).

} // namespace specgeo
