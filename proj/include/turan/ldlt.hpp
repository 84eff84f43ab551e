#pragma once

// Exact LDL^T factorization over Q[sqrt(d)], used as the PSD test.
//
// No pivoting: at step k the pivot is the current (k, k) entry of the Schur
// complement. A negative pivot proves the matrix is not PSD. A zero pivot is
// allowed only if the rest of its column is zero (a PSD matrix with a zero
// diagonal entry has that whole row zero), and then the step is skipped.

#include "turan/field.hpp"

#include <string>
#include <vector>

namespace turan {

using FieldMatrix = std::vector<std::vector<FieldElement>>;

struct LdltResult {
    bool positive_semidefinite = true;
    // Filled on failure: the step, and the offending value (the negative
    // pivot, or the nonzero entry below a zero pivot).
    std::size_t failed_step = 0;
    FieldElement failed_value;
    std::string reason;

    FieldMatrix lower;                  // unit lower triangular
    std::vector<FieldElement> diagonal; // the pivots; complete only on success
};

/// Throws DomainError if `a` is not square and exactly symmetric.
LdltResult ldlt(const FieldMatrix& a);

/// Convenience wrapper around ldlt().
bool is_positive_semidefinite(const FieldMatrix& a);

/// L * diag(D) * L^T, for checking a factorization.
FieldMatrix reassemble(const LdltResult& f);

}  // namespace turan
