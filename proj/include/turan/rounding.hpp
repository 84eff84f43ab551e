#pragma once

// Turning a numeric SDP solution into an exact certificate.
//
// Two strategies are tried for every denominator of the schedule:
//
// 1. Direct: every entry of Q is rounded to the nearest multiple of 1/q for
//    the schedule's denominator q, optionally shifted by eps*I,
//    and the result is checked against the target bound. This succeeds when
//    the target leaves room above the numeric optimum, and returns exact
//    input unchanged.
//
// 2. Sharp projection (rational targets only): the graphs that are tight at
//    the target are identified (numerically, and from a limit construction
//    when one is given). For each block a rational basis of the kernel of Q
//    is fixed, from the construction's flag densities where available and
//    from rationalized numeric eigenvectors otherwise, and Q is written as
//    B R B^T over the complement basis B. R is rationalized, and an exact
//    least-norm correction of its diagonal (of all its entries if needed)
//    makes every tight inequality hold with equality. The result is accepted
//    only if R is PSD and every slack is nonnegative, exactly.
//
// Every returned certificate has passed verify_certificate.

#include "turan/certificate.hpp"
#include "turan/constructions.hpp"
#include "turan/sdp.hpp"

#include <optional>
#include <string>
#include <vector>

namespace turan {

struct RoundingOptions {
    std::vector<Integer> denominators = default_denominators();
    std::vector<Rational> epsilons = default_epsilons();
    double sharp_tolerance = 1e-6;   // numeric slack below this counts as tight
    double kernel_tolerance = 1e-6;  // eigenvalues below this (relative) span the kernel
    std::optional<LimitConstruction> construction;

    /// 2^8, 2^12, ..., 2^32.
    static std::vector<Integer> default_denominators();
    /// 0, 10^-5, ..., 10^-10.
    static std::vector<Rational> default_epsilons();
};

struct RoundingAttempt {
    std::string method;  // "direct" or "sharp"
    Integer denominator;
    Rational epsilon;
    std::string outcome;  // "ok" or the reason for rejection
};

struct RoundingResult {
    Certificate certificate;
    SlackReport report;
    std::vector<RoundingAttempt> attempts;
};

class RoundingFailed : public Error {
public:
    RoundingFailed(const std::string& what, std::vector<RoundingAttempt> attempts)
        : Error(what), attempts_(std::move(attempts)) {}
    const std::vector<RoundingAttempt>& attempts() const noexcept { return attempts_; }

private:
    std::vector<RoundingAttempt> attempts_;
};

/// Rounds a numeric solution of build_sdp(generate_admissible(n, family),
/// enumerate_types_and_flags(n, ...)). Throws DomainError if the solution's
/// blocks do not match that layout (or are not symmetric to 1e-6), and
/// RoundingFailed, listing the worst slack and pivot seen, when no attempt
/// verifies.
RoundingResult round_solution(const Family& family, int n, const NumericSolution& numeric, const FieldElement& target,
                              const RoundingOptions& options = {});

/// Flag-density vectors of the limit construction for one context: one
/// vector per class assignment of the type's vertices that induces the type.
/// For an extremal construction these lie in the kernel of an optimal Q.
std::vector<std::vector<Rational>> construction_kernel_vectors(const LimitConstruction& limit,
                                                               const FlagContext& context);

}  // namespace turan
