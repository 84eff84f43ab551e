#pragma once

// The flag-algebra bound as a semidefinite program in SDPA sparse format.
//
// Block layout (1-based, as in the file): blocks 1..k are the PSD matrices
// Q_sigma of the k flag contexts, block k+1 is the 1x1 bound variable lambda,
// block k+2 is a diagonal block of one slack per admissible graph. In CSDP's
// primal form  max tr(C X)  s.t.  tr(A_i X) = a_i,  X psd,  constraint i reads
//
//     L*lambda - sum_sigma <Q_sigma, L*P_sigma(H_i)> - s_i = L*d(H_i)
//
// where L clears every denominator, so all coefficients are integers, and
// C = -1 on the lambda block.

#include "turan/field.hpp"
#include "turan/flags.hpp"

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace turan {

struct SdpEntry {
    int matrix;  // 0 = objective C, i >= 1 = constraint i
    int block;   // 1-based
    int row;     // 1-based, row <= col
    int col;
    Rational value;

    friend bool operator==(const SdpEntry&, const SdpEntry&) = default;
};

struct SdpProblem {
    std::size_t constraints = 0;
    std::vector<int> block_sizes;     // negative = diagonal block
    std::vector<Rational> objective;  // right-hand sides a_i
    std::vector<SdpEntry> entries;
    Integer scale = 1;        // the common factor L
    std::size_t type_blocks = 0;  // k

    int bound_block() const { return static_cast<int>(type_blocks) + 1; }
    int slack_block() const { return static_cast<int>(type_blocks) + 2; }
};

/// Throws DomainError for an empty admissible list or inconsistent contexts.
SdpProblem build_sdp(std::span<const ThreeGraph> admissible, std::span<const FlagContext> contexts);

/// SDPA ".dat-s" text. Integers are written exactly; other values with 17
/// significant digits.
void write_sdpa(const SdpProblem& problem, std::ostream& out);
std::string to_sdpa_string(const SdpProblem& problem);
void write_sdpa_file(const SdpProblem& problem, const std::filesystem::path& path);

/// Parses SDPA sparse text; decimal values are converted to rationals
/// exactly. The scale and type_blocks fields are not part of the format and
/// are left at their defaults. Malformed input raises ParseError with the line.
SdpProblem parse_sdpa(std::istream& in);

struct DenseMatrix {
    int n = 0;
    std::vector<double> data;  // row-major

    DenseMatrix() = default;
    explicit DenseMatrix(int size) : n(size), data(static_cast<std::size_t>(size) * size, 0.0) {}
    double& operator()(int i, int j) { return data[static_cast<std::size_t>(i) * n + j]; }
    double operator()(int i, int j) const { return data[static_cast<std::size_t>(i) * n + j]; }
};

struct NumericSolution {
    double bound = 0;
    std::vector<DenseMatrix> blocks;  // one per flag context, in context order
    std::vector<double> slacks;       // one per admissible graph, unscaled
};

/// Parses a solver solution for `problem`'s layout. Two layouts are accepted:
/// CSDP (first line y, then `matno block i j value` with matno 2 = primal X)
/// and SDPA's `.out` listing (the `yMat` section holds the same matrix).
/// Malformed or truncated input raises ParseError.
NumericSolution parse_solution(std::istream& in, const SdpProblem& problem);
NumericSolution parse_solution_file(const std::filesystem::path& path, const SdpProblem& problem);

}  // namespace turan
