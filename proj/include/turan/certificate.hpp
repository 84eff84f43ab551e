#pragma once

// Exact flag-algebra certificates and their verification.
//
// A certificate claims that every admissible graph H of order n satisfies
//
//     edge_density(H) + sum_sigma <Q_sigma, P_sigma(H)> <= bound
//
// with every Q_sigma positive semidefinite. Verification regenerates the
// admissible graphs from the stored family, rebuilds the pair densities from
// the stored types and flags, and decides both conditions in exact
// arithmetic over Q[sqrt(d)]. No floating point is involved.
//
// File format (line oriented; blank lines and lines starting with '#' are
// ignored):
//
//     TURAN-CERT v1
//     n <int>
//     discriminant <int>
//     bound <field-element>
//     family <count>
//     <graph>                 (count lines, '!' prefix for induced members)
//     blocks <count>
//     block <index> <dimension>
//     type <graph>
//     flag <graph>            (dimension lines)
//     <row 1>                 (lower triangle: row i has i entries)
//     ...

#include "turan/error.hpp"
#include "turan/family.hpp"
#include "turan/field.hpp"
#include "turan/flags.hpp"
#include "turan/ldlt.hpp"

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace turan {

struct CertificateBlock {
    ThreeGraph type;
    std::vector<ThreeGraph> flags;  // frozen order, indexes the matrix
    FieldMatrix matrix;             // full symmetric storage

    friend bool operator==(const CertificateBlock&, const CertificateBlock&) = default;
};

struct Certificate {
    int n = 0;
    Family family;
    std::int64_t discriminant = 0;
    FieldElement bound;
    std::vector<CertificateBlock> blocks;

    friend bool operator==(const Certificate&, const Certificate&) = default;
};

struct SlackEntry {
    ThreeGraph graph;
    FieldElement slack;
};

struct SlackReport {
    std::vector<SlackEntry> slacks;  // in admissible (canonical) order
    std::vector<ThreeGraph> sharp;   // graphs with slack exactly 0

    /// Index into `slacks` of a smallest slack.
    std::size_t worst() const;
};

/// Raised by verify_certificate. The message names the failing block and
/// pivot, or the violated graph and the exact violation.
class CertificateRejected : public Error {
public:
    using Error::Error;
};

/// Checks structure and PSD-ness, then every inequality, all exactly.
/// Throws CertificateRejected on the first failure.
SlackReport verify_certificate(const Certificate& c);

/// Slacks without the PSD check and without rejecting negative slacks.
/// Structural problems still raise CertificateRejected.
SlackReport compute_slacks(const Certificate& c);

/// Admissible graphs with zero slack, canonical-sorted. Verifies first.
std::vector<ThreeGraph> sharp_graphs(const Certificate& c);

/// Flag contexts described by the certificate's blocks, in block order.
std::vector<FlagContext> certificate_contexts(const Certificate& c);

/// Pair densities of every admissible graph against every context,
/// indexed [graph][context]. Computed in parallel over graphs.
using DensityTable = std::vector<std::vector<PairDensityMatrix>>;
DensityTable density_table(std::span<const ThreeGraph> admissible, std::span<const FlagContext> contexts);

/// bound - edge_density(H) - sum <Q, P(H)> for each admissible H. Shared by
/// the verifier and the rounding search.
std::vector<FieldElement> slacks_for(std::span<const ThreeGraph> admissible, const DensityTable& densities,
                                     std::span<const FieldMatrix> matrices, const FieldElement& bound);

std::string serialize(const Certificate& c);
Certificate parse_certificate(std::string_view text);
void write_certificate_file(const Certificate& c, const std::filesystem::path& path);
Certificate load_certificate_file(const std::filesystem::path& path);

}  // namespace turan
