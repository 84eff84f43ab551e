#pragma once

// Types, flags and pair densities for the flag-algebra SDP.
//
// A type of order s is a fully labeled 3-graph on vertices 0..s-1. A flag of
// type sigma and order m is a 3-graph on 0..m-1 whose first s vertices induce
// sigma exactly, identified up to permutations of the unlabeled vertices
// s..m-1 (its representative is the least mask over those permutations).
//
// For an admissible graph H of order n = 2m - s, the pair density
// P_sigma(H)[a][b] is the probability that a uniformly random injection
// theta: [s] -> V(H), followed by a uniformly random ordered split of the
// other n - s vertices into two (m - s)-sets A, B, has H[theta + A] = F_a and
// H[theta + B] = F_b as labeled flags (this includes the event that theta
// induces sigma). The matrix is symmetric because the split is uniform.

#include "turan/field.hpp"
#include "turan/three_graph.hpp"

#include <span>
#include <unordered_map>
#include <vector>

namespace turan {

/// Type orders used for admissible graphs of order n: every s < n with
/// n - s even and s >= 1. Throws DomainError unless n is 5, 6 or 7.
std::vector<int> type_orders(int n);

/// Flag order paired with type order s at admissible order n.
inline int flag_order(int n, int s) { return (n + s) / 2; }

class FlagContext {
public:
    FlagContext(int index, ThreeGraph type, int flag_order, std::vector<ThreeGraph> flags);

    int index() const noexcept { return index_; }
    const ThreeGraph& type() const noexcept { return type_; }
    int type_order() const noexcept { return type_.order(); }
    int flag_order() const noexcept { return flag_order_; }
    const std::vector<ThreeGraph>& flags() const noexcept { return flags_; }
    std::size_t dimension() const noexcept { return flags_.size(); }

    /// Position of the flag with this (partially canonical) mask, or -1.
    int find_flag(Mask128 representative) const;

private:
    int index_;
    ThreeGraph type_;
    int flag_order_;
    std::vector<ThreeGraph> flags_;
    Mask128 type_mask_;
    struct Hash {
        std::size_t operator()(Mask128 m) const noexcept {
            return std::hash<std::uint64_t>{}(static_cast<std::uint64_t>(m) ^
                                              (static_cast<std::uint64_t>(m >> 64) * 0x9e3779b97f4a7c15ULL));
        }
    };
    std::unordered_map<Mask128, int, Hash> lookup_;
};

/// Representative mask of the flag given by an m-vertex graph whose first s
/// vertices are labeled.
Mask128 flag_representative(const ThreeGraph& labeled, int s);

/// All types realized in some admissible graph together with all their flags
/// realized in some admissible graph. Ordered by type order, then type mask;
/// flags within a context sorted by mask. Types get consecutive indices.
std::vector<FlagContext> enumerate_types_and_flags(int n, std::span<const ThreeGraph> admissible);

/// Sparse exact pair-density matrix: entry (a, b) = count / denominator.
struct PairDensityMatrix {
    struct Entry {
        int row;  // row <= col
        int col;
        long count;
    };

    int type_index = 0;
    int dimension = 0;
    Integer denominator = 1;
    std::vector<Entry> entries;  // sorted by (row, col), nonzero counts only

    Rational at(int a, int b) const;
    std::vector<std::vector<Rational>> dense() const;
};

/// Throws DomainError if 2m - s != |V(H)|, or the context's orders are inconsistent.
PairDensityMatrix pair_density_matrix(const FlagContext& context, const ThreeGraph& host);

/// e(H) / C(n, 3); throws DomainError for n < 3.
Rational edge_density(const ThreeGraph& host);

}  // namespace turan
