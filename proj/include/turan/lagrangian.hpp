#pragma once

// Hypergraph Lagrangians: lambda(G, x) = 6 * sum over edges ijk of x_i x_j x_k
// on the probability simplex, its numeric maximization, and weighted
// blow-ups G(x, n).

#include "turan/field.hpp"
#include "turan/three_graph.hpp"

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace turan {

using WeightVector = std::vector<FieldElement>;

/// Exact lambda(G, x). Throws DomainError if |x| != |V(G)| or the
/// coordinates live in different quadratic fields.
FieldElement lambda_at(const ThreeGraph& g, std::span<const FieldElement> x);
double lambda_at(const ThreeGraph& g, std::span<const double> x);

/// Partial derivatives d lambda / d x_i.
std::vector<double> lambda_gradient(const ThreeGraph& g, std::span<const double> x);

/// Result of multiplicative ascent from one start point.
struct AscentTrace {
    std::vector<double> x;
    std::vector<double> values;  // lambda after each step, starting at x0
};

/// Runs x_i <- x_i * (d lambda / d x_i) / (3 lambda); stops early once the
/// point no longer moves.
AscentTrace replicator_ascent(const ThreeGraph& g, std::vector<double> x0, int iterations);

struct LagrangianResult {
    double value = 0;
    std::vector<double> weights;
};

/// Best value over `restarts` Dirichlet(1) starts, restart r drawing from a
/// generator seeded by (seed, r). Results within 1e-12 of the best count as
/// ties, resolved toward the lexicographically largest descending-sorted
/// weight vector. A graph without edges gives 0 with uniform weights.
LagrangianResult maximize_lagrangian(const ThreeGraph& g, int restarts = 200, int iterations = 10000,
                                     std::uint64_t seed = 0);

/// Class sizes floor(x_i n) for i < k and the remainder for the last class.
/// Exact for quadratic-field weights. Throws DomainError if a size is negative.
std::vector<int> weighted_class_sizes(std::span<const FieldElement> x, int n);

/// G(x, n): the blow-up of G with weighted_class_sizes(x, n).
ThreeGraph weighted_blowup(const ThreeGraph& g, std::span<const FieldElement> x, int n);

/// Comma- or whitespace-separated field elements.
WeightVector parse_weight_vector(std::string_view text);

}  // namespace turan
