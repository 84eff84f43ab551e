#pragma once

// The extremal constructions S_n, J_n, T_n and B_n.
//
// Each construction is a partition of [n] into classes plus a rule that
// decides whether a triple is an edge from the multiset of classes it meets:
//
//   S  complete tripartite: one vertex in each of three classes
//   J  complete (2,1)-colourable: two vertices in V0, one in V1
//   T  Turan: one in each class, or two in V_i and one in V_{i+1} (mod 3)
//   B  complete bipartite: meets both classes
//
// Classes are numbered in order of decreasing size and receive consecutive
// vertex ranges, so vertex numbering is reproducible.

#include "turan/family.hpp"
#include "turan/field.hpp"
#include "turan/three_graph.hpp"

#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace turan {

enum class ConstructionKind { S, J, T, B };

/// Accepts "S", "J", "T", "B" (case-insensitive); throws DomainError otherwise.
ConstructionKind parse_construction_kind(std::string_view text);
char to_char(ConstructionKind kind);

/// Class rule of a construction: is a triple meeting classes i <= j <= k an edge?
bool construction_rule(ConstructionKind kind, int i, int j, int k);

/// Number of classes used by the rule (3 for S and T, 2 for J and B).
int construction_class_count(ConstructionKind kind);

struct Construction {
    ConstructionKind kind;
    std::vector<std::vector<int>> classes;
    ThreeGraph graph;
};

/// The edge-maximal instance of order n >= 3. For J the size k of V0
/// maximizes (n - k) * C(k, 2), ties going to the smaller k.
Construction build_construction(ConstructionKind kind, int n);

/// The graph on the given classes under the kind's rule (sizes may be 0).
ThreeGraph construction_on(ConstructionKind kind, std::span<const int> class_sizes);

/// Edge count of a construction with the given class sizes, by formula.
Integer construction_edges_for_sizes(ConstructionKind kind, std::span<const int> class_sizes);

/// Closed-form edge count of the kind's edge-maximal instance of order n.
Integer construction_edge_count(ConstructionKind kind, int n);

/// Optimal V0 size for J_n.
int optimal_j_split(int n);

/// Limiting edge density as n grows: 2/9, 4/9, 5/9, 3/4.
Rational construction_limit_density(ConstructionKind kind);

struct FreenessWitness {
    ThreeGraph member;
    bool induced;
    std::vector<int> embedding;  // embedding[v] = host vertex of member vertex v
};

struct FreenessResult {
    bool free = true;
    std::optional<FreenessWitness> witness;
};

/// True iff `host` contains no member of the family (induced members as
/// induced subgraphs); otherwise a witness embedding.
FreenessResult check_free(const ThreeGraph& host, const Family& family);

inline constexpr int kMaxMembershipOrder = 7;

/// Does some partition of V(G) make G exactly the construction of that
/// kind on it (empty classes allowed)? Exhaustive search; throws
/// DomainError above kMaxMembershipOrder vertices.
bool is_member(ConstructionKind kind, const ThreeGraph& g);

/// Limit object behind a construction: class weights and the class rule.
/// A random k-vertex sample assigns each vertex a class independently with
/// these probabilities.
struct LimitConstruction {
    ConstructionKind kind;
    std::vector<Rational> weights;  // sum to 1
};

/// Weights 1/3 each for S and T, (2/3, 1/3) for J, 1/2 each for B.
LimitConstruction limit_construction(ConstructionKind kind);

/// The graph induced by vertices with the given classes.
ThreeGraph pattern_graph(const LimitConstruction& limit, std::span<const int> class_of);

/// Canonical graphs of order k with positive induced density in the limit,
/// sorted.
std::vector<ThreeGraph> limit_support(const LimitConstruction& limit, int k);

}  // namespace turan
