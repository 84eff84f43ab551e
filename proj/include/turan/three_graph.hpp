#pragma once

// 3-uniform hypergraphs on vertices 0..n-1.
//
// The edge set is a bitmask over the C(n,3) triples in colexicographic order:
// the triple {a < b < c} has index C(c,3) + C(b,2) + a. Every index that
// appears in a certificate or a canonical form derives from this order.

#include "turan/field.hpp"

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace turan {

using Mask128 = unsigned __int128;
using Triple = std::array<int, 3>;

/// Graphs up to this order can be canonicalized (brute force over n!).
inline constexpr int kMaxCanonicalOrder = 9;
/// Largest order expressible in the `n:e1,e2,...` text format (labels 1-9, a-z).
inline constexpr int kMaxTextOrder = 35;
/// Raw blow-ups are capped here (the triple bitmask grows as n^3).
inline constexpr int kMaxBlowupOrder = 400;

constexpr int choose2(int n) { return n < 2 ? 0 : n * (n - 1) / 2; }
constexpr int choose3(int n) { return n < 3 ? 0 : n * (n - 1) * (n - 2) / 6; }

/// Colex index of the triple {a, b, c}; the vertices may come in any order but
/// must be distinct.
int triple_index(int a, int b, int c);
/// Inverse of triple_index; the result is sorted ascending.
Triple triple_at(int index);

class ThreeGraph {
public:
    ThreeGraph() = default;
    explicit ThreeGraph(int n);
    /// Zero-based edge list. Throws DomainError for repeated or out-of-range vertices.
    ThreeGraph(int n, std::span<const Triple> edges);
    ThreeGraph(int n, std::initializer_list<Triple> edges);

    /// Requires n <= kMaxCanonicalOrder.
    static ThreeGraph from_mask(int n, Mask128 mask);

    int order() const noexcept { return n_; }
    std::size_t size() const noexcept;

    bool has_edge(int a, int b, int c) const;
    bool test(int index) const noexcept { return (words_[index >> 6] >> (index & 63)) & 1U; }
    void add_edge(int a, int b, int c);
    void remove_edge(int a, int b, int c);

    /// Edges in colex order, each sorted ascending.
    std::vector<Triple> edges() const;
    /// Edge bitmask; requires order() <= kMaxCanonicalOrder.
    Mask128 mask() const;

    /// Subgraph induced by `vertices`; vertices[i] becomes vertex i.
    ThreeGraph induced(std::span<const int> vertices) const;
    /// Relabels vertex v as perm[v].
    ThreeGraph permuted(std::span<const int> perm) const;
    /// Adds `extra` isolated vertices with labels n..n+extra-1.
    ThreeGraph with_isolated(int extra) const;

    friend bool operator==(const ThreeGraph&, const ThreeGraph&) = default;
    friend std::strong_ordering operator<=>(const ThreeGraph& x, const ThreeGraph& y);

private:
    void set_bit(int index, bool on);

    int n_ = 0;
    std::vector<std::uint64_t> words_;
};

ThreeGraph complete_graph(int n);
ThreeGraph empty_graph(int n);

/// The lexicographically least edge mask (compared as an unsigned integer)
/// over all n! relabelings.
struct CanonicalForm {
    int order = 0;
    Mask128 mask = 0;

    ThreeGraph graph() const { return ThreeGraph::from_mask(order, mask); }
    friend bool operator==(const CanonicalForm&, const CanonicalForm&) = default;
    friend std::strong_ordering operator<=>(const CanonicalForm& x, const CanonicalForm& y) {
        if (auto c = x.order <=> y.order; c != 0) return c;
        return x.mask == y.mask ? std::strong_ordering::equal
                                : (x.mask < y.mask ? std::strong_ordering::less : std::strong_ordering::greater);
    }
};

/// Throws DomainError when order exceeds kMaxCanonicalOrder.
CanonicalForm canonical_form(const ThreeGraph& g);
ThreeGraph canonical_graph(const ThreeGraph& g);

/// Minimum mask over relabelings that fix vertices 0..fixed-1: the canonical
/// representative of a labeled flag whose first `fixed` vertices are labeled.
Mask128 partial_canonical_mask(int n, Mask128 mask, int fixed);

bool isomorphic(const ThreeGraph& x, const ThreeGraph& y);

/// An injection pattern -> host (result[v] = host vertex of pattern vertex v)
/// mapping every pattern edge onto a host edge; nullopt if none.
std::optional<std::vector<int>> find_subgraph(const ThreeGraph& host, const ThreeGraph& pattern);
/// Same, but edges and non-edges must both be preserved.
std::optional<std::vector<int>> find_induced(const ThreeGraph& host, const ThreeGraph& pattern);

/// True iff `host` contains a (not necessarily induced) copy of `pattern`.
bool contains_subgraph(const ThreeGraph& host, const ThreeGraph& pattern);
bool contains_induced(const ThreeGraph& host, const ThreeGraph& pattern);

/// Probability that a uniformly random |V(pattern)|-subset of V(host) induces
/// a copy of `pattern`.
Rational induced_density(const ThreeGraph& pattern, const ThreeGraph& host);

/// t-fold blow-up: vertex v becomes the class {v*t, ..., v*t + t - 1}.
ThreeGraph blowup(const ThreeGraph& g, int t);
/// Blow-up with class i of size class_sizes[i]; classes are numbered consecutively.
ThreeGraph blowup(const ThreeGraph& g, std::span<const int> class_sizes);

/// Decides F <= G: F is a subgraph of some blow-up G(t).
bool blowup_contains(const ThreeGraph& f, const ThreeGraph& g);

/// Every pair of vertices lies in an edge.
bool is_covering(const ThreeGraph& f);

/// Text format `n:e1,e2,...`, vertex labels 1-9 then a-z.
ThreeGraph parse_graph(std::string_view text);
std::string to_string(const ThreeGraph& g);

}  // namespace turan
