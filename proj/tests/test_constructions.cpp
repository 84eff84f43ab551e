#include "support.hpp"
#include "turan/constructions.hpp"
#include "turan/error.hpp"

#include <doctest.h>

#include <set>

using namespace turan;
using namespace turan::testing;

namespace {

long c3(long n) { return n < 3 ? 0 : n * (n - 1) * (n - 2) / 6; }
long c2(long n) { return n < 2 ? 0 : n * (n - 1) / 2; }

// Closed forms written out independently of the library.
long closed_form(ConstructionKind kind, long n) {
    switch (kind) {
        case ConstructionKind::S: return (n / 3) * ((n + 1) / 3) * ((n + 2) / 3);
        case ConstructionKind::J: {
            long best = 0;
            for (long k = 0; k <= n; ++k) best = std::max(best, (n - k) * c2(k));
            return best;
        }
        case ConstructionKind::T: {
            const long a = (n + 2) / 3, b = (n + 1) / 3, c = n / 3;
            return a * b * c + c2(a) * b + c2(b) * c + c2(c) * a;
        }
        case ConstructionKind::B: return c3(n) - c3((n + 1) / 2) - c3(n / 2);
    }
    return -1;
}

constexpr ConstructionKind kAll[] = {ConstructionKind::S, ConstructionKind::J, ConstructionKind::T, ConstructionKind::B};

std::set<ThreeGraph> induced_subgraphs(const ThreeGraph& host, int k) {
    std::set<ThreeGraph> out;
    std::vector<int> pick;
    auto choose = [&](auto&& self, int from) -> void {
        if (static_cast<int>(pick.size()) == k) {
            out.insert(canonical_graph(host.induced(pick)));
            return;
        }
        for (int v = from; v < host.order(); ++v) {
            pick.push_back(v);
            self(self, v + 1);
            pick.pop_back();
        }
    };
    choose(choose, 0);
    return out;
}

}  // namespace

TEST_SUITE("constructions") {

TEST_CASE("small examples") {
    CHECK(build_construction(ConstructionKind::S, 6).graph.size() == 8);
    CHECK(build_construction(ConstructionKind::J, 6).graph.size() == 12);
    CHECK(optimal_j_split(6) == 4);
    CHECK(build_construction(ConstructionKind::B, 6).graph.size() == 18);
    CHECK(parse_construction_kind("t") == ConstructionKind::T);
    CHECK(to_char(ConstructionKind::B) == 'B');
    CHECK_THROWS_AS(parse_construction_kind("Q"), DomainError);
    CHECK_THROWS_AS(build_construction(ConstructionKind::S, 2), DomainError);
}

TEST_CASE("edge counts match closed forms for 3 <= n <= 30") {
    for (ConstructionKind kind : kAll)
        for (int n = 3; n <= 30; ++n) {
            CAPTURE(to_char(kind));
            CAPTURE(n);
            const Construction c = build_construction(kind, n);
            CHECK(c.graph.order() == n);
            const long expected = closed_form(kind, n);
            CHECK(static_cast<long>(c.graph.size()) == expected);
            CHECK(construction_edge_count(kind, n) == expected);
            // the classes partition the vertices in consecutive ranges
            int next = 0;
            for (const auto& cls : c.classes)
                for (int v : cls) CHECK(v == next++);
            CHECK(next == n);
        }
}

TEST_CASE("the balanced partition is optimal for n <= 12") {
    for (int n = 3; n <= 12; ++n) {
        Integer best3_s = 0, best3_t = 0, best2_b = 0, best2_j = 0;
        for (int a = 0; a <= n; ++a) {
            const int two[] = {a, n - a};
            best2_b = std::max(best2_b, construction_edges_for_sizes(ConstructionKind::B, two));
            best2_j = std::max(best2_j, construction_edges_for_sizes(ConstructionKind::J, two));
            for (int b = 0; a + b <= n; ++b) {
                const int three[] = {a, b, n - a - b};
                best3_s = std::max(best3_s, construction_edges_for_sizes(ConstructionKind::S, three));
                best3_t = std::max(best3_t, construction_edges_for_sizes(ConstructionKind::T, three));
                CHECK(construction_edges_for_sizes(ConstructionKind::T, three) ==
                      static_cast<long>(construction_on(ConstructionKind::T, three).size()));
            }
        }
        CHECK(best3_s == construction_edge_count(ConstructionKind::S, n));
        CHECK(best3_t == construction_edge_count(ConstructionKind::T, n));
        CHECK(best2_b == construction_edge_count(ConstructionKind::B, n));
        CHECK(best2_j == construction_edge_count(ConstructionKind::J, n));
        const int k = optimal_j_split(n);
        for (int j = 0; j < k; ++j) CHECK((n - j) * c2(j) < (n - k) * c2(k));
    }
}

TEST_CASE("densities approach the limits") {
    for (ConstructionKind kind : kAll) {
        const double limit = construction_limit_density(kind).get_d();
        const double d30 = static_cast<double>(build_construction(kind, 30).graph.size()) / c3(30);
        CHECK(std::abs(d30 - limit) < 0.05);
    }
    CHECK(construction_limit_density(ConstructionKind::S) == Rational(2, 9));
    CHECK(construction_limit_density(ConstructionKind::J) == Rational(4, 9));
    CHECK(construction_limit_density(ConstructionKind::T) == Rational(5, 9));
    CHECK(construction_limit_density(ConstructionKind::B) == Rational(3, 4));
}

TEST_CASE("freeness checks") {
    const ThreeGraph t12 = build_construction(ConstructionKind::T, 12).graph;
    const ThreeGraph b12 = build_construction(ConstructionKind::B, 12).graph;
    const ThreeGraph s12 = build_construction(ConstructionKind::S, 12).graph;
    CHECK(check_free(t12, single(k4())).free);
    for (const ThreeGraph& f : t_avoided_list()) CHECK(check_free(t12, single(f)).free);
    for (const ThreeGraph& f : b_avoided_list()) CHECK(check_free(b12, single(f)).free);
    CHECK(check_free(b12, single(fano())).free);
    CHECK(check_free(s12, single(h_graph())).free);
    CHECK(check_free(s12, single(f5())).free);

    // B_n contains K4, and the witness is an actual embedding
    const FreenessResult r = check_free(b12, single(k4()));
    REQUIRE_FALSE(r.free);
    REQUIRE(r.witness);
    for (const Triple& e : r.witness->member.edges())
        CHECK(b12.has_edge(r.witness->embedding[e[0]], r.witness->embedding[e[1]], r.witness->embedding[e[2]]));

    // induced members: no four vertices of S_12, T_12 or B_12 span exactly
    // one edge. In B_12 a 2 + 2 split spans K4 and a 3 + 1 split spans K4-.
    Family induced;
    induced.add(parse_graph("4:123"), true);
    CHECK(check_free(s12, induced).free);
    CHECK(check_free(t12, induced).free);
    CHECK(check_free(b12, induced).free);
    Family two_edges;
    two_edges.add(parse_graph("4:123,124"), true);
    CHECK(check_free(b12, two_edges).free);
    Family three_edges;
    three_edges.add(k4_minus(), true);
    CHECK_FALSE(check_free(b12, three_edges).free);
}

TEST_CASE("membership examples") {
    for (ConstructionKind kind : {ConstructionKind::S, ConstructionKind::J, ConstructionKind::B})
        CHECK(is_member(kind, empty_graph(5)));
    CHECK(is_member(ConstructionKind::S, build_construction(ConstructionKind::S, 6).graph));
    CHECK_FALSE(is_member(ConstructionKind::S, k4()));
    CHECK(is_member(ConstructionKind::B, k4()));  // split 2 + 2
    CHECK_FALSE(is_member(ConstructionKind::J, k4()));
    const std::vector<int> perm{5, 3, 1, 0, 2, 4};
    CHECK(is_member(ConstructionKind::S, build_construction(ConstructionKind::S, 6).graph.permuted(perm)));
    CHECK_THROWS_AS(is_member(ConstructionKind::S, empty_graph(8)), DomainError);
}

TEST_CASE("six-vertex induced subgraphs are members") {
    for (ConstructionKind kind : {ConstructionKind::S, ConstructionKind::J, ConstructionKind::B}) {
        const auto subs = induced_subgraphs(build_construction(kind, 12).graph, 6);
        for (const ThreeGraph& g : subs) CHECK(is_member(kind, g));
        // and conversely the limit produces the same patterns
        const auto support = limit_support(limit_construction(kind), 6);
        CHECK(std::vector<ThreeGraph>(subs.begin(), subs.end()) == support);
    }
    CHECK(limit_support(limit_construction(ConstructionKind::S), 3) ==
          std::vector<ThreeGraph>{empty_graph(3), complete_graph(3)});
}

TEST_CASE("limit constructions") {
    for (ConstructionKind kind : kAll) {
        const LimitConstruction l = limit_construction(kind);
        CHECK(static_cast<int>(l.weights.size()) == construction_class_count(kind));
        Rational total = 0;
        for (const Rational& w : l.weights) total += w;
        CHECK(total == 1);
    }
    const LimitConstruction j = limit_construction(ConstructionKind::J);
    const int classes[] = {0, 0, 1};
    CHECK(pattern_graph(j, classes) == complete_graph(3));
    const int other[] = {0, 1, 1};
    CHECK(pattern_graph(j, other).size() == 0);
}

}  // TEST_SUITE
