#pragma once

#include "turan/family.hpp"
#include "turan/three_graph.hpp"

#include <algorithm>
#include <filesystem>
#include <numeric>
#include <random>
#include <vector>

namespace turan::testing {

inline std::filesystem::path data_dir() { return TURAN_TEST_DATA_DIR; }

inline ThreeGraph random_graph(std::mt19937_64& rng, int n, double p = 0.5) {
    std::bernoulli_distribution coin(p);
    ThreeGraph g(n);
    for (int c = 2; c < n; ++c)
        for (int b = 1; b < c; ++b)
            for (int a = 0; a < b; ++a)
                if (coin(rng)) g.add_edge(a, b, c);
    return g;
}

inline std::vector<int> random_permutation(std::mt19937_64& rng, int n) {
    std::vector<int> p(static_cast<std::size_t>(n));
    std::iota(p.begin(), p.end(), 0);
    std::shuffle(p.begin(), p.end(), rng);
    return p;
}

/// Every 3-graph on n vertices up to isomorphism, by bucketing all 2^C(n,3)
/// edge sets on their canonical form. Only sensible for n <= 5.
inline std::vector<ThreeGraph> all_graphs_bruteforce(int n) {
    const int triples = choose3(n);
    std::vector<Mask128> forms;
    for (std::uint64_t m = 0; m < (std::uint64_t{1} << triples); ++m)
        forms.push_back(canonical_form(ThreeGraph::from_mask(n, m)).mask);
    std::sort(forms.begin(), forms.end());
    forms.erase(std::unique(forms.begin(), forms.end()), forms.end());
    std::vector<ThreeGraph> out;
    for (Mask128 m : forms) out.push_back(ThreeGraph::from_mask(n, m));
    return out;
}

/// All 3-graphs of order <= max_n up to isomorphism.
inline std::vector<ThreeGraph> all_graphs_up_to(int max_n) {
    std::vector<ThreeGraph> out;
    for (int n = 1; n <= max_n; ++n) {
        auto part = all_graphs_bruteforce(n);
        out.insert(out.end(), part.begin(), part.end());
    }
    return out;
}

// Graphs that recur across the suite.
inline ThreeGraph k4() { return parse_graph("4:123,124,134,234"); }
inline ThreeGraph k4_minus() { return parse_graph("4:123,124,134"); }
inline ThreeGraph f5() { return parse_graph("5:123,124,345"); }
inline ThreeGraph f32() { return parse_graph("5:123,145,245,345"); }
inline ThreeGraph h_graph() { return parse_graph("6:123,124,345,156"); }
inline ThreeGraph fano() { return parse_graph("7:123,145,356,167,257,347,246"); }

/// The forbidden family {H, H1, H2, H3} whose Turan density is 2/9.
inline Family two_ninths_family() {
    Family f;
    f.add(h_graph());
    f.add(k4_minus());
    f.add(parse_graph("5:123,124,125,345"));
    f.add(parse_graph("5:123,124,135,245"));
    return f;
}

/// Graphs avoided by T_n whose Turan density is 5/9.
inline std::vector<ThreeGraph> t_avoided_list() {
    std::vector<ThreeGraph> out;
    for (const char* g : {"6:123,124,134,125,245,136,346,156", "6:123,124,134,125,135,245,345,236,456",
                          "6:123,124,134,125,135,245,126,236,146", "6:123,124,134,125,135,345,126,236,246",
                          "6:123,124,134,125,235,345,126,246,156", "6:123,124,134,125,235,136,346,156,356",
                          "6:123,124,134,125,135,245,126,136,346,456", "6:123,124,134,125,135,345,126,236,146,156",
                          "6:123,124,134,125,135,245,126,236,346,356", "6:123,124,134,125,135,345,126,236,346,356",
                          "6:123,124,134,125,135,146,246,156,256,456", "6:123,124,134,125,135,146,246,156,356,456"})
        out.push_back(parse_graph(g));
    return out;
}

/// Covering graphs avoided by B_n whose Turan density is 3/4.
inline std::vector<ThreeGraph> b_avoided_list() {
    std::vector<ThreeGraph> out;
    for (const char* g : {"6:123,124,134,234,125,135,235,145,126,136,236,146,256,356",
                          "6:123,124,134,234,125,135,235,145,245,126,136,236,146,356,456",
                          "6:123,124,134,234,125,135,235,145,245,126,136,146,346,256,356,456"})
        out.push_back(parse_graph(g));
    return out;
}

inline Family single(const ThreeGraph& g) {
    Family f;
    f.add(g);
    return f;
}

}  // namespace turan::testing
