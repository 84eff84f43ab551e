#include "turan/constructions.hpp"

#include "turan/error.hpp"

#include <algorithm>
#include <cctype>
#include <set>

namespace turan {

ConstructionKind parse_construction_kind(std::string_view text) {
    if (text.size() == 1) {
        switch (std::toupper(static_cast<unsigned char>(text[0]))) {
            case 'S': return ConstructionKind::S;
            case 'J': return ConstructionKind::J;
            case 'T': return ConstructionKind::T;
            case 'B': return ConstructionKind::B;
            default: break;
        }
    }
    throw DomainError("unknown construction kind '" + std::string(text) + "' (expected S, J, T or B)");
}

char to_char(ConstructionKind kind) {
    switch (kind) {
        case ConstructionKind::S: return 'S';
        case ConstructionKind::J: return 'J';
        case ConstructionKind::T: return 'T';
        case ConstructionKind::B: return 'B';
    }
    return '?';
}

int construction_class_count(ConstructionKind kind) {
    return kind == ConstructionKind::S || kind == ConstructionKind::T ? 3 : 2;
}

bool construction_rule(ConstructionKind kind, int i, int j, int k) {
    switch (kind) {
        case ConstructionKind::S:
            return i != j && j != k && i != k;
        case ConstructionKind::J:
            return i == 0 && j == 0 && k == 1;
        case ConstructionKind::T: {
            if (i != j && j != k && i != k) return true;
            if (i == j && j == k) return false;
            // exactly two equal: the pair class p and the single class q
            const int p = i == j ? i : k;
            const int q = i == j ? k : i;
            return q == (p + 1) % 3;
        }
        case ConstructionKind::B:
            return !(i == j && j == k);
    }
    return false;
}

namespace {

Integer binom(long n, long k) {
    if (n < k || k < 0) return 0;
    Integer r;
    mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
    return r;
}

std::vector<int> balanced_sizes(int n, int parts) {
    std::vector<int> sizes(parts, n / parts);
    for (int i = 0; i < n % parts; ++i) ++sizes[i];
    return sizes;
}

std::vector<int> sizes_for(ConstructionKind kind, int n) {
    if (kind == ConstructionKind::J) {
        const int k = optimal_j_split(n);
        return {k, n - k};
    }
    return balanced_sizes(n, construction_class_count(kind));
}

bool rule_unsorted(ConstructionKind kind, int a, int b, int c) {
    int t[3] = {a, b, c};
    std::sort(t, t + 3);
    return construction_rule(kind, t[0], t[1], t[2]);
}

}  // namespace

int optimal_j_split(int n) {
    int best = 0;
    Integer best_edges = -1;
    for (int k = 0; k <= n; ++k) {
        const Integer e = Integer(n - k) * binom(k, 2);
        if (e > best_edges) best_edges = e, best = k;
    }
    return best;
}

ThreeGraph construction_on(ConstructionKind kind, std::span<const int> class_sizes) {
    if (static_cast<int>(class_sizes.size()) != construction_class_count(kind))
        throw DomainError(std::string("construction ") + to_char(kind) + " needs " +
                          std::to_string(construction_class_count(kind)) + " classes");
    std::vector<int> class_of;
    for (std::size_t c = 0; c < class_sizes.size(); ++c) {
        if (class_sizes[c] < 0) throw DomainError("negative class size");
        class_of.insert(class_of.end(), class_sizes[c], static_cast<int>(c));
    }
    const int n = static_cast<int>(class_of.size());
    if (n > kMaxBlowupOrder) throw DomainError("construction order exceeds " + std::to_string(kMaxBlowupOrder));
    ThreeGraph g(n);
    for (int c = 2; c < n; ++c)
        for (int b = 1; b < c; ++b)
            for (int a = 0; a < b; ++a)
                if (rule_unsorted(kind, class_of[a], class_of[b], class_of[c])) g.add_edge(a, b, c);
    return g;
}

Construction build_construction(ConstructionKind kind, int n) {
    if (n < 3) throw DomainError("constructions need n >= 3");
    const std::vector<int> sizes = sizes_for(kind, n);
    Construction out{kind, {}, construction_on(kind, sizes)};
    int next = 0;
    for (int s : sizes) {
        std::vector<int> cls(s);
        for (int& v : cls) v = next++;
        out.classes.push_back(std::move(cls));
    }
    return out;
}

Integer construction_edges_for_sizes(ConstructionKind kind, std::span<const int> s) {
    if (static_cast<int>(s.size()) != construction_class_count(kind)) throw DomainError("wrong number of class sizes");
    switch (kind) {
        case ConstructionKind::S:
            return Integer(s[0]) * s[1] * s[2];
        case ConstructionKind::J:
            return binom(s[0], 2) * s[1];
        case ConstructionKind::T:
            return Integer(s[0]) * s[1] * s[2] + binom(s[0], 2) * s[1] + binom(s[1], 2) * s[2] + binom(s[2], 2) * s[0];
        case ConstructionKind::B:
            return binom(s[0] + s[1], 3) - binom(s[0], 3) - binom(s[1], 3);
    }
    return 0;
}

Integer construction_edge_count(ConstructionKind kind, int n) {
    if (n < 3) throw DomainError("constructions need n >= 3");
    switch (kind) {
        case ConstructionKind::S:
            return Integer(n / 3) * ((n + 1) / 3) * ((n + 2) / 3);
        case ConstructionKind::J: {
            Integer best = 0;
            for (int k = 0; k <= n; ++k) best = std::max<Integer>(best, Integer(n - k) * binom(k, 2));
            return best;
        }
        case ConstructionKind::T:
        case ConstructionKind::B: {
            const std::vector<int> sizes = balanced_sizes(n, construction_class_count(kind));
            return construction_edges_for_sizes(kind, sizes);
        }
    }
    return 0;
}

Rational construction_limit_density(ConstructionKind kind) {
    switch (kind) {
        case ConstructionKind::S: return Rational(2, 9);
        case ConstructionKind::J: return Rational(4, 9);
        case ConstructionKind::T: return Rational(5, 9);
        case ConstructionKind::B: return Rational(3, 4);
    }
    return 0;
}

FreenessResult check_free(const ThreeGraph& host, const Family& family) {
    for (const ThreeGraph& f : family.members())
        if (auto e = find_subgraph(host, f)) return {false, FreenessWitness{f, false, *e}};
    for (const ThreeGraph& f : family.induced_members())
        if (auto e = find_induced(host, f)) return {false, FreenessWitness{f, true, *e}};
    return {};
}

bool is_member(ConstructionKind kind, const ThreeGraph& g) {
    const int n = g.order();
    if (n > kMaxMembershipOrder)
        throw DomainError("is_member: order " + std::to_string(n) + " exceeds " + std::to_string(kMaxMembershipOrder));
    const int k = construction_class_count(kind);
    std::vector<int> class_of(n, 0);
    long total = 1;
    for (int i = 0; i < n; ++i) total *= k;
    for (long code = 0; code < total; ++code) {
        long c = code;
        for (int v = 0; v < n; ++v) class_of[v] = static_cast<int>(c % k), c /= k;
        bool ok = true;
        for (int z = 2; z < n && ok; ++z)
            for (int y = 1; y < z && ok; ++y)
                for (int x = 0; x < y && ok; ++x)
                    ok = g.has_edge(x, y, z) == rule_unsorted(kind, class_of[x], class_of[y], class_of[z]);
        if (ok) return true;
    }
    return false;
}

LimitConstruction limit_construction(ConstructionKind kind) {
    switch (kind) {
        case ConstructionKind::S:
        case ConstructionKind::T:
            return {kind, {Rational(1, 3), Rational(1, 3), Rational(1, 3)}};
        case ConstructionKind::J:
            return {kind, {Rational(2, 3), Rational(1, 3)}};
        case ConstructionKind::B:
            return {kind, {Rational(1, 2), Rational(1, 2)}};
    }
    return {kind, {}};
}

ThreeGraph pattern_graph(const LimitConstruction& limit, std::span<const int> class_of) {
    const int n = static_cast<int>(class_of.size());
    ThreeGraph g(n);
    for (int c = 2; c < n; ++c)
        for (int b = 1; b < c; ++b)
            for (int a = 0; a < b; ++a)
                if (rule_unsorted(limit.kind, class_of[a], class_of[b], class_of[c])) g.add_edge(a, b, c);
    return g;
}

std::vector<ThreeGraph> limit_support(const LimitConstruction& limit, int k) {
    const int classes = static_cast<int>(limit.weights.size());
    std::set<CanonicalForm> seen;
    std::vector<int> class_of(k, 0);
    // Nondecreasing class sequences suffice: the pattern up to isomorphism
    // only depends on the class multiset.
    auto rec = [&](auto&& self, int pos, int from) -> void {
        if (pos == k) {
            seen.insert(canonical_form(pattern_graph(limit, class_of)));
            return;
        }
        for (int c = from; c < classes; ++c) {
            if (sgn(limit.weights[c]) <= 0) continue;
            class_of[pos] = c;
            self(self, pos + 1, c);
        }
    };
    rec(rec, 0, 0);
    std::vector<ThreeGraph> out;
    for (const CanonicalForm& f : seen) out.push_back(f.graph());
    return out;
}

}  // namespace turan
