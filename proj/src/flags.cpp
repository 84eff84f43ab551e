#include "turan/flags.hpp"

#include "turan/error.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>

namespace turan {

std::vector<int> type_orders(int n) {
    if (n < 5 || n > 7) throw DomainError("flag computations support n in {5, 6, 7}, got " + std::to_string(n));
    std::vector<int> out;
    for (int s = (n % 2 == 0 ? 2 : 1); s < n; s += 2) out.push_back(s);
    return out;
}

FlagContext::FlagContext(int index, ThreeGraph type, int flag_order, std::vector<ThreeGraph> flags)
    : index_(index), type_(std::move(type)), flag_order_(flag_order), flags_(std::move(flags)), type_mask_(type_.mask()) {
    if (flag_order_ <= type_.order()) throw DomainError("flag order must exceed type order");
    for (std::size_t i = 0; i < flags_.size(); ++i) {
        const ThreeGraph& f = flags_[i];
        if (f.order() != flag_order_) throw DomainError("flag of wrong order in context");
        std::vector<int> labeled(type_.order());
        for (int v = 0; v < type_.order(); ++v) labeled[v] = v;
        if (f.induced(labeled) != type_) throw DomainError("flag " + to_string(f) + " does not extend its type");
        const Mask128 rep = flag_representative(f, type_.order());
        if (!lookup_.emplace(rep, static_cast<int>(i)).second)
            throw DomainError("duplicate flag " + to_string(f) + " in context");
    }
}

int FlagContext::find_flag(Mask128 representative) const {
    auto it = lookup_.find(representative);
    return it == lookup_.end() ? -1 : it->second;
}

Mask128 flag_representative(const ThreeGraph& labeled, int s) {
    return partial_canonical_mask(labeled.order(), labeled.mask(), s);
}

namespace {

// Calls f(theta) for every injective s-tuple of vertices of 0..n-1.
void for_each_injection(int n, int s, const std::function<void(const std::vector<int>&)>& f) {
    std::vector<int> theta(s);
    std::vector<bool> used(n, false);
    std::function<void(int)> rec = [&](int pos) {
        if (pos == s) {
            f(theta);
            return;
        }
        for (int v = 0; v < n; ++v) {
            if (used[v]) continue;
            used[v] = true;
            theta[pos] = v;
            rec(pos + 1);
            used[v] = false;
        }
    };
    rec(0);
}

// All k-subsets of `items`, each as a bitmask over positions in `items`.
std::vector<unsigned> subsets_of_size(int size, int k) {
    std::vector<unsigned> out;
    for (unsigned m = 0; m < (1U << size); ++m)
        if (__builtin_popcount(m) == k) out.push_back(m);
    return out;
}

std::vector<int> labeled_vertices(const std::vector<int>& theta, const std::vector<int>& rest, unsigned subset) {
    std::vector<int> v = theta;
    for (std::size_t i = 0; i < rest.size(); ++i)
        if ((subset >> i) & 1U) v.push_back(rest[i]);
    return v;
}

Integer falling_factorial(int n, int k) {
    Integer r = 1;
    for (int i = 0; i < k; ++i) r *= n - i;
    return r;
}

Integer binomial(int n, int k) {
    Integer r;
    mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
    return r;
}

}  // namespace

std::vector<FlagContext> enumerate_types_and_flags(int n, std::span<const ThreeGraph> admissible) {
    const std::vector<int> orders = type_orders(n);
    // (s, type mask) -> flag representatives
    std::map<std::pair<int, Mask128>, std::set<Mask128>> found;
    for (const ThreeGraph& host : admissible) {
        if (host.order() != n) throw DomainError("admissible graph of wrong order");
        for (int s : orders) {
            const int m = flag_order(n, s);
            const std::vector<unsigned> halves = subsets_of_size(n - s, m - s);
            for_each_injection(n, s, [&](const std::vector<int>& theta) {
                const Mask128 type_mask = host.induced(theta).mask();
                std::vector<int> rest;
                for (int v = 0; v < n; ++v)
                    if (std::find(theta.begin(), theta.end(), v) == theta.end()) rest.push_back(v);
                auto& flags = found[{s, type_mask}];
                for (unsigned half : halves)
                    flags.insert(flag_representative(host.induced(labeled_vertices(theta, rest, half)), s));
            });
        }
    }
    std::vector<FlagContext> contexts;
    for (const auto& [key, reps] : found) {
        const auto& [s, type_mask] = key;
        const int m = flag_order(n, s);
        std::vector<ThreeGraph> flags;
        for (Mask128 r : reps) flags.push_back(ThreeGraph::from_mask(m, r));
        contexts.emplace_back(static_cast<int>(contexts.size()), ThreeGraph::from_mask(s, type_mask), m,
                              std::move(flags));
    }
    return contexts;
}

Rational PairDensityMatrix::at(int a, int b) const {
    if (a > b) std::swap(a, b);
    auto it = std::lower_bound(entries.begin(), entries.end(), std::pair{a, b}, [](const Entry& e, std::pair<int, int> k) {
        return std::pair{e.row, e.col} < k;
    });
    if (it == entries.end() || it->row != a || it->col != b) return Rational(0);
    return make_rational(Integer(it->count), denominator);
}

std::vector<std::vector<Rational>> PairDensityMatrix::dense() const {
    std::vector<std::vector<Rational>> out(dimension, std::vector<Rational>(dimension, Rational(0)));
    for (const Entry& e : entries) {
        Rational v = make_rational(Integer(e.count), denominator);
        out[e.row][e.col] = v;
        out[e.col][e.row] = v;
    }
    return out;
}

PairDensityMatrix pair_density_matrix(const FlagContext& context, const ThreeGraph& host) {
    const int n = host.order();
    const int s = context.type_order();
    const int m = context.flag_order();
    if (2 * m - s != n)
        throw DomainError("pair_density_matrix: host order " + std::to_string(n) + " does not equal 2m - s = " +
                          std::to_string(2 * m - s));

    PairDensityMatrix out;
    out.type_index = context.index();
    out.dimension = static_cast<int>(context.dimension());
    out.denominator = falling_factorial(n, s) * binomial(n - s, m - s);

    const Mask128 type_mask = context.type().mask();
    const std::vector<unsigned> halves = subsets_of_size(n - s, m - s);
    const unsigned full = (1U << (n - s)) - 1;
    std::map<std::pair<int, int>, long> counts;
    std::vector<int> flag_of(1U << (n - s), -1);

    for_each_injection(n, s, [&](const std::vector<int>& theta) {
        if (host.induced(theta).mask() != type_mask) return;
        std::vector<int> rest;
        for (int v = 0; v < n; ++v)
            if (std::find(theta.begin(), theta.end(), v) == theta.end()) rest.push_back(v);
        for (unsigned half : halves)
            flag_of[half] = context.find_flag(flag_representative(host.induced(labeled_vertices(theta, rest, half)), s));
        for (unsigned half : halves) {
            const int a = flag_of[half];
            const int b = flag_of[full & ~half];
            if (a < 0 || b < 0 || a > b) continue;
            ++counts[{a, b}];
        }
    });
    out.entries.reserve(counts.size());
    for (const auto& [key, count] : counts) out.entries.push_back({key.first, key.second, count});
    return out;
}

Rational edge_density(const ThreeGraph& host) {
    if (host.order() < 3) throw DomainError("edge_density requires at least 3 vertices");
    return make_rational(Integer(static_cast<unsigned long>(host.size())), Integer(choose3(host.order())));
}

}  // namespace turan
