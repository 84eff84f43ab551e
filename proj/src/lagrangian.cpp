#include "turan/lagrangian.hpp"

#include "turan/error.hpp"
#include "parallel.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace turan {

FieldElement lambda_at(const ThreeGraph& g, std::span<const FieldElement> x) {
    if (static_cast<int>(x.size()) != g.order())
        throw DomainError("lambda_at: " + std::to_string(x.size()) + " weights for " + std::to_string(g.order()) +
                          " vertices");
    std::int64_t d = 0;
    for (const FieldElement& xi : x) {
        if (xi.is_rational()) continue;
        if (d != 0 && xi.discriminant() != d) throw DomainError("lambda_at: weights lie in different quadratic fields");
        d = xi.discriminant();
    }
    FieldElement sum;
    for (const Triple& e : g.edges()) sum += x[e[0]] * x[e[1]] * x[e[2]];
    return sum * FieldElement(6);
}

double lambda_at(const ThreeGraph& g, std::span<const double> x) {
    if (static_cast<int>(x.size()) != g.order()) throw DomainError("lambda_at: dimension mismatch");
    double sum = 0;
    for (const Triple& e : g.edges()) sum += x[e[0]] * x[e[1]] * x[e[2]];
    return 6 * sum;
}

std::vector<double> lambda_gradient(const ThreeGraph& g, std::span<const double> x) {
    std::vector<double> grad(x.size(), 0.0);
    for (const Triple& e : g.edges()) {
        grad[e[0]] += 6 * x[e[1]] * x[e[2]];
        grad[e[1]] += 6 * x[e[0]] * x[e[2]];
        grad[e[2]] += 6 * x[e[0]] * x[e[1]];
    }
    return grad;
}

AscentTrace replicator_ascent(const ThreeGraph& g, std::vector<double> x0, int iterations) {
    if (static_cast<int>(x0.size()) != g.order()) throw DomainError("replicator_ascent: dimension mismatch");
    AscentTrace trace{std::move(x0), {}};
    std::vector<double>& x = trace.x;
    double value = lambda_at(g, x);
    trace.values.push_back(value);
    if (value <= 0) return trace;
    for (int it = 0; it < iterations; ++it) {
        const std::vector<double> grad = lambda_gradient(g, x);
        double moved = 0;
        double total = 0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            const double next = x[i] * grad[i] / (3 * value);
            moved = std::max(moved, std::abs(next - x[i]));
            x[i] = next;
            total += next;
        }
        for (double& xi : x) xi /= total;  // guards against drift off the simplex
        value = lambda_at(g, x);
        trace.values.push_back(value);
        if (moved < 1e-17) break;
    }
    return trace;
}

namespace {

// Replicator ascent approaches optima on a face of the simplex only like
// 1/t. Zeroing a small coordinate and ascending again reaches such optima
// directly; the result is kept only when it does not lose value.
void prune_support(const ThreeGraph& g, AscentTrace& t, int iterations) {
    for (std::size_t round = 0; round < t.x.size(); ++round) {
        std::size_t smallest = t.x.size();
        for (std::size_t i = 0; i < t.x.size(); ++i)
            if (t.x[i] > 0 && t.x[i] < 1e-3 && (smallest == t.x.size() || t.x[i] < t.x[smallest])) smallest = i;
        if (smallest == t.x.size()) return;
        std::vector<double> y = t.x;
        const double rest = 1 - y[smallest];
        y[smallest] = 0;
        for (double& yi : y) yi /= rest;
        AscentTrace candidate = replicator_ascent(g, std::move(y), iterations);
        if (candidate.values.back() < t.values.back()) return;
        t = std::move(candidate);
    }
}

std::vector<double> sorted_descending(std::vector<double> v) {
    std::sort(v.begin(), v.end(), std::greater<>());
    return v;
}

}  // namespace

LagrangianResult maximize_lagrangian(const ThreeGraph& g, int restarts, int iterations, std::uint64_t seed) {
    if (restarts < 1) throw DomainError("maximize_lagrangian: restarts must be positive");
    const int k = g.order();
    if (k == 0) return {0.0, {}};
    if (g.size() == 0) return {0.0, std::vector<double>(k, 1.0 / k)};

    std::vector<LagrangianResult> runs(restarts);
    detail::parallel_chunks(static_cast<std::size_t>(restarts), [&](std::size_t begin, std::size_t end) {
        for (std::size_t r = begin; r < end; ++r) {
            std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                              static_cast<std::uint32_t>(r)};
            std::mt19937_64 rng(seq);
            std::exponential_distribution<double> exp1(1.0);
            std::vector<double> x(k);
            double total = 0;
            for (double& xi : x) total += xi = exp1(rng);
            for (double& xi : x) xi /= total;
            AscentTrace t = replicator_ascent(g, std::move(x), iterations);
            prune_support(g, t, iterations);
            runs[r] = {t.values.back(), std::move(t.x)};
        }
    });

    double best = runs[0].value;
    for (const LagrangianResult& r : runs) best = std::max(best, r.value);
    const LagrangianResult* chosen = nullptr;
    std::vector<double> chosen_key;
    for (const LagrangianResult& r : runs) {
        if (r.value < best - 1e-12) continue;
        std::vector<double> key = sorted_descending(r.weights);
        if (!chosen || key > chosen_key) chosen = &r, chosen_key = std::move(key);
    }
    return *chosen;
}

std::vector<int> weighted_class_sizes(std::span<const FieldElement> x, int n) {
    if (x.empty()) throw DomainError("weighted_class_sizes: empty weight vector");
    std::vector<int> sizes;
    long used = 0;
    for (std::size_t i = 0; i + 1 < x.size(); ++i) {
        const Integer f = floor(x[i] * FieldElement(static_cast<long>(n)));
        if (sgn(f) < 0) throw DomainError("weighted_class_sizes: class " + std::to_string(i + 1) + " has negative size");
        if (!f.fits_slong_p() || f.get_si() > n) throw DomainError("weighted_class_sizes: class size exceeds n");
        sizes.push_back(static_cast<int>(f.get_si()));
        used += sizes.back();
    }
    if (used > n) throw DomainError("weighted_class_sizes: last class has negative size");
    sizes.push_back(static_cast<int>(n - used));
    return sizes;
}

ThreeGraph weighted_blowup(const ThreeGraph& g, std::span<const FieldElement> x, int n) {
    if (static_cast<int>(x.size()) != g.order()) throw DomainError("weighted_blowup: dimension mismatch");
    if (n < g.order()) throw DomainError("weighted_blowup: n must be at least |V(G)|");
    const std::vector<int> sizes = weighted_class_sizes(x, n);
    return blowup(g, sizes);
}

WeightVector parse_weight_vector(std::string_view text) {
    WeightVector out;
    std::string cur;
    auto flush = [&] {
        if (!cur.empty()) out.push_back(parse_field_element(cur)), cur.clear();
    };
    for (char c : text) {
        if (c == ',' || std::isspace(static_cast<unsigned char>(c)))
            flush();
        else
            cur += c;
    }
    flush();
    if (out.empty()) throw ParseError("empty weight vector");
    return out;
}

}  // namespace turan
