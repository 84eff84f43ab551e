#include "turan/three_graph.hpp"

#include "turan/error.hpp"

#include <algorithm>
#include <memory>
#include <mutex>
#include <numeric>

namespace turan {

namespace {

constexpr Mask128 kOne = 1;

std::size_t word_count(int n) { return (static_cast<std::size_t>(choose3(n)) + 63) / 64; }

// Relabeling tables: for each permutation of 0..n-1, the image of every
// triple index. Cached for n <= 8; order 9 is permuted on the fly.
struct PermutationTable {
    int triples = 0;
    std::size_t perms = 0;
    std::vector<std::uint8_t> image;  // perms * triples
};

const PermutationTable& permutation_table(int n) {
    static std::once_flag flags[9];
    static std::unique_ptr<PermutationTable> tables[9];
    std::call_once(flags[n], [n] {
        auto t = std::make_unique<PermutationTable>();
        t->triples = choose3(n);
        std::vector<int> perm(n);
        std::iota(perm.begin(), perm.end(), 0);
        do {
            for (int idx = 0; idx < t->triples; ++idx) {
                Triple e = triple_at(idx);
                t->image.push_back(static_cast<std::uint8_t>(triple_index(perm[e[0]], perm[e[1]], perm[e[2]])));
            }
            ++t->perms;
        } while (std::next_permutation(perm.begin(), perm.end()));
        tables[n] = std::move(t);
    });
    return *tables[n];
}

std::vector<int> set_bits(Mask128 mask) {
    std::vector<int> bits;
    for (int i = 0; mask != 0; ++i, mask >>= 1)
        if (mask & 1) bits.push_back(i);
    return bits;
}

char label_char(int v) { return v < 9 ? static_cast<char>('1' + v) : static_cast<char>('a' + (v - 9)); }

int label_value(char c) {
    if (c >= '1' && c <= '9') return c - '1';
    if (c >= 'a' && c <= 'z') return 9 + (c - 'a');
    return -1;
}

}  // namespace

int triple_index(int a, int b, int c) {
    if (a > b) std::swap(a, b);
    if (b > c) std::swap(b, c);
    if (a > b) std::swap(a, b);
    return choose3(c) + choose2(b) + a;
}

Triple triple_at(int index) {
    int c = 2;
    while (choose3(c + 1) <= index) ++c;
    index -= choose3(c);
    int b = 1;
    while (choose2(b + 1) <= index) ++b;
    index -= choose2(b);
    return {index, b, c};
}

ThreeGraph::ThreeGraph(int n) : n_(n), words_(word_count(n), 0) {
    if (n < 0) throw DomainError("negative vertex count");
}

ThreeGraph::ThreeGraph(int n, std::span<const Triple> edges) : ThreeGraph(n) {
    for (const Triple& e : edges) add_edge(e[0], e[1], e[2]);
}

ThreeGraph::ThreeGraph(int n, std::initializer_list<Triple> edges)
    : ThreeGraph(n, std::span<const Triple>(edges.begin(), edges.size())) {}

ThreeGraph ThreeGraph::from_mask(int n, Mask128 mask) {
    if (n > kMaxCanonicalOrder) throw DomainError("mask graphs are limited to order 9");
    ThreeGraph g(n);
    const int t = choose3(n);
    if (t < 128 && (mask >> t) != 0) throw DomainError("mask has bits beyond C(n,3)");
    if (!g.words_.empty()) g.words_[0] = static_cast<std::uint64_t>(mask);
    if (g.words_.size() > 1) g.words_[1] = static_cast<std::uint64_t>(mask >> 64);
    return g;
}

std::size_t ThreeGraph::size() const noexcept {
    std::size_t count = 0;
    for (std::uint64_t w : words_) count += static_cast<std::size_t>(__builtin_popcountll(w));
    return count;
}

bool ThreeGraph::has_edge(int a, int b, int c) const {
    if (a == b || b == c || a == c) return false;
    return test(triple_index(a, b, c));
}

void ThreeGraph::set_bit(int index, bool on) {
    const std::uint64_t bit = std::uint64_t{1} << (index & 63);
    if (on)
        words_[index >> 6] |= bit;
    else
        words_[index >> 6] &= ~bit;
}

void ThreeGraph::add_edge(int a, int b, int c) {
    if (a == b || b == c || a == c) throw DomainError("edge with repeated vertex");
    if (std::min({a, b, c}) < 0 || std::max({a, b, c}) >= n_) throw DomainError("edge vertex out of range");
    set_bit(triple_index(a, b, c), true);
}

void ThreeGraph::remove_edge(int a, int b, int c) {
    if (a == b || b == c || a == c) return;
    if (std::min({a, b, c}) < 0 || std::max({a, b, c}) >= n_) throw DomainError("edge vertex out of range");
    set_bit(triple_index(a, b, c), false);
}

std::vector<Triple> ThreeGraph::edges() const {
    std::vector<Triple> out;
    const int t = choose3(n_);
    for (std::size_t w = 0; w < words_.size(); ++w) {
        std::uint64_t bits = words_[w];
        while (bits != 0) {
            const int idx = static_cast<int>(w * 64) + __builtin_ctzll(bits);
            bits &= bits - 1;
            if (idx < t) out.push_back(triple_at(idx));
        }
    }
    return out;
}

Mask128 ThreeGraph::mask() const {
    if (n_ > kMaxCanonicalOrder) throw DomainError("mask() requires order <= 9");
    Mask128 m = 0;
    if (!words_.empty()) m = words_[0];
    if (words_.size() > 1) m |= static_cast<Mask128>(words_[1]) << 64;
    return m;
}

ThreeGraph ThreeGraph::induced(std::span<const int> vertices) const {
    const int k = static_cast<int>(vertices.size());
    ThreeGraph g(k);
    for (int c = 2; c < k; ++c)
        for (int b = 1; b < c; ++b)
            for (int a = 0; a < b; ++a)
                if (has_edge(vertices[a], vertices[b], vertices[c])) g.set_bit(choose3(c) + choose2(b) + a, true);
    return g;
}

ThreeGraph ThreeGraph::permuted(std::span<const int> perm) const {
    if (static_cast<int>(perm.size()) != n_) throw DomainError("permutation size mismatch");
    ThreeGraph g(n_);
    for (const Triple& e : edges()) g.add_edge(perm[e[0]], perm[e[1]], perm[e[2]]);
    return g;
}

ThreeGraph ThreeGraph::with_isolated(int extra) const {
    ThreeGraph g(n_ + extra);
    std::copy(words_.begin(), words_.end(), g.words_.begin());
    return g;
}

std::strong_ordering operator<=>(const ThreeGraph& x, const ThreeGraph& y) {
    if (auto c = x.n_ <=> y.n_; c != 0) return c;
    // Compare as integers, most significant word first.
    for (std::size_t i = x.words_.size(); i-- > 0;)
        if (auto c = x.words_[i] <=> y.words_[i]; c != 0) return c;
    return std::strong_ordering::equal;
}

ThreeGraph complete_graph(int n) {
    ThreeGraph g(n);
    for (int c = 2; c < n; ++c)
        for (int b = 1; b < c; ++b)
            for (int a = 0; a < b; ++a) g.add_edge(a, b, c);
    return g;
}

ThreeGraph empty_graph(int n) { return ThreeGraph(n); }

CanonicalForm canonical_form(const ThreeGraph& g) {
    const int n = g.order();
    if (n > kMaxCanonicalOrder)
        throw DomainError("canonical_form: order " + std::to_string(n) + " exceeds the limit of 9");
    const Mask128 mask = g.mask();
    if (n < 3 || mask == 0) return {n, mask};
    const std::vector<int> bits = set_bits(mask);
    if (static_cast<int>(bits.size()) == choose3(n)) return {n, mask};

    Mask128 best = mask;
    if (n <= 8) {
        const PermutationTable& table = permutation_table(n);
        const std::uint8_t* row = table.image.data();
        for (std::size_t p = 0; p < table.perms; ++p, row += table.triples) {
            Mask128 image = 0;
            for (int b : bits) image |= kOne << row[b];
            if (image < best) best = image;
        }
    } else {
        std::vector<Triple> edges = g.edges();
        std::vector<int> perm(n);
        std::iota(perm.begin(), perm.end(), 0);
        do {
            Mask128 image = 0;
            for (const Triple& e : edges) image |= kOne << triple_index(perm[e[0]], perm[e[1]], perm[e[2]]);
            if (image < best) best = image;
        } while (std::next_permutation(perm.begin(), perm.end()));
    }
    return {n, best};
}

ThreeGraph canonical_graph(const ThreeGraph& g) { return canonical_form(g).graph(); }

Mask128 partial_canonical_mask(int n, Mask128 mask, int fixed) {
    if (n > kMaxCanonicalOrder) throw DomainError("partial_canonical_mask: order exceeds 9");
    if (n - fixed <= 1 || mask == 0) return mask;
    const std::vector<int> bits = set_bits(mask);
    std::vector<Triple> edges;
    edges.reserve(bits.size());
    for (int b : bits) edges.push_back(triple_at(b));
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    Mask128 best = mask;
    while (std::next_permutation(perm.begin() + fixed, perm.end())) {
        Mask128 image = 0;
        for (const Triple& e : edges) image |= kOne << triple_index(perm[e[0]], perm[e[1]], perm[e[2]]);
        if (image < best) best = image;
    }
    return best;
}

bool isomorphic(const ThreeGraph& x, const ThreeGraph& y) {
    if (x.order() != y.order() || x.size() != y.size()) return false;
    if (x.order() <= kMaxCanonicalOrder) return canonical_form(x) == canonical_form(y);
    return find_induced(x, y).has_value();
}

namespace {

// Backtracking embedding of `pattern` into `host`. Pattern vertices are
// placed in a fixed order; after placing position i, every pattern triple
// whose latest vertex is position i is checked.
class EmbeddingSearch {
public:
    EmbeddingSearch(const ThreeGraph& host, const ThreeGraph& pattern, bool induced)
        : host_(host), pattern_(pattern), induced_(induced) {}

    std::optional<std::vector<int>> run() {
        const int k = pattern_.order();
        const int n = host_.order();
        if (k > n) return std::nullopt;
        if (!induced_ && pattern_.size() > host_.size()) return std::nullopt;

        // Place high-degree pattern vertices first.
        std::vector<int> degree(k, 0);
        for (const Triple& e : pattern_.edges())
            for (int v : e) ++degree[v];
        order_.resize(k);
        std::iota(order_.begin(), order_.end(), 0);
        std::stable_sort(order_.begin(), order_.end(), [&](int a, int b) { return degree[a] > degree[b]; });
        position_.assign(k, 0);
        for (int i = 0; i < k; ++i) position_[order_[i]] = i;

        checks_.assign(k, {});
        for (int c = 2; c < k; ++c)
            for (int b = 1; b < c; ++b)
                for (int a = 0; a < b; ++a) {
                    const bool edge = pattern_.has_edge(a, b, c);
                    if (!edge && !induced_) continue;
                    const int last = std::max({position_[a], position_[b], position_[c]});
                    checks_[last].push_back({{a, b, c}, edge});
                }

        host_degree_.assign(n, 0);
        for (const Triple& e : host_.edges())
            for (int v : e) ++host_degree_[v];
        pattern_degree_ = degree;

        image_.assign(k, -1);
        used_.assign(n, false);
        if (search(0)) return image_;
        return std::nullopt;
    }

private:
    struct Check {
        Triple triple;
        bool edge;
    };

    bool search(int pos) {
        if (pos == static_cast<int>(order_.size())) return true;
        const int v = order_[pos];
        for (int h = 0; h < host_.order(); ++h) {
            if (used_[h]) continue;
            if (!induced_ && host_degree_[h] < pattern_degree_[v]) continue;
            image_[v] = h;
            bool ok = true;
            for (const Check& c : checks_[pos]) {
                const bool present = host_.has_edge(image_[c.triple[0]], image_[c.triple[1]], image_[c.triple[2]]);
                if (c.edge ? !present : present) {
                    ok = false;
                    break;
                }
            }
            if (ok) {
                used_[h] = true;
                if (search(pos + 1)) return true;
                used_[h] = false;
            }
        }
        image_[v] = -1;
        return false;
    }

    const ThreeGraph& host_;
    const ThreeGraph& pattern_;
    bool induced_;
    std::vector<int> order_, position_, image_, host_degree_, pattern_degree_;
    std::vector<bool> used_;
    std::vector<std::vector<Check>> checks_;
};

}  // namespace

std::optional<std::vector<int>> find_subgraph(const ThreeGraph& host, const ThreeGraph& pattern) {
    return EmbeddingSearch(host, pattern, false).run();
}

std::optional<std::vector<int>> find_induced(const ThreeGraph& host, const ThreeGraph& pattern) {
    return EmbeddingSearch(host, pattern, true).run();
}

bool contains_subgraph(const ThreeGraph& host, const ThreeGraph& pattern) {
    return find_subgraph(host, pattern).has_value();
}

bool contains_induced(const ThreeGraph& host, const ThreeGraph& pattern) {
    return find_induced(host, pattern).has_value();
}

Rational induced_density(const ThreeGraph& pattern, const ThreeGraph& host) {
    const int k = pattern.order();
    const int n = host.order();
    if (k > n) throw DomainError("induced_density: pattern has more vertices than host");
    const bool by_form = k <= kMaxCanonicalOrder;
    const CanonicalForm target = by_form ? canonical_form(pattern) : CanonicalForm{};
    const std::size_t edges = pattern.size();

    Integer hits = 0, total = 0;
    std::vector<int> subset(k);
    std::iota(subset.begin(), subset.end(), 0);
    while (true) {
        ThreeGraph sub = host.induced(subset);
        total += 1;
        if (sub.size() == edges && (by_form ? canonical_form(sub) == target : isomorphic(sub, pattern))) hits += 1;
        // Next k-subset in lexicographic order.
        int i = k - 1;
        while (i >= 0 && subset[i] == n - k + i) --i;
        if (i < 0) break;
        ++subset[i];
        for (int j = i + 1; j < k; ++j) subset[j] = subset[j - 1] + 1;
    }
    return make_rational(hits, total);
}

ThreeGraph blowup(const ThreeGraph& g, std::span<const int> class_sizes) {
    if (static_cast<int>(class_sizes.size()) != g.order()) throw DomainError("blowup: one class size per vertex");
    std::vector<int> start(g.order() + 1, 0);
    for (int v = 0; v < g.order(); ++v) {
        if (class_sizes[v] < 0) throw DomainError("blowup: negative class size");
        start[v + 1] = start[v] + class_sizes[v];
    }
    const long total = start.back();
    if (total > kMaxBlowupOrder) throw DomainError("blowup: result exceeds " + std::to_string(kMaxBlowupOrder) + " vertices");
    ThreeGraph out(static_cast<int>(total));
    for (const Triple& e : g.edges())
        for (int x = start[e[0]]; x < start[e[0] + 1]; ++x)
            for (int y = start[e[1]]; y < start[e[1] + 1]; ++y)
                for (int z = start[e[2]]; z < start[e[2] + 1]; ++z) out.add_edge(x, y, z);
    return out;
}

ThreeGraph blowup(const ThreeGraph& g, int t) {
    if (t < 1) throw DomainError("blowup: t must be positive");
    std::vector<int> sizes(g.order(), t);
    return blowup(g, sizes);
}

namespace {

// Homomorphism search F -> G where every edge maps onto an edge (three
// distinct images). Such a map exists iff F embeds in G(|V(F)|).
class HomomorphismSearch {
public:
    HomomorphismSearch(const ThreeGraph& f, const ThreeGraph& g) : f_(f), g_(g) {}

    bool run() {
        const int k = f_.order();
        if (k == 0) return true;
        if (g_.order() == 0) return false;
        std::vector<int> degree(k, 0);
        for (const Triple& e : f_.edges())
            for (int v : e) ++degree[v];
        order_.resize(k);
        std::iota(order_.begin(), order_.end(), 0);
        std::stable_sort(order_.begin(), order_.end(), [&](int a, int b) { return degree[a] > degree[b]; });
        std::vector<int> position(k);
        for (int i = 0; i < k; ++i) position[order_[i]] = i;
        checks_.assign(k, {});
        for (const Triple& e : f_.edges())
            checks_[std::max({position[e[0]], position[e[1]], position[e[2]]})].push_back(e);
        image_.assign(k, -1);
        return search(0);
    }

private:
    bool search(int pos) {
        if (pos == static_cast<int>(order_.size())) return true;
        const int v = order_[pos];
        for (int h = 0; h < g_.order(); ++h) {
            image_[v] = h;
            bool ok = true;
            for (const Triple& e : checks_[pos]) {
                if (!g_.has_edge(image_[e[0]], image_[e[1]], image_[e[2]])) {
                    ok = false;
                    break;
                }
            }
            if (ok && search(pos + 1)) return true;
        }
        image_[v] = -1;
        return false;
    }

    const ThreeGraph& f_;
    const ThreeGraph& g_;
    std::vector<int> order_, image_;
    std::vector<std::vector<Triple>> checks_;
};

}  // namespace

bool blowup_contains(const ThreeGraph& f, const ThreeGraph& g) { return HomomorphismSearch(f, g).run(); }

bool is_covering(const ThreeGraph& f) {
    const int n = f.order();
    std::vector<bool> covered(static_cast<std::size_t>(n) * n, false);
    for (const Triple& e : f.edges()) {
        covered[e[0] * n + e[1]] = covered[e[0] * n + e[2]] = covered[e[1] * n + e[2]] = true;
    }
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b)
            if (!covered[a * n + b]) return false;
    return true;
}

ThreeGraph parse_graph(std::string_view text) {
    const std::size_t colon = text.find(':');
    if (colon == std::string_view::npos || colon == 0) throw ParseError("graph '" + std::string(text) + "' lacks 'n:'");
    int n = 0;
    for (char c : text.substr(0, colon)) {
        if (c < '0' || c > '9') throw ParseError("bad vertex count in '" + std::string(text) + "'");
        n = n * 10 + (c - '0');
        if (n > kMaxTextOrder) throw ParseError("vertex count exceeds 35 in '" + std::string(text) + "'");
    }
    ThreeGraph g(n);
    std::string_view rest = text.substr(colon + 1);
    if (rest.empty()) return g;
    std::size_t pos = 0;
    while (pos <= rest.size()) {
        std::size_t comma = rest.find(',', pos);
        if (comma == std::string_view::npos) comma = rest.size();
        std::string_view tok = rest.substr(pos, comma - pos);
        if (tok.size() != 3) throw ParseError("edge '" + std::string(tok) + "' must have three labels");
        Triple e{};
        for (int i = 0; i < 3; ++i) {
            e[i] = label_value(tok[i]);
            if (e[i] < 0 || e[i] >= n)
                throw ParseError("vertex label '" + std::string(1, tok[i]) + "' out of range in '" + std::string(text) + "'");
        }
        if (e[0] == e[1] || e[1] == e[2] || e[0] == e[2])
            throw ParseError("edge '" + std::string(tok) + "' repeats a vertex");
        g.add_edge(e[0], e[1], e[2]);
        pos = comma + 1;
    }
    return g;
}

std::string to_string(const ThreeGraph& g) {
    if (g.order() > kMaxTextOrder) throw DomainError("graph too large for the text format");
    std::string s = std::to_string(g.order()) + ":";
    bool first = true;
    for (const Triple& e : g.edges()) {
        if (!first) s += ',';
        first = false;
        s += label_char(e[0]);
        s += label_char(e[1]);
        s += label_char(e[2]);
    }
    return s;
}

}  // namespace turan
