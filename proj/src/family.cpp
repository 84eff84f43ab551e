#include "turan/family.hpp"

#include "turan/error.hpp"

#include <algorithm>
#include <fstream>
#include <future>
#include <sstream>
#include <thread>
#include <unordered_set>

namespace turan {

Family::Family(std::initializer_list<ThreeGraph> members) {
    for (const ThreeGraph& g : members) add(g);
}

bool Family::add(const ThreeGraph& g, bool induced) {
    ThreeGraph c = canonical_graph(g);
    auto& list = induced ? induced_members_ : members_;
    if (std::find(list.begin(), list.end(), c) != list.end()) return false;
    list.push_back(std::move(c));
    return true;
}

Family parse_family(std::string_view text) {
    Family family;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t eol = text.find('\n', pos);
        if (eol == std::string_view::npos) eol = text.size();
        std::string_view line = text.substr(pos, eol - pos);
        pos = eol + 1;
        ++line_no;
        while (!line.empty() && (line.back() == '\r' || line.back() == ' ' || line.back() == '\t')) line.remove_suffix(1);
        while (!line.empty() && (line.front() == ' ' || line.front() == '\t')) line.remove_prefix(1);
        if (line.empty() || line.front() == '#') continue;
        bool induced = false;
        if (line.front() == '!') {
            induced = true;
            line.remove_prefix(1);
        }
        try {
            family.add(parse_graph(line), induced);
        } catch (const ParseError& e) {
            throw ParseError(e.what(), line_no);
        } catch (const DomainError& e) {
            throw ParseError(e.what(), line_no);
        }
    }
    return family;
}

Family load_family(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open family file " + path.string());
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_family(buffer.str());
}

std::string to_string(const Family& family) {
    std::string out;
    for (const ThreeGraph& g : family.members()) out += to_string(g) + "\n";
    for (const ThreeGraph& g : family.induced_members()) out += "!" + to_string(g) + "\n";
    return out;
}

bool is_admissible(const ThreeGraph& g, const Family& family) {
    for (const ThreeGraph& f : family.members())
        if (f.order() <= g.order() && contains_subgraph(g, f)) return false;
    for (const ThreeGraph& f : family.induced_members())
        if (f.order() <= g.order() && contains_induced(g, f)) return false;
    return true;
}

namespace {

struct MaskHash {
    std::size_t operator()(Mask128 m) const noexcept {
        const auto lo = static_cast<std::uint64_t>(m);
        const auto hi = static_cast<std::uint64_t>(m >> 64);
        return std::hash<std::uint64_t>{}(lo ^ (hi * 0x9e3779b97f4a7c15ULL));
    }
};

using MaskSet = std::unordered_set<Mask128, MaskHash>;

// Canonical masks of every one-vertex extension of the parents in
// [begin, end) that is admissible. Parents have order k - 1.
MaskSet extend_range(const std::vector<Mask128>& parents, std::size_t begin, std::size_t end, int k,
                     const Family& family) {
    MaskSet seen;
    MaskSet accepted;
    const int pairs = choose2(k - 1);
    std::vector<int> pair_index(pairs);
    {
        int p = 0;
        for (int b = 1; b < k - 1; ++b)
            for (int a = 0; a < b; ++a) pair_index[p++] = choose3(k - 1) + choose2(b) + a;
    }
    for (std::size_t i = begin; i < end; ++i) {
        for (std::uint64_t subset = 0; subset < (std::uint64_t{1} << pairs); ++subset) {
            Mask128 mask = parents[i];
            for (int p = 0; p < pairs; ++p)
                if ((subset >> p) & 1U) mask |= Mask128{1} << pair_index[p];
            ThreeGraph child = ThreeGraph::from_mask(k, mask);
            const Mask128 canon = canonical_form(child).mask;
            if (!seen.insert(canon).second) continue;
            if (is_admissible(child, family)) accepted.insert(canon);
        }
    }
    return accepted;
}

}  // namespace

std::vector<ThreeGraph> generate_admissible(int n, const Family& family) {
    if (n < kMinAdmissibleOrder || n > kMaxAdmissibleOrder)
        throw DomainError("generate_admissible: n must lie in [3, 7], got " + std::to_string(n));

    // Orders 0-2 have a single (empty) graph, admissible unless a member has
    // at most two vertices.
    std::vector<Mask128> level;
    if (is_admissible(ThreeGraph(2), family)) level.push_back(0);

    const unsigned workers = std::max(1U, std::thread::hardware_concurrency());
    for (int k = 3; k <= n; ++k) {
        MaskSet merged;
        if (workers == 1 || level.size() < 2 * workers) {
            merged = extend_range(level, 0, level.size(), k, family);
        } else {
            std::vector<std::future<MaskSet>> parts;
            const std::size_t chunk = (level.size() + workers - 1) / workers;
            for (std::size_t b = 0; b < level.size(); b += chunk)
                parts.push_back(std::async(std::launch::async, extend_range, std::cref(level), b,
                                           std::min(level.size(), b + chunk), k, std::cref(family)));
            for (auto& part : parts) merged.merge(part.get());
        }
        level.assign(merged.begin(), merged.end());
        std::sort(level.begin(), level.end());
    }

    std::vector<ThreeGraph> out;
    out.reserve(level.size());
    for (Mask128 m : level) out.push_back(ThreeGraph::from_mask(n, m));
    return out;
}

AugmentedFamily augment_family(const Family& family, std::span<const ThreeGraph> candidates) {
    AugmentedFamily result{family, {}};
    for (const ThreeGraph& candidate : candidates) {
        for (const ThreeGraph& member : family.members()) {
            if (!blowup_contains(member, candidate)) continue;
            if (result.family.add(candidate)) result.additions.push_back({canonical_graph(candidate), member});
            break;
        }
    }
    return result;
}

}  // namespace turan
