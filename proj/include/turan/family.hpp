#pragma once

#include "turan/three_graph.hpp"

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace turan {

/// A forbidden family. `members` are forbidden as (not necessarily induced)
/// subgraphs, `induced_members` as induced subgraphs. Both lists hold
/// canonical forms without duplicates, in insertion order.
class Family {
public:
    Family() = default;
    Family(std::initializer_list<ThreeGraph> members);

    /// Adds the canonical form of g; returns false if already present.
    bool add(const ThreeGraph& g, bool induced = false);

    const std::vector<ThreeGraph>& members() const noexcept { return members_; }
    const std::vector<ThreeGraph>& induced_members() const noexcept { return induced_members_; }
    std::size_t size() const noexcept { return members_.size() + induced_members_.size(); }
    bool empty() const noexcept { return size() == 0; }

    friend bool operator==(const Family&, const Family&) = default;

private:
    std::vector<ThreeGraph> members_;
    std::vector<ThreeGraph> induced_members_;
};

/// One graph per line in the `n:e1,...` format; a leading `!` marks an
/// induced-forbidden member. Blank lines and `#` comments are skipped.
Family parse_family(std::string_view text);
Family load_family(const std::filesystem::path& path);
std::string to_string(const Family& family);

/// g is F-free and induced-F-free.
bool is_admissible(const ThreeGraph& g, const Family& family);

inline constexpr int kMinAdmissibleOrder = 3;
inline constexpr int kMaxAdmissibleOrder = 7;

/// All admissible graphs of order n, one canonical representative per
/// isomorphism class, sorted by canonical form. Built by one-vertex
/// extension from the admissible graphs of order n - 1.
std::vector<ThreeGraph> generate_admissible(int n, const Family& family);

struct Augmentation {
    ThreeGraph added;
    ThreeGraph justified_by;  // member F' with F' <= added
};

struct AugmentedFamily {
    Family family;
    std::vector<Augmentation> additions;
};

/// Adds every candidate G such that some (non-induced) member F' satisfies
/// F' <= G; the Turan density is unchanged by such additions.
AugmentedFamily augment_family(const Family& family, std::span<const ThreeGraph> candidates);

}  // namespace turan
