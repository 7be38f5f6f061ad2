#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

namespace hsp {

// Finite group as an explicit Cayley table over element indices 0..n-1.
// The index order is the element ordering used everywhere downstream;
// all built-in constructors place the identity at index 0.
class FiniteGroup {
public:
    static constexpr int kMaxOrder = 128;

    // Validates the table exhaustively (identity, inverses, associativity,
    // Latin-square rows/columns). Throws NotAGroup on any violation.
    static std::shared_ptr<const FiniteGroup> from_cayley(
        std::vector<std::vector<int>> table);

    int order() const { return n_; }
    int identity() const { return identity_; }
    int mul(int a, int b) const { return cayley_[a][b]; }
    int inv(int a) const { return inverse_[a]; }
    const std::vector<std::vector<int>>& cayley() const { return cayley_; }

private:
    FiniteGroup() = default;
    int n_ = 0;
    int identity_ = 0;
    std::vector<std::vector<int>> cayley_;
    std::vector<int> inverse_;
};

using GroupPtr = std::shared_ptr<const FiniteGroup>;

class Subgroup {
public:
    Subgroup(GroupPtr parent, std::vector<int> members);

    const GroupPtr& parent() const { return parent_; }
    const std::vector<int>& members() const { return members_; }
    int size() const { return static_cast<int>(members_.size()); }
    bool contains(int g) const { return mask_[g] != 0; }
    bool is_trivial() const { return members_.size() == 1; }
    bool is_whole_group() const {
        return static_cast<int>(members_.size()) == parent_->order();
    }
    // K <= other as sets.
    bool subset_of(const Subgroup& other) const;
    bool operator==(const Subgroup& other) const {
        return members_ == other.members_;
    }

private:
    GroupPtr parent_;
    std::vector<int> members_;  // sorted
    std::vector<char> mask_;
};

struct CosetPartition {
    Subgroup subgroup;
    std::vector<int> coset_of;             // element -> coset id
    std::vector<std::vector<int>> cosets;  // coset id -> sorted members
    std::vector<int> representatives;      // coset id -> minimal element

    int coset_count() const { return static_cast<int>(cosets.size()); }
};

Subgroup cyclic_subgroup(const GroupPtr& g, int elem);
Subgroup subgroup_closure(const GroupPtr& g, const std::vector<int>& gens);
CosetPartition left_cosets(const Subgroup& k);

struct CyclicClass {
    Subgroup subgroup;
    std::vector<int> generators;  // all h with <h> == subgroup, sorted
};

// One entry per distinct <g>, sorted by subgroup size then minimal generator.
std::vector<CyclicClass> distinct_cyclic_subgroups(const GroupPtr& g);

// Full subgroup lattice via closure of unions of cyclic subgroups.
// Throws VerificationScaleExceeded for |G| > 24.
std::vector<Subgroup> enumerate_subgroups(const GroupPtr& g);

// A constructed group plus the element names the CLI accepts for it
// (e.g. "r", "s", "r2" for dihedral groups).
struct NamedGroup {
    GroupPtr group;
    std::string spec;
    std::map<std::string, int> element_names;
};

// Spec strings: "Z:n", "D:n" (order 2n), "S:n" (n <= 5), "Q8",
// products joined by "x", or "file:<path>" with a JSON Cayley table.
NamedGroup make_group(const std::string& spec);

// Comma/space separated element indices or named generators; "" -> {}.
std::vector<int> parse_elements(const NamedGroup& g, const std::string& text);

}  // namespace hsp
