#include "hsp/runtime.hpp"

#include <numeric>

namespace hsp {

int RunConfig::resolved_m(int group_order) const {
    return m > 0 ? m : default_m(group_order);
}

std::vector<int> RunConfig::resolved_ordering(int group_order) const {
    if (!ordering.empty()) {
        if (static_cast<int>(ordering.size()) != group_order)
            throw UnsupportedGroup("ordering permutation length mismatch");
        std::vector<char> seen(group_order, 0);
        for (int x : ordering) {
            if (x < 0 || x >= group_order || seen[x])
                throw UnsupportedGroup("ordering is not a permutation");
            seen[x] = 1;
        }
        return ordering;
    }
    std::vector<int> id(group_order);
    std::iota(id.begin(), id.end(), 0);
    return id;
}

OracleFunction make_oracle_from_subgroup(const GroupPtr& g,
                                         const Subgroup& h) {
    CosetPartition part = left_cosets(h);
    std::vector<int> labels(g->order());
    for (int x = 0; x < g->order(); ++x)
        labels[x] = part.representatives[part.coset_of[x]];
    return OracleFunction(g, std::move(labels));
}

Subgroup infer_subgroup_from_oracle(const OracleFunction& f) {
    const GroupPtr& g = f.group;
    const int n = g->order();
    const int base = f.labels[g->identity()];
    std::vector<int> members;
    for (int x = 0; x < n; ++x)
        if (f.labels[x] == base) members.push_back(x);
    try {
        Subgroup h(g, members);
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) {
                const bool same_label = f.labels[a] == f.labels[b];
                const bool same_coset = h.contains(g->mul(g->inv(a), b));
                if (same_label != same_coset)
                    throw NotStrictlyPeriodic(
                        "labels do not match cosets at (" + std::to_string(a) +
                        "," + std::to_string(b) + ")");
            }
        return h;
    } catch (const NotAGroup& e) {
        throw NotStrictlyPeriodic(e.what());
    }
}

int default_m(int group_order) {
    // smallest k with 2^k >= n^4, then +2; n <= 128 so this fits in 64 bits.
    const std::uint64_t n4 = static_cast<std::uint64_t>(group_order) *
                             group_order * group_order * group_order;
    int k = 0;
    while ((std::uint64_t{1} << k) < n4) ++k;
    return k + 2;
}

std::vector<int> sample_coset_reps(const OracleFunction& f, int m,
                                   SplitMix64& rng) {
    std::vector<int> reps(m);
    for (int i = 0; i < m; ++i) {
        reps[i] = static_cast<int>(rng.next_below(f.group->order()));
        (void)f(reps[i]);  // one oracle evaluation per register
    }
    return reps;
}

std::vector<CyclicClass> test_schedule(const GroupPtr& g,
                                       const RunConfig& config) {
    const std::vector<int> order = config.resolved_ordering(g->order());
    std::vector<CyclicClass> classes = distinct_cyclic_subgroups(g);

    // First occurrence of any generator under the configured ordering.
    std::vector<int> position(g->order());
    for (int i = 0; i < g->order(); ++i) position[order[i]] = i;
    auto first_pos = [&](const CyclicClass& c) {
        int best = g->order();
        for (int gen : c.generators) best = std::min(best, position[gen]);
        return best;
    };
    std::sort(classes.begin(), classes.end(),
              [&](const CyclicClass& a, const CyclicClass& b) {
                  return first_pos(a) < first_pos(b);
              });

    std::vector<CyclicClass> schedule;
    for (auto& c : classes)
        if (!c.subgroup.is_trivial()) schedule.push_back(std::move(c));
    return schedule;
}

}  // namespace hsp
