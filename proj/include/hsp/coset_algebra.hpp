#pragma once

#include <cassert>
#include <vector>

#include "hsp/group.hpp"
#include "hsp/scalar.hpp"

namespace hsp {

// Unnormalized real amplitude vector over the group elements. Coset states
// are stored as 0/1 indicators; every user-facing quantity is a ratio of
// squared norms, so the 1/sqrt(|K|) normalizations cancel.
template <class S>
struct FactorVector {
    GroupPtr group;
    std::vector<S> amps;

    bool operator==(const FactorVector& other) const {
        return amps == other.amps;
    }
};

// Indicator of the left coset aK; squared norm |K|.
template <class S>
FactorVector<S> coset_vector(int a, const Subgroup& k) {
    const GroupPtr& g = k.parent();
    FactorVector<S> v{g, std::vector<S>(g->order(), ScalarTraits<S>::zero())};
    for (int h : k.members()) v.amps[g->mul(a, h)] = ScalarTraits<S>::one();
    return v;
}

// Single-factor coset-averaging projector: replaces amplitudes within each
// left K-coset by their mean. Idempotent and self-adjoint.
struct AveragingProjector {
    CosetPartition partition;

    explicit AveragingProjector(const Subgroup& k) : partition(left_cosets(k)) {}
};

template <class S>
FactorVector<S> apply_averaging(const AveragingProjector& p,
                                const FactorVector<S>& v) {
    const auto& part = p.partition;
    assert(static_cast<int>(v.amps.size()) ==
           static_cast<int>(part.coset_of.size()));
    const int k_size = part.subgroup.size();
    FactorVector<S> out{v.group,
                        std::vector<S>(v.amps.size(), ScalarTraits<S>::zero())};
    for (const auto& coset : part.cosets) {
        S sum = ScalarTraits<S>::zero();
        for (int x : coset) sum += v.amps[x];
        S mean = sum / k_size;
        for (int x : coset) out.amps[x] = mean;
    }
    return out;
}

template <class S>
S factor_inner(const FactorVector<S>& u, const FactorVector<S>& v) {
    assert(u.amps.size() == v.amps.size());
    S acc = ScalarTraits<S>::zero();
    for (size_t i = 0; i < u.amps.size(); ++i) acc += u.amps[i] * v.amps[i];
    return acc;
}

// <aH|bK>^2 for normalized coset states: d^2/(|H||K|) with
// d = |aH intersect bK|.
template <class S>
S normalized_overlap_sq(int a, const Subgroup& h, int b, const Subgroup& k) {
    FactorVector<S> u = coset_vector<S>(a, h);
    FactorVector<S> v = coset_vector<S>(b, k);
    S ip = factor_inner(u, v);
    return ip * ip / (factor_inner(u, u) * factor_inner(v, v));
}

}  // namespace hsp
