#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "hsp/coset_algebra.hpp"
#include "hsp/errors.hpp"
#include "hsp/group.hpp"
#include "hsp/runtime.hpp"
#include "hsp/tensor_state.hpp"

namespace hsp {

constexpr std::uint64_t kDenseCap = 1000000;

// Literal |G|^m statevector, index = mixed-radix tuple (g_1,...,g_m) with
// g_1 the most significant digit. Exists as an independent oracle for the
// structured representation; never the primary engine.
template <class S>
struct DenseState {
    GroupPtr group;
    int m = 0;
    std::vector<S> amps;
};

inline std::uint64_t dense_dimension(int order, int m) {
    std::uint64_t dim = 1;
    for (int i = 0; i < m; ++i) {
        dim *= static_cast<std::uint64_t>(order);
        if (dim > kDenseCap)
            throw DenseCapExceeded(std::to_string(order) + "^" +
                                   std::to_string(m) + " > " +
                                   std::to_string(kDenseCap));
    }
    return dim;
}

template <class S>
DenseState<S> dense_from_tensor(const TensorSumState<S>& x) {
    const int n = x.group()->order();
    const int m = x.factor_count();
    const std::uint64_t dim = dense_dimension(n, m);
    DenseState<S> out{x.group(), m,
                      std::vector<S>(dim, ScalarTraits<S>::zero())};
    for (const auto& term : x.terms()) {
        for (std::uint64_t idx = 0; idx < dim; ++idx) {
            S prod = term.coeff;
            std::uint64_t rest = idx;
            for (int j = m - 1; j >= 0 && prod != 0; --j) {
                prod *= term.factors[j].amps[rest % n];
                rest /= n;
            }
            out.amps[idx] += prod;
        }
    }
    return out;
}

// Coset-averaging applied independently on every tensor axis, computed
// directly on the flat array (no shared code with the structured path).
template <class S>
DenseState<S> dense_apply_PK(const DenseState<S>& s, const Subgroup& k) {
    const int n = s.group->order();
    const CosetPartition part = left_cosets(k);
    const int ksize = k.size();
    DenseState<S> out = s;
    std::uint64_t stride = 1;
    for (int axis = s.m - 1; axis >= 0; --axis) {
        DenseState<S> next{s.group, s.m,
                           std::vector<S>(out.amps.size(),
                                          ScalarTraits<S>::zero())};
        const std::uint64_t dim = out.amps.size();
        for (std::uint64_t base = 0; base < dim; ++base) {
            const int digit = static_cast<int>((base / stride) % n);
            if (digit != part.cosets[part.coset_of[digit]].front())
                continue;  // handle each coset once, at its minimal digit
            const auto& coset = part.cosets[part.coset_of[digit]];
            S sum = ScalarTraits<S>::zero();
            for (int x : coset)
                sum += out.amps[base + stride * (x - digit)];
            S mean = sum / ksize;
            for (int x : coset) next.amps[base + stride * (x - digit)] = mean;
        }
        out = std::move(next);
        stride *= n;
    }
    return out;
}

template <class S>
S dense_inner(const DenseState<S>& a, const DenseState<S>& b) {
    S acc = ScalarTraits<S>::zero();
    for (std::size_t i = 0; i < a.amps.size(); ++i)
        acc += a.amps[i] * b.amps[i];
    return acc;
}

struct LemmaFailure {
    std::string group;
    std::string h;
    std::string k;
    int m = 0;
    std::string expected;
    std::string got;
};

struct LemmaReport {
    std::string lemma;
    std::string group_spec;
    std::uint64_t cases = 0;
    std::vector<LemmaFailure> failures;
    double elapsed_ms = 0.0;

    bool passed() const { return failures.empty(); }
};

std::string subgroup_label(const Subgroup& s);

// Exact check of <Psi|P_K|Psi> = (|H cap K| / |K|)^m over every ordered
// subgroup pair, m <= m_max, several representative draws each.
LemmaReport check_lemma1(const GroupPtr& g, const std::string& group_spec,
                         int m_max, int rep_draws = 3,
                         std::uint64_t seed = 1);

// Exact check of <E_i|E_i> <= i^2 / 2^m along an analysis run.
LemmaReport check_lemma2(const GroupPtr& g, const std::string& group_spec,
                         const Subgroup& h, const RunConfig& config);

// Final success probability against 1 - 2|G|/2^{m/2} (compared squared to
// stay rational) and, at the default m, against 1 - 1/|G|.
LemmaReport check_success_bound(const GroupPtr& g,
                                const std::string& group_spec,
                                const Subgroup& h, int m);

// Deterministic classical reference: queries f on every element, recovers
// H, returns the |G| query count.
std::pair<Subgroup, std::uint64_t> classical_baseline(const OracleFunction& f);

std::string lemma_report_to_json(const LemmaReport& report);

}  // namespace hsp
