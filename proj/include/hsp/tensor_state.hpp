#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hsp/coset_algebra.hpp"
#include "hsp/errors.hpp"
#include "hsp/group.hpp"
#include "hsp/scalar.hpp"

namespace hsp {

template <class S>
struct TensorTerm {
    S coeff;
    std::vector<FactorVector<S>> factors;  // length m
};

struct CompressOptions {
    double prune_threshold = 1e-14;  // float mode only
    bool rank_reduce = false;        // float mode only, off by default
};

// Linear combination of tensor products of single-register vectors,
// representing a state in the |G|^m-dimensional space without
// materializing it. An empty term list is the zero vector.
template <class S>
class TensorSumState {
public:
    TensorSumState(GroupPtr group, int m)
        : group_(std::move(group)), m_(m) {}
    TensorSumState(GroupPtr group, int m, std::vector<TensorTerm<S>> terms)
        : group_(std::move(group)), m_(m), terms_(std::move(terms)) {}

    const GroupPtr& group() const { return group_; }
    int factor_count() const { return m_; }
    const std::vector<TensorTerm<S>>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    void add_term(TensorTerm<S> t) {
        terms_.push_back(std::move(t));
        norm_sq_cache_.reset();
    }

    mutable std::optional<S> norm_sq_cache_;

private:
    GroupPtr group_;
    int m_;
    std::vector<TensorTerm<S>> terms_;
};

// Single term |reps[0] K> (x) ... (x) |reps[m-1] K>, unnormalized.
template <class S>
TensorSumState<S> tensor_coset_state(const Subgroup& k,
                                     const std::vector<int>& reps) {
    TensorTerm<S> term{ScalarTraits<S>::one(), {}};
    term.factors.reserve(reps.size());
    for (int a : reps) term.factors.push_back(coset_vector<S>(a, k));
    return TensorSumState<S>(k.parent(), static_cast<int>(reps.size()),
                             {std::move(term)});
}

template <class S>
S inner(const TensorSumState<S>& x, const TensorSumState<S>& y) {
    S acc = ScalarTraits<S>::zero();
    for (const auto& s : x.terms()) {
        for (const auto& t : y.terms()) {
            S prod = s.coeff * t.coeff;
            for (size_t j = 0; j < s.factors.size() && prod != 0; ++j)
                prod *= factor_inner(s.factors[j], t.factors[j]);
            acc += prod;
        }
    }
    return acc;
}

template <class S>
S norm_sq(const TensorSumState<S>& x) {
    if (!x.norm_sq_cache_) x.norm_sq_cache_ = inner(x, x);
    return *x.norm_sq_cache_;
}

template <class S>
TensorSumState<S> scale(const TensorSumState<S>& x, const S& c) {
    std::vector<TensorTerm<S>> terms = x.terms();
    for (auto& t : terms) t.coeff *= c;
    return TensorSumState<S>(x.group(), x.factor_count(), std::move(terms));
}

template <class S>
TensorSumState<S> subtract(const TensorSumState<S>& x,
                           const TensorSumState<S>& y) {
    std::vector<TensorTerm<S>> terms = x.terms();
    for (auto t : y.terms()) {
        t.coeff = -t.coeff;
        terms.push_back(std::move(t));
    }
    return TensorSumState<S>(x.group(), x.factor_count(), std::move(terms));
}

namespace detail {

template <class S>
double term_magnitude(const TensorTerm<S>& t) {
    double mag = std::abs(ScalarTraits<S>::to_double(t.coeff));
    for (const auto& f : t.factors)
        mag *= std::sqrt(ScalarTraits<S>::to_double(factor_inner(f, f)));
    return mag;
}

// Tensor inner product of two factor lists (coefficients excluded).
template <class S>
S factors_inner(const std::vector<FactorVector<S>>& a,
                const std::vector<FactorVector<S>>& b) {
    S prod = ScalarTraits<S>::one();
    for (size_t j = 0; j < a.size(); ++j) prod *= factor_inner(a[j], b[j]);
    return prod;
}

// Float-mode rank reduction: greedily pick a spanning subset of the terms'
// tensor products via pivoted Gram elimination and fold the dependent
// terms' coefficients onto the subset.
inline void rank_reduce_terms(std::vector<TensorTerm<double>>& terms) {
    const size_t n = terms.size();
    if (n < 2) return;
    std::vector<std::vector<double>> gram(n, std::vector<double>(n));
    for (size_t i = 0; i < n; ++i)
        for (size_t j = i; j < n; ++j)
            gram[i][j] = gram[j][i] =
                factors_inner(terms[i].factors, terms[j].factors);

    // Pivoted Cholesky on the Gram matrix; pivots index the kept terms.
    std::vector<size_t> kept;
    std::vector<std::vector<double>> chol;  // rows of L restricted to pivots
    std::vector<double> residual(n);
    for (size_t i = 0; i < n; ++i) residual[i] = gram[i][i];
    const double tol = 1e-10;
    std::vector<std::vector<double>> lfull(n);  // L[i][r] for each term i
    for (size_t i = 0; i < n; ++i) lfull[i] = {};
    while (true) {
        size_t pivot = n;
        double best = tol;
        for (size_t i = 0; i < n; ++i)
            if (residual[i] > best) {
                best = residual[i];
                pivot = i;
            }
        if (pivot == n) break;
        const double d = std::sqrt(residual[pivot]);
        const size_t r = kept.size();
        for (size_t i = 0; i < n; ++i) {
            double v = gram[i][pivot];
            for (size_t q = 0; q < r; ++q) v -= lfull[i][q] * lfull[pivot][q];
            v /= d;
            lfull[i].push_back(v);
            residual[i] -= v * v;
            if (residual[i] < 0) residual[i] = 0;
        }
        kept.push_back(pivot);
        residual[pivot] = 0;
    }
    if (kept.size() == n) return;

    // Dependent term i equals sum_p c_p * term_kept[p] with the coordinates
    // recovered by back-substitution through L restricted to kept pivots.
    const size_t r = kept.size();
    std::vector<TensorTerm<double>> out;
    out.reserve(r);
    for (size_t p = 0; p < r; ++p)
        out.push_back({terms[kept[p]].coeff, terms[kept[p]].factors});
    std::vector<char> is_kept(n, 0);
    std::vector<size_t> kept_pos(n, 0);
    for (size_t p = 0; p < r; ++p) {
        is_kept[kept[p]] = 1;
        kept_pos[kept[p]] = p;
    }
    for (size_t i = 0; i < n; ++i) {
        if (is_kept[i]) continue;
        // Solve L_kk^T c = l_i where L_kk[p][q] = lfull[kept[p]][q].
        std::vector<double> c(r);
        for (size_t q = r; q-- > 0;) {
            double v = lfull[i][q];
            for (size_t p = q + 1; p < r; ++p)
                v -= lfull[kept[p]][q] * c[p];
            c[q] = v / lfull[kept[q]][q];
        }
        // lfull rows of kept terms form a lower-triangular system in the
        // pivot order, so c[p] is the coordinate on kept term p.
        for (size_t p = 0; p < r; ++p) out[p].coeff += terms[i].coeff * c[p];
    }
    terms = std::move(out);
}

}  // namespace detail

// Exact mode: drop exact zeros, merge identical factor lists. Float mode:
// additionally prune negligible terms and optionally rank-reduce.
template <class S>
TensorSumState<S> compress(const TensorSumState<S>& x,
                           const CompressOptions& opts = {}) {
    std::vector<TensorTerm<S>> merged;
    for (const auto& t : x.terms()) {
        bool found = false;
        for (auto& m : merged)
            if (m.factors == t.factors) {
                m.coeff += t.coeff;
                found = true;
                break;
            }
        if (!found) merged.push_back(t);
    }
    std::vector<TensorTerm<S>> out;
    for (auto& t : merged) {
        if constexpr (ScalarTraits<S>::exact) {
            if (t.coeff != 0) out.push_back(std::move(t));
        } else {
            if (detail::term_magnitude(t) > opts.prune_threshold)
                out.push_back(std::move(t));
        }
    }
    if constexpr (!ScalarTraits<S>::exact) {
        if (opts.rank_reduce) detail::rank_reduce_terms(out);
    }
    return TensorSumState<S>(x.group(), x.factor_count(), std::move(out));
}

// P_K = p_K^{(x)m}: averages every factor of every term over K-cosets.
template <class S>
TensorSumState<S> apply_PK(const TensorSumState<S>& x, const Subgroup& k) {
    AveragingProjector p(k);
    std::vector<TensorTerm<S>> terms;
    terms.reserve(x.terms().size());
    for (const auto& t : x.terms()) {
        TensorTerm<S> nt{t.coeff, {}};
        nt.factors.reserve(t.factors.size());
        for (const auto& f : t.factors)
            nt.factors.push_back(apply_averaging(p, f));
        terms.push_back(std::move(nt));
    }
    return TensorSumState<S>(x.group(), x.factor_count(), std::move(terms));
}

// P_K-perp: x - P_K x, compressed; throws TermBudgetExceeded past the cap.
template <class S>
TensorSumState<S> apply_PK_complement(const TensorSumState<S>& x,
                                      const Subgroup& k,
                                      std::size_t term_cap = 4096,
                                      const CompressOptions& opts = {}) {
    TensorSumState<S> out = compress(subtract(x, apply_PK(x, k)), opts);
    if (out.terms().size() > term_cap)
        throw TermBudgetExceeded(std::to_string(out.terms().size()) +
                                 " terms after compression, cap " +
                                 std::to_string(term_cap));
    return out;
}

}  // namespace hsp
