#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "hsp/errors.hpp"
#include "hsp/group.hpp"
#include "hsp/rng.hpp"
#include "hsp/tensor_state.hpp"

namespace hsp {

// Strictly H-periodic oracle: one label per left H-coset, distinct labels
// on distinct cosets. call_count charges one unit per evaluation.
struct OracleFunction {
    GroupPtr group;
    std::vector<int> labels;
    mutable std::atomic<std::uint64_t> call_count{0};

    OracleFunction(GroupPtr g, std::vector<int> l)
        : group(std::move(g)), labels(std::move(l)) {}
    OracleFunction(const OracleFunction& other)
        : group(other.group),
          labels(other.labels),
          call_count(other.call_count.load()) {}

    int operator()(int g) const {
        ++call_count;
        return labels[g];
    }
};

struct RunConfig {
    int m = 0;                  // 0 -> default_m(|G|)
    std::vector<int> ordering;  // empty -> identity permutation
    bool skip_implied = false;
    ScalarMode scalar_mode = ScalarMode::Exact;
    std::uint64_t seed = 0;
    std::size_t term_cap = 4096;
    int trials = 1;
    int threads = 1;
    CompressOptions compress;

    int resolved_m(int group_order) const;
    std::vector<int> resolved_ordering(int group_order) const;
};

template <class S>
struct MeasurementStep {
    CyclicClass test;
    int outcome = 0;  // +1 or -1
    S p_plus = ScalarTraits<S>::zero();
    bool skipped = false;
    std::string skip_reason;
};

template <class S>
struct MeasurementRecord {
    std::vector<MeasurementStep<S>> steps;
};

template <class S>
struct TrialResult {
    std::vector<int> output_set;  // X, sorted
    bool is_subgroup = false;
    bool matches_h = false;
    std::uint64_t oracle_calls = 0;
    MeasurementRecord<S> record;
};

template <class S>
struct AnalysisStep {
    CyclicClass test;
    S norm_sq_psi;     // <Psi_i|Psi_i> / <Psi|Psi>
    S err_sq;          // <E_i|E_i> / <Psi|Psi>
    S lemma2_bound;    // i^2 / 2^m
};

template <class S>
struct AnalysisTrace {
    std::vector<AnalysisStep<S>> steps;
    S final_success_prob = ScalarTraits<S>::zero();
};

OracleFunction make_oracle_from_subgroup(const GroupPtr& g, const Subgroup& h);

// Recovers H = {g : f(g) = f(e)} from the label table and validates strict
// periodicity. Throws NotStrictlyPeriodic on a malformed oracle.
Subgroup infer_subgroup_from_oracle(const OracleFunction& f);

// ceil(4 log2 n) + 2.
int default_m(int group_order);

// m uniform element draws; each draw charges one oracle call.
std::vector<int> sample_coset_reps(const OracleFunction& f, int m,
                                   SplitMix64& rng);

// Distinct nontrivial cyclic subgroups in first-generator occurrence order
// under the configured element ordering. The trivial subgroup is never
// tested; its observable is the identity.
std::vector<CyclicClass> test_schedule(const GroupPtr& g,
                                       const RunConfig& config);

// Deterministic correct-branch evolution: P_K when K <= H, the complement
// otherwise. final_success_prob is the exact probability that sampled mode
// (same schedule, skips off) answers every membership correctly.
template <class S>
AnalysisTrace<S> run_analysis(const GroupPtr& g, const Subgroup& h,
                              const RunConfig& config,
                              const std::vector<int>& reps) {
    AnalysisTrace<S> trace;
    TensorSumState<S> psi = tensor_coset_state<S>(h, reps);
    const S psi_norm = norm_sq(psi);
    const int m = static_cast<int>(reps.size());
    const S inv_2m = pow2<S>(-m);

    TensorSumState<S> current = psi;
    int i = 0;
    for (const auto& test : test_schedule(g, config)) {
        ++i;
        if (test.subgroup.subset_of(h)) {
            current = compress(apply_PK(current, test.subgroup),
                               config.compress);
        } else {
            current = apply_PK_complement(current, test.subgroup,
                                          config.term_cap, config.compress);
        }
        TensorSumState<S> err = subtract(psi, current);
        AnalysisStep<S> step{test, norm_sq(current) / psi_norm,
                             norm_sq(compress(err, config.compress)) / psi_norm,
                             S(i) * S(i) * inv_2m};
        trace.steps.push_back(std::move(step));
    }
    trace.final_success_prob =
        trace.steps.empty() ? ScalarTraits<S>::one()
                            : trace.steps.back().norm_sq_psi;
    return trace;
}

// One Born-sampled run of the sequential measurement algorithm.
template <class S>
TrialResult<S> run_sampled_trial(const GroupPtr& g, const OracleFunction& f,
                                 const RunConfig& config, SplitMix64& rng) {
    const Subgroup h = infer_subgroup_from_oracle(f);
    const int m = config.resolved_m(g->order());

    const std::uint64_t calls_before = f.call_count.load();
    const std::vector<int> reps = sample_coset_reps(f, m, rng);

    TensorSumState<S> psi = tensor_coset_state<S>(h, reps);

    // Membership of each element is decided by the test of its own cyclic
    // subgroup; +1 outcomes additionally imply membership for the whole
    // tested subgroup (used only by the positive skip rule).
    std::vector<std::optional<bool>> decided(g->order());
    decided[g->identity()] = true;
    std::vector<const Subgroup*> positive_tests;

    TrialResult<S> result;
    for (const auto& test : test_schedule(g, config)) {
        MeasurementStep<S> step{test};
        bool measured = false;
        if (config.skip_implied) {
            bool known_out = false;
            for (int x : test.subgroup.members())
                if (decided[x] && !*decided[x]) {
                    known_out = true;
                    break;
                }
            bool known_in = false;
            if (!known_out)
                for (const Subgroup* pos : positive_tests)
                    if (test.subgroup.subset_of(*pos)) {
                        known_in = true;
                        break;
                    }
            if (known_out) {
                step.outcome = -1;
                step.p_plus = ScalarTraits<S>::zero();
                step.skipped = true;
                step.skip_reason = "element of K already known outside H";
            } else if (known_in) {
                step.outcome = +1;
                step.p_plus = ScalarTraits<S>::one();
                step.skipped = true;
                step.skip_reason = "K inside a positively tested subgroup";
            }
            measured = !step.skipped;
        } else {
            measured = true;
        }

        if (measured) {
            const S denom = norm_sq(psi);
            if constexpr (!ScalarTraits<S>::exact) {
                if (denom < 1e-280)
                    throw DegenerateState(
                        "state norm underflow; rerun in exact mode");
            }
            TensorSumState<S> projected = apply_PK(psi, test.subgroup);
            step.p_plus = inner(psi, projected) / denom;
            step.outcome = bernoulli(rng, step.p_plus) ? +1 : -1;
            if (step.outcome > 0) {
                psi = compress(projected, config.compress);
            } else {
                TensorSumState<S> rest =
                    compress(subtract(psi, projected), config.compress);
                if (rest.terms().size() > config.term_cap)
                    throw TermBudgetExceeded(
                        std::to_string(rest.terms().size()) + " terms, cap " +
                        std::to_string(config.term_cap));
                psi = std::move(rest);
            }
        }

        for (int gen : test.generators) decided[gen] = step.outcome > 0;
        if (step.outcome > 0)
            positive_tests.push_back(&test.subgroup);
        result.record.steps.push_back(std::move(step));
    }

    for (int x = 0; x < g->order(); ++x)
        if (x == g->identity() || (decided[x] && *decided[x]))
            result.output_set.push_back(x);
    try {
        Subgroup candidate(g, result.output_set);
        result.is_subgroup = true;
        result.matches_h = candidate == h;
    } catch (const NotAGroup&) {
        result.is_subgroup = false;
        result.matches_h = false;
    }
    result.oracle_calls = f.call_count.load() - calls_before;
    return result;
}

template <class S>
struct TestOutcomeStats {
    CyclicClass test;
    std::uint64_t plus = 0, minus = 0, skipped = 0;
};

template <class S>
struct TrialsSummary {
    int trials = 0;
    std::uint64_t successes = 0;  // X == H
    std::uint64_t subgroup_outputs = 0;
    double mean_oracle_calls = 0.0;
    std::vector<TestOutcomeStats<S>> per_test;
    std::vector<TrialResult<S>> results;  // by trial index
};

// Independent seeded trials; per-trial RNG streams derive from
// (config.seed, trial index) so results are identical under any thread
// count. Each worker uses a private oracle copy.
template <class S>
TrialsSummary<S> run_trials(const GroupPtr& g, const OracleFunction& f,
                            const RunConfig& config) {
    TrialsSummary<S> summary;
    summary.trials = config.trials;
    summary.results.resize(config.trials);

    const int threads = std::max(1, config.threads);
    auto worker = [&](int begin, int end) {
        OracleFunction local(f);
        for (int t = begin; t < end; ++t) {
            SplitMix64 rng = SplitMix64::for_trial(config.seed, t);
            local.call_count = 0;
            summary.results[t] = run_sampled_trial<S>(g, local, config, rng);
        }
    };
    if (threads == 1 || config.trials == 1) {
        worker(0, config.trials);
    } else {
        std::vector<std::thread> pool;
        const int chunk = (config.trials + threads - 1) / threads;
        for (int t = 0; t < config.trials; t += chunk)
            pool.emplace_back(worker, t, std::min(t + chunk, config.trials));
        for (auto& th : pool) th.join();
    }

    std::uint64_t total_calls = 0;
    for (const auto& test : test_schedule(g, config))
        summary.per_test.push_back({test});
    for (const auto& r : summary.results) {
        if (r.matches_h) ++summary.successes;
        if (r.is_subgroup) ++summary.subgroup_outputs;
        total_calls += r.oracle_calls;
        for (size_t i = 0; i < r.record.steps.size(); ++i) {
            auto& stats = summary.per_test[i];
            if (r.record.steps[i].skipped)
                ++stats.skipped;
            else if (r.record.steps[i].outcome > 0)
                ++stats.plus;
            else
                ++stats.minus;
        }
    }
    summary.mean_oracle_calls =
        summary.trials ? static_cast<double>(total_calls) / summary.trials : 0;
    return summary;
}

}  // namespace hsp
