#include <doctest.h>

#include <cmath>
#include <functional>
#include <vector>

#include "hsp/group.hpp"
#include "hsp/runtime.hpp"

using namespace hsp;

namespace {

// Independent oracle for the all-correct probability: enumerate the full
// outcome tree of the sampled algorithm and sum the probabilities of the
// paths whose output set equals H.
Rational outcome_tree_success_prob(const GroupPtr& g, const Subgroup& h,
                                   int m) {
    RunConfig config;
    const auto schedule = test_schedule(g, config);
    std::vector<int> reps(m, g->identity());
    TensorSumState<Rational> psi0 = tensor_coset_state<Rational>(h, reps);

    Rational total = 0;
    std::function<void(size_t, TensorSumState<Rational>, Rational,
                       std::vector<int>&)>
        walk = [&](size_t step, TensorSumState<Rational> psi, Rational prob,
                   std::vector<int>& outcomes) {
            if (prob == 0) return;
            if (step == schedule.size()) {
                std::vector<int> x{g->identity()};
                for (size_t i = 0; i < schedule.size(); ++i)
                    if (outcomes[i] > 0)
                        for (int gen : schedule[i].generators)
                            x.push_back(gen);
                std::sort(x.begin(), x.end());
                if (x == h.members()) total += prob;
                return;
            }
            const Subgroup& k = schedule[step].subgroup;
            Rational denom = norm_sq(psi);
            auto proj = apply_PK(psi, k);
            Rational p_plus = inner(psi, proj) / denom;
            outcomes.push_back(+1);
            walk(step + 1, compress(proj), prob * p_plus, outcomes);
            outcomes.back() = -1;
            walk(step + 1, compress(subtract(psi, proj)),
                 prob * (Rational(1) - p_plus), outcomes);
            outcomes.pop_back();
        };
    std::vector<int> outcomes;
    walk(0, psi0, Rational(1), outcomes);
    return total;
}

}  // namespace

TEST_CASE("oracle construction and inference") {
    auto z4 = make_group("Z:4").group;
    Subgroup h(z4, {0, 2});
    auto f = make_oracle_from_subgroup(z4, h);
    CHECK(f.labels == std::vector<int>{0, 1, 0, 1});

    Subgroup whole(z4, {0, 1, 2, 3});
    auto constant = make_oracle_from_subgroup(z4, whole);
    CHECK(constant.labels == std::vector<int>(4, 0));
    CHECK(infer_subgroup_from_oracle(constant) == whole);

    Subgroup triv(z4, {0});
    auto injective = make_oracle_from_subgroup(z4, triv);
    CHECK(infer_subgroup_from_oracle(injective) == triv);
    CHECK(infer_subgroup_from_oracle(f) == h);

    // malformed label tables
    OracleFunction bad1(z4, {0, 0, 1, 1});  // {0,1} is not a subgroup of Z4
    CHECK_THROWS_AS(infer_subgroup_from_oracle(bad1), NotStrictlyPeriodic);
    OracleFunction bad2(z4, {0, 1, 0, 2});  // H-periodic but not strictly
    CHECK_THROWS_AS(infer_subgroup_from_oracle(bad2), NotStrictlyPeriodic);
}

TEST_CASE("default_m") {
    CHECK(default_m(1) == 2);
    CHECK(default_m(2) == 6);
    CHECK(default_m(6) == 13);  // ceil(4 log2 6) + 2
    CHECK(default_m(8) == 14);
    // agrees with the ceiling of the real-valued formula
    for (int n = 1; n <= 128; ++n) {
        int expect = static_cast<int>(
                         std::ceil(4.0 * std::log2(static_cast<double>(n)) -
                                   1e-9)) +
                     2;
        CHECK(default_m(n) == expect);
    }
}

TEST_CASE("sample_coset_reps charges one call per register") {
    auto z4 = make_group("Z:4").group;
    auto f = make_oracle_from_subgroup(z4, Subgroup(z4, {0, 2}));
    SplitMix64 rng(99);
    CHECK(f.call_count.load() == 0);
    auto reps = sample_coset_reps(f, 7, rng);
    CHECK(reps.size() == 7);
    CHECK(f.call_count.load() == 7);

    auto triv = make_group("Z:1").group;
    auto tf = make_oracle_from_subgroup(triv, Subgroup(triv, {0}));
    SplitMix64 rng2(1);
    for (int r : sample_coset_reps(tf, 5, rng2)) CHECK(r == 0);
}

TEST_CASE("coset sampling frequencies are uniform (5 sigma)") {
    auto z4 = make_group("Z:4").group;
    Subgroup h(z4, {0, 2});
    auto f = make_oracle_from_subgroup(z4, h);
    SplitMix64 rng(2024);
    const int draws = 10000;
    auto reps = sample_coset_reps(f, draws, rng);
    int even_coset = 0;
    for (int r : reps)
        if (h.contains(r)) ++even_coset;
    const double expect = draws / 2.0;
    const double sigma = std::sqrt(draws * 0.25);
    CHECK(std::abs(even_coset - expect) < 5 * sigma);
}

TEST_CASE("test schedule order and contents") {
    RunConfig config;
    auto z2 = make_group("Z:2").group;
    auto sched = test_schedule(z2, config);
    REQUIRE(sched.size() == 1);
    CHECK(sched[0].subgroup.size() == 2);

    auto z4 = make_group("Z:4").group;
    sched = test_schedule(z4, config);
    REQUIRE(sched.size() == 2);
    CHECK(sched[0].subgroup.members() == std::vector<int>{0, 1, 2, 3});
    CHECK(sched[1].subgroup.members() == std::vector<int>{0, 2});

    // ordering override: putting element 2 first schedules <2> first
    RunConfig reordered;
    reordered.ordering = {2, 1, 3, 0};
    sched = test_schedule(z4, reordered);
    CHECK(sched[0].subgroup.members() == std::vector<int>{0, 2});

    auto s3 = make_group("S:3").group;
    CHECK(test_schedule(s3, config).size() == 4);

    RunConfig bad;
    bad.ordering = {0, 0, 1, 2};
    CHECK_THROWS_AS(test_schedule(z4, bad), UnsupportedGroup);
}

TEST_CASE("analysis mode exact values") {
    RunConfig config;
    auto z2 = make_group("Z:2").group;
    Subgroup triv(z2, {0});
    Subgroup whole(z2, {0, 1});

    // H = G: every step a P_K step, success probability exactly 1
    auto trace = run_analysis<Rational>(z2, whole, config,
                                        std::vector<int>(4, 0));
    CHECK(trace.final_success_prob == 1);
    for (const auto& s : trace.steps) CHECK(s.err_sq == 0);

    // H = {e}, m = 4: 15/16
    trace = run_analysis<Rational>(z2, triv, config, std::vector<int>(4, 0));
    CHECK(trace.final_success_prob == Rational(15, 16));
    CHECK(trace.steps.back().err_sq == Rational(1, 16));

    // H = {e}, m = 6: 63/64
    trace = run_analysis<Rational>(z2, triv, config, std::vector<int>(6, 0));
    CHECK(trace.final_success_prob == Rational(63, 64));

    // Lemma 2 bound along every step, several groups and subgroups
    for (const char* spec : {"Z:4", "S:3"}) {
        auto g = make_group(spec).group;
        const int m = 8;
        for (const auto& h : enumerate_subgroups(g)) {
            auto t = run_analysis<Rational>(g, h, config,
                                            std::vector<int>(m, 0));
            Rational prev = 1;
            for (const auto& s : t.steps) {
                CHECK(s.err_sq <= s.lemma2_bound);
                CHECK(s.norm_sq_psi <= prev);  // nonincreasing
                prev = s.norm_sq_psi;
            }
        }
    }
}

TEST_CASE("analysis success probability is representative independent") {
    auto s3 = make_group("S:3").group;
    RunConfig config;
    SplitMix64 rng(31);
    for (const auto& h : enumerate_subgroups(s3)) {
        Rational base;
        for (int draw = 0; draw < 3; ++draw) {
            std::vector<int> reps(5);
            for (auto& r : reps) r = static_cast<int>(rng.next_below(6));
            auto t = run_analysis<Rational>(s3, h, config, reps);
            if (draw == 0) base = t.final_success_prob;
            CHECK(t.final_success_prob == base);
        }
    }
}

TEST_CASE("sampled trial with H = G is deterministic") {
    auto z4 = make_group("Z:4").group;
    Subgroup whole(z4, {0, 1, 2, 3});
    auto f = make_oracle_from_subgroup(z4, whole);
    RunConfig config;
    SplitMix64 rng(17);
    auto result = run_sampled_trial<Rational>(z4, f, config, rng);
    CHECK(result.output_set == whole.members());
    CHECK(result.matches_h);
    CHECK(result.is_subgroup);
    CHECK(result.oracle_calls == static_cast<std::uint64_t>(default_m(4)));
    for (const auto& s : result.record.steps) {
        CHECK(s.outcome == +1);
        CHECK(s.p_plus == 1);
    }
}

TEST_CASE("sampled trials reproduce under the same seed") {
    auto s3 = make_group("S:3").group;
    Subgroup h = cyclic_subgroup(s3, 1);  // some nontrivial subgroup
    auto f = make_oracle_from_subgroup(s3, h);
    RunConfig config;
    config.seed = 5;
    config.trials = 20;
    config.m = 8;
    auto a = run_trials<Rational>(s3, f, config);
    auto b = run_trials<Rational>(s3, f, config);
    REQUIRE(a.results.size() == b.results.size());
    for (size_t i = 0; i < a.results.size(); ++i) {
        CHECK(a.results[i].output_set == b.results[i].output_set);
        CHECK(a.results[i].oracle_calls == b.results[i].oracle_calls);
    }
    CHECK(a.successes == b.successes);

    // thread count must not change anything
    RunConfig threaded = config;
    threaded.threads = 4;
    auto c = run_trials<Rational>(s3, f, threaded);
    for (size_t i = 0; i < a.results.size(); ++i)
        CHECK(a.results[i].output_set == c.results[i].output_set);

    // trials = 1 reproduces a single trial on the derived stream
    RunConfig single = config;
    single.trials = 1;
    auto d = run_trials<Rational>(s3, f, single);
    CHECK(d.results[0].output_set == a.results[0].output_set);
}

TEST_CASE("all-correct probability equals the outcome-tree enumeration") {
    struct Case {
        const char* spec;
        std::vector<int> h_gens;
        int m;
    };
    for (const Case& c : {Case{"Z:4", {2}, 3}, Case{"Z:4", {}, 4},
                          Case{"S:3", {1}, 4}, Case{"S:3", {3}, 5},
                          Case{"Z:6", {2}, 4}}) {
        auto g = make_group(c.spec).group;
        Subgroup h = subgroup_closure(g, c.h_gens);
        RunConfig config;
        auto trace = run_analysis<Rational>(g, h, config,
                                            std::vector<int>(c.m, 0));
        CHECK(outcome_tree_success_prob(g, h, c.m) ==
              trace.final_success_prob);
    }
}

TEST_CASE("skip_implied skips deterministically implied tests") {
    auto z4 = make_group("Z:4").group;
    Subgroup whole(z4, {0, 1, 2, 3});
    auto f = make_oracle_from_subgroup(z4, whole);
    RunConfig config;
    config.skip_implied = true;
    SplitMix64 rng(3);
    auto result = run_sampled_trial<Rational>(z4, f, config, rng);
    REQUIRE(result.record.steps.size() == 2);
    CHECK(!result.record.steps[0].skipped);  // <1> = Z4 measured, +1
    CHECK(result.record.steps[1].skipped);   // <2> inside a +1 subgroup
    CHECK(result.record.steps[1].outcome == +1);
    CHECK(result.output_set == whole.members());

    // negative implication: test <2> first via an ordering override; a -1
    // on <2> puts element 2 outside H, which forces -1 for Z4 = <1>.
    Subgroup triv(z4, {0});
    auto finj = make_oracle_from_subgroup(z4, triv);
    RunConfig reordered = config;
    reordered.ordering = {2, 1, 3, 0};
    int skipped_negative = 0;
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        SplitMix64 r(seed);
        auto res = run_sampled_trial<Rational>(z4, finj, reordered, r);
        REQUIRE(res.record.steps[0].test.subgroup.members() ==
                std::vector<int>{0, 2});
        if (res.record.steps[1].skipped &&
            res.record.steps[1].outcome == -1)
            ++skipped_negative;
    }
    CHECK(skipped_negative > 0);
}

TEST_CASE("sampled success rate tracks the analysis probability") {
    auto z4 = make_group("Z:4").group;
    Subgroup h(z4, {0, 2});
    auto f = make_oracle_from_subgroup(z4, h);
    RunConfig config;
    config.m = 6;
    config.trials = 300;
    config.seed = 123;
    auto summary = run_trials<Rational>(z4, f, config);
    auto trace =
        run_analysis<Rational>(z4, h, config, std::vector<int>(6, 0));
    const double p = ScalarTraits<Rational>::to_double(
        trace.final_success_prob);
    const double sigma = std::sqrt(p * (1 - p) / config.trials);
    const double rate =
        static_cast<double>(summary.successes) / config.trials;
    CHECK(std::abs(rate - p) <= 4 * sigma + 1e-9);
    CHECK(summary.mean_oracle_calls == doctest::Approx(6.0));
}
