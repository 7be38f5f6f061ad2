#include "hsp/verification.hpp"

#include <chrono>

#include <json.hpp>

#include "hsp/rng.hpp"

namespace hsp {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
    return std::chrono::duration<double, std::milli>(Clock::now() - start)
        .count();
}

int intersection_size(const Subgroup& a, const Subgroup& b) {
    int count = 0;
    for (int x : a.members())
        if (b.contains(x)) ++count;
    return count;
}

}  // namespace

std::string subgroup_label(const Subgroup& s) {
    std::string out = "{";
    for (size_t i = 0; i < s.members().size(); ++i) {
        if (i) out += ",";
        out += std::to_string(s.members()[i]);
    }
    return out + "}";
}

LemmaReport check_lemma1(const GroupPtr& g, const std::string& group_spec,
                         int m_max, int rep_draws, std::uint64_t seed) {
    const auto start = Clock::now();
    LemmaReport report{"lemma1", group_spec, 0, {}, 0.0};
    const std::vector<Subgroup> subgroups = enumerate_subgroups(g);
    SplitMix64 rng(seed);

    for (const Subgroup& h : subgroups) {
        for (const Subgroup& k : subgroups) {
            const int d = intersection_size(h, k);
            for (int m = 1; m <= m_max; ++m) {
                for (int draw = 0; draw < rep_draws; ++draw) {
                    std::vector<int> reps(m);
                    for (int j = 0; j < m; ++j)
                        reps[j] =
                            static_cast<int>(rng.next_below(g->order()));
                    ++report.cases;

                    TensorSumState<Rational> psi =
                        tensor_coset_state<Rational>(h, reps);
                    Rational got = inner(psi, apply_PK(psi, k)) / norm_sq(psi);
                    Rational expected =
                        scalar_pow(Rational(d, k.size()), m);

                    bool ok = got == expected;
                    if (k.subset_of(h)) ok = ok && got == 1;
                    else ok = ok && got <= pow2<Rational>(-m);
                    if (!ok)
                        report.failures.push_back(
                            {group_spec, subgroup_label(h), subgroup_label(k),
                             m, expected.str(), got.str()});
                }
            }
        }
    }
    report.elapsed_ms = ms_since(start);
    return report;
}

LemmaReport check_lemma2(const GroupPtr& g, const std::string& group_spec,
                         const Subgroup& h, const RunConfig& config) {
    const auto start = Clock::now();
    LemmaReport report{"lemma2", group_spec, 0, {}, 0.0};
    const int m = config.resolved_m(g->order());
    std::vector<int> reps(m, g->identity());

    AnalysisTrace<Rational> trace = run_analysis<Rational>(g, h, config, reps);
    for (const auto& step : trace.steps) {
        ++report.cases;
        if (step.err_sq > step.lemma2_bound)
            report.failures.push_back({group_spec, subgroup_label(h),
                                       subgroup_label(step.test.subgroup), m,
                                       "<= " + step.lemma2_bound.str(),
                                       step.err_sq.str()});
    }
    report.elapsed_ms = ms_since(start);
    return report;
}

LemmaReport check_success_bound(const GroupPtr& g,
                                const std::string& group_spec,
                                const Subgroup& h, int m) {
    const auto start = Clock::now();
    LemmaReport report{"bound", group_spec, 0, {}, 0.0};
    RunConfig config;
    config.m = m;
    std::vector<int> reps(m, g->identity());

    AnalysisTrace<Rational> trace = run_analysis<Rational>(g, h, config, reps);
    const Rational p = trace.final_success_prob;
    const int n = g->order();

    // p >= 1 - 2|G|/2^{m/2}, squared to avoid the irrational 2^{m/2}.
    ++report.cases;
    const Rational gap = Rational(1) - p;
    const Rational rhs = Rational(4) * n * n * pow2<Rational>(-m);
    const Rational gap_sq = gap * gap;
    if (p > 1 || gap_sq > rhs)
        report.failures.push_back({group_spec, subgroup_label(h), "", m,
                                   "(1-p)^2 <= " + rhs.str(), gap_sq.str()});

    if (m == default_m(n)) {
        ++report.cases;
        const Rational target = Rational(1) - Rational(1, n);
        if (p < target)
            report.failures.push_back({group_spec, subgroup_label(h), "", m,
                                       ">= " + target.str(), p.str()});
    }
    report.elapsed_ms = ms_since(start);
    return report;
}

std::pair<Subgroup, std::uint64_t> classical_baseline(
    const OracleFunction& f) {
    const GroupPtr& g = f.group;
    const std::uint64_t before = f.call_count.load();
    std::vector<int> queried(g->order());
    for (int x = 0; x < g->order(); ++x) queried[x] = f(x);
    OracleFunction observed(g, std::move(queried));
    Subgroup h = infer_subgroup_from_oracle(observed);
    return {std::move(h), f.call_count.load() - before};
}

std::string lemma_report_to_json(const LemmaReport& report) {
    nlohmann::ordered_json doc;
    doc["lemma"] = report.lemma;
    doc["group"] = report.group_spec;
    doc["cases"] = report.cases;
    doc["failures"] = nlohmann::ordered_json::array();
    for (const auto& f : report.failures) {
        doc["failures"].push_back({{"group", f.group},
                                   {"H", f.h},
                                   {"K", f.k},
                                   {"m", f.m},
                                   {"expected", f.expected},
                                   {"got", f.got}});
    }
    doc["elapsed_ms"] = report.elapsed_ms;
    return doc.dump(2);
}

}  // namespace hsp
