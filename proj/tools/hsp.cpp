#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "hsp/errors.hpp"
#include "hsp/group.hpp"
#include "hsp/runtime.hpp"
#include "hsp/verification.hpp"

using nlohmann::ordered_json;
using namespace hsp;

namespace {

using Clock = std::chrono::steady_clock;

struct CliOptions {
    std::string group_spec;
    std::string subgroup_gens;
    int m = 0;
    std::string mode = "sampled";
    int trials = 100;
    std::uint64_t seed = 0;
    bool seed_given = false;
    std::string scalar = "exact";
    bool skip_implied = false;
    std::string ordering;
    std::size_t term_cap = 4096;
    int threads = 1;
    std::string out;
    std::string csv;
};

std::uint64_t resolve_seed(const CliOptions& opts) {
    if (opts.seed_given) return opts.seed;
    if (const char* env = std::getenv("HSP_SEED"))
        return std::strtoull(env, nullptr, 10);
    return 0;
}

std::vector<int> parse_ordering(const std::string& text) {
    std::vector<int> out;
    std::string normalized = text;
    std::replace(normalized.begin(), normalized.end(), ',', ' ');
    std::istringstream in(normalized);
    int x;
    while (in >> x) out.push_back(x);
    return out;
}

RunConfig build_config(const CliOptions& opts, const NamedGroup& g) {
    RunConfig config;
    config.m = opts.m;
    config.skip_implied = opts.skip_implied;
    config.scalar_mode =
        opts.scalar == "float" ? ScalarMode::Float : ScalarMode::Exact;
    config.seed = resolve_seed(opts);
    config.term_cap = opts.term_cap;
    config.trials = opts.trials;
    config.threads = opts.threads;
    if (!opts.ordering.empty()) config.ordering = parse_ordering(opts.ordering);
    (void)g;
    return config;
}

template <class S>
ordered_json scalar_json(const S& x) {
    ordered_json v;
    v["value"] = ScalarTraits<S>::to_double(x);
    if constexpr (ScalarTraits<S>::exact) v["exact"] = x.str();
    return v;
}

ordered_json subgroup_json(const Subgroup& s) {
    return ordered_json{{"elements", s.members()}, {"order", s.size()}};
}

void emit(const ordered_json& doc, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << doc.dump(2) << "\n";
    } else {
        std::ofstream out(out_path);
        out << doc.dump(2) << "\n";
    }
}

ordered_json config_json(const NamedGroup& g, const Subgroup& h,
                         const CliOptions& opts, const RunConfig& config) {
    ordered_json doc;
    doc["group"] = g.spec;
    doc["group_order"] = g.group->order();
    doc["subgroup_gens"] = opts.subgroup_gens;
    doc["H"] = subgroup_json(h);
    doc["m"] = config.resolved_m(g.group->order());
    doc["scalar"] = opts.scalar;
    doc["mode"] = opts.mode;
    doc["seed"] = config.seed;
    doc["rng"] = SplitMix64::kName;
    doc["trials"] = config.trials;
    doc["skip_implied"] = config.skip_implied;
    doc["ordering"] = config.resolved_ordering(g.group->order());
    doc["term_cap"] = config.term_cap;
    doc["threads"] = config.threads;
    return doc;
}

template <class S>
int simulate_with_scalar(const NamedGroup& g, const Subgroup& h,
                         const CliOptions& opts, RunConfig config) {
    const auto start = Clock::now();
    const int n = g.group->order();
    const int m = config.resolved_m(n);

    ordered_json doc;
    doc["schema"] = 1;
    doc["config"] = config_json(g, h, opts, config);
    doc["theorem1_target"] = 1.0 - 1.0 / n;
    doc["success_bound"] = 1.0 - 2.0 * n / std::pow(2.0, m / 2.0);

    if (opts.mode == "analysis") {
        std::vector<int> reps(m, g.group->identity());
        auto trace = run_analysis<S>(g.group, h, config, reps);
        ordered_json steps = ordered_json::array();
        for (const auto& s : trace.steps) {
            steps.push_back({{"K", s.test.subgroup.members()},
                             {"generators", s.test.generators},
                             {"norm_sq_psi", scalar_json(s.norm_sq_psi)},
                             {"err_sq", scalar_json(s.err_sq)},
                             {"lemma2_bound", scalar_json(s.lemma2_bound)}});
        }
        doc["analysis"] = {{"success_probability",
                            scalar_json(trace.final_success_prob)},
                           {"steps", steps}};
    } else {
        auto f = make_oracle_from_subgroup(g.group, h);
        auto summary = run_trials<S>(g.group, f, config);
        ordered_json per_test = ordered_json::array();
        for (const auto& t : summary.per_test)
            per_test.push_back({{"K", t.test.subgroup.members()},
                                {"generators", t.test.generators},
                                {"plus", t.plus},
                                {"minus", t.minus},
                                {"skipped", t.skipped}});
        doc["sampled"] = {
            {"trials", summary.trials},
            {"successes", summary.successes},
            {"success_rate",
             static_cast<double>(summary.successes) / summary.trials},
            {"subgroup_outputs", summary.subgroup_outputs},
            {"mean_oracle_calls", summary.mean_oracle_calls},
            {"classical_baseline_queries", n},
            {"per_test", per_test}};
        if (!opts.csv.empty()) {
            std::ofstream csv(opts.csv);
            csv << "trial,matches_H,is_subgroup,oracle_calls,X\n";
            for (int t = 0; t < summary.trials; ++t) {
                const auto& r = summary.results[t];
                csv << t << "," << r.matches_h << "," << r.is_subgroup << ","
                    << r.oracle_calls << ",\"";
                for (size_t i = 0; i < r.output_set.size(); ++i)
                    csv << (i ? " " : "") << r.output_set[i];
                csv << "\"\n";
            }
        }
    }

    doc["timing"] = {{"elapsed_ms",
                      std::chrono::duration<double, std::milli>(Clock::now() -
                                                                start)
                          .count()}};
    emit(doc, opts.out);
    return 0;
}

int cmd_simulate(const CliOptions& opts) {
    NamedGroup g = make_group(opts.group_spec);
    Subgroup h =
        subgroup_closure(g.group, parse_elements(g, opts.subgroup_gens));
    RunConfig config = build_config(opts, g);
    if (opts.scalar == "float")
        return simulate_with_scalar<double>(g, h, opts, config);
    return simulate_with_scalar<Rational>(g, h, opts, config);
}

// Exhaustive structured-vs-dense comparison over every outcome sequence.
LemmaReport check_dense(const NamedGroup& g, int m) {
    const auto start = Clock::now();
    LemmaReport report{"dense", g.spec, 0, {}, 0.0};
    RunConfig config;
    const auto schedule = test_schedule(g.group, config);
    for (const auto& h : enumerate_subgroups(g.group)) {
        std::vector<int> reps;
        for (int j = 0; j < m; ++j) reps.push_back(j % g.group->order());
        const size_t paths = size_t{1} << schedule.size();
        for (size_t path = 0; path < paths; ++path) {
            auto psi = tensor_coset_state<Rational>(h, reps);
            auto dense = dense_from_tensor(psi);
            for (size_t i = 0; i < schedule.size(); ++i) {
                ++report.cases;
                const Subgroup& k = schedule[i].subgroup;
                auto proj = apply_PK(psi, k);
                auto dproj = dense_apply_PK(dense, k);
                if (path & (size_t{1} << i)) {
                    psi = compress(proj);
                    dense = std::move(dproj);
                } else {
                    psi = compress(subtract(psi, proj));
                    for (size_t a = 0; a < dense.amps.size(); ++a)
                        dense.amps[a] -= dproj.amps[a];
                }
                if (dense_from_tensor(psi).amps != dense.amps ||
                    norm_sq(psi) != dense_inner(dense, dense))
                    report.failures.push_back(
                        {g.spec, subgroup_label(h), subgroup_label(k), m,
                         "structured == dense", "mismatch"});
            }
        }
    }
    report.elapsed_ms =
        std::chrono::duration<double, std::milli>(Clock::now() - start)
            .count();
    return report;
}

int cmd_verify(const std::string& what, const CliOptions& opts, int max_m) {
    NamedGroup g = make_group(opts.group_spec);
    std::vector<LemmaReport> reports;

    if (what == "lemma1") {
        reports.push_back(check_lemma1(g.group, g.spec, max_m));
    } else if (what == "lemma2") {
        RunConfig config = build_config(opts, g);
        for (const auto& h : enumerate_subgroups(g.group))
            reports.push_back(check_lemma2(g.group, g.spec, h, config));
    } else if (what == "bound") {
        const int m = opts.m > 0 ? opts.m : default_m(g.group->order());
        for (const auto& h : enumerate_subgroups(g.group))
            reports.push_back(check_success_bound(g.group, g.spec, h, m));
    } else if (what == "dense") {
        const int m = opts.m > 0 ? opts.m : 3;
        dense_dimension(g.group->order(), m);  // enforce the cap up front
        reports.push_back(check_dense(g, m));
    } else {
        throw UnsupportedGroup("unknown verify target '" + what + "'");
    }

    // merge into one report per invocation
    LemmaReport merged{reports.front().lemma, g.spec, 0, {}, 0.0};
    for (const auto& r : reports) {
        merged.cases += r.cases;
        merged.failures.insert(merged.failures.end(), r.failures.begin(),
                               r.failures.end());
        merged.elapsed_ms += r.elapsed_ms;
    }
    if (opts.out.empty())
        std::cout << lemma_report_to_json(merged) << "\n";
    else {
        std::ofstream out(opts.out);
        out << lemma_report_to_json(merged) << "\n";
    }
    return merged.passed() ? 0 : 1;
}

int cmd_groups_list() {
    ordered_json doc;
    doc["constructors"] = {"Z:n", "D:n (order 2n)", "S:n (n <= 5)", "Q8",
                           "products joined by x (e.g. Z:2xZ:4)",
                           "file:<path> (JSON {order, table})"};
    std::cout << doc.dump(2) << "\n";
    return 0;
}

int cmd_groups_show(const std::string& spec) {
    NamedGroup g = make_group(spec);
    ordered_json doc;
    doc["spec"] = spec;
    doc["order"] = g.group->order();
    ordered_json names = ordered_json::object();
    for (const auto& [name, idx] : g.element_names) names[name] = idx;
    doc["element_names"] = names;

    RunConfig config;
    ordered_json schedule = ordered_json::array();
    for (const auto& c : test_schedule(g.group, config))
        schedule.push_back({{"K", c.subgroup.members()},
                            {"generators", c.generators}});
    doc["test_schedule"] = schedule;
    doc["cyclic_subgroups"] =
        distinct_cyclic_subgroups(g.group).size();
    if (g.group->order() <= 24)
        doc["subgroups"] = enumerate_subgroups(g.group).size();
    doc["default_m"] = default_m(g.group->order());
    std::cout << doc.dump(2) << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"hidden subgroup measurement simulator"};
    app.require_subcommand(1);
    CliOptions opts;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--group", opts.group_spec, "group spec string")
            ->required();
        cmd->add_option("--m", opts.m, "tensor factors / oracle calls");
        cmd->add_option("--seed", opts.seed, "RNG seed")
            ->each([&](const std::string&) { opts.seed_given = true; });
        cmd->add_option("--scalar", opts.scalar)
            ->check(CLI::IsMember({"exact", "float"}));
        cmd->add_option("--ordering", opts.ordering,
                        "element ordering permutation");
        cmd->add_option("--term-cap", opts.term_cap);
        cmd->add_option("--threads", opts.threads);
        cmd->add_option("--out", opts.out, "write JSON report here");
    };

    auto* simulate = app.add_subcommand("simulate", "run the algorithm");
    add_common(simulate);
    simulate->add_option("--subgroup-gens", opts.subgroup_gens,
                         "generators of H");
    simulate->add_option("--mode", opts.mode)
        ->check(CLI::IsMember({"sampled", "analysis"}));
    simulate->add_option("--trials", opts.trials);
    simulate->add_flag("--skip-implied", opts.skip_implied);
    simulate->add_option("--csv", opts.csv, "per-trial CSV path");

    auto* verify = app.add_subcommand("verify", "run a checker");
    std::string target;
    int max_m = 5;
    verify->add_option("target", target, "lemma1|lemma2|bound|dense")
        ->required();
    add_common(verify);
    verify->add_option("--max-m", max_m, "largest m for lemma1");

    auto* groups = app.add_subcommand("groups", "describe groups");
    std::string groups_action, groups_spec;
    groups->add_option("action", groups_action, "list|show")->required();
    groups->add_option("spec", groups_spec, "group spec for show");

    try {
        app.parse(argc, argv);
        if (simulate->parsed()) return cmd_simulate(opts);
        if (verify->parsed()) return cmd_verify(target, opts, max_m);
        if (groups->parsed()) {
            if (groups_action == "list") return cmd_groups_list();
            if (groups_action == "show") return cmd_groups_show(groups_spec);
            throw UnsupportedGroup("unknown groups action '" + groups_action +
                                   "'");
        }
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const HspError& e) {
        ordered_json err{{"error", e.what()}};
        std::cerr << err.dump() << "\n";
        return e.exit_code();
    } catch (const std::exception& e) {
        ordered_json err{{"error", e.what()}};
        std::cerr << err.dump() << "\n";
        return 2;
    }
    return 2;
}
