#include <doctest.h>

#include <vector>

#include <json.hpp>

#include "hsp/group.hpp"
#include "hsp/verification.hpp"

using namespace hsp;

TEST_CASE("dense_from_tensor basics") {
    auto z2 = make_group("Z:2").group;
    Subgroup triv(z2, {0});
    Subgroup whole(z2, {0, 1});

    auto basis = tensor_coset_state<Rational>(triv, {1, 0});
    auto dense = dense_from_tensor(basis);
    REQUIRE(dense.amps.size() == 4);
    // |1> (x) |0> sits at mixed-radix index 1*2 + 0
    for (size_t i = 0; i < 4; ++i)
        CHECK(dense.amps[i] == (i == 2 ? 1 : 0));

    auto psi = tensor_coset_state<Rational>(whole, {0, 0});
    dense = dense_from_tensor(psi);
    for (const auto& a : dense.amps) CHECK(a == 1);
}

TEST_CASE("dense cap") {
    CHECK_THROWS_AS(dense_dimension(10, 7), DenseCapExceeded);
    CHECK(dense_dimension(4, 5) == 1024);
}

TEST_CASE("dense projector laws") {
    auto z4 = make_group("Z:4").group;
    Subgroup k(z4, {0, 2});
    Subgroup triv(z4, {0});

    DenseState<Rational> v{z4, 2, {}};
    for (int i = 0; i < 16; ++i) v.amps.push_back(Rational(i * 7 % 11, 3));

    auto once = dense_apply_PK(v, k);
    auto twice = dense_apply_PK(once, k);
    CHECK(once.amps == twice.amps);
    CHECK(dense_apply_PK(v, triv).amps == v.amps);

    // self-adjointness
    DenseState<Rational> w{z4, 2, {}};
    for (int i = 0; i < 16; ++i) w.amps.push_back(Rational(5 - i, 2));
    CHECK(dense_inner(dense_apply_PK(v, k), w) ==
          dense_inner(v, dense_apply_PK(w, k)));
}

TEST_CASE("structured and dense backends agree on all reachable states") {
    for (const char* spec : {"Z:2", "Z:3", "Z:4", "Z:2xZ:2"}) {
        auto g = make_group(spec).group;
        RunConfig config;
        const auto schedule = test_schedule(g, config);
        for (const auto& h : enumerate_subgroups(g)) {
            for (int m : {1, 3, 5}) {
                std::vector<int> reps;
                for (int j = 0; j < m; ++j) reps.push_back(j % g->order());
                // exhaust every outcome sequence
                const size_t paths = size_t{1} << schedule.size();
                for (size_t path = 0; path < paths; ++path) {
                    auto psi = tensor_coset_state<Rational>(h, reps);
                    auto dense = dense_from_tensor(psi);
                    for (size_t i = 0; i < schedule.size(); ++i) {
                        const Subgroup& k = schedule[i].subgroup;
                        auto proj = apply_PK(psi, k);
                        auto dproj = dense_apply_PK(dense, k);
                        CHECK(dense_from_tensor(proj).amps == dproj.amps);
                        if (path & (size_t{1} << i)) {
                            psi = compress(proj);
                            dense = std::move(dproj);
                        } else {
                            psi = compress(subtract(psi, proj));
                            for (size_t a = 0; a < dense.amps.size(); ++a)
                                dense.amps[a] -= dproj.amps[a];
                        }
                        CHECK(norm_sq(psi) == dense_inner(dense, dense));
                        CHECK(dense_from_tensor(psi).amps == dense.amps);
                    }
                }
            }
        }
    }
}

TEST_CASE("check_lemma1 passes on small groups") {
    for (const char* spec : {"Z:2", "S:3", "Q8"}) {
        auto g = make_group(spec);
        auto report = check_lemma1(g.group, g.spec, 3);
        CHECK(report.passed());
        CHECK(report.cases > 0);
        CHECK(report.lemma == "lemma1");
    }
    // Z2 cross-pair count: 4 ordered pairs * 3 m values * 3 draws
    auto z2 = make_group("Z:2");
    CHECK(check_lemma1(z2.group, z2.spec, 3).cases == 36);
}

TEST_CASE("check_lemma2 exact bound") {
    auto z2 = make_group("Z:2");
    RunConfig config;
    config.m = 4;
    Subgroup triv(z2.group, {0});
    auto report = check_lemma2(z2.group, z2.spec, triv, config);
    CHECK(report.passed());
    CHECK(report.cases == 1);  // single scheduled test for Z2

    Subgroup whole(z2.group, {0, 1});
    CHECK(check_lemma2(z2.group, z2.spec, whole, config).passed());

    for (const char* spec : {"Z:6", "D:4"}) {
        auto g = make_group(spec);
        RunConfig c;
        for (const auto& h : enumerate_subgroups(g.group))
            CHECK(check_lemma2(g.group, g.spec, h, c).passed());
    }
}

TEST_CASE("check_success_bound") {
    auto z2 = make_group("Z:2");
    Subgroup triv(z2.group, {0});
    auto report = check_success_bound(z2.group, z2.spec, triv, 6);
    CHECK(report.passed());
    CHECK(report.cases == 2);  // squared bound + Theorem 1 target at default m

    auto s3 = make_group("S:3");
    for (const auto& h : enumerate_subgroups(s3.group))
        CHECK(check_success_bound(s3.group, s3.spec, h, 13).passed());
}

TEST_CASE("classical baseline recovers H in |G| queries") {
    for (const char* spec : {"Z:4", "S:3", "Q8"}) {
        auto g = make_group(spec).group;
        for (const auto& h : enumerate_subgroups(g)) {
            auto f = make_oracle_from_subgroup(g, h);
            auto [recovered, queries] = classical_baseline(f);
            CHECK(recovered == h);
            CHECK(queries == static_cast<std::uint64_t>(g->order()));
        }
    }
    auto z4 = make_group("Z:4").group;
    OracleFunction bad(z4, {0, 0, 1, 1});
    CHECK_THROWS_AS(classical_baseline(bad), NotStrictlyPeriodic);
}

TEST_CASE("lemma report serializes to the documented JSON shape") {
    auto z2 = make_group("Z:2");
    auto report = check_lemma1(z2.group, z2.spec, 2);
    auto doc = nlohmann::json::parse(lemma_report_to_json(report));
    CHECK(doc["lemma"] == "lemma1");
    CHECK(doc["group"] == "Z:2");
    CHECK(doc["cases"].get<std::uint64_t>() == report.cases);
    CHECK(doc["failures"].is_array());
    CHECK(doc["failures"].empty());
    CHECK(doc.contains("elapsed_ms"));
}
