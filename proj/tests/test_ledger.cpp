#include <catch2/catch_amalgamated.hpp>
#include <random>

#include "selmer/cohomology.hpp"
#include "selmer/ledger.hpp"

using namespace selmer;

TEST_CASE("wiles balance on the standard dimension table") {
    std::vector<LocalConditionEntry> entries = {p_entry(1), trivial_prime_entry(11), trivial_prime_entry(31),
                                                archimedean_entry()};
    CHECK(wiles_balance(entries, {0, 0}) == 0);

    // adding another balanced trivial-prime row changes nothing
    entries.push_back(trivial_prime_entry(41));
    CHECK(wiles_balance(entries, {0, 0}) == 0);
}

TEST_CASE("wiles balance requires the archimedean entry") {
    CHECK_THROWS_WITH(wiles_balance({}, {0, 0}), "archimedean place required");
    CHECK_THROWS_WITH(wiles_balance({p_entry(1)}, {0, 0}), "archimedean place required");
}

TEST_CASE("wiles balance is additive over splits of the local set") {
    std::mt19937_64 rng(61);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<LocalConditionEntry> all = {archimedean_entry()};
        int manual = 0 - 1;  // the inf row contributes dim_N - h0 = -1
        int count = 2 + static_cast<int>(rng() % 6);
        for (int i = 0; i < count; ++i) {
            LocalConditionEntry e{std::to_string(100 + i), static_cast<int>(rng() % 5),
                                  static_cast<int>(rng() % 5), EntrySource::config};
            manual += e.dim_N - e.h0;
            all.push_back(e);
        }
        GlobalTerms g{static_cast<int>(rng() % 3), static_cast<int>(rng() % 3)};
        CHECK(wiles_balance(all, g) == g.h0_M - g.h0_Mstar + manual);

        // split: the inf-bearing part plus the plain sum of the rest
        std::size_t cut = 1 + rng() % (all.size() - 1);
        std::vector<LocalConditionEntry> a(all.begin(), all.begin() + cut);
        int rest = 0;
        for (std::size_t i = cut; i < all.size(); ++i) rest += all[i].dim_N - all[i].h0;
        CHECK(wiles_balance(all, g) == wiles_balance(a, g) + rest);
    }
}

TEST_CASE("trivial-prime table rows match the computed local dimensions") {
    for (auto [p, ell] : {std::pair<i64, i64>{5, 11}, {7, 29}}) {
        TrivialPrime tp(p, ell);
        auto dims = h_dims(AdAction::trivial(tp));
        auto entry = trivial_prime_entry(ell);
        CHECK(entry.h0 == dims.h0);
        auto space = n_space(ConditionType{ConditionTag::II}, ShapeParams{PAdic(p, 3, 0), PAdic(p, 3, p)}, tp);
        CHECK(entry.dim_N == space.dim());
    }
}

TEST_CASE("selmer growth bound") {
    CHECK(selmer_growth_bound(3, 2) == 9);
    CHECK(selmer_growth_bound(0, 0) == 0);
    CHECK(selmer_growth_bound(5, 1) == 8);
}

TEST_CASE("greenberg-style lower bound aggregation") {
    CHECK(greenberg_bk_bounds(10, {0, 0, 0}) == 10);
    CHECK(greenberg_bk_bounds(10, {0, 0, 0, 0, 0, 0, 0, 0, 0, 0}) == 10);
    CHECK(greenberg_bk_bounds(7, {2, 6}) == -1);  // vacuous but legal
    CHECK_THROWS_WITH(greenberg_bk_bounds(7, {3, 3}), "violates Lemma delta-bounds");
    CHECK_THROWS_WITH(greenberg_bk_bounds(7, {7}), "violates Lemma delta-bounds");
    CHECK_THROWS_WITH(greenberg_bk_bounds(7, {-1}), "violates Lemma delta-bounds");
    CHECK(greenberg_bk_bounds(7, {4}, 4) == 3);
    CHECK_THROWS_WITH(greenberg_bk_bounds(7, {5}, 4), "violates Lemma delta-bounds");
}

TEST_CASE("cokernel bound") {
    CHECK(cok_bound(0, 0) == 0);
    CHECK(cok_bound(2, 0) == 2);
    CHECK(cok_bound(3, 1) == 4);
    CHECK_THROWS_AS(cok_bound(-1, 0), std::invalid_argument);
}

TEST_CASE("plan bound: reference values and trace") {
    auto rep = plan_bound({100, 0, 10});
    CHECK(rep.m_bound == 9);
    CHECK(rep.final_bound == 8);
    CHECK(rep.intermediate_bound == 8);
    CHECK_FALSE(rep.trace.empty());

    CHECK(plan_bound({0, 0, 0}).final_bound == -22);
    CHECK(minimal_n_for_target(10, 0, 10) == 104);
    CHECK(plan_bound({minimal_n_for_target(10, 0, 10), 0, 10}).final_bound == 10);

    LiftingPlan over{10, 0, 0};
    over.Z_max = 3;
    CHECK_THROWS_AS(plan_bound(over), std::invalid_argument);
}

TEST_CASE("plan bound monotonicity") {
    for (int n = 0; n <= 40; n += 4)
        for (int m = 0; m <= 6; ++m)
            for (int t = 0; t <= 6; ++t) {
                auto base = plan_bound({n, m, t});
                CHECK(plan_bound({n + 2, m, t}).final_bound >= base.final_bound);
                CHECK(plan_bound({n, m + 1, t}).final_bound <= base.final_bound);
                CHECK(plan_bound({n, m, t + 1}).final_bound <= base.final_bound);
            }
}
