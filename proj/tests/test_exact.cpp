#include "doctest_ext.hpp"

#include <random>

#include "antsched/schedulers.hpp"
#include "brute_force.hpp"

using namespace antsched;

TEST_CASE("brute force oracle on hand-checked instances") {
    const std::vector<double> sizes{1, 2};
    const ObjectiveWeights w;
    auto r = oracle::bruteForceUser(std::vector<double>{2, 2}, 2, sizes, w);
    REQUIRE(r);
    CHECK(r->objective == doctest::Approx(-40));
    r = oracle::bruteForceUser(std::vector<double>{4, 0}, 2, sizes, w);
    REQUIRE(r);
    CHECK(r->objective == doctest::Approx(-39));
    CHECK_FALSE(oracle::bruteForceUser(std::vector<double>{0, 0}, 2, sizes, w));
}

TEST_CASE("exact solver matches exhaustive enumeration") {
    for (const ObjectiveWeights& w :
         {ObjectiveWeights{440, 10, 1}, ObjectiveWeights{1, 1, 1}, ObjectiveWeights{0, 1, 5}, ObjectiveWeights{3, 0, 1}}) {
        const auto report = oracle::runOracleCheck(5, 200, 31, w);
        CHECK(report.instances == 200);
        CHECK(report.mismatches == 0);
        CHECK(report.feasible > 100);
    }
}

TEST_CASE("exact solver handles several users independently") {
    std::mt19937_64 rng(3);
    for (int i = 0; i < 100; ++i) {
        const auto inst = oracle::randomInstance(rng, 5, 5, 3, 3);
        const auto reference = oracle::bruteForceObjective(inst.scenario, inst.ladder, {});
        const auto exact = sched::exactOptimize(inst.scenario, inst.ladder, {});
        CHECK((reference.has_value() == (exact.status == sched::SolveStatus::Optimal)));
        if (reference) CHECK(objectiveValue(*exact.schedule, inst.ladder, {}) == doctest::Approx(*reference));
        if (!reference) CHECK_FALSE(exact.infeasibleUsers.empty());
    }
}

TEST_CASE("ties prefer earlier downloads and are deterministic") {
    // zero quality weight: every quality is optimal, lowest index wins the tie
    const Scenario sc(2, 10, {{10, 10}});
    const auto ladder = QualityLadder::fromSizes(std::vector<double>{1, 2, 3});
    const auto a = sched::exactOptimize(sc, ladder, {1, 0, 0});
    const auto b = sched::exactOptimize(sc, ladder, {1, 0, 0});
    REQUIRE(a.schedule);
    CHECK(*a.schedule == *b.schedule);
    CHECK(a.schedule->users[0].segments[0].slot == 0u);
    CHECK(a.schedule->users[0].segments[1].slot == 0u);
    CHECK(a.schedule->users[0].segments[0].quality == 0u);
}

TEST_CASE("exact never trades lateness for quality under the default weights") {
    std::mt19937_64 rng(101);
    for (int i = 0; i < 300; ++i) {
        const auto inst = oracle::randomInstance(rng, 6, 6, 3);
        const auto ex = sched::exactOptimize(inst.scenario, inst.ladder, {});
        if (ex.status != sched::SolveStatus::Optimal) continue;
        // any schedule with zero lateness beats any late one when the quality gap is below 44 MB
        const auto lowOnly = QualityLadder::fromSizes(std::vector<double>{inst.ladder.lowestSize()});
        const auto lowest = sched::exactOptimize(inst.scenario, lowOnly, {1, 0, 0});
        if (lowest.status == sched::SolveStatus::Optimal && totalLateness(*lowest.schedule, 0) == 0)
            CHECK(totalLateness(*ex.schedule, 0) == 0);
    }
}
