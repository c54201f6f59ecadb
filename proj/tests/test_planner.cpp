#include "aisr/errors.hpp"
#include "aisr/planner.hpp"

#include <doctest.h>

#include <cmath>

using namespace aisr;

namespace {

ResourcePool random_pool(Rng& rng) {
    ResourcePool pool;
    for (auto type : kAllActionTypes) {
        if (rng.bernoulli(0.3) && !pool.templates.empty()) continue;
        pool.templates.push_back(ActionTemplate{type, rng.uniform_int(20, 800),
                                                is_vaccination(type) ? rng.uniform_real(0.5, 2.0)
                                                                     : rng.uniform_real(0.01, 0.05),
                                                0.75, rng.uniform_int(1, 3)});
    }
    return pool;
}

Situation start(std::int64_t population = 1000, std::int64_t infected = 3) {
    Situation s;
    s.s = population - infected;
    s.i = infected;
    return s;
}

void check_plan_fits(const Plan& plan, const ResourcePool& pool, std::int64_t horizon, std::int64_t earliest = 0) {
    REQUIRE_NOTHROW(validate_plan(plan, horizon));
    for (auto type : kAllActionTypes) {
        std::int64_t n = 0;
        for (const auto& t : plan.tasks) {
            if (t.type != type) continue;
            ++n;
            const auto* tmpl = pool.find(type);
            REQUIRE(tmpl != nullptr);
            REQUIRE(t.amount >= 1);
            REQUIRE(t.amount <= tmpl->available);
            REQUIRE(t.from_day >= earliest);
            REQUIRE(t.cost == doctest::Approx(action_cost(type, tmpl->unit_cost, t.amount, t.from_day, t.to_day)));
        }
        if (const auto* tmpl = pool.find(type)) REQUIRE(n <= tmpl->max_tasks);
    }
}

} // namespace

TEST_CASE("single-template pool generates only that action") {
    ResourcePool pool{{ActionTemplate{ActionType::Quarantining, 200, 0.02, 0.75, 3}}};
    Rng rng(1);
    for (int n = 0; n < 100; ++n) {
        const auto plan = generate_plan(pool, 50, rng, n);
        REQUIRE_FALSE(plan.tasks.empty());
        for (const auto& t : plan.tasks) {
            REQUIRE(t.type == ActionType::Quarantining);
            REQUIRE(t.from_day <= t.to_day);
            REQUIRE(t.to_day <= 50);
        }
        check_plan_fits(plan, pool, 50);
    }
}

TEST_CASE("empty pool is rejected") {
    Rng rng(1);
    CHECK_THROWS_AS(generate_plan(ResourcePool{}, 50, rng, 0), EmptyPool);
    PlanIds ids;
    ScenarioConfig config;
    CHECK_THROWS_AS(clonal_select(start(), ResourcePool{}, {}, config, rng, ids), EmptyPool);
}

TEST_CASE("generated plans respect the earliest day") {
    Rng rng(8);
    for (int n = 0; n < 50; ++n) {
        const auto pool = random_pool(rng);
        check_plan_fits(generate_plan(pool, 50, rng, n, 30), pool, 50, 30);
    }
}

TEST_CASE("zero intensity mutation only changes the id") {
    Rng rng(4);
    const auto pool = random_pool(rng);
    const auto plan = generate_plan(pool, 50, rng, 1);
    const auto result = mutate_counted(plan, pool, 0.0, 50, rng, 99);
    CHECK(result.edits == 0);
    auto expected = plan;
    expected.id = 99;
    CHECK(result.plan == expected);
}

TEST_CASE("full intensity applies one edit per task") {
    ResourcePool pool;
    for (auto type : kAllActionTypes) pool.templates.push_back(ActionTemplate{type, 300, 0.5, 0.75, 2});
    Plan plan{1, 0.0, {}};
    for (std::int64_t k = 0; k < 4; ++k) {
        const auto type = kAllActionTypes[static_cast<std::size_t>(k)];
        plan.tasks.push_back(Action{type, 50, action_cost(type, 0.5, 50, 5 * k, 5 * k + 4), 5 * k, 5 * k + 4, 0.75});
    }
    Rng rng(10);
    for (int n = 0; n < 50; ++n) {
        const auto result = mutate_counted(plan, pool, 1.0, 50, rng, 2);
        REQUIRE(result.edits == 4);
        check_plan_fits(result.plan, pool, 50);
    }
}

TEST_CASE("mutation keeps plans feasible") {
    Rng rng(13);
    for (int n = 0; n < 200; ++n) {
        const auto pool = random_pool(rng);
        auto plan = generate_plan(pool, 50, rng, 0);
        for (int step = 0; step < 5; ++step) {
            const auto intensity = rng.uniform();
            const auto result = mutate_counted(plan, pool, intensity, 50, rng, step + 1);
            REQUIRE(result.edits == static_cast<std::int64_t>(std::ceil(intensity * static_cast<double>(plan.tasks.size()))));
            plan = result.plan;
            check_plan_fits(plan, pool, 50);
            REQUIRE_FALSE(plan.tasks.empty());
        }
    }
}

TEST_CASE("successfulness formula") {
    CHECK(successfulness_score(0.6, 0.6, 0.0, 5000) == 0.0);
    CHECK(successfulness_score(0.6, 0.7, 0.0, 5000) == 0.0);
    CHECK(successfulness_score(0.6, 0.3, 0.0, 5000) == doctest::Approx(0.5));
    CHECK(successfulness_score(0.6, 0.3, 5000.0, 5000) == doctest::Approx(0.25));
    CHECK(successfulness_score(0.0, 0.0, 0.0, 5000) == 0.0);
}

TEST_CASE("empty plan scores zero") {
    ScenarioConfig config;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        config.seed = seed;
        CHECK(evaluate(Plan{}, start(), config) == 0.0);
    }
}

TEST_CASE("free total lockdown scores near one") {
    ScenarioConfig config;
    Plan lockdown{0, 0.0, {Action{ActionType::MassSocialDistancing, 1000, 0.0, 0, 50, 1.0}}};
    const Evaluator evaluator(start(), config);
    const auto score = evaluator.score(lockdown);
    const double expected = (evaluator.baseline_peak() - 0.003) / evaluator.baseline_peak();
    CHECK(score == doctest::Approx(expected));
    CHECK(score > 0.99);
}

TEST_CASE("threaded scoring matches sequential") {
    ScenarioConfig config;
    Rng rng(6);
    const auto pool = random_pool(rng);
    std::vector<Plan> plans;
    for (int n = 0; n < 9; ++n) plans.push_back(generate_plan(pool, 50, rng, n));
    const Evaluator evaluator(start(), config);
    const auto one = evaluator.score_all(plans, 1);
    const auto four = evaluator.score_all(plans, 4);
    CHECK(one == four);
    for (std::size_t k = 0; k < plans.size(); ++k) CHECK(one[k] == evaluator.score(plans[k]));
    CHECK(evaluator.score_all({}, 4).empty());
}

TEST_CASE("degenerate budget returns the better of two plans") {
    ScenarioConfig config;
    Rng rng(30);
    const auto pool = random_pool(rng);
    SearchBudget budget{1, 2, 3, 0.99};
    Rng search_rng(31);
    PlanIds ids;
    const auto result = clonal_select(start(), pool, budget, config, search_rng, ids);
    CHECK(result.evaluations == 2);

    Rng replay(31);
    const auto a = generate_plan(pool, 50, replay, 0);
    const auto b = generate_plan(pool, 50, replay, 1);
    const auto best = std::max(evaluate(a, start(), config), evaluate(b, start(), config));
    CHECK(result.score == best);
    CHECK(result.best_by_generation.size() == 1);
}

TEST_CASE("best-ever score never decreases") {
    ScenarioConfig config;
    config.duration_days = 40;
    Rng rng(55);
    for (int trial = 0; trial < 15; ++trial) {
        const auto pool = random_pool(rng);
        Rng search_rng(rng.next());
        PlanIds ids;
        const SearchBudget budget{6, 6, 2, 1.0};
        const auto result = clonal_select(start(), pool, budget, config, search_rng, ids);
        REQUIRE(result.best_by_generation.size() == 6);
        for (std::size_t g = 1; g < result.best_by_generation.size(); ++g)
            REQUIRE(result.best_by_generation[g] >= result.best_by_generation[g - 1]);
        REQUIRE(result.score == result.best_by_generation.back());
        REQUIRE(result.score == evaluate(result.best, start(), config));
    }
}

TEST_CASE("search stops once the plan is acceptable") {
    ScenarioConfig config;
    ResourcePool pool{{ActionTemplate{ActionType::MassSocialDistancing, 1000, 0.0, 1.0, 1}}};
    Rng rng(3);
    PlanIds ids;
    const auto result = clonal_select(start(), pool, SearchBudget{20, 10, 3, 0.01}, config, rng, ids);
    CHECK(result.score >= 0.01);
    CHECK(result.best_by_generation.size() < 20);
}

TEST_CASE("plan certainty") {
    CHECK(plan_certainty(std::nullopt, 30) == 0.0);
    MemoryCase c;
    c.successfulness = 0.8;
    CHECK(plan_certainty(Retrieval{&c, 0}, 30) == doctest::Approx(0.8));
    CHECK(plan_certainty(Retrieval{&c, 30}, 30) == doctest::Approx(0.4));
    CHECK(plan_certainty(Retrieval{&c, 60}, 30) == doctest::Approx(0.2));
}
