#include "aisr/errors.hpp"
#include "aisr/orchestrator.hpp"
#include "aisr/scenario.hpp"

#include <doctest.h>

#include <sstream>

using namespace aisr;

namespace {

std::vector<LogRecord> reparse(const RoundLog& log) {
    std::stringstream buf;
    log.write(buf);
    return read_log(buf);
}

bool any_kind(const std::vector<LogRecord>& records, const std::string& kind) {
    for (const auto& r : records)
        if (r.details.value("kind", "") == kind) return true;
    return false;
}

} // namespace

TEST_CASE("control loop edges") {
    using S = ControlLoopState;
    using E = ControlEvent;
    CHECK(control_step(S::Monitoring, E::NoChange) == S::Monitoring);
    CHECK(control_step(S::Monitoring, E::NonselfDetected) == S::Detected);
    CHECK(control_step(S::Detected, E::MemoryMatch) == S::Matched);
    CHECK(control_step(S::Detected, E::MemoryMiss) == S::MatchFailed);
    CHECK(control_step(S::MatchFailed, E::Proceed) == S::HelpRequested);
    CHECK(control_step(S::HelpRequested, E::Proceed) == S::Mutating);
    CHECK(control_step(S::Mutating, E::PlanFound) == S::Cloning);
    CHECK(control_step(S::Matched, E::PlanFound) == S::Cloning);
    CHECK(control_step(S::Cloning, E::PlanDeployed) == S::Cloning);
    CHECK(control_step(S::Cloning, E::ResponseFailed) == S::Ignored);
    CHECK(control_step(S::Ignored, E::Proceed) == S::Mutating);
    CHECK(control_step(S::Cloning, E::ResponseSucceeded) == S::Retained);
    CHECK(control_step(S::Retained, E::Proceed) == S::Monitoring);
}

TEST_CASE("every other control loop pair is illegal") {
    constexpr int states = 9, events = 9;
    int legal = 0;
    for (int s = 0; s < states; ++s)
        for (int e = 0; e < events; ++e) {
            try {
                control_step(static_cast<ControlLoopState>(s), static_cast<ControlEvent>(e));
                ++legal;
            } catch (const IllegalTransition&) {
            }
        }
    CHECK(legal == 13);
    CHECK_THROWS_AS(control_step(ControlLoopState::Monitoring, ControlEvent::PlanFound), IllegalTransition);
}

TEST_CASE("state and event names round trip") {
    for (int s = 0; s < 9; ++s) {
        const auto state = static_cast<ControlLoopState>(s);
        CHECK(parse_control_state(to_string(state)) == state);
        const auto event = static_cast<ControlEvent>(s);
        CHECK(parse_control_event(to_string(event)) == event);
    }
    CHECK_FALSE(parse_control_state("Sleeping").has_value());
}

TEST_CASE("role validation") {
    EocRoles roles;
    CHECK_NOTHROW(validate_roles(roles));
    roles.decision_making = 2;
    try {
        validate_roles(roles);
        FAIL("expected a config error");
    } catch (const ConfigError& e) {
        CHECK(e.field() == "eoc.decision_making");
    }
    roles = {};
    roles.operational = 0;
    CHECK_THROWS_AS(validate_roles(roles), ConfigError);
    roles = {};
    roles.tactical_communication = 0;
    CHECK_THROWS_AS(validate_roles(roles), ConfigError);
    roles = {};
    roles.tactical = 0;
    CHECK_THROWS_AS(validate_roles(roles), ConfigError);
}

TEST_CASE("default schedule") {
    EocRoles roles;
    const auto at0 = schedule(0, 0, roles);
    REQUIRE(at0.size() == 3);
    for (std::size_t k = 0; k < at0.size(); ++k) {
        CHECK(at0[k].activity == Activity::SituationReport);
        CHECK(at0[k].role == AgentRole::Operational);
        CHECK(at0[k].agent == static_cast<std::int64_t>(k));
    }
    const auto at2 = schedule(0, 2, roles);
    REQUIRE(at2.size() == 1);
    CHECK(at2[0].activity == Activity::Aggregation);
    CHECK(at2[0].role == AgentRole::TacticalCommunication);

    const auto at4 = schedule(0, 4, roles);
    REQUIRE(at4.size() == 1);
    CHECK(at4[0].role == AgentRole::DecisionMaking);
    const auto at8 = schedule(0, 8, roles);
    REQUIRE(at8.size() == 2);
    CHECK(at8[0].activity == Activity::Aggregation);
    CHECK(at8[1].activity == Activity::TaskAllocation);

    CHECK(schedule(0, 10, roles).empty());
    CHECK_THROWS_AS(schedule(0, 1, roles), std::invalid_argument);
    CHECK_THROWS_AS(schedule(0, 24, roles), std::invalid_argument);
}

TEST_CASE("scheduler orders by role then agent then booking") {
    EocRoles roles;
    Scheduler scheduler(roles);
    scheduler.book(tick_of(0, 6), DueActivity{Activity::PlanDecision, AgentRole::DecisionMaking, 0, -1});
    scheduler.book(tick_of(0, 6), DueActivity{Activity::TaskDeployment, AgentRole::Tactical, 0, 1});
    scheduler.book(tick_of(0, 6), DueActivity{Activity::TaskDeployment, AgentRole::Tactical, 0, 0});
    const auto due = scheduler.due(0, 6);
    REQUIRE(due.size() == 6);
    CHECK(due[0].role == AgentRole::Operational);
    CHECK(due[2].agent == 2);
    CHECK(due[3].role == AgentRole::DecisionMaking);
    CHECK(due[4].ref == 1);
    CHECK(due[5].ref == 0);
}

TEST_CASE("log rejects odd hours and time going backwards") {
    RoundLog log;
    Message m{"Operational_0_EOC1", AgentRole::Operational, 0, 2, SituationReport{}, {}};
    log.append(m);
    m.hour = 3;
    CHECK_THROWS_AS(log.append(m), std::invalid_argument);
    m.hour = 0;
    CHECK_THROWS_AS(log.append(m), std::invalid_argument);
    m.day = 1;
    CHECK_NOTHROW(log.append(m));
}

TEST_CASE("first round plans from scratch and stores one case") {
    ScenarioConfig config;
    const auto pool = resolve_pool(config, config.seed);
    const auto outcome = run_eoc_round(config, pool, MemoryStore(config.memory), 1);
    CHECK(outcome.planned);
    CHECK_FALSE(outcome.reused);
    CHECK(outcome.summary.plan_certainty == 0.0);
    CHECK(outcome.store.size() == 1);
    CHECK(outcome.summary.stored_case_id == 0);
    CHECK(outcome.plan_evaluations > 0);
    CHECK(outcome.trace.days.size() == 51);

    const auto records = reparse(outcome.log);
    CHECK(check_log(records).empty());
    CHECK(any_kind(records, "PlanMsg"));
    CHECK(any_kind(records, "TaskAssignment"));
    CHECK(any_kind(records, "PlanStatus"));
    CHECK(records.front().agent == "Operational_0_EOC1");
}

TEST_CASE("second round from the same situation reuses the case") {
    ScenarioConfig config;
    const auto pool = resolve_pool(config, config.seed);
    const auto first = run_eoc_round(config, pool, MemoryStore(config.memory), 1);
    REQUIRE(first.store.size() == 1);
    const auto& stored = first.store.cases()[0];
    REQUIRE(stored.successfulness >= config.memory.min_successfulness);

    const auto second = run_eoc_round(config, pool, first.store, 2);
    CHECK(second.reused);
    CHECK(second.summary.plan_certainty == doctest::Approx(stored.successfulness));
    CHECK(second.store.size() == 2);
    CHECK(check_log(reparse(second.log)).empty());
}

TEST_CASE("healthy population stays in monitoring") {
    ScenarioConfig config;
    config.initial_infected = 0;
    const auto outcome = run_eoc_round(config, resolve_pool(config, 1), MemoryStore(config.memory), 1);
    CHECK_FALSE(outcome.planned);
    CHECK(outcome.store.empty());
    CHECK(outcome.summary.total_cost == 0.0);
    for (const auto& t : outcome.transitions) CHECK(t.to == ControlLoopState::Monitoring);
    for (const auto& r : reparse(outcome.log)) {
        const auto kind = r.details.value("kind", "");
        CHECK((kind == "SituationReport" || kind == "AggregatedReport"));
    }
}

TEST_CASE("failed checkpoint re-enters planning") {
    // An unreachable acceptable score forces the checkpoint to fail.
    ScenarioConfig config;
    config.planner.budget = SearchBudget{2, 4, 1, 1.0};
    const auto outcome = run_eoc_round(config, resolve_pool(config, 1), MemoryStore(config.memory), 1);
    CHECK(outcome.replanned);
    bool failed = false, looped = false;
    for (const auto& t : outcome.transitions) {
        failed |= t.event == ControlEvent::ResponseFailed;
        looped |= t.from == ControlLoopState::Ignored && t.to == ControlLoopState::Mutating;
    }
    CHECK(failed);
    CHECK(looped);
    CHECK(check_log(reparse(outcome.log)).empty());
}

TEST_CASE("check_log catches broken references") {
    ScenarioConfig config;
    const auto outcome = run_eoc_round(config, resolve_pool(config, 1), MemoryStore(config.memory), 1);
    auto records = reparse(outcome.log);
    for (auto& r : records)
        if (r.details.value("kind", "") == "PlanMsg") r.details["situation_id"] = 100000;
    CHECK_FALSE(check_log(records).empty());

    std::istringstream bad("agent\teoc\taction_description\tday\thour\tdetails\nx\tEOC1\ty\t0\t0\t{broken\n");
    try {
        read_log(bad);
        FAIL("expected a format error");
    } catch (const FormatError& e) {
        CHECK(e.line() == 2);
    }
}

TEST_CASE("rounds are deterministic") {
    ScenarioConfig config;
    config.seed = 9;
    const auto pool = resolve_pool(config, 9);
    const auto a = run_eoc_round(config, pool, MemoryStore(config.memory), 1);
    const auto b = run_eoc_round(config, pool, MemoryStore(config.memory), 1);
    std::stringstream la, lb;
    a.log.write(la);
    b.log.write(lb);
    CHECK(la.str() == lb.str());
    CHECK(a.trace == b.trace);
    CHECK(a.store == b.store);

    config.planner.threads = 3;
    const auto c = run_eoc_round(config, pool, MemoryStore(config.memory), 1);
    CHECK(c.trace == a.trace);
}
