#pragma once

#include "aisr/config.hpp"
#include "aisr/plan.hpp"
#include "aisr/rng.hpp"
#include "aisr/situation.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

namespace aisr {

inline constexpr std::int64_t kTicksPerDay = 12;

struct Person {
    std::int64_t id = 0;
    HealthState state = HealthState::Susceptible;
    std::int32_t days_in_state = 0;
    std::int32_t infectious_age = 0;  // days since entering I; carried into II

    bool operator==(const Person&) const = default;
};

/// Closed agent population. Mutated by at most one thread at a time.
struct World {
    std::int64_t tick = 0;
    std::vector<Person> persons;
    DiseaseParams params;
    Rng rng{0};

    std::int64_t population() const { return static_cast<std::int64_t>(persons.size()); }
    std::int64_t day() const { return tick / kTicksPerDay; }

    bool operator==(const World&) const = default;
};

/// Persons 0..initial_infected-1 start Infectious, everyone else Susceptible.
World make_world(std::int64_t population, std::int64_t initial_infected, const DiseaseParams& params,
                 std::uint64_t seed);

/// Populates agents to match the given census, states assigned in id order.
World make_world(const Situation& situation, const DiseaseParams& params, std::uint64_t seed);

Situation census(const World& world);

/// Multiplicative scales and additive rates in force on one day.
struct EffectSet {
    double contact_scale = 1.0;
    double transmission_scale = 1.0;
    double extra_isolation_prob = 0.0;
    std::int64_t vaccinations_per_day = 0;
    double vaccine_efficacy = 0.0;

    static EffectSet identity() { return {}; }
    bool operator==(const EffectSet&) const = default;
};

/// Folds every task active on `day` into one EffectSet. Throws InvalidPlan on
/// a reversed interval.
EffectSet effects_for_day(const Plan& plan, std::int64_t day);

/// Advances the world by one day.
///
/// Draw order per step: vaccination first (one uniform_int per pick over the
/// remaining susceptibles, then one uniform per pick for efficacy), then one
/// pass over persons in id order against the start-of-day infectious count:
/// S draws once for infection (only when the infection probability is
/// positive); I draws once for exit or isolation; II draws once on exit.
World step_day(World world, const EffectSet& effects);
void advance_day(World& world, const EffectSet& effects);

/// Per-day census series; days[0] is the initial census.
struct EpidemicTrace {
    std::vector<Situation> days;
    std::int64_t population = 0;
    double total_cost = 0.0;

    bool operator==(const EpidemicTrace&) const = default;
};

/// Runs `days` daily steps under `plan` starting from `world`.
EpidemicTrace simulate(World world, const Plan& plan, std::int64_t days);

/// One round from the configured initial condition, seeded by config.seed.
EpidemicTrace run_round(const ScenarioConfig& config, const Plan& plan);

struct RoundSummary {
    std::int64_t round = 0;
    std::int64_t peak_day = 0;
    double peak_prevalence = 0.0;
    double attack_fraction = 0.0;
    std::int64_t deaths = 0;
    double total_cost = 0.0;
    double plan_certainty = 0.0;
    std::optional<std::int64_t> stored_case_id;
    double realized_successfulness = 0.0;

    bool operator==(const RoundSummary&) const = default;
};

/// Peak of I+II (earliest day on ties), attack fraction of ever-infected
/// agents at the final day, deaths, and plan cost. Throws on an empty trace.
RoundSummary summarize(const EpidemicTrace& trace);

/// Header `day,S,E,I,II,R,IM,D`, one row per day.
void write_trace_csv(std::ostream& out, const EpidemicTrace& trace);
EpidemicTrace read_trace_csv(std::istream& in);

} // namespace aisr
