#pragma once

#include "aisr/plan.hpp"
#include "aisr/situation.hpp"

#include <cstdint>
#include <string>

namespace aisr {

/// Per-day disease dynamics. Defaults are the calibrated set produced by
/// `aisr calibrate` against a day-10 / 60.8% no-control peak.
struct DiseaseParams {
    double contacts_per_day = 12.0;
    double transmission_prob = 0.1875;
    std::int64_t incubation_days = 1;
    std::int64_t infectious_days = 3;
    double base_isolation_prob = 0.05;
    double case_fatality = 0.03;

    bool operator==(const DiseaseParams&) const = default;
};

/// Ranges for a randomly drawn resource pool. Every template gets `efficacy`;
/// availability and unit cost are drawn uniformly from the ranges.
struct RandomPoolSpec {
    std::int64_t targeted_available_min = 50;
    std::int64_t targeted_available_max = 300;
    std::int64_t mass_available_min = 200;
    std::int64_t mass_available_max = 1000;
    double rate_unit_cost_min = 0.025;
    double rate_unit_cost_max = 0.125;
    double dose_unit_cost_min = 1.25;
    double dose_unit_cost_max = 5.0;
    double efficacy = 0.75;
    std::int64_t max_tasks_min = 1;
    std::int64_t max_tasks_max = 3;

    bool operator==(const RandomPoolSpec&) const = default;
};

struct PoolConfig {
    bool random = true;
    RandomPoolSpec ranges;
    ResourcePool fixed;  // used when random == false

    bool operator==(const PoolConfig&) const = default;
};

/// Agent counts for one emergency operations center.
struct EocRoles {
    std::string name = "EOC1";
    std::int64_t operational = 3;
    std::int64_t tactical = 1;
    std::int64_t tactical_communication = 1;
    std::int64_t decision_making = 1;

    bool operator==(const EocRoles&) const = default;
};

struct SearchBudget {
    std::int64_t generations = 20;
    std::int64_t population_size = 10;
    std::int64_t clones_per_elite = 3;
    double acceptable_successfulness = 0.3;

    bool operator==(const SearchBudget&) const = default;
};

struct PlannerSettings {
    SearchBudget budget;
    double cost_scale = 5000.0;
    std::int64_t evaluation_replicates = 1;
    std::int64_t threads = 1;
    std::int64_t checkpoint_day = 25;

    bool operator==(const PlannerSettings&) const = default;
};

struct MemorySettings {
    double min_successfulness = 0.05;
    std::int64_t match_radius = 30;

    bool operator==(const MemorySettings&) const = default;
};

struct ScenarioConfig {
    std::int64_t population = 1000;
    std::int64_t initial_infected = 3;
    std::int64_t duration_days = 50;
    std::uint64_t seed = 1;
    std::int64_t rounds = 1;
    DiseaseParams disease;
    PoolConfig pool;
    EocRoles eoc;
    PlannerSettings planner;
    MemorySettings memory;
    SelfPolicy self_policy;

    bool operator==(const ScenarioConfig&) const = default;
};

/// Throws ConfigError naming the first offending field.
void validate(const ScenarioConfig& config);

} // namespace aisr
