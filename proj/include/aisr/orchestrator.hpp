#pragma once

#include "aisr/config.hpp"
#include "aisr/epidemic.hpp"
#include "aisr/memory.hpp"
#include "aisr/plan.hpp"
#include "aisr/round_log.hpp"

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <vector>

namespace aisr {

/// Throws ConfigError unless the EOC has exactly one decision maker, exactly
/// one tactical communication agent, and at least one tactical and one
/// operational agent.
void validate_roles(const EocRoles& roles);

enum class Activity : std::uint8_t {
    SituationReport,   // operational census report, every 6 hours
    Aggregation,       // tactical communication, 2 hours after reports
    PlanStatusCheck,   // tactical communication, mid-round checkpoint
    PlanDecision,      // decision maker, 2 hours after a non-self aggregation
    TaskAllocation,    // tactical communication, 4 hours after a plan
    TaskDeployment,    // tactical agent, when a task starts
    TaskStatusReport,  // operational agent, when a task ends or is cancelled
    RoundReview,       // tactical communication, end of round
};

struct DueActivity {
    Activity activity = Activity::SituationReport;
    AgentRole role = AgentRole::Operational;
    std::int64_t agent = 0;
    std::int64_t ref = -1;  // task index for task-level activities

    bool operator==(const DueActivity&) const = default;
};

inline constexpr std::int64_t tick_of(std::int64_t day, std::int64_t hour) { return day * 12 + hour / 2; }

/// Deterministic event queue on the 2-hour clock. Periodic reports and
/// aggregations are implicit; everything else is booked with `book`.
/// Activities at one tick come out ordered by role priority, then agent
/// index, then booking order.
class Scheduler {
public:
    explicit Scheduler(const EocRoles& roles);

    /// All activities due at (day, hour). Throws std::invalid_argument when
    /// the hour is odd or outside 0..22.
    std::vector<DueActivity> due(std::int64_t day, std::int64_t hour) const;

    void book(std::int64_t tick, const DueActivity& activity);

    /// Starts a tick: queues its periodic activities.
    void begin_tick(std::int64_t day, std::int64_t hour);

    /// Next activity at the current tick, including ones booked while the
    /// tick is being processed.
    std::optional<DueActivity> next();

private:
    struct Entry {
        std::int64_t tick;
        int priority;
        std::int64_t agent;
        std::uint64_t seq;
        DueActivity activity;
        bool operator<(const Entry& o) const {
            return std::tie(tick, priority, agent, seq) < std::tie(o.tick, o.priority, o.agent, o.seq);
        }
    };

    std::vector<DueActivity> periodic(std::int64_t hour) const;

    EocRoles roles_;
    std::set<Entry> queue_;
    std::uint64_t seq_ = 0;
    std::int64_t current_tick_ = -1;
};

/// Default schedule of a round that detects non-self at day 0: periodic
/// reporting plus the plan at (0, 4) and its allocation at (0, 8).
std::vector<DueActivity> schedule(std::int64_t day, std::int64_t hour, const EocRoles& roles);

struct RoundOutcome {
    RoundSummary summary;
    RoundLog log;
    EpidemicTrace trace;
    MemoryStore store;
    std::vector<Transition> transitions;
    std::int64_t plan_evaluations = 0;
    bool planned = false;     // clonal selection ran at least once
    bool reused = false;      // a memory case was reused
    bool replanned = false;   // the mid-round checkpoint failed
};

/// One EOC round: drives the 2-hour clock over config.duration_days, runs
/// the control loop, deploys plans against the epidemic, and stores one
/// memory case if a plan was deployed. The world and the planner draw from
/// independent streams derived from config.seed.
RoundOutcome run_eoc_round(const ScenarioConfig& config, const ResourcePool& pool, MemoryStore store,
                           std::int64_t round_index = 0);

} // namespace aisr
