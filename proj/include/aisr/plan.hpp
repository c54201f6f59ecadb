#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

namespace aisr {

enum class ActionType : std::uint8_t {
    TargetedSocialDistancing = 0,
    MassSocialDistancing,
    TargetedVaccination,
    MassVaccination,
    Quarantining,
    Awareness,
};

inline constexpr std::array<ActionType, 6> kAllActionTypes = {
    ActionType::TargetedSocialDistancing, ActionType::MassSocialDistancing,
    ActionType::TargetedVaccination,      ActionType::MassVaccination,
    ActionType::Quarantining,             ActionType::Awareness,
};

/// Upper-case wire name, e.g. "TARGETED_SOCIAL_DISTANCING".
std::string_view to_string(ActionType type);
std::optional<ActionType> parse_action_type(std::string_view name);

bool is_vaccination(ActionType type);

/// Fraction of the relevant subpopulation an action reaches: 0.3 for the
/// targeted variants, 1.0 for everything else.
double coverage(ActionType type);

/// One timed control strategy. Days are inclusive on both ends.
struct Action {
    ActionType type = ActionType::Quarantining;
    std::int64_t amount = 0;
    double cost = 0.0;
    std::int64_t from_day = 0;
    std::int64_t to_day = 0;
    double efficacy = 0.0;

    std::int64_t duration() const { return to_day - from_day + 1; }
    bool active_on(std::int64_t day) const { return from_day <= day && day <= to_day; }

    bool operator==(const Action&) const = default;
};

/// Vaccination batches are paid per dose; every other action is paid per
/// unit per day.
double action_cost(ActionType type, double unit_cost, std::int64_t amount, std::int64_t from_day,
                   std::int64_t to_day);

/// Doses a vaccination task delivers on `day`: amount spread evenly over its
/// interval, remainder on the earliest days. Zero outside the interval.
std::int64_t vaccination_doses_on(const Action& action, std::int64_t day);

/// Course of actions.
struct Plan {
    std::int64_t id = 0;
    double certainty = 0.0;
    std::vector<Action> tasks;

    double total_cost() const;
    bool empty() const { return tasks.empty(); }

    bool operator==(const Plan&) const = default;
};

/// Throws InvalidPlan on a reversed or negative interval, a day past the
/// horizon (when given), an efficacy outside [0,1], or a certainty outside [0,1].
void validate_plan(const Plan& plan, std::optional<std::int64_t> horizon = std::nullopt);

/// Returns a copy with every task moved by `offset` days and clipped to
/// [0, horizon]. Tasks that fall entirely outside the window are dropped;
/// costs are rescaled to the surviving duration.
Plan shift_plan(const Plan& plan, std::int64_t offset, std::int64_t horizon);

/// Keeps only the portion of each task that runs strictly before `day`.
Plan truncate_plan(const Plan& plan, std::int64_t day);

/// Keeps only the portion of each task that runs on or after `day`.
Plan remainder_plan(const Plan& plan, std::int64_t day);

/// Gene library entry: what one action type costs and how much of it a
/// single task may request.
struct ActionTemplate {
    ActionType type = ActionType::Quarantining;
    std::int64_t available = 0;  // max amount a single task may draw
    double unit_cost = 0.0;
    double efficacy = 0.75;
    std::int64_t max_tasks = 1;  // max tasks of this type in one plan

    bool operator==(const ActionTemplate&) const = default;
};

struct ResourcePool {
    std::vector<ActionTemplate> templates;

    bool empty() const { return templates.empty(); }
    const ActionTemplate* find(ActionType type) const;
    std::int64_t max_total_tasks() const;

    bool operator==(const ResourcePool&) const = default;
};

void validate_pool(const ResourcePool& pool);

} // namespace aisr
