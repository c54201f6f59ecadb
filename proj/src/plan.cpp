#include "aisr/plan.hpp"

#include "aisr/errors.hpp"

#include <algorithm>
#include <string>

namespace aisr {

namespace {

constexpr std::array<std::string_view, 6> kActionNames = {
    "TARGETED_SOCIAL_DISTANCING", "MASS_SOCIAL_DISTANCING", "TARGETED_VACCINATION",
    "MASS_VACCINATION",           "QUARANTINING",           "AWARENESS",
};

// Doses delivered on day offsets [first, last] of a vaccination task whose
// amount is spread as evenly as possible, remainder going to the earliest days.
std::int64_t doses_between(const Action& a, std::int64_t first, std::int64_t last) {
    const std::int64_t dur = a.duration();
    const std::int64_t base = a.amount / dur;
    const std::int64_t rem = a.amount % dur;
    const std::int64_t days = last - first + 1;
    const std::int64_t extra = std::max<std::int64_t>(0, std::min(last + 1, rem) - first);
    return base * days + extra;
}

// Re-derives amount and cost of `a` when only day offsets [first, last] of
// the original interval are kept.
Action keep_window(const Action& a, std::int64_t first, std::int64_t last) {
    Action out = a;
    const std::int64_t dur = a.duration();
    if (is_vaccination(a.type)) {
        out.amount = doses_between(a, first, last);
        out.cost = a.amount > 0 ? a.cost * static_cast<double>(out.amount) / static_cast<double>(a.amount)
                                : 0.0;
    } else {
        out.cost = a.cost * static_cast<double>(last - first + 1) / static_cast<double>(dur);
    }
    out.from_day = a.from_day + first;
    out.to_day = a.from_day + last;
    return out;
}

} // namespace

std::string_view to_string(ActionType type) { return kActionNames[static_cast<std::size_t>(type)]; }

std::optional<ActionType> parse_action_type(std::string_view name) {
    for (std::size_t k = 0; k < kActionNames.size(); ++k) {
        if (kActionNames[k] == name) return static_cast<ActionType>(k);
    }
    return std::nullopt;
}

bool is_vaccination(ActionType type) {
    return type == ActionType::TargetedVaccination || type == ActionType::MassVaccination;
}

double coverage(ActionType type) {
    switch (type) {
    case ActionType::TargetedSocialDistancing:
    case ActionType::TargetedVaccination: return 0.3;
    default: return 1.0;
    }
}

double action_cost(ActionType type, double unit_cost, std::int64_t amount, std::int64_t from_day,
                   std::int64_t to_day) {
    const double base = unit_cost * static_cast<double>(amount);
    if (is_vaccination(type)) return base;
    return base * static_cast<double>(to_day - from_day + 1);
}

std::int64_t vaccination_doses_on(const Action& action, std::int64_t day) {
    if (!action.active_on(day)) return 0;
    const std::int64_t k = day - action.from_day;
    return doses_between(action, k, k);
}

double Plan::total_cost() const {
    double sum = 0.0;
    for (const auto& task : tasks) sum += task.cost;
    return sum;
}

void validate_plan(const Plan& plan, std::optional<std::int64_t> horizon) {
    if (!(plan.certainty >= 0.0 && plan.certainty <= 1.0))
        throw InvalidPlan("plan " + std::to_string(plan.id) + ": certainty outside [0,1]");
    for (std::size_t k = 0; k < plan.tasks.size(); ++k) {
        const auto& t = plan.tasks[k];
        const std::string where = "plan " + std::to_string(plan.id) + " task " + std::to_string(k);
        if (t.from_day < 0) throw InvalidPlan(where + ": negative from_day");
        if (t.to_day < t.from_day) throw InvalidPlan(where + ": to_day < from_day");
        if (horizon && t.to_day > *horizon) throw InvalidPlan(where + ": to_day beyond horizon");
        if (t.amount < 0) throw InvalidPlan(where + ": negative amount");
        if (!(t.cost >= 0.0)) throw InvalidPlan(where + ": negative cost");
        if (!(t.efficacy >= 0.0 && t.efficacy <= 1.0))
            throw InvalidPlan(where + ": efficacy outside [0,1]");
    }
}

Plan shift_plan(const Plan& plan, std::int64_t offset, std::int64_t horizon) {
    Plan out{plan.id, plan.certainty, {}};
    for (const auto& t : plan.tasks) {
        const std::int64_t from = t.from_day + offset;
        const std::int64_t to = t.to_day + offset;
        if (to < 0 || from > horizon) continue;
        const std::int64_t first = std::max<std::int64_t>(from, 0) - from;
        const std::int64_t last = std::min(to, horizon) - from;
        Action moved = keep_window(t, first, last);
        moved.from_day += offset;
        moved.to_day += offset;
        out.tasks.push_back(moved);
    }
    return out;
}

Plan truncate_plan(const Plan& plan, std::int64_t day) {
    Plan out{plan.id, plan.certainty, {}};
    for (const auto& t : plan.tasks) {
        if (t.from_day >= day) continue;
        out.tasks.push_back(keep_window(t, 0, std::min(t.to_day, day - 1) - t.from_day));
    }
    return out;
}

Plan remainder_plan(const Plan& plan, std::int64_t day) {
    Plan out{plan.id, plan.certainty, {}};
    for (const auto& t : plan.tasks) {
        if (t.to_day < day) continue;
        out.tasks.push_back(keep_window(t, std::max<std::int64_t>(0, day - t.from_day), t.duration() - 1));
    }
    return out;
}

const ActionTemplate* ResourcePool::find(ActionType type) const {
    for (const auto& t : templates)
        if (t.type == type) return &t;
    return nullptr;
}

std::int64_t ResourcePool::max_total_tasks() const {
    std::int64_t n = 0;
    for (const auto& t : templates) n += t.max_tasks;
    return n;
}

void validate_pool(const ResourcePool& pool) {
    for (std::size_t k = 0; k < pool.templates.size(); ++k) {
        const auto& t = pool.templates[k];
        const std::string name(to_string(t.type));
        if (t.available < 1) throw InvalidPlan("pool template " + name + ": available < 1");
        if (!(t.unit_cost >= 0.0)) throw InvalidPlan("pool template " + name + ": negative unit cost");
        if (!(t.efficacy >= 0.0 && t.efficacy <= 1.0))
            throw InvalidPlan("pool template " + name + ": efficacy outside [0,1]");
        if (t.max_tasks < 1) throw InvalidPlan("pool template " + name + ": max_tasks < 1");
        for (std::size_t j = 0; j < k; ++j)
            if (pool.templates[j].type == t.type)
                throw InvalidPlan("pool template " + name + ": duplicate action type");
    }
}

} // namespace aisr
