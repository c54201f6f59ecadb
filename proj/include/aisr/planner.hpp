#pragma once

#include "aisr/config.hpp"
#include "aisr/memory.hpp"
#include "aisr/plan.hpp"
#include "aisr/rng.hpp"
#include "aisr/situation.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace aisr {

/// Monotone plan-id source shared by everything that mints plans in a round.
class PlanIds {
public:
    explicit PlanIds(std::int64_t first = 0) : next_(first) {}
    std::int64_t take() { return next_++; }
    std::int64_t peek() const { return next_; }

private:
    std::int64_t next_;
};

/// Bone-marrow step: draws 1..pool.max_total_tasks() tasks from the pool
/// templates, respecting each template's max_tasks and availability. Every
/// interval lies in [earliest_day, horizon]. Throws EmptyPool.
Plan generate_plan(const ResourcePool& pool, std::int64_t horizon, Rng& rng, std::int64_t id,
                   std::int64_t earliest_day = 0);

struct MutationResult {
    Plan plan;
    std::int64_t edits = 0;
};

/// Applies ceil(intensity * tasks) random edits (shift, resize, swap type,
/// add task, remove task). Infeasible edits fall back to a shift. The result
/// carries `new_id`; with intensity 0 it is otherwise identical to `plan`.
MutationResult mutate_counted(const Plan& plan, const ResourcePool& pool, double intensity,
                              std::int64_t horizon, Rng& rng, std::int64_t new_id,
                              std::int64_t earliest_day = 0);

Plan mutate(const Plan& plan, const ResourcePool& pool, double intensity, std::int64_t horizon, Rng& rng,
            std::int64_t new_id, std::int64_t earliest_day = 0);

/// Relative peak-prevalence reduction, discounted by cost, clamped to [0,1].
double successfulness_score(double baseline_peak, double plan_peak, double total_cost, double cost_scale);

/// Scores plans against one fixed starting situation. The no-control
/// baseline is simulated once at construction. score() is const and safe to
/// call from several threads.
class Evaluator {
public:
    Evaluator(const Situation& initial, const ScenarioConfig& config);

    double score(const Plan& plan) const;
    std::vector<double> score_all(std::span<const Plan> plans, std::int64_t threads) const;

    double baseline_peak() const { return baseline_peak_; }
    std::int64_t horizon() const { return horizon_; }
    std::int64_t start_day() const { return start_day_; }

private:
    double mean_peak(const Plan& plan) const;

    Situation initial_;
    DiseaseParams disease_;
    std::uint64_t seed_;
    std::int64_t replicates_;
    double cost_scale_;
    std::int64_t start_day_;
    std::int64_t horizon_;
    double baseline_peak_ = 0.0;
};

/// Simulated successfulness of `plan` from `initial` up to the configured
/// horizon, with the round's evaluation seed.
double evaluate(const Plan& plan, const Situation& initial, const ScenarioConfig& config);

struct SearchResult {
    Plan best;
    double score = 0.0;
    std::vector<double> best_by_generation;  // best-ever score after each generation
    std::int64_t evaluations = 0;
};

/// Clonal selection. Generation 0 is `seeds` (if any) topped up with fresh
/// plans. Each later generation keeps the top half, clones every elite
/// clones_per_elite times at intensity 1 - score, keeps the best of each
/// clone family, and refills the rest with fresh plans. Stops early once the
/// best-ever score reaches budget.acceptable_successfulness.
SearchResult clonal_select(const Situation& initial, const ResourcePool& pool, const SearchBudget& budget,
                           const ScenarioConfig& config, Rng& rng, PlanIds& ids,
                           std::span<const Plan> seeds = {});

/// 0 with nothing retrieved, else successfulness * 2^(-distance / match_radius).
double plan_certainty(const std::optional<Retrieval>& retrieved, std::int64_t match_radius);

} // namespace aisr
