#include "aisr/planner.hpp"

#include "aisr/epidemic.hpp"
#include "aisr/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <thread>

namespace aisr {

namespace {

std::int64_t count_type(const Plan& plan, ActionType type) {
    return std::count_if(plan.tasks.begin(), plan.tasks.end(), [&](const Action& a) { return a.type == type; });
}

// Templates that still have room for one more task in `plan`, optionally
// excluding one type.
std::vector<const ActionTemplate*> open_templates(const ResourcePool& pool, const Plan& plan,
                                                  std::optional<ActionType> exclude = std::nullopt) {
    std::vector<const ActionTemplate*> out;
    for (const auto& t : pool.templates) {
        if (exclude && t.type == *exclude) continue;
        if (count_type(plan, t.type) < t.max_tasks) out.push_back(&t);
    }
    return out;
}

void reprice(Action& a, const ActionTemplate& tmpl) {
    a.cost = action_cost(a.type, tmpl.unit_cost, a.amount, a.from_day, a.to_day);
}

Action draw_task(const ActionTemplate& tmpl, std::int64_t earliest, std::int64_t horizon, Rng& rng) {
    Action a;
    a.type = tmpl.type;
    a.efficacy = tmpl.efficacy;
    a.amount = rng.uniform_int(1, tmpl.available);
    a.from_day = rng.uniform_int(earliest, horizon);
    a.to_day = rng.uniform_int(a.from_day, horizon);
    reprice(a, tmpl);
    return a;
}

std::int64_t signed_step(Rng& rng) {
    const auto magnitude = rng.uniform_int(1, 5);
    return rng.bernoulli(0.5) ? magnitude : -magnitude;
}

void shift_task(Action& a, std::int64_t earliest, std::int64_t horizon, Rng& rng) {
    const auto dur = a.duration();
    const auto latest_start = std::max(earliest, horizon - dur + 1);
    a.from_day = std::clamp(a.from_day + signed_step(rng), earliest, latest_start);
    a.to_day = std::min(horizon, a.from_day + dur - 1);
}

void resize_task(Action& a, std::int64_t earliest, std::int64_t horizon, Rng& rng) {
    const auto delta = signed_step(rng);
    if (rng.bernoulli(0.5))
        a.from_day = std::clamp(a.from_day + delta, earliest, a.to_day);
    else
        a.to_day = std::clamp(a.to_day + delta, a.from_day, horizon);
}

enum class Edit { Shift, Resize, SwapType, AddTask, RemoveTask };

} // namespace

Plan generate_plan(const ResourcePool& pool, std::int64_t horizon, Rng& rng, std::int64_t id,
                   std::int64_t earliest_day) {
    if (pool.empty()) throw EmptyPool();
    if (horizon < 1) throw std::invalid_argument("generate_plan: horizon must be >= 1");
    earliest_day = std::clamp<std::int64_t>(earliest_day, 0, horizon);
    Plan plan{id, 0.0, {}};
    const auto n = rng.uniform_int(1, pool.max_total_tasks());
    for (std::int64_t k = 0; k < n; ++k) {
        const auto open = open_templates(pool, plan);
        if (open.empty()) break;
        const auto& tmpl = *open[static_cast<std::size_t>(rng.uniform_int(0, std::ssize(open) - 1))];
        plan.tasks.push_back(draw_task(tmpl, earliest_day, horizon, rng));
    }
    return plan;
}

MutationResult mutate_counted(const Plan& plan, const ResourcePool& pool, double intensity,
                              std::int64_t horizon, Rng& rng, std::int64_t new_id, std::int64_t earliest_day) {
    if (!(intensity >= 0.0 && intensity <= 1.0)) throw std::invalid_argument("mutate: intensity outside [0,1]");
    earliest_day = std::clamp<std::int64_t>(earliest_day, 0, horizon);
    MutationResult out{plan, 0};
    out.plan.id = new_id;
    const auto edits = static_cast<std::int64_t>(std::ceil(intensity * static_cast<double>(plan.tasks.size())));
    auto& tasks = out.plan.tasks;
    for (std::int64_t k = 0; k < edits; ++k) {
        if (tasks.empty()) break;
        auto edit = static_cast<Edit>(rng.uniform_int(0, 4));
        auto target = static_cast<std::size_t>(rng.uniform_int(0, std::ssize(tasks) - 1));
        switch (edit) {
        case Edit::SwapType: {
            const auto open = open_templates(pool, out.plan, tasks[target].type);
            if (open.empty()) {
                edit = Edit::Shift;
                break;
            }
            const auto& tmpl = *open[static_cast<std::size_t>(rng.uniform_int(0, std::ssize(open) - 1))];
            auto& a = tasks[target];
            a.type = tmpl.type;
            a.efficacy = tmpl.efficacy;
            a.amount = rng.uniform_int(1, tmpl.available);
            break;
        }
        case Edit::AddTask: {
            const auto open = open_templates(pool, out.plan);
            if (open.empty()) {
                edit = Edit::Shift;
                break;
            }
            const auto& tmpl = *open[static_cast<std::size_t>(rng.uniform_int(0, std::ssize(open) - 1))];
            tasks.push_back(draw_task(tmpl, earliest_day, horizon, rng));
            target = tasks.size() - 1;
            break;
        }
        case Edit::RemoveTask:
            if (tasks.size() <= 1) {
                edit = Edit::Shift;
                break;
            }
            tasks.erase(tasks.begin() + static_cast<std::ptrdiff_t>(target));
            break;
        case Edit::Shift:
        case Edit::Resize: break;
        }
        if (edit == Edit::Shift) shift_task(tasks[target], earliest_day, horizon, rng);
        if (edit == Edit::Resize) resize_task(tasks[target], earliest_day, horizon, rng);
        if (edit != Edit::RemoveTask) {
            if (const auto* tmpl = pool.find(tasks[target].type)) reprice(tasks[target], *tmpl);
        }
        ++out.edits;
    }
    return out;
}

Plan mutate(const Plan& plan, const ResourcePool& pool, double intensity, std::int64_t horizon, Rng& rng,
            std::int64_t new_id, std::int64_t earliest_day) {
    return mutate_counted(plan, pool, intensity, horizon, rng, new_id, earliest_day).plan;
}

double successfulness_score(double baseline_peak, double plan_peak, double total_cost, double cost_scale) {
    if (!(baseline_peak > 0.0)) return 0.0;
    const double reduction = std::max(0.0, (baseline_peak - plan_peak) / baseline_peak);
    const double discount = cost_scale > 0.0 ? 1.0 / (1.0 + total_cost / cost_scale) : 1.0;
    return std::clamp(reduction * discount, 0.0, 1.0);
}

Evaluator::Evaluator(const Situation& initial, const ScenarioConfig& config)
    : initial_(initial), disease_(config.disease), seed_(derive_seed(config.seed, SeedStream::Evaluation)),
      replicates_(std::max<std::int64_t>(1, config.planner.evaluation_replicates)),
      cost_scale_(config.planner.cost_scale), start_day_(initial.tick / kTicksPerDay),
      horizon_(config.duration_days) {
    baseline_peak_ = mean_peak(Plan{});
}

double Evaluator::mean_peak(const Plan& plan) const {
    const auto days = std::max<std::int64_t>(0, horizon_ - start_day_);
    double sum = 0.0;
    for (std::int64_t r = 0; r < replicates_; ++r) {
        const auto world = make_world(initial_, disease_, mix_seed(seed_, static_cast<std::uint64_t>(r)));
        sum += summarize(simulate(world, plan, days)).peak_prevalence;
    }
    return sum / static_cast<double>(replicates_);
}

double Evaluator::score(const Plan& plan) const {
    if (plan.empty()) return 0.0;
    return successfulness_score(baseline_peak_, mean_peak(plan), plan.total_cost(), cost_scale_);
}

std::vector<double> Evaluator::score_all(std::span<const Plan> plans, std::int64_t threads) const {
    std::vector<double> out(plans.size());
    if (plans.empty()) return out;
    const auto workers = static_cast<std::size_t>(std::clamp<std::int64_t>(threads, 1, std::ssize(plans)));
    if (workers <= 1) {
        for (std::size_t k = 0; k < plans.size(); ++k) out[k] = score(plans[k]);
        return out;
    }
    // Strided split; every slot is written by exactly one worker.
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            for (std::size_t k = w; k < plans.size(); k += workers) out[k] = score(plans[k]);
        });
    }
    pool.clear();
    return out;
}

double evaluate(const Plan& plan, const Situation& initial, const ScenarioConfig& config) {
    return Evaluator(initial, config).score(plan);
}

SearchResult clonal_select(const Situation& initial, const ResourcePool& pool, const SearchBudget& budget,
                           const ScenarioConfig& config, Rng& rng, PlanIds& ids, std::span<const Plan> seeds) {
    if (pool.empty()) throw EmptyPool();
    const Evaluator evaluator(initial, config);
    const auto horizon = evaluator.horizon();
    const auto earliest = std::min(evaluator.start_day(), horizon);
    const auto size = static_cast<std::size_t>(std::max<std::int64_t>(2, budget.population_size));
    const auto threads = config.planner.threads;

    SearchResult result;
    result.score = -1.0;  // below any real score, so generation 0 always sets best
    std::vector<Plan> population;
    for (const auto& s : seeds) {
        if (population.size() == size) break;
        population.push_back(s);
    }
    while (population.size() < size) population.push_back(generate_plan(pool, horizon, rng, ids.take(), earliest));

    auto scores = evaluator.score_all(population, threads);
    result.evaluations += std::ssize(population);

    auto record = [&](const std::vector<Plan>& plans, const std::vector<double>& s) {
        for (std::size_t k = 0; k < plans.size(); ++k) {
            if (s[k] > result.score) {
                result.best = plans[k];
                result.score = s[k];
            }
        }
        result.best_by_generation.push_back(result.score);
    };
    record(population, scores);

    for (std::int64_t gen = 1; gen < budget.generations; ++gen) {
        if (result.score >= budget.acceptable_successfulness) break;

        std::vector<std::size_t> order(population.size());
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
        const std::size_t elites = std::max<std::size_t>(1, size / 2);

        // Clone families, mutated at intensity inversely proportional to affinity.
        std::vector<Plan> clones;
        for (std::size_t e = 0; e < elites; ++e) {
            const auto& parent = population[order[e]];
            const double intensity = std::clamp(1.0 - scores[order[e]], 0.0, 1.0);
            for (std::int64_t c = 0; c < budget.clones_per_elite; ++c)
                clones.push_back(mutate(parent, pool, intensity, horizon, rng, ids.take(), earliest));
        }
        const auto clone_scores = evaluator.score_all(clones, threads);
        result.evaluations += std::ssize(clones);

        std::vector<Plan> next;
        std::vector<double> next_scores;
        const auto per_family = static_cast<std::size_t>(std::max<std::int64_t>(0, budget.clones_per_elite));
        for (std::size_t e = 0; e < elites; ++e) {
            std::size_t best_clone = clones.size();
            double best = scores[order[e]];
            for (std::size_t c = e * per_family; c < (e + 1) * per_family; ++c) {
                if (clone_scores[c] > best) {
                    best = clone_scores[c];
                    best_clone = c;
                }
            }
            next.push_back(best_clone == clones.size() ? population[order[e]] : clones[best_clone]);
            next_scores.push_back(best);
        }

        std::vector<Plan> fresh;
        while (next.size() + fresh.size() < size) fresh.push_back(generate_plan(pool, horizon, rng, ids.take(), earliest));
        const auto fresh_scores = evaluator.score_all(fresh, threads);
        result.evaluations += std::ssize(fresh);
        next.insert(next.end(), fresh.begin(), fresh.end());
        next_scores.insert(next_scores.end(), fresh_scores.begin(), fresh_scores.end());

        population = std::move(next);
        scores = std::move(next_scores);
        // Only newly scored plans can raise the best-ever score.
        std::vector<Plan> candidates = clones;
        std::vector<double> candidate_scores = clone_scores;
        candidates.insert(candidates.end(), fresh.begin(), fresh.end());
        candidate_scores.insert(candidate_scores.end(), fresh_scores.begin(), fresh_scores.end());
        record(candidates, candidate_scores);
    }
    return result;
}

double plan_certainty(const std::optional<Retrieval>& retrieved, std::int64_t match_radius) {
    if (!retrieved || retrieved->match == nullptr) return 0.0;
    const double s = retrieved->match->successfulness;
    if (match_radius <= 0) return retrieved->distance == 0 ? s : 0.0;
    return std::clamp(s * std::exp2(-static_cast<double>(retrieved->distance) / static_cast<double>(match_radius)),
                      0.0, 1.0);
}

} // namespace aisr
