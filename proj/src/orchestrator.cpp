#include "aisr/orchestrator.hpp"

#include "aisr/errors.hpp"
#include "aisr/planner.hpp"
#include "aisr/rng.hpp"

#include <algorithm>
#include <stdexcept>

namespace aisr {

void validate_roles(const EocRoles& roles) {
    if (roles.decision_making != 1) throw ConfigError("eoc.decision_making", "must be exactly 1");
    if (roles.tactical_communication != 1) throw ConfigError("eoc.tactical_communication", "must be exactly 1");
    if (roles.tactical < 1) throw ConfigError("eoc.tactical", "must be at least 1");
    if (roles.operational < 1) throw ConfigError("eoc.operational", "must be at least 1");
    if (roles.name.empty()) throw ConfigError("eoc.name", "must not be empty");
}

// ---- Scheduler --------------------------------------------------------------

Scheduler::Scheduler(const EocRoles& roles) : roles_(roles) {}

std::vector<DueActivity> Scheduler::periodic(std::int64_t hour) const {
    std::vector<DueActivity> out;
    if (hour % 6 == 0) {
        for (std::int64_t k = 0; k < roles_.operational; ++k)
            out.push_back({Activity::SituationReport, AgentRole::Operational, k, -1});
    }
    if (hour % 6 == 2) out.push_back({Activity::Aggregation, AgentRole::TacticalCommunication, 0, -1});
    return out;
}

std::vector<DueActivity> Scheduler::due(std::int64_t day, std::int64_t hour) const {
    if (hour < 0 || hour > 22 || hour % 2 != 0) throw std::invalid_argument("hour must be even and within 0..22");
    const auto tick = tick_of(day, hour);
    std::set<Entry> all;
    std::uint64_t seq = 0;
    for (const auto& a : periodic(hour)) all.insert({tick, role_priority(a.role), a.agent, seq++, a});
    for (const auto& e : queue_)
        if (e.tick == tick) all.insert({tick, e.priority, e.agent, seq++, e.activity});
    std::vector<DueActivity> out;
    for (const auto& e : all) out.push_back(e.activity);
    return out;
}

void Scheduler::book(std::int64_t tick, const DueActivity& activity) {
    if (tick < current_tick_) throw std::invalid_argument("cannot book an activity in the past");
    queue_.insert({tick, role_priority(activity.role), activity.agent, seq_++, activity});
}

void Scheduler::begin_tick(std::int64_t day, std::int64_t hour) {
    current_tick_ = tick_of(day, hour);
    for (const auto& a : periodic(hour)) book(current_tick_, a);
}

std::optional<DueActivity> Scheduler::next() {
    if (queue_.empty() || queue_.begin()->tick > current_tick_) return std::nullopt;
    auto entry = *queue_.begin();
    queue_.erase(queue_.begin());
    return entry.activity;
}

std::vector<DueActivity> schedule(std::int64_t day, std::int64_t hour, const EocRoles& roles) {
    Scheduler s(roles);
    s.book(tick_of(0, 4), {Activity::PlanDecision, AgentRole::DecisionMaking, 0, -1});
    s.book(tick_of(0, 8), {Activity::TaskAllocation, AgentRole::TacticalCommunication, 0, -1});
    return s.due(day, hour);
}

// ---- round driver -----------------------------------------------------------

namespace {

constexpr std::int64_t kDeployHour = 10;
constexpr std::int64_t kTaskStatusHour = 18;
constexpr std::int64_t kReviewHour = 4;

class RoundRunner {
public:
    RoundRunner(const ScenarioConfig& config, const ResourcePool& pool, MemoryStore store, std::int64_t round)
        : config_(config), pool_(pool), scheduler_(config.eoc),
          world_(make_world(config.population, config.initial_infected, config.disease, config.seed)),
          planner_rng_(derive_seed(config.seed, SeedStream::Planner)) {
        out_.store = std::move(store);
        out_.store.set_settings(config.memory);
        out_.log = RoundLog(config.eoc.name);
        out_.summary.round = round;
        baseline_ = simulate(world_, Plan{}, config.duration_days);
    }

    RoundOutcome run() {
        const auto duration = config_.duration_days;
        const auto checkpoint = config_.planner.checkpoint_day;
        if (checkpoint > 0 && checkpoint < duration)
            scheduler_.book(tick_of(checkpoint, kReviewHour),
                            {Activity::PlanStatusCheck, AgentRole::TacticalCommunication, 0, -1});
        scheduler_.book(tick_of(duration, kReviewHour), {Activity::RoundReview, AgentRole::TacticalCommunication, 0, -1});

        out_.trace.population = world_.population();
        out_.trace.days.push_back(census(world_));
        for (std::int64_t day = 0; day <= duration; ++day) {
            for (std::int64_t hour = 0; hour < 24; hour += 2) {
                if (day == duration && hour > kReviewHour) break;
                if (hour == 0 && day > 0) {
                    advance_day(world_, effects_for_day(deployed_, day - 1));
                    out_.trace.days.push_back(census(world_));
                }
                scheduler_.begin_tick(day, hour);
                while (auto activity = scheduler_.next()) dispatch(*activity, day, hour);
            }
        }
        finish();
        return std::move(out_);
    }

private:
    std::string name(AgentRole role, std::int64_t index) const { return agent_name(role, index, config_.eoc.name); }

    void emit(AgentRole role, std::int64_t index, std::int64_t day, std::int64_t hour, Payload payload,
              std::vector<Transition> transitions = {}) {
        out_.transitions.insert(out_.transitions.end(), transitions.begin(), transitions.end());
        out_.log.append({name(role, index), role, day, hour, std::move(payload), std::move(transitions)});
    }

    std::vector<Transition>& fire(std::vector<Transition>& taken, ControlEvent event) {
        const auto to = control_step(state_, event);
        taken.push_back({state_, event, to});
        state_ = to;
        return taken;
    }

    void dispatch(const DueActivity& a, std::int64_t day, std::int64_t hour) {
        switch (a.activity) {
        case Activity::SituationReport: report(a.agent, day, hour); break;
        case Activity::Aggregation: aggregate(day, hour); break;
        case Activity::PlanStatusCheck: checkpoint(day, hour); break;
        case Activity::PlanDecision: decide(day, hour); break;
        case Activity::TaskAllocation: allocate(day, hour); break;
        case Activity::TaskDeployment: deploy(a, day, hour); break;
        case Activity::TaskStatusReport: task_status(a, day, hour); break;
        case Activity::RoundReview: review(day, hour); break;
        }
    }

    // Each operational agent covers the persons whose id is congruent to its
    // index modulo the number of operational agents.
    void report(std::int64_t agent, std::int64_t day, std::int64_t hour) {
        Situation partial;
        partial.tick = world_.tick;
        for (const auto& p : world_.persons)
            if (p.id % config_.eoc.operational == agent) ++partial[p.state];
        const auto id = next_report_id_++;
        pending_reports_.push_back(id);
        pending_total_ = add(pending_total_, partial);
        emit(AgentRole::Operational, agent, day, hour, SituationReport{id, partial});
    }

    static Situation add(Situation a, const Situation& b) {
        for (auto s : kAllHealthStates) a[s] += b[s];
        a.tick = b.tick;
        return a;
    }

    void aggregate(std::int64_t day, std::int64_t hour) {
        if (pending_reports_.empty()) return;
        AggregatedReport msg;
        msg.situation_id = next_situation_id_++;
        msg.report_ids = pending_reports_;
        msg.reference_report_id = pending_reports_.back();
        msg.situation = pending_total_;
        pending_reports_.clear();
        pending_total_ = Situation{};
        latest_situation_ = msg.situation;
        latest_situation_id_ = msg.situation_id;

        std::vector<Transition> taken;
        if (state_ == ControlLoopState::Monitoring) {
            if (is_nonself(msg.situation, config_.self_policy)) {
                fire(taken, ControlEvent::NonselfDetected);
                scheduler_.book(tick_of(day, hour) + 1, {Activity::PlanDecision, AgentRole::DecisionMaking, 0, -1});
            } else {
                fire(taken, ControlEvent::NoChange);
            }
        }
        emit(AgentRole::TacticalCommunication, 0, day, hour, std::move(msg), std::move(taken));
    }

    SearchResult search(const Situation& from, std::span<const Plan> seeds) {
        auto result = clonal_select(from, pool_, config_.planner.budget, config_, planner_rng_, ids_, seeds);
        out_.plan_evaluations += result.evaluations;
        out_.planned = true;
        return result;
    }

    void decide(std::int64_t day, std::int64_t hour) {
        std::vector<Transition> taken;
        PlanMsg msg;
        msg.situation_id = latest_situation_id_;
        Plan plan;
        const auto horizon = config_.duration_days;

        if (state_ == ControlLoopState::Detected) {
            detection_ = latest_situation_;
            const auto retrieved = out_.store.retrieve_nearest(latest_situation_);
            const double certainty = plan_certainty(retrieved, config_.memory.match_radius);
            std::optional<Plan> reused;
            if (retrieved) {
                const auto offset = day - retrieved->match->situation.tick / kTicksPerDay;
                reused = shift_plan(retrieved->match->plan, offset, horizon);
                reused->id = ids_.take();
            }
            if (retrieved && retrieved->distance <= config_.memory.match_radius && !reused->empty()) {
                fire(taken, ControlEvent::MemoryMatch);
                plan = *reused;
                msg.source = "memory";
                msg.case_id = retrieved->match->id;
                out_.reused = true;
            } else {
                fire(taken, ControlEvent::MemoryMiss);
                fire(taken, ControlEvent::Proceed);
                fire(taken, ControlEvent::Proceed);
                std::vector<Plan> seeds;
                if (reused && !reused->empty()) seeds.push_back(*reused);
                plan = search(latest_situation_, seeds).best;
                msg.source = "clonal_selection";
            }
            plan.certainty = certainty;
            first_plan_id_ = plan.id;
            first_certainty_ = certainty;
        } else if (state_ == ControlLoopState::Mutating) {
            // Re-plan the remaining days from the current situation, seeding the
            // search with what is left of the plan that just failed.
            std::vector<Plan> seeds;
            Plan tail = remainder_plan(current_, day);
            tail.id = ids_.take();
            if (!tail.empty()) seeds.push_back(tail);
            plan = search(latest_situation_, seeds).best;
            plan.certainty = 0.0;
            msg.source = "clonal_selection";
        } else {
            return;  // nothing to decide
        }

        fire(taken, ControlEvent::PlanFound);
        msg.plan_id = plan.id;
        msg.certainty = plan.certainty;
        msg.tasks = plan.tasks;

        // Tasks of the previous plan that have not finished are cancelled.
        cancelled_.clear();
        for (std::size_t k = 0; k < current_.tasks.size(); ++k)
            if (current_.tasks[k].to_day >= day) cancelled_.push_back(static_cast<std::int64_t>(k));
        previous_ = current_;
        current_ = plan;
        deployed_ = truncate_plan(deployed_, day);
        deployed_.tasks.insert(deployed_.tasks.end(), plan.tasks.begin(), plan.tasks.end());
        ++plan_generation_;

        emit(AgentRole::DecisionMaking, 0, day, hour, std::move(msg), std::move(taken));
        scheduler_.book(tick_of(day, hour) + 2, {Activity::TaskAllocation, AgentRole::TacticalCommunication, 0, -1});
    }

    void allocate(std::int64_t day, std::int64_t hour) {
        // Operational agents close out cancelled tasks before the new ones go out.
        for (const auto idx : cancelled_) {
            const auto agent = idx % config_.eoc.operational;
            emit(AgentRole::Operational, agent, day, hour, TaskStatus{previous_.id, idx, false});
        }
        cancelled_.clear();

        const auto tick = tick_of(day, hour);
        std::vector<Transition> taken;
        for (std::size_t k = 0; k < current_.tasks.size(); ++k) {
            const auto& task = current_.tasks[k];
            const auto idx = static_cast<std::int64_t>(k);
            const auto tactical = idx % config_.eoc.tactical;
            if (k + 1 == current_.tasks.size()) fire(taken, ControlEvent::PlanDeployed);
            emit(AgentRole::TacticalCommunication, 0, day, hour,
                 TaskAssignment{current_.id, idx, task, name(AgentRole::Tactical, tactical)}, std::move(taken));
            taken.clear();

            const auto deploy_tick = std::max(tick_of(task.from_day, kDeployHour), tick + 1);
            scheduler_.book(deploy_tick, {Activity::TaskDeployment, AgentRole::Tactical, tactical, task_ref(idx)});
            if (task.to_day < config_.duration_days)
                scheduler_.book(std::max(tick_of(task.to_day, kTaskStatusHour), deploy_tick + 1),
                                {Activity::TaskStatusReport, AgentRole::Operational,
                                 idx % config_.eoc.operational, task_ref(idx)});
        }
    }

    // Task-level activities carry the plan generation so that bookings made
    // for a superseded plan are dropped.
    static constexpr std::int64_t kGenerationStride = 1 << 20;
    std::int64_t task_ref(std::int64_t idx) const { return plan_generation_ * kGenerationStride + idx; }
    std::optional<std::int64_t> live_task(const DueActivity& a) const {
        if (a.ref / kGenerationStride != plan_generation_) return std::nullopt;
        return a.ref % kGenerationStride;
    }

    void deploy(const DueActivity& a, std::int64_t day, std::int64_t hour) {
        const auto idx = live_task(a);
        if (!idx) return;
        emit(AgentRole::Tactical, a.agent, day, hour,
             TaskDeployment{current_.id, *idx, current_.tasks[static_cast<std::size_t>(*idx)]});
    }

    void task_status(const DueActivity& a, std::int64_t day, std::int64_t hour) {
        const auto idx = live_task(a);
        if (!idx) return;
        emit(AgentRole::Operational, a.agent, day, hour, TaskStatus{current_.id, *idx, true});
    }

    // Realized successfulness over trace days [0, upto].
    double realized(std::int64_t upto, const Plan& spent) const {
        auto clip = [&](const EpidemicTrace& t) {
            EpidemicTrace c{{t.days.begin(), t.days.begin() + std::min<std::int64_t>(upto + 1, std::ssize(t.days))},
                            t.population, 0.0};
            return summarize(c).peak_prevalence;
        };
        return successfulness_score(clip(baseline_), clip(out_.trace), spent.total_cost(), config_.planner.cost_scale);
    }

    void checkpoint(std::int64_t day, std::int64_t hour) {
        if (state_ != ControlLoopState::Cloning) return;
        const double score = realized(day, truncate_plan(deployed_, day));
        const bool ok = score >= config_.planner.budget.acceptable_successfulness;
        std::vector<Transition> taken;
        if (!ok) {
            fire(taken, ControlEvent::ResponseFailed);
            fire(taken, ControlEvent::Proceed);
            out_.replanned = true;
            scheduler_.book(tick_of(day, hour), {Activity::PlanDecision, AgentRole::DecisionMaking, 0, -1});
        }
        emit(AgentRole::TacticalCommunication, 0, day, hour, PlanStatus{current_.id, ok, score}, std::move(taken));
    }

    void review(std::int64_t day, std::int64_t hour) {
        if (state_ != ControlLoopState::Cloning) return;
        const double score = realized(config_.duration_days, deployed_);
        const bool ok = score >= config_.memory.min_successfulness;
        std::vector<Transition> taken;
        fire(taken, ok ? ControlEvent::ResponseSucceeded : ControlEvent::ResponseFailed);
        if (ok) fire(taken, ControlEvent::Proceed);

        Plan retained = deployed_;
        retained.id = first_plan_id_;
        retained.certainty = first_certainty_;
        out_.summary.stored_case_id = out_.store.store(score, detection_, retained);
        out_.summary.realized_successfulness = score;
        emit(AgentRole::TacticalCommunication, 0, day, hour, PlanStatus{current_.id, ok, score}, std::move(taken));
    }

    void finish() {
        out_.trace.total_cost = deployed_.total_cost();
        const auto stored = out_.summary.stored_case_id;
        const auto realized_score = out_.summary.realized_successfulness;
        const auto round = out_.summary.round;
        out_.summary = summarize(out_.trace);
        out_.summary.round = round;
        out_.summary.stored_case_id = stored;
        out_.summary.realized_successfulness = realized_score;
        out_.summary.plan_certainty = first_certainty_;
    }

    const ScenarioConfig& config_;
    const ResourcePool& pool_;
    Scheduler scheduler_;
    World world_;
    Rng planner_rng_;
    PlanIds ids_;
    RoundOutcome out_;
    EpidemicTrace baseline_;

    ControlLoopState state_ = ControlLoopState::Monitoring;
    std::int64_t next_report_id_ = 0;
    std::int64_t next_situation_id_ = 0;
    std::vector<std::int64_t> pending_reports_;
    Situation pending_total_;
    Situation latest_situation_;
    std::int64_t latest_situation_id_ = -1;
    Situation detection_;

    Plan current_;
    Plan previous_;
    Plan deployed_;
    std::vector<std::int64_t> cancelled_;
    std::int64_t plan_generation_ = 0;
    std::int64_t first_plan_id_ = 0;
    double first_certainty_ = 0.0;
};

} // namespace

RoundOutcome run_eoc_round(const ScenarioConfig& config, const ResourcePool& pool, MemoryStore store,
                           std::int64_t round_index) {
    validate_roles(config.eoc);
    return RoundRunner(config, pool, std::move(store), round_index).run();
}

} // namespace aisr
