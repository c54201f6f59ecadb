#include "aisr/epidemic.hpp"

#include "aisr/errors.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace aisr {

namespace {

void enter(Person& p, HealthState state) {
    p.state = state;
    p.days_in_state = 0;
}

// I or II agent at the end of its infectious period: dies or recovers.
void exit_infection(Person& p, Rng& rng, double case_fatality) {
    enter(p, rng.bernoulli(case_fatality) ? HealthState::Dead : HealthState::Recovered);
}

void vaccinate(World& world, const EffectSet& effects) {
    if (effects.vaccinations_per_day <= 0) return;
    std::vector<std::size_t> susceptible;
    for (std::size_t k = 0; k < world.persons.size(); ++k)
        if (world.persons[k].state == HealthState::Susceptible) susceptible.push_back(k);

    const auto picks = std::min<std::int64_t>(effects.vaccinations_per_day,
                                              static_cast<std::int64_t>(susceptible.size()));
    // Partial Fisher-Yates: the first `picks` slots become a uniform sample.
    for (std::int64_t n = 0; n < picks; ++n) {
        const auto j = world.rng.uniform_int(n, static_cast<std::int64_t>(susceptible.size()) - 1);
        std::swap(susceptible[static_cast<std::size_t>(n)], susceptible[static_cast<std::size_t>(j)]);
    }
    for (std::int64_t n = 0; n < picks; ++n) {
        if (world.rng.bernoulli(effects.vaccine_efficacy))
            enter(world.persons[susceptible[static_cast<std::size_t>(n)]], HealthState::Immunized);
    }
}

} // namespace

World make_world(std::int64_t population, std::int64_t initial_infected, const DiseaseParams& params,
                 std::uint64_t seed) {
    if (population < 0 || initial_infected < 0 || initial_infected > population)
        throw std::invalid_argument("make_world: need 0 <= initial_infected <= population");
    World world;
    world.params = params;
    world.rng = Rng(seed);
    world.persons.resize(static_cast<std::size_t>(population));
    for (std::int64_t k = 0; k < population; ++k) {
        auto& p = world.persons[static_cast<std::size_t>(k)];
        p.id = k;
        p.state = k < initial_infected ? HealthState::Infectious : HealthState::Susceptible;
    }
    return world;
}

World make_world(const Situation& situation, const DiseaseParams& params, std::uint64_t seed) {
    World world;
    world.params = params;
    world.rng = Rng(seed);
    world.tick = situation.tick;
    std::int64_t id = 0;
    for (auto state : kAllHealthStates) {
        const auto n = situation[state];
        if (n < 0) throw std::invalid_argument("make_world: negative census count");
        for (std::int64_t k = 0; k < n; ++k) world.persons.push_back({id++, state, 0, 0});
    }
    return world;
}

Situation census(const World& world) {
    Situation s;
    s.tick = world.tick;
    for (const auto& p : world.persons) ++s[p.state];
    return s;
}

EffectSet effects_for_day(const Plan& plan, std::int64_t day) {
    EffectSet fx;
    double dose_weighted_efficacy = 0.0;
    for (const auto& task : plan.tasks) {
        if (task.to_day < task.from_day)
            throw InvalidPlan("plan " + std::to_string(plan.id) + ": to_day < from_day");
        if (!task.active_on(day)) continue;
        const double strength = task.efficacy * coverage(task.type);
        switch (task.type) {
        case ActionType::TargetedSocialDistancing:
        case ActionType::MassSocialDistancing: fx.contact_scale *= 1.0 - strength; break;
        case ActionType::Awareness: fx.transmission_scale *= 1.0 - strength; break;
        case ActionType::Quarantining:
            fx.extra_isolation_prob = std::min(1.0, fx.extra_isolation_prob + strength);
            break;
        case ActionType::TargetedVaccination:
        case ActionType::MassVaccination: {
            // Doses name the people reached, so coverage does not apply here.
            const auto doses = vaccination_doses_on(task, day);
            fx.vaccinations_per_day += doses;
            dose_weighted_efficacy += static_cast<double>(doses) * task.efficacy;
            break;
        }
        }
    }
    if (fx.vaccinations_per_day > 0)
        fx.vaccine_efficacy = dose_weighted_efficacy / static_cast<double>(fx.vaccinations_per_day);
    return fx;
}

void advance_day(World& world, const EffectSet& effects) {
    const auto& dp = world.params;
    vaccinate(world, effects);

    std::int64_t infectious = 0;
    std::int64_t alive = 0;
    for (const auto& p : world.persons) {
        infectious += p.state == HealthState::Infectious;
        alive += p.state != HealthState::Dead;
    }
    double p_infect = 0.0;
    if (infectious > 0 && alive > 0) {
        const double exposure = dp.contacts_per_day * effects.contact_scale *
                                static_cast<double>(infectious) / static_cast<double>(alive);
        p_infect = 1.0 - std::pow(1.0 - dp.transmission_prob * effects.transmission_scale, exposure);
    }
    const double p_isolate = std::min(1.0, dp.base_isolation_prob + effects.extra_isolation_prob);

    for (auto& p : world.persons) {
        switch (p.state) {
        case HealthState::Susceptible:
            ++p.days_in_state;
            if (p_infect > 0.0 && world.rng.bernoulli(p_infect)) enter(p, HealthState::InContact);
            break;
        case HealthState::InContact:
            if (++p.days_in_state >= dp.incubation_days) {
                enter(p, HealthState::Infectious);
                p.infectious_age = 0;
            }
            break;
        case HealthState::Infectious:
            ++p.days_in_state;
            if (++p.infectious_age >= dp.infectious_days)
                exit_infection(p, world.rng, dp.case_fatality);
            else if (world.rng.bernoulli(p_isolate))
                enter(p, HealthState::IsolatedInfected);
            break;
        case HealthState::IsolatedInfected:
            ++p.days_in_state;
            if (++p.infectious_age >= dp.infectious_days) exit_infection(p, world.rng, dp.case_fatality);
            break;
        case HealthState::Recovered:
        case HealthState::Immunized:
        case HealthState::Dead: ++p.days_in_state; break;
        }
    }
    world.tick += kTicksPerDay;
}

World step_day(World world, const EffectSet& effects) {
    advance_day(world, effects);
    return world;
}

EpidemicTrace simulate(World world, const Plan& plan, std::int64_t days) {
    validate_plan(plan);
    EpidemicTrace trace;
    trace.population = world.population();
    trace.total_cost = plan.total_cost();
    trace.days.reserve(static_cast<std::size_t>(days) + 1);
    const std::int64_t start_day = world.day();
    trace.days.push_back(census(world));
    for (std::int64_t d = 0; d < days; ++d) {
        advance_day(world, effects_for_day(plan, start_day + d));
        trace.days.push_back(census(world));
    }
    return trace;
}

EpidemicTrace run_round(const ScenarioConfig& config, const Plan& plan) {
    return simulate(make_world(config.population, config.initial_infected, config.disease, config.seed),
                    plan, config.duration_days);
}

RoundSummary summarize(const EpidemicTrace& trace) {
    if (trace.days.empty()) throw std::invalid_argument("summarize: empty trace");
    RoundSummary out;
    std::int64_t peak = -1;
    for (std::size_t d = 0; d < trace.days.size(); ++d) {
        const auto infected = trace.days[d].infected();
        if (infected > peak) {
            peak = infected;
            out.peak_day = static_cast<std::int64_t>(d);
        }
    }
    const auto& last = trace.days.back();
    const double n = static_cast<double>(trace.population);
    if (trace.population > 0) {
        out.peak_prevalence = static_cast<double>(peak) / n;
        out.attack_fraction = static_cast<double>(last.r + last.d + last.ii + last.i + last.e) / n;
    }
    out.deaths = last.d;
    out.total_cost = trace.total_cost;
    return out;
}

void write_trace_csv(std::ostream& out, const EpidemicTrace& trace) {
    out << "day,S,E,I,II,R,IM,D\n";
    for (std::size_t d = 0; d < trace.days.size(); ++d) {
        const auto& s = trace.days[d];
        out << d << ',' << s.s << ',' << s.e << ',' << s.i << ',' << s.ii << ',' << s.r << ','
            << s.im << ',' << s.d << '\n';
    }
}

EpidemicTrace read_trace_csv(std::istream& in) {
    EpidemicTrace trace;
    std::string line;
    std::size_t line_no = 0;
    if (!std::getline(in, line) || line != "day,S,E,I,II,R,IM,D")
        throw FormatError(1, "expected header day,S,E,I,II,R,IM,D");
    ++line_no;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::istringstream row(line);
        std::int64_t values[8];
        for (int k = 0; k < 8; ++k) {
            char sep = ',';
            if (!(row >> values[k]) || (k < 7 && !(row >> sep)) || sep != ',')
                throw FormatError(line_no, "malformed trace row");
        }
        if (values[0] != static_cast<std::int64_t>(trace.days.size()))
            throw FormatError(line_no, "day column out of sequence");
        Situation s{values[1], values[2], values[3], values[4], values[5], values[6], values[7],
                    values[0] * kTicksPerDay};
        trace.days.push_back(s);
    }
    if (!trace.days.empty()) trace.population = trace.days.front().total();
    return trace;
}

} // namespace aisr
