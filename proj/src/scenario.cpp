#include "aisr/scenario.hpp"

#include "aisr/errors.hpp"
#include "aisr/orchestrator.hpp"
#include "aisr/report.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <cmath>
#include <iomanip>
#include <sstream>

namespace aisr {

namespace pt = boost::property_tree;

namespace {

std::string unquote(std::string v) {
    if (v.size() >= 2 && ((v.front() == '"' && v.back() == '"') || (v.front() == '\'' && v.back() == '\'')))
        return v.substr(1, v.size() - 2);
    return v;
}

template <typename T>
T parse_number(const std::string& field, const std::string& raw) {
    const auto text = unquote(raw);
    T value{};
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty())
        throw ConfigError(field, "cannot parse '" + raw + "' as a number");
    return value;
}

using Setter = std::function<void(const std::string& field, const std::string& value)>;

template <typename T>
Setter number(T& target) {
    return [&target](const std::string& field, const std::string& value) { target = parse_number<T>(field, value); };
}

Setter text(std::string& target) {
    return [&target](const std::string&, const std::string& value) { target = unquote(value); };
}

// Binds every key of one section. Keys are "section.key"; top-level keys
// have no prefix.
std::map<std::string, Setter> bindings(ScenarioConfig& c, std::string& pool_mode) {
    auto& d = c.disease;
    auto& r = c.pool.ranges;
    auto& b = c.planner.budget;
    return {
        {"population", number(c.population)},
        {"initial_infected", number(c.initial_infected)},
        {"duration_days", number(c.duration_days)},
        {"seed", number(c.seed)},
        {"rounds", number(c.rounds)},
        {"disease.contacts_per_day", number(d.contacts_per_day)},
        {"disease.transmission_prob", number(d.transmission_prob)},
        {"disease.incubation_days", number(d.incubation_days)},
        {"disease.infectious_days", number(d.infectious_days)},
        {"disease.base_isolation_prob", number(d.base_isolation_prob)},
        {"disease.case_fatality", number(d.case_fatality)},
        {"pool.mode", text(pool_mode)},
        {"pool.efficacy", number(r.efficacy)},
        {"pool.targeted_available_min", number(r.targeted_available_min)},
        {"pool.targeted_available_max", number(r.targeted_available_max)},
        {"pool.mass_available_min", number(r.mass_available_min)},
        {"pool.mass_available_max", number(r.mass_available_max)},
        {"pool.rate_unit_cost_min", number(r.rate_unit_cost_min)},
        {"pool.rate_unit_cost_max", number(r.rate_unit_cost_max)},
        {"pool.dose_unit_cost_min", number(r.dose_unit_cost_min)},
        {"pool.dose_unit_cost_max", number(r.dose_unit_cost_max)},
        {"pool.max_tasks_min", number(r.max_tasks_min)},
        {"pool.max_tasks_max", number(r.max_tasks_max)},
        {"eoc.name", text(c.eoc.name)},
        {"eoc.operational", number(c.eoc.operational)},
        {"eoc.tactical", number(c.eoc.tactical)},
        {"eoc.tactical_communication", number(c.eoc.tactical_communication)},
        {"eoc.decision_making", number(c.eoc.decision_making)},
        {"planner.generations", number(b.generations)},
        {"planner.population_size", number(b.population_size)},
        {"planner.clones_per_elite", number(b.clones_per_elite)},
        {"planner.acceptable_successfulness", number(b.acceptable_successfulness)},
        {"planner.cost_scale", number(c.planner.cost_scale)},
        {"planner.evaluation_replicates", number(c.planner.evaluation_replicates)},
        {"planner.threads", number(c.planner.threads)},
        {"planner.checkpoint_day", number(c.planner.checkpoint_day)},
        {"memory.min_successfulness", number(c.memory.min_successfulness)},
        {"memory.match_radius", number(c.memory.match_radius)},
        {"self.nonself_infection_threshold", number(c.self_policy.nonself_infection_threshold)},
    };
}

ActionTemplate parse_template(const std::string& section, ActionType type, const pt::ptree& tree) {
    ActionTemplate t;
    t.type = type;
    t.efficacy = 0.75;
    bool have_available = false, have_cost = false;
    for (const auto& [key, node] : tree) {
        const auto field = section + "." + key;
        const auto& value = node.data();
        if (key == "available") {
            t.available = parse_number<std::int64_t>(field, value);
            have_available = true;
        } else if (key == "unit_cost") {
            t.unit_cost = parse_number<double>(field, value);
            have_cost = true;
        } else if (key == "efficacy") {
            t.efficacy = parse_number<double>(field, value);
        } else if (key == "max_tasks") {
            t.max_tasks = parse_number<std::int64_t>(field, value);
        } else {
            throw ConfigError(field, "unknown key");
        }
    }
    if (!have_available) throw ConfigError(section + ".available", "missing");
    if (!have_cost) throw ConfigError(section + ".unit_cost", "missing");
    return t;
}

void require(bool ok, const char* field, const char* message) {
    if (!ok) throw ConfigError(field, message);
}

bool unit(double v) { return v >= 0.0 && v <= 1.0; }

} // namespace

void validate(const ScenarioConfig& c) {
    require(c.population >= 1, "population", "must be at least 1");
    require(c.initial_infected >= 0 && c.initial_infected <= c.population, "initial_infected",
            "must be within 0..population");
    require(c.duration_days >= 1, "duration_days", "must be at least 1");
    require(c.rounds >= 1, "rounds", "must be at least 1");

    const auto& d = c.disease;
    require(d.contacts_per_day >= 0.0, "disease.contacts_per_day", "must be >= 0");
    require(unit(d.transmission_prob), "disease.transmission_prob", "must be within [0,1]");
    require(d.incubation_days >= 1, "disease.incubation_days", "must be at least 1");
    require(d.infectious_days >= 1, "disease.infectious_days", "must be at least 1");
    require(unit(d.base_isolation_prob), "disease.base_isolation_prob", "must be within [0,1]");
    require(unit(d.case_fatality), "disease.case_fatality", "must be within [0,1]");

    if (c.pool.random) {
        const auto& r = c.pool.ranges;
        require(unit(r.efficacy), "pool.efficacy", "must be within [0,1]");
        require(r.targeted_available_min >= 1 && r.targeted_available_min <= r.targeted_available_max,
                "pool.targeted_available_min", "must be >= 1 and <= targeted_available_max");
        require(r.mass_available_min >= 1 && r.mass_available_min <= r.mass_available_max,
                "pool.mass_available_min", "must be >= 1 and <= mass_available_max");
        require(r.rate_unit_cost_min >= 0.0 && r.rate_unit_cost_min <= r.rate_unit_cost_max,
                "pool.rate_unit_cost_min", "must be >= 0 and <= rate_unit_cost_max");
        require(r.dose_unit_cost_min >= 0.0 && r.dose_unit_cost_min <= r.dose_unit_cost_max,
                "pool.dose_unit_cost_min", "must be >= 0 and <= dose_unit_cost_max");
        require(r.max_tasks_min >= 1 && r.max_tasks_min <= r.max_tasks_max, "pool.max_tasks_min",
                "must be >= 1 and <= max_tasks_max");
    } else {
        require(!c.pool.fixed.empty(), "pool", "fixed pool needs at least one template section");
        try {
            validate_pool(c.pool.fixed);
        } catch (const InvalidPlan& e) {
            throw ConfigError("pool", e.what());
        }
    }

    validate_roles(c.eoc);

    const auto& b = c.planner.budget;
    require(b.generations >= 1, "planner.generations", "must be at least 1");
    require(b.population_size >= 2, "planner.population_size", "must be at least 2");
    require(b.clones_per_elite >= 1, "planner.clones_per_elite", "must be at least 1");
    require(b.acceptable_successfulness > 0.0, "planner.acceptable_successfulness", "must be positive");
    require(c.planner.cost_scale > 0.0, "planner.cost_scale", "must be positive");
    require(c.planner.evaluation_replicates >= 1, "planner.evaluation_replicates", "must be at least 1");
    require(c.planner.threads >= 1, "planner.threads", "must be at least 1");
    require(c.planner.checkpoint_day >= 0, "planner.checkpoint_day", "must be >= 0");

    require(unit(c.memory.min_successfulness), "memory.min_successfulness", "must be within [0,1]");
    require(c.memory.match_radius >= 0, "memory.match_radius", "must be >= 0");
    require(c.self_policy.nonself_infection_threshold >= 0, "self.nonself_infection_threshold", "must be >= 0");
}

ScenarioConfig parse_config(std::istream& in) {
    pt::ptree tree;
    try {
        pt::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
        throw ConfigError("config", e.what());
    }

    ScenarioConfig c;
    std::string pool_mode = "random";
    const auto binds = bindings(c, pool_mode);
    std::vector<ActionTemplate> templates;

    for (const auto& [key, node] : tree) {
        if (node.empty()) {  // top-level key
            const auto it = binds.find(key);
            if (it == binds.end()) throw ConfigError(key, "unknown key");
            it->second(key, node.data());
            continue;
        }
        if (key.rfind("pool.", 0) == 0) {
            const auto type = parse_action_type(key.substr(5));
            if (!type) throw ConfigError(key, "unknown action type section");
            templates.push_back(parse_template(key, *type, node));
            continue;
        }
        for (const auto& [sub, leaf] : node) {
            const auto field = key + "." + sub;
            const auto it = binds.find(field);
            if (it == binds.end()) throw ConfigError(field, "unknown key");
            it->second(field, leaf.data());
        }
    }

    if (pool_mode == "random") {
        c.pool.random = true;
    } else if (pool_mode == "fixed") {
        c.pool.random = false;
    } else {
        throw ConfigError("pool.mode", "must be \"random\" or \"fixed\"");
    }
    c.pool.fixed.templates = std::move(templates);
    validate(c);
    return c;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file: " + path.string());
    return parse_config(in);
}

void write_config(std::ostream& out, const ScenarioConfig& c) {
    const auto& d = c.disease;
    const auto& r = c.pool.ranges;
    const auto& b = c.planner.budget;
    out << "population = " << c.population << '\n'
        << "initial_infected = " << c.initial_infected << '\n'
        << "duration_days = " << c.duration_days << '\n'
        << "seed = " << c.seed << '\n'
        << "rounds = " << c.rounds << "\n\n"
        << "[disease]\n"
        << "contacts_per_day = " << format_real(d.contacts_per_day) << '\n'
        << "transmission_prob = " << format_real(d.transmission_prob) << '\n'
        << "incubation_days = " << d.incubation_days << '\n'
        << "infectious_days = " << d.infectious_days << '\n'
        << "base_isolation_prob = " << format_real(d.base_isolation_prob) << '\n'
        << "case_fatality = " << format_real(d.case_fatality) << "\n\n"
        << "[pool]\n"
        << "mode = \"" << (c.pool.random ? "random" : "fixed") << "\"\n"
        << "efficacy = " << format_real(r.efficacy) << '\n'
        << "targeted_available_min = " << r.targeted_available_min << '\n'
        << "targeted_available_max = " << r.targeted_available_max << '\n'
        << "mass_available_min = " << r.mass_available_min << '\n'
        << "mass_available_max = " << r.mass_available_max << '\n'
        << "rate_unit_cost_min = " << format_real(r.rate_unit_cost_min) << '\n'
        << "rate_unit_cost_max = " << format_real(r.rate_unit_cost_max) << '\n'
        << "dose_unit_cost_min = " << format_real(r.dose_unit_cost_min) << '\n'
        << "dose_unit_cost_max = " << format_real(r.dose_unit_cost_max) << '\n'
        << "max_tasks_min = " << r.max_tasks_min << '\n'
        << "max_tasks_max = " << r.max_tasks_max << "\n\n";
    for (const auto& t : c.pool.fixed.templates) {
        out << "[pool." << to_string(t.type) << "]\n"
            << "available = " << t.available << '\n'
            << "unit_cost = " << format_real(t.unit_cost) << '\n'
            << "efficacy = " << format_real(t.efficacy) << '\n'
            << "max_tasks = " << t.max_tasks << "\n\n";
    }
    out << "[eoc]\n"
        << "name = \"" << c.eoc.name << "\"\n"
        << "operational = " << c.eoc.operational << '\n'
        << "tactical = " << c.eoc.tactical << '\n'
        << "tactical_communication = " << c.eoc.tactical_communication << '\n'
        << "decision_making = " << c.eoc.decision_making << "\n\n"
        << "[planner]\n"
        << "generations = " << b.generations << '\n'
        << "population_size = " << b.population_size << '\n'
        << "clones_per_elite = " << b.clones_per_elite << '\n'
        << "acceptable_successfulness = " << format_real(b.acceptable_successfulness) << '\n'
        << "cost_scale = " << format_real(c.planner.cost_scale) << '\n'
        << "evaluation_replicates = " << c.planner.evaluation_replicates << '\n'
        << "threads = " << c.planner.threads << '\n'
        << "checkpoint_day = " << c.planner.checkpoint_day << "\n\n"
        << "[memory]\n"
        << "min_successfulness = " << format_real(c.memory.min_successfulness) << '\n'
        << "match_radius = " << c.memory.match_radius << "\n\n"
        << "[self]\n"
        << "nonself_infection_threshold = " << c.self_policy.nonself_infection_threshold << '\n';
}

ResourcePool draw_pool(const RandomPoolSpec& spec, Rng& rng) {
    ResourcePool pool;
    for (const auto type : kAllActionTypes) {
        const bool targeted = type == ActionType::TargetedSocialDistancing || type == ActionType::TargetedVaccination;
        ActionTemplate t;
        t.type = type;
        t.available = targeted ? rng.uniform_int(spec.targeted_available_min, spec.targeted_available_max)
                               : rng.uniform_int(spec.mass_available_min, spec.mass_available_max);
        t.unit_cost = is_vaccination(type) ? rng.uniform_real(spec.dose_unit_cost_min, spec.dose_unit_cost_max)
                                           : rng.uniform_real(spec.rate_unit_cost_min, spec.rate_unit_cost_max);
        t.efficacy = spec.efficacy;
        t.max_tasks = rng.uniform_int(spec.max_tasks_min, spec.max_tasks_max);
        pool.templates.push_back(t);
    }
    return pool;
}

ResourcePool resolve_pool(const ScenarioConfig& config, std::uint64_t seed) {
    if (!config.pool.random) return config.pool.fixed;
    Rng rng(derive_seed(seed, SeedStream::Pool));
    return draw_pool(config.pool.ranges, rng);
}

namespace {

std::string round_file(std::int64_t round, const char* suffix) {
    std::ostringstream name;
    name << "round_" << std::setw(3) << std::setfill('0') << round << suffix;
    return name.str();
}

template <typename Writer>
void write_file(const std::filesystem::path& path, Writer&& writer) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open for writing: " + path.string());
    writer(out);
    if (!out) throw IoError("failed writing: " + path.string());
}

} // namespace

ExperimentResult run_experiment(const ScenarioConfig& config, const ExperimentOptions& options) {
    validate(config);
    ExperimentResult result;
    result.store = MemoryStore(config.memory);
    if (options.memory_file && std::filesystem::exists(*options.memory_file))
        result.store = MemoryStore::load(*options.memory_file, config.memory);

    if (options.out_dir) {
        std::error_code ec;
        std::filesystem::create_directories(*options.out_dir, ec);
        if (ec) throw IoError("cannot create output directory: " + options.out_dir->string());
    }
    const auto memory_path = options.memory_file ? *options.memory_file
                           : options.out_dir     ? *options.out_dir / "memory.jsonl"
                                                 : std::filesystem::path{};

    for (std::int64_t k = 0; k < config.rounds; ++k) {
        ScenarioConfig round_config = config;
        round_config.seed = round_seed(config.seed, k);
        const auto round = k + 1;

        EpidemicTrace trace;
        if (options.no_control) {
            trace = run_round(round_config, Plan{});
            auto summary = summarize(trace);
            summary.round = round;
            result.summaries.push_back(summary);
        } else {
            auto outcome = run_eoc_round(round_config, resolve_pool(config, round_config.seed),
                                         std::move(result.store), round);
            result.store = std::move(outcome.store);
            result.summaries.push_back(outcome.summary);
            trace = std::move(outcome.trace);
            if (options.out_dir)
                write_file(*options.out_dir / round_file(round, "_log.tsv"),
                           [&](std::ostream& out) { outcome.log.write(out); });
            if (!memory_path.empty()) result.store.save(memory_path);
        }
        if (options.out_dir)
            write_file(*options.out_dir / round_file(round, "_trace.csv"),
                       [&](std::ostream& out) { write_trace_csv(out, trace); });
    }
    if (options.out_dir)
        write_file(*options.out_dir / "summary.csv",
                   [&](std::ostream& out) { write_summary_csv(out, result.summaries); });
    return result;
}

PeakStats baseline_peak_stats(const ScenarioConfig& base, std::int64_t replicates) {
    PeakStats stats;
    for (std::int64_t r = 0; r < replicates; ++r) {
        ScenarioConfig c = base;
        c.seed = round_seed(base.seed, r);
        const auto s = summarize(run_round(c, Plan{}));
        stats.mean_peak_day += static_cast<double>(s.peak_day);
        stats.mean_peak_prevalence += s.peak_prevalence;
    }
    stats.mean_peak_day /= static_cast<double>(replicates);
    stats.mean_peak_prevalence /= static_cast<double>(replicates);
    return stats;
}

CalibrationResult calibrate(const ScenarioConfig& base, double target_peak_day, double target_peak_prevalence,
                            std::int64_t replicates, double tolerance) {
    if (replicates < 1) throw CalibrationError("replicates must be at least 1");
    if (!(target_peak_day > 0.0)) throw CalibrationError("target peak day must be positive");
    if (!(target_peak_prevalence >= 0.0 && target_peak_prevalence <= 1.0))
        throw CalibrationError("target peak prevalence must be within [0,1]");

    auto at = [&](double tp) {
        ScenarioConfig c = base;
        c.disease.transmission_prob = tp;
        return baseline_peak_stats(c, replicates);
    };
    double lo = 0.0, hi = 1.0;
    const auto low = at(lo), high = at(hi);
    if (target_peak_prevalence < low.mean_peak_prevalence)
        throw CalibrationError("target peak prevalence " + format_real(target_peak_prevalence) +
                               " is unreachable: without transmission the peak is already " +
                               format_real(low.mean_peak_prevalence) + " (initial infected)");
    if (target_peak_prevalence > high.mean_peak_prevalence)
        throw CalibrationError("target peak prevalence " + format_real(target_peak_prevalence) +
                               " is unreachable: transmission_prob = 1 peaks at " +
                               format_real(high.mean_peak_prevalence));

    CalibrationResult result;
    result.params = base.disease;
    for (result.iterations = 1; result.iterations <= 25; ++result.iterations) {
        const double mid = 0.5 * (lo + hi);
        const auto stats = at(mid);
        result.params.transmission_prob = mid;
        result.mean_peak_day = stats.mean_peak_day;
        result.mean_peak_prevalence = stats.mean_peak_prevalence;
        if (std::abs(stats.mean_peak_prevalence - target_peak_prevalence) <= tolerance) {
            result.converged = true;
            break;
        }
        (stats.mean_peak_prevalence < target_peak_prevalence ? lo : hi) = mid;
    }
    result.iterations = std::min<std::int64_t>(result.iterations, 25);
    return result;
}

} // namespace aisr
