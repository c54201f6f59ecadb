#pragma once

#include "aisr/config.hpp"
#include "aisr/epidemic.hpp"
#include "aisr/memory.hpp"
#include "aisr/rng.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace aisr {

/// Reads the key-value scenario file (INI/TOML-style sections, one
/// `key = value` per line, `#` or `;` comment lines). Unknown keys are
/// rejected. Throws ConfigError; the result is validated.
ScenarioConfig parse_config(std::istream& in);
ScenarioConfig load_config(const std::filesystem::path& path);

/// Renders a config back to the same format.
void write_config(std::ostream& out, const ScenarioConfig& config);

/// Draws one pool per round: availability, unit cost and max task count
/// uniformly from the ranges, efficacy fixed.
ResourcePool draw_pool(const RandomPoolSpec& spec, Rng& rng);

/// The pool a round with seed `round_seed` works with.
ResourcePool resolve_pool(const ScenarioConfig& config, std::uint64_t round_seed);

/// Round k (0-based) runs with seed base + k.
inline std::uint64_t round_seed(std::uint64_t base, std::int64_t round) {
    return base + static_cast<std::uint64_t>(round);
}

struct ExperimentOptions {
    bool no_control = false;
    std::optional<std::filesystem::path> out_dir;
    std::optional<std::filesystem::path> memory_file;
};

struct ExperimentResult {
    std::vector<RoundSummary> summaries;
    MemoryStore store;
};

/// Runs config.rounds rounds in order, carrying the memory store across
/// rounds. With an out_dir, writes round_NNN_trace.csv, round_NNN_log.tsv,
/// memory.jsonl (unless memory_file is given) and summary.csv. Throws
/// IoError on file failures.
ExperimentResult run_experiment(const ScenarioConfig& config, const ExperimentOptions& options);

class CalibrationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct CalibrationResult {
    DiseaseParams params;
    double mean_peak_day = 0.0;
    double mean_peak_prevalence = 0.0;
    std::int64_t iterations = 0;
    bool converged = false;
};

struct PeakStats {
    double mean_peak_day = 0.0;
    double mean_peak_prevalence = 0.0;
};

/// Mean no-control peak statistics over seeds base.seed .. base.seed + replicates - 1.
PeakStats baseline_peak_stats(const ScenarioConfig& base, std::int64_t replicates);

/// Bisection on transmission_prob (other parameters held) until the mean
/// no-control peak prevalence is within `tolerance` of the target, or 25
/// iterations. Throws CalibrationError if the target is outside what
/// transmission_prob in [0,1] can reach.
CalibrationResult calibrate(const ScenarioConfig& base, double target_peak_day, double target_peak_prevalence,
                            std::int64_t replicates, double tolerance = 0.02);

} // namespace aisr
