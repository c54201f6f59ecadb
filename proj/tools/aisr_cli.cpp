#include "aisr/errors.hpp"
#include "aisr/report.hpp"
#include "aisr/scenario.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

namespace {

struct RunArgs {
    std::string config;
    std::optional<std::int64_t> rounds;
    std::optional<std::uint64_t> seed;
    std::optional<std::int64_t> threads;
    std::string memory_file;
    std::string out_dir;
    bool no_control = false;
};

struct CalibrateArgs {
    std::string config;
    double target_peak_day = 10.0;
    double target_peak_prev = 0.608;
    std::int64_t replicates = 20;
    double tolerance = 0.02;
    std::string output;
};

aisr::ScenarioConfig config_from(const std::string& path) {
    return path.empty() ? aisr::ScenarioConfig{} : aisr::load_config(path);
}

int run(const RunArgs& args) {
    auto config = config_from(args.config);
    if (args.rounds) config.rounds = *args.rounds;
    if (args.seed) config.seed = *args.seed;
    if (args.threads) config.planner.threads = *args.threads;
    aisr::validate(config);

    aisr::ExperimentOptions options;
    options.no_control = args.no_control;
    if (!args.out_dir.empty()) options.out_dir = args.out_dir;
    if (!args.memory_file.empty()) options.memory_file = args.memory_file;

    const auto result = aisr::run_experiment(config, options);
    aisr::write_summary_table(std::cout, result.summaries);
    return 0;
}

int calibrate(const CalibrateArgs& args) {
    auto config = config_from(args.config);
    const auto result =
        aisr::calibrate(config, args.target_peak_day, args.target_peak_prev, args.replicates, args.tolerance);
    std::cout << "transmission_prob = " << aisr::format_real(result.params.transmission_prob) << '\n'
              << "mean_peak_day = " << aisr::format_real(result.mean_peak_day) << '\n'
              << "mean_peak_prevalence = " << aisr::format_real(result.mean_peak_prevalence) << '\n'
              << "iterations = " << result.iterations << '\n'
              << "converged = " << (result.converged ? "true" : "false") << '\n';
    if (!args.output.empty()) {
        config.disease = result.params;
        std::ofstream out(args.output);
        if (!out) throw aisr::IoError("cannot open for writing: " + args.output);
        aisr::write_config(out, config);
    }
    return result.converged ? 0 : 3;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Epidemic response planning with clonal selection and case memory"};
    app.require_subcommand(1);

    RunArgs run_args;
    auto* run_cmd = app.add_subcommand("run", "Run one or more EOC rounds");
    run_cmd->add_option("--config", run_args.config, "Scenario file");
    run_cmd->add_option("--rounds", run_args.rounds, "Number of rounds");
    run_cmd->add_option("--seed", run_args.seed, "Base seed");
    run_cmd->add_option("--threads", run_args.threads, "Planner evaluation threads");
    run_cmd->add_option("--memory-file", run_args.memory_file, "Case memory file (JSON lines), read and updated");
    run_cmd->add_option("--out-dir", run_args.out_dir, "Directory for traces, logs and the summary");
    run_cmd->add_flag("--no-control", run_args.no_control, "Run the epidemic without any response");

    CalibrateArgs cal_args;
    auto* cal_cmd = app.add_subcommand("calibrate", "Fit transmission_prob to a no-control peak");
    cal_cmd->add_option("--config", cal_args.config, "Scenario file");
    cal_cmd->add_option("--target-peak-day", cal_args.target_peak_day, "Target peak day");
    cal_cmd->add_option("--target-peak-prev", cal_args.target_peak_prev, "Target peak prevalence (fraction)");
    cal_cmd->add_option("--replicates", cal_args.replicates, "Seeds per evaluation");
    cal_cmd->add_option("--tolerance", cal_args.tolerance, "Prevalence tolerance");
    cal_cmd->add_option("--output", cal_args.output, "Write the calibrated scenario here");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run_cmd->parsed()) return run(run_args);
        return calibrate(cal_args);
    } catch (const aisr::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const aisr::CalibrationError& e) {
        std::cerr << "calibration error: " << e.what() << '\n';
        return 2;
    } catch (const aisr::FormatError& e) {
        std::cerr << "format error: " << e.what() << '\n';
        return 1;
    } catch (const aisr::IoError& e) {
        std::cerr << "io error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
