#include <cstdint>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "remest/errors.hpp"
#include "remest/experiment.hpp"

namespace {

struct SeedOverride {
    std::uint64_t value = 0;
    CLI::Option* option = nullptr;

    void apply(remest::ExperimentConfig& config) const {
        if (option != nullptr && option->count() > 0) config.seed = value;
    }
};

void write_into(const std::string& dir, const std::string& name,
                const std::string& contents) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec)
        throw remest::IoError("cannot create output directory '" + dir +
                              "': " + ec.message());
    const std::string path = (std::filesystem::path(dir) / name).string();
    remest::write_text_file(path, contents);
    std::cout << "wrote " << path << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bandit channel selection for remote state estimation over "
                 "lossy links: seeded Monte Carlo experiments with CSV output"};
    app.require_subcommand(1);

    std::string run_config, sweep_config, scaling_config;
    std::string table_out = ".";
    std::vector<int> table_rows;
    std::vector<double> sweep_epsilons;
    std::vector<int> scaling_horizons;
    long table_runs = 20000;
    int table_horizon = 1000;
    int workers = 0;
    SeedOverride run_seed, sweep_seed, scaling_seed;
    std::uint64_t table_seed = 1;

    CLI::App* run = app.add_subcommand(
        "run", "Run the experiment described by a JSON config");
    run->add_option("config", run_config, "experiment config (JSON)")
        ->required();
    run_seed.option =
        run->add_option("--seed", run_seed.value, "override the config seed");
    run->add_option("--workers", workers,
                    "worker threads (0 = hardware concurrency)");

    CLI::App* table1 = app.add_subcommand(
        "table1", "Reproduce the built-in benchmark table at desk scale");
    table1->add_option("--rows", table_rows, "benchmark rows (1-9, default all)")
        ->delimiter(',');
    table1->add_option("--runs", table_runs, "Monte Carlo runs per row");
    table1->add_option("--seed", table_seed, "master seed");
    table1->add_option("--out", table_out, "output directory");
    table1->add_option("--horizon", table_horizon, "steps per run");
    table1->add_option("--workers", workers,
                       "worker threads (0 = hardware concurrency)");

    CLI::App* sweep = app.add_subcommand(
        "epsilon-sweep",
        "Probe the epsilon-greedy stability boundary for a config");
    sweep->add_option("config", sweep_config, "experiment config (JSON)")
        ->required();
    sweep->add_option("--epsilons", sweep_epsilons, "exploration rates to test")
        ->required()
        ->delimiter(',');
    sweep_seed.option =
        sweep->add_option("--seed", sweep_seed.value, "override the config seed");
    sweep->add_option("--workers", workers,
                      "worker threads (0 = hardware concurrency)");

    CLI::App* scaling = app.add_subcommand(
        "scaling", "Report cumulative regret growth across horizons");
    scaling->add_option("config", scaling_config, "experiment config (JSON)")
        ->required();
    scaling->add_option("--horizons", scaling_horizons,
                        "strictly increasing horizons")
        ->required()
        ->delimiter(',');
    scaling_seed.option = scaling->add_option("--seed", scaling_seed.value,
                                              "override the config seed");
    scaling->add_option("--workers", workers,
                        "worker threads (0 = hardware concurrency)");

    try {
        app.parse(argc, argv);

        if (run->parsed()) {
            remest::ExperimentConfig config = remest::load_config(run_config);
            run_seed.apply(config);
            const remest::ExperimentResult result =
                remest::run_experiment(config, workers);
            remest::write_experiment_csvs(config, result);
            std::cout << remest::summary_csv(config, result);
            std::cout << "results written to " << config.output_path << "\n";
        } else if (table1->parsed()) {
            const remest::TableResult result = remest::cmd_table1(
                table_rows, table_runs, table_horizon, table_seed, workers);
            const std::string csv = remest::table1_csv(result);
            std::cout << csv;
            write_into(table_out, "table1.csv", csv);
        } else if (sweep->parsed()) {
            remest::ExperimentConfig config = remest::load_config(sweep_config);
            sweep_seed.apply(config);
            const remest::EpsilonSweepResult result =
                remest::cmd_epsilon_sweep(config, sweep_epsilons, workers);
            const std::string csv = remest::epsilon_sweep_csv(result);
            std::cout << csv;
            write_into(config.output_path, "epsilon_sweep.csv", csv);
        } else if (scaling->parsed()) {
            remest::ExperimentConfig config = remest::load_config(scaling_config);
            scaling_seed.apply(config);
            const remest::ScalingResult result =
                remest::cmd_scaling(config, scaling_horizons, workers);
            const std::string csv = remest::scaling_csv(result);
            std::cout << csv;
            write_into(config.output_path, "scaling.csv", csv);
        }
        return 0;
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const remest::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const remest::StabilizabilityError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const remest::IoError& e) {
        std::cerr << "I/O error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
