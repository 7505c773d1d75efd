#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "remest/channel_bank.hpp"
#include "remest/estimator.hpp"
#include "remest/policies.hpp"
#include "remest/regret.hpp"
#include "remest/system_model.hpp"

namespace remest {

// One experiment as described by a JSON config file: a plant, a channel
// bank, the policies to compare, and the Monte Carlo budget.
struct ExperimentConfig {
    SystemModel model;
    std::vector<double> thetas;
    std::vector<PolicySpec> policies;
    int horizon = 0;
    long runs = 0;
    std::uint64_t seed = 0;
    double trace_cap = 1e12;
    std::string output_path;
};

// Strict parser: unknown keys are rejected, every violation is reported with
// the path of the offending field. Throws ConfigError.
ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig load_config(const std::string& path);  // IoError on read failure
std::string serialize_config(const ExperimentConfig& config);

// Structural and semantic checks beyond JSON shape (model invariants, bank
// distinctness, per-policy field requirements). Throws ConfigError.
void validate_config(const ExperimentConfig& config);

// Deterministic stream seeding for every (policy, run) Monte Carlo cell.
struct RunPlan {
    std::uint64_t master_seed = 0;

    std::uint64_t stream_seed(int policy_ordinal, long run_index) const {
        return derive_stream_seed(master_seed,
                                  static_cast<std::uint64_t>(policy_ordinal),
                                  static_cast<std::uint64_t>(run_index));
    }
};

// One closed-loop run: select channel, attempt transmission, update the
// posterior, update the remote covariance, for k = 1..T. Divergence is
// reported through the record's flag, never as a failure; traces saturate
// at `cap`.
RunRecord run_single(const SystemModel& model, const SteadyState& steady,
                     const ChannelBank& bank, const Policy& policy, int T,
                     double cap, RandomStream& stream);

struct PolicyResult {
    PolicySpec spec;
    std::string label;          // kind name, for file naming and summaries
    RegretReport report;
    ScalingFit scaling;
};

struct ExperimentResult {
    SteadyState steady;
    std::vector<double> oracle_trace;
    std::vector<PolicyResult> policies;
};

// Runs every (policy, run) cell, in parallel when workers > 1, and
// aggregates per policy. Output is identical for any worker count.
ExperimentResult run_experiment(const ExperimentConfig& config, int workers = 1);

// CSV builders (pure) and writers (throw IoError). Floats carry 10
// significant digits.
std::string format_csv_double(double value);
std::string policy_csv(const PolicyResult& policy);
std::string summary_csv(const ExperimentConfig& config,
                        const ExperimentResult& result);
std::string policy_csv_filename(int ordinal, const PolicyResult& policy);
void write_experiment_csvs(const ExperimentConfig& config,
                           const ExperimentResult& result);

// --- epsilon sweep -------------------------------------------------------

// One epsilon evaluated along both routes: the analytic criterion
// (theta_tilde vs theta_c) and the deterministic expected recursion run at
// theta_tilde, plus empirical epsilon-greedy statistics.
struct EpsilonSweepRow {
    double epsilon = 0.0;
    double theta_tilde = 0.0;
    bool analytic_stable = false;
    double recursion_trace_final = 0.0;
    bool recursion_hit_cap = false;
    double mc_final_mean_trace = 0.0;
    double mc_diverged_fraction = 0.0;
};

struct EpsilonSweepResult {
    double theta_c = 0.0;
    double stability_bound = 0.0;
    std::vector<EpsilonSweepRow> rows;
};

EpsilonSweepResult cmd_epsilon_sweep(const ExperimentConfig& config,
                                     const std::vector<double>& epsilons,
                                     int workers = 1);
std::string epsilon_sweep_csv(const EpsilonSweepResult& result);

// --- built-in benchmark table --------------------------------------------

// Reference scenario: plant, channel probabilities, the exploration rate to
// use for epsilon-greedy, and the reference regret values the measurement is
// placed next to (order: epsilon-greedy, TS, OBS, SBS).
struct BenchmarkRow {
    SystemModel model;
    std::vector<double> thetas;
    double epsilon = 0.0;
    double theta_c = 0.0;
    double reference_regret[4] = {0, 0, 0, 0};
};

const std::vector<BenchmarkRow>& benchmark_rows();

struct TableEntry {
    int row = 0;  // 1-based row number
    PolicyKind kind = PolicyKind::ThompsonSampling;
    double epsilon = 0.0;      // epsilon-greedy only, 0 otherwise
    double theta_c = 0.0;
    double reference_regret = 0.0;
    double measured_regret = 0.0;
    double stderr_regret = 0.0;
    long diverged_runs = 0;
};

struct TableResult {
    int horizon = 0;
    long runs = 0;
    std::vector<TableEntry> entries;
};

TableResult cmd_table1(const std::vector<int>& rows, long runs, int horizon,
                       std::uint64_t seed, int workers = 1);
std::string table1_csv(const TableResult& result);

// --- scaling over horizons -----------------------------------------------

struct ScalingRow {
    std::string label;
    double epsilon = 0.0;
    int horizon = 0;
    double cum_regret = 0.0;
    double stderr_regret = 0.0;
    ScalingClass classification = ScalingClass::Indeterminate;
};

struct ScalingResult {
    std::vector<ScalingRow> rows;
};

// One experiment at the largest horizon; prefix values reported at each
// requested horizon, with the scaling classification fitted on the full
// series.
ScalingResult cmd_scaling(const ExperimentConfig& config,
                          const std::vector<int>& horizons, int workers = 1);
std::string scaling_csv(const ScalingResult& result);

void write_text_file(const std::string& path, const std::string& contents);

}  // namespace remest
