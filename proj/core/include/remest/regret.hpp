#pragma once

#include <cstdint>
#include <vector>

#include "remest/channel_bank.hpp"
#include "remest/system_model.hpp"

namespace remest {

// Everything one closed-loop Monte Carlo run produces: the selected channel
// per step (0-based), the reception outcomes, the realized covariance
// traces (saturated at the run's cap) and whether saturation was ever hit.
struct RunRecord {
    std::vector<int> selections;
    std::vector<std::uint8_t> gammas;
    std::vector<double> traces;
    bool diverged = false;
};

// Aggregated Monte Carlo estimates, one entry per step k = 1..T.
struct RegretReport {
    std::vector<double> mean_trace;             // Monte Carlo tr E[P_k]
    std::vector<double> oracle_trace;           // deterministic tr E[P_k*]
    std::vector<double> cum_regret;             // prefix sums of the gap
    std::vector<double> stderr_regret;          // per-run cumsum stddev / sqrt(runs)
    std::vector<double> n_sub_mean;             // mean suboptimal-pull count
    std::vector<double> classical_regret_mean;  // mean cumulative theta gap
    long runs = 0;
    long diverged_runs = 0;
};

// Trace sequence of the always-best-channel recursion, tr E[P_k*] for
// k = 1..T. Throws StabilizabilityError unless theta_star > theta_c.
std::vector<double> oracle_trace_series(const SystemModel& model,
                                        const SteadyState& steady,
                                        double theta_star, int T);

// Cumulative count of pulls away from the best channel, N_sub(k).
std::vector<long> count_suboptimal(const std::vector<int>& selections, int m_star);

// Cumulative reception-probability gap sum_{j<=k} (theta* - theta_{m_j}).
std::vector<double> classical_regret(const std::vector<int>& selections,
                                     const ChannelBank& bank);

// Streaming aggregator. Records may be folded in as they finish; `merge`
// combines chunk-level partials. All sums are plain left-folds, so a fixed
// chunking plus an ascending merge order reproduces the single-threaded
// result bit for bit.
class RegretAccumulator {
public:
    RegretAccumulator(std::vector<double> oracle, ChannelBank bank);

    void add(const RunRecord& record);
    void merge(const RegretAccumulator& other);
    RegretReport finalize() const;

    long runs() const { return runs_; }
    int horizon() const { return static_cast<int>(oracle_.size()); }

private:
    std::vector<double> oracle_;
    ChannelBank bank_;
    std::vector<double> sum_trace_;
    std::vector<double> sum_cum_gap_;
    std::vector<double> sum_cum_gap_sq_;
    std::vector<double> sum_n_sub_;
    std::vector<double> sum_classical_;
    long runs_ = 0;
    long diverged_runs_ = 0;
};

// Batch form over a finished record set. Throws std::invalid_argument for an
// empty set or mismatched horizons.
RegretReport estimation_regret(const std::vector<RunRecord>& records,
                               const std::vector<double>& oracle,
                               const ChannelBank& bank);

enum class ScalingClass { Logarithmic, Linear, Indeterminate };

const char* scaling_class_name(ScalingClass c);

// Least-squares fits r(T) ~ a log T + b and r(T) ~ c T + d on the samples
// past `burn_in`; whichever has the lower residual sum of squares wins, with
// an indeterminate band where the RSS ratio is within [0.8, 1.25] or the
// series is degenerate.
struct ScalingFit {
    ScalingClass classification = ScalingClass::Indeterminate;
    double rss_log = 0.0;
    double rss_linear = 0.0;
    double log_coeff = 0.0, log_offset = 0.0;
    double lin_slope = 0.0, lin_offset = 0.0;
};

ScalingFit scaling_fit(const std::vector<double>& cum_regret, int burn_in);

}  // namespace remest
