#include "remest/regret.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "remest/errors.hpp"
#include "remest/estimator.hpp"

namespace remest {

std::vector<double> oracle_trace_series(const SystemModel& model,
                                        const SteadyState& steady,
                                        double theta_star, int T) {
    if (!(theta_star > steady.theta_c))
        throw StabilizabilityError(
            "best channel does not exceed the critical probability");
    const ExpectedCovarianceSeries series = expected_series(
        model, steady, theta_star, T, std::numeric_limits<double>::infinity());
    return series.traces;
}

std::vector<long> count_suboptimal(const std::vector<int>& selections, int m_star) {
    std::vector<long> counts(selections.size());
    long n_sub = 0;
    for (std::size_t k = 0; k < selections.size(); ++k) {
        if (selections[k] != m_star) ++n_sub;
        counts[k] = n_sub;
    }
    return counts;
}

std::vector<double> classical_regret(const std::vector<int>& selections,
                                     const ChannelBank& bank) {
    std::vector<double> regret(selections.size());
    double total = 0.0;
    for (std::size_t k = 0; k < selections.size(); ++k) {
        total += bank.theta_star() - bank.theta(selections[k]);
        regret[k] = total;
    }
    return regret;
}

RegretAccumulator::RegretAccumulator(std::vector<double> oracle, ChannelBank bank)
    : oracle_(std::move(oracle)),
      bank_(std::move(bank)),
      sum_trace_(oracle_.size(), 0.0),
      sum_cum_gap_(oracle_.size(), 0.0),
      sum_cum_gap_sq_(oracle_.size(), 0.0),
      sum_n_sub_(oracle_.size(), 0.0),
      sum_classical_(oracle_.size(), 0.0) {
    if (oracle_.empty())
        throw std::invalid_argument("oracle trace sequence must be nonempty");
}

void RegretAccumulator::add(const RunRecord& record) {
    const std::size_t T = oracle_.size();
    if (record.traces.size() != T || record.selections.size() != T ||
        record.gammas.size() != T)
        throw std::invalid_argument("run record horizon does not match oracle");

    double gap = 0.0;
    double classical = 0.0;
    long n_sub = 0;
    const int m_star = bank_.best_channel();
    const double theta_star = bank_.theta_star();
    for (std::size_t k = 0; k < T; ++k) {
        const double tr = record.traces[k];
        sum_trace_[k] += tr;
        gap += tr - oracle_[k];
        sum_cum_gap_[k] += gap;
        sum_cum_gap_sq_[k] += gap * gap;
        const int m = record.selections[k];
        if (m != m_star) ++n_sub;
        sum_n_sub_[k] += static_cast<double>(n_sub);
        classical += theta_star - bank_.theta(m);
        sum_classical_[k] += classical;
    }
    ++runs_;
    if (record.diverged) ++diverged_runs_;
}

void RegretAccumulator::merge(const RegretAccumulator& other) {
    if (other.oracle_.size() != oracle_.size())
        throw std::invalid_argument("cannot merge accumulators of different horizons");
    for (std::size_t k = 0; k < oracle_.size(); ++k) {
        sum_trace_[k] += other.sum_trace_[k];
        sum_cum_gap_[k] += other.sum_cum_gap_[k];
        sum_cum_gap_sq_[k] += other.sum_cum_gap_sq_[k];
        sum_n_sub_[k] += other.sum_n_sub_[k];
        sum_classical_[k] += other.sum_classical_[k];
    }
    runs_ += other.runs_;
    diverged_runs_ += other.diverged_runs_;
}

RegretReport RegretAccumulator::finalize() const {
    if (runs_ < 1)
        throw std::invalid_argument("cannot finalize a report over zero runs");
    const std::size_t T = oracle_.size();
    const double n = static_cast<double>(runs_);

    RegretReport report;
    report.mean_trace.resize(T);
    report.oracle_trace = oracle_;
    report.cum_regret.resize(T);
    report.stderr_regret.resize(T);
    report.n_sub_mean.resize(T);
    report.classical_regret_mean.resize(T);
    report.runs = runs_;
    report.diverged_runs = diverged_runs_;

    double cum = 0.0;
    for (std::size_t k = 0; k < T; ++k) {
        report.mean_trace[k] = sum_trace_[k] / n;
        cum += report.mean_trace[k] - oracle_[k];
        report.cum_regret[k] = cum;
        if (runs_ > 1) {
            const double mean_gap = sum_cum_gap_[k] / n;
            const double var =
                std::max(0.0, (sum_cum_gap_sq_[k] - n * mean_gap * mean_gap) /
                                  (n - 1.0));
            report.stderr_regret[k] = std::sqrt(var / n);
        } else {
            report.stderr_regret[k] = 0.0;
        }
        report.n_sub_mean[k] = sum_n_sub_[k] / n;
        report.classical_regret_mean[k] = sum_classical_[k] / n;
    }
    return report;
}

RegretReport estimation_regret(const std::vector<RunRecord>& records,
                               const std::vector<double>& oracle,
                               const ChannelBank& bank) {
    if (records.empty())
        throw std::invalid_argument("estimation regret needs at least one run");
    RegretAccumulator acc(oracle, bank);
    for (const RunRecord& record : records) acc.add(record);
    return acc.finalize();
}

const char* scaling_class_name(ScalingClass c) {
    switch (c) {
        case ScalingClass::Logarithmic: return "logarithmic";
        case ScalingClass::Linear: return "linear";
        case ScalingClass::Indeterminate: return "indeterminate";
    }
    return "indeterminate";
}

namespace {

// Ordinary least squares y ~ slope * u + offset; returns residual sum of
// squares.
double fit_line(const std::vector<double>& u, const std::vector<double>& y,
                double& slope, double& offset) {
    const double n = static_cast<double>(u.size());
    double su = 0.0, sy = 0.0, suu = 0.0, suy = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        su += u[i];
        sy += y[i];
        suu += u[i] * u[i];
        suy += u[i] * y[i];
    }
    const double denom = n * suu - su * su;
    if (denom <= 0.0) {
        slope = 0.0;
        offset = sy / n;
    } else {
        slope = (n * suy - su * sy) / denom;
        offset = (sy - slope * su) / n;
    }
    double rss = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        const double r = y[i] - (slope * u[i] + offset);
        rss += r * r;
    }
    return rss;
}

}  // namespace

ScalingFit scaling_fit(const std::vector<double>& cum_regret, int burn_in) {
    if (burn_in < 0) throw std::invalid_argument("burn-in must be nonnegative");
    if (static_cast<long>(cum_regret.size()) < 10L * burn_in)
        throw std::invalid_argument("series too short for the requested burn-in");

    ScalingFit fit;
    const long T = static_cast<long>(cum_regret.size());
    if (T - burn_in < 3) return fit;  // too few samples, indeterminate

    std::vector<double> log_k, lin_k, y;
    log_k.reserve(static_cast<std::size_t>(T - burn_in));
    lin_k.reserve(static_cast<std::size_t>(T - burn_in));
    y.reserve(static_cast<std::size_t>(T - burn_in));
    for (long k = burn_in + 1; k <= T; ++k) {
        log_k.push_back(std::log(static_cast<double>(k)));
        lin_k.push_back(static_cast<double>(k));
        y.push_back(cum_regret[static_cast<std::size_t>(k - 1)]);
    }

    fit.rss_log = fit_line(log_k, y, fit.log_coeff, fit.log_offset);
    fit.rss_linear = fit_line(lin_k, y, fit.lin_slope, fit.lin_offset);

    if (fit.rss_log < 0.8 * fit.rss_linear)
        fit.classification = ScalingClass::Logarithmic;
    else if (fit.rss_log > 1.25 * fit.rss_linear)
        fit.classification = ScalingClass::Linear;
    else
        fit.classification = ScalingClass::Indeterminate;
    return fit;
}

}  // namespace remest
