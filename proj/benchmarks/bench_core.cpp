// Microbenchmarks for the hot paths: channel selection, posterior sampling,
// the expected-covariance recursion, and full closed-loop runs.

#include <benchmark/benchmark.h>

#include <Eigen/Dense>

#include "remest/channel_bank.hpp"
#include "remest/estimator.hpp"
#include "remest/experiment.hpp"
#include "remest/policies.hpp"
#include "remest/rng.hpp"
#include "remest/system_model.hpp"

namespace {

remest::SystemModel scalar_model(double a) {
    remest::SystemModel model;
    model.A = Eigen::MatrixXd::Constant(1, 1, a);
    model.C = Eigen::MatrixXd::Constant(1, 1, 1.0);
    model.Q = Eigen::MatrixXd::Constant(1, 1, 1.0);
    model.R = Eigen::MatrixXd::Constant(1, 1, 1.0);
    return model;
}

remest::SystemModel planar_model() {
    remest::SystemModel model;
    model.A = Eigen::MatrixXd(2, 2);
    model.A << 1.5, 0.2, 0.3, 0.9;
    model.C = Eigen::MatrixXd(1, 2);
    model.C << 1.0, 1.0;
    model.Q = Eigen::MatrixXd::Identity(2, 2);
    model.R = Eigen::MatrixXd::Constant(1, 1, 1.0);
    return model;
}

// A mid-experiment posterior: mixed pseudo-counts over four channels.
remest::PosteriorState warm_state() {
    remest::PosteriorState state(4);
    state.alpha = {120.0, 45.0, 9.0, 4.0};
    state.beta = {30.0, 16.0, 8.0, 5.0};
    return state;
}

void bm_sample_beta(benchmark::State& bench) {
    remest::RandomStream rng(1);
    for (auto _ : bench)
        benchmark::DoNotOptimize(remest::sample_beta(12.5, 4.5, rng));
}
BENCHMARK(bm_sample_beta);

void bm_select_thompson(benchmark::State& bench) {
    const remest::PosteriorState state = warm_state();
    remest::RandomStream rng(2);
    for (auto _ : bench)
        benchmark::DoNotOptimize(remest::select_ts(state, rng).channel);
}
BENCHMARK(bm_select_thompson);

void bm_select_epsilon_greedy(benchmark::State& bench) {
    const remest::PosteriorState state = warm_state();
    remest::RandomStream rng(3);
    for (auto _ : bench)
        benchmark::DoNotOptimize(remest::select_epsilon_greedy(state, 0.12, rng));
}
BENCHMARK(bm_select_epsilon_greedy);

void bm_select_stability_aware(benchmark::State& bench) {
    const remest::PosteriorState state = warm_state();
    remest::RandomStream rng(4);
    for (auto _ : bench)
        benchmark::DoNotOptimize(remest::select_sbs(state, 0.524, rng));
}
BENCHMARK(bm_select_stability_aware);

void bm_steady_state_kalman(benchmark::State& bench) {
    const remest::SystemModel model = planar_model();
    for (auto _ : bench)
        benchmark::DoNotOptimize(remest::steady_state_kalman(model));
}
BENCHMARK(bm_steady_state_kalman);

void bm_expected_series(benchmark::State& bench) {
    const remest::SystemModel model = scalar_model(1.45);
    const remest::SteadyState steady = remest::make_steady_state(model);
    for (auto _ : bench)
        benchmark::DoNotOptimize(
            remest::expected_series(model, steady, 0.8, 1000, 1e12).traces.back());
}
BENCHMARK(bm_expected_series);

// One full closed-loop run, horizon 1000. Reported time is per run, so the
// per-step cost is the reading divided by 1000.
template <typename MakeModel>
void closed_loop_run(benchmark::State& bench, MakeModel make_model) {
    const remest::SystemModel model = make_model();
    const remest::SteadyState steady = remest::make_steady_state(model);
    const remest::ChannelBank bank({0.8, 0.75, 0.55, 0.5});
    remest::PolicySpec spec;
    spec.kind = remest::PolicyKind::ThompsonSampling;
    const remest::Policy policy =
        remest::Policy::make(spec, steady.theta_c, bank.best_channel(),
                             bank.size());
    remest::RandomStream stream(5);
    for (auto _ : bench)
        benchmark::DoNotOptimize(
            remest::run_single(model, steady, bank, policy, 1000, 1e12, stream)
                .traces.back());
}

void bm_closed_loop_scalar(benchmark::State& bench) {
    closed_loop_run(bench, [] { return scalar_model(1.45); });
}
BENCHMARK(bm_closed_loop_scalar);

void bm_closed_loop_planar(benchmark::State& bench) {
    closed_loop_run(bench, [] { return planar_model(); });
}
BENCHMARK(bm_closed_loop_planar);

}  // namespace

BENCHMARK_MAIN();
