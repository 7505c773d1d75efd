#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "remest/channel_bank.hpp"
#include "remest/system_model.hpp"

namespace remest {

// One step of the remote estimator covariance recursion: a received packet
// resets to Pbar, a lost one propagates open loop through h(.).
Eigen::MatrixXd remote_step(const Eigen::MatrixXd& P, int gamma,
                            const Eigen::MatrixXd& Pbar, const Eigen::MatrixXd& A,
                            const Eigen::MatrixXd& Q);

// One step of the expected-covariance recursion
//   E[P_{k+1}] = theta * Pbar + (1 - theta) * h(E[P_k]).
// Throws std::invalid_argument for theta outside [0, 1].
Eigen::MatrixXd expected_step(const Eigen::MatrixXd& EP, double theta,
                              const Eigen::MatrixXd& Pbar, const Eigen::MatrixXd& A,
                              const Eigen::MatrixXd& Q);

// Deterministic trace sequence of the expected-covariance recursion started
// from P_0 = Pbar. `converged` is decided analytically: the recursion is
// bounded iff (1 - theta) * rho(A)^2 < 1. Traces saturate at `cap` once
// exceeded; `fixed_point_trace` is present only for convergent parameters
// and is computed by iterating to 1e-10.
struct ExpectedCovarianceSeries {
    std::vector<double> traces;  // tr E[P_k], k = 1..T
    bool converged = false;
    std::optional<double> fixed_point_trace;
};

ExpectedCovarianceSeries expected_series(const SystemModel& model,
                                         const SteadyState& steady, double theta,
                                         int T, double cap);

// Convenience overload that solves the steady state itself.
ExpectedCovarianceSeries expected_series(const SystemModel& model, double theta,
                                         int T, double cap);

// Reception probability epsilon-greedy settles at once all channel
// estimates have converged: (1 - eps) * theta* + (eps / M) * sum_m theta_m.
double epsilon_greedy_asymptotic_theta(const ChannelBank& bank, double epsilon);

// Largest stabilizing exploration rate,
//   (theta* - theta_c) / (theta* - mean(theta)).
// Values above 1 mean every epsilon in (0,1) is stabilizing. Throws
// StabilizabilityError when theta* <= theta_c.
double epsilon_stability_bound(const ChannelBank& bank, double theta_c);

}  // namespace remest
