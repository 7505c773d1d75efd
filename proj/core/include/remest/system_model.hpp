#pragma once

#include <Eigen/Dense>
#include <optional>

#include "remest/rng.hpp"

namespace remest {

// Discrete-time Gauss-Markov plant
//
//   x_{k+1} = A x_k + w_k,   w_k ~ N(0, Q)
//   y_k     = C x_k + v_k,   v_k ~ N(0, R)
//
// The sensor runs a local Kalman filter assumed to be at steady state; its
// posterior error covariance Pbar is what a successful transmission hands to
// the remote estimator.
struct SystemModel {
    Eigen::MatrixXd A;  // n x n state transition
    Eigen::MatrixXd C;  // p x n observation
    Eigen::MatrixXd Q;  // n x n process-noise covariance (PSD)
    Eigen::MatrixXd R;  // p x p measurement-noise covariance (PD)

    int state_dim() const { return static_cast<int>(A.rows()); }
    int obs_dim() const { return static_cast<int>(C.rows()); }
};

// Quantities derived once per model and reused everywhere.
struct SteadyState {
    Eigen::MatrixXd Pbar;  // steady-state local KF posterior covariance
    double rho;            // spectral radius of A
    double theta_c;        // critical reception probability, 0 for stable A
};

// Sampled trajectory from simulate_process. Column k holds the quantity at
// step k; estimates start from the zero prior at k = 0.
struct Trajectory {
    Eigen::MatrixXd states;        // n x (horizon+1)
    Eigen::MatrixXd measurements;  // p x horizon, column k-1 is y_k
    Eigen::MatrixXd estimates;     // n x (horizon+1)
};

// Largest eigenvalue magnitude. Throws std::invalid_argument for non-square
// input; accurate to ~1e-10 relative for the small dense matrices used here.
double spectral_radius(const Eigen::MatrixXd& A);

// theta_c = 1 - 1/rho(A)^2 when rho(A) > 1, clamped to 0 for stable plants
// so the stabilizability condition is vacuously satisfiable.
double critical_probability(const Eigen::MatrixXd& A);

// Open-loop covariance propagation h(X) = A X A^T + Q, re-symmetrized.
Eigen::MatrixXd h_operator(const Eigen::MatrixXd& X, const Eigen::MatrixXd& A,
                           const Eigen::MatrixXd& Q);

// Symmetric PSD square root (eigendecomposition, negative drift clamped).
Eigen::MatrixXd psd_sqrt(const Eigen::MatrixXd& X);

// Checks the structural invariants: Q PSD, R PD, both symmetric to 1e-12
// relative, (A, C) observable and (A, Q^{1/2}) controllable. Rank tests use
// the singular-value threshold n * eps * sigma_max. Throws
// std::invalid_argument naming the violated property.
void validate_model(const SystemModel& model);

// Fixed point of the posterior Riccati map
//   P -> Sigma - Sigma C^T (C Sigma C^T + R)^{-1} C Sigma,  Sigma = A P A^T + Q
// iterated from P = 0 until successive iterates differ by less than `tol` in
// max-abs norm. Throws ConvergenceError carrying the last residual if
// `max_iter` is exhausted.
Eigen::MatrixXd steady_state_kalman(const SystemModel& model, double tol = 1e-12,
                                    int max_iter = 100000);

// Bundles Pbar, rho(A) and theta_c for a validated model.
SteadyState make_steady_state(const SystemModel& model, double tol = 1e-12,
                              int max_iter = 100000);

// Samples one plant trajectory with the steady-state Kalman gain. The
// initial state is drawn with covariance Pbar (estimate starts at 0) unless
// `x0` overrides it. Deterministic given the stream state.
Trajectory simulate_process(const SystemModel& model, const Eigen::MatrixXd& Pbar,
                            int horizon, RandomStream& rng,
                            const std::optional<Eigen::VectorXd>& x0 = std::nullopt);

}  // namespace remest
