#include "remest/system_model.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "remest/errors.hpp"

namespace remest {

namespace {

void require(bool condition, const std::string& what) {
    if (!condition) throw std::invalid_argument(what);
}

Eigen::MatrixXd symmetrized(const Eigen::MatrixXd& X) {
    return 0.5 * (X + X.transpose().eval());
}

bool nearly_symmetric(const Eigen::MatrixXd& X) {
    const double scale = std::max(1.0, X.cwiseAbs().maxCoeff());
    return (X - X.transpose().eval()).cwiseAbs().maxCoeff() <= 1e-12 * scale;
}

double min_eigenvalue(const Eigen::MatrixXd& X) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(symmetrized(X));
    return es.eigenvalues().minCoeff();
}

// Numerical rank with the threshold n * eps_machine * sigma_max.
long numerical_rank(const Eigen::MatrixXd& X) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(X);
    const auto& sv = svd.singularValues();
    if (sv.size() == 0) return 0;
    const double threshold = static_cast<double>(std::max(X.rows(), X.cols())) *
                             std::numeric_limits<double>::epsilon() * sv(0);
    long rank = 0;
    for (long i = 0; i < sv.size(); ++i)
        if (sv(i) > threshold) ++rank;
    return rank;
}

}  // namespace

double spectral_radius(const Eigen::MatrixXd& A) {
    require(A.rows() == A.cols() && A.rows() >= 1,
            "spectral radius needs a nonempty square matrix");
    require(A.allFinite(), "spectral radius needs finite entries");
    if (A.rows() == 1) return std::abs(A(0, 0));
    Eigen::EigenSolver<Eigen::MatrixXd> es(A, /*computeEigenvectors=*/false);
    return es.eigenvalues().cwiseAbs().maxCoeff();
}

double critical_probability(const Eigen::MatrixXd& A) {
    const double rho = spectral_radius(A);
    if (rho <= 1.0) return 0.0;
    return 1.0 - 1.0 / (rho * rho);
}

Eigen::MatrixXd h_operator(const Eigen::MatrixXd& X, const Eigen::MatrixXd& A,
                           const Eigen::MatrixXd& Q) {
    require(A.rows() == A.cols(), "h operator needs square A");
    require(X.rows() == A.rows() && X.cols() == A.cols(),
            "h operator input does not match A");
    require(Q.rows() == A.rows() && Q.cols() == A.cols(),
            "h operator Q does not match A");
    return symmetrized(A * X * A.transpose() + Q);
}

Eigen::MatrixXd psd_sqrt(const Eigen::MatrixXd& X) {
    require(X.rows() == X.cols(), "matrix square root needs a square matrix");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(symmetrized(X));
    Eigen::VectorXd vals = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    return es.eigenvectors() * vals.asDiagonal() * es.eigenvectors().transpose();
}

void validate_model(const SystemModel& model) {
    const long n = model.A.rows();
    require(n >= 1 && model.A.cols() == n, "A must be square and nonempty");
    require(model.A.allFinite(), "A must have finite entries");

    const long p = model.C.rows();
    require(p >= 1 && model.C.cols() == n, "C must be p x n with p >= 1");
    require(model.C.allFinite(), "C must have finite entries");

    require(model.Q.rows() == n && model.Q.cols() == n, "Q must be n x n");
    require(model.Q.allFinite(), "Q must have finite entries");
    require(nearly_symmetric(model.Q), "Q must be symmetric");
    require(min_eigenvalue(model.Q) >= -1e-12,
            "Q must be positive semi-definite");

    require(model.R.rows() == p && model.R.cols() == p, "R must be p x p");
    require(model.R.allFinite(), "R must have finite entries");
    require(nearly_symmetric(model.R), "R must be symmetric");
    require(min_eigenvalue(model.R) > 0.0, "R must be positive definite");

    Eigen::MatrixXd obs(n * p, n);
    Eigen::MatrixXd block = model.C;
    for (long i = 0; i < n; ++i) {
        obs.middleRows(i * p, p) = block;
        block = block * model.A;
    }
    require(numerical_rank(obs) == n, "(A, C) must be observable");

    const Eigen::MatrixXd B = psd_sqrt(model.Q);
    Eigen::MatrixXd ctrl(n, n * n);
    Eigen::MatrixXd col = B;
    for (long i = 0; i < n; ++i) {
        ctrl.middleCols(i * n, n) = col;
        col = model.A * col;
    }
    require(numerical_rank(ctrl) == n, "(A, Q^(1/2)) must be controllable");
}

Eigen::MatrixXd steady_state_kalman(const SystemModel& model, double tol,
                                    int max_iter) {
    validate_model(model);
    require(tol > 0.0, "solver tolerance must be positive");
    require(max_iter >= 1, "solver iteration budget must be positive");

    const long n = model.A.rows();
    Eigen::MatrixXd P = Eigen::MatrixXd::Zero(n, n);
    double residual = std::numeric_limits<double>::infinity();
    for (int iter = 0; iter < max_iter; ++iter) {
        const Eigen::MatrixXd sigma =
            symmetrized(model.A * P * model.A.transpose() + model.Q);
        const Eigen::MatrixXd innov =
            model.C * sigma * model.C.transpose() + model.R;
        const Eigen::MatrixXd gain =
            sigma * model.C.transpose() * innov.ldlt().solve(
                Eigen::MatrixXd::Identity(innov.rows(), innov.cols()));
        const Eigen::MatrixXd next = symmetrized(sigma - gain * model.C * sigma);
        residual = (next - P).cwiseAbs().maxCoeff();
        P = next;
        if (residual < tol) return P;
    }
    std::ostringstream msg;
    msg << "steady-state covariance iteration did not converge within "
        << max_iter << " steps (last residual " << residual << ")";
    throw ConvergenceError(msg.str(), residual);
}

SteadyState make_steady_state(const SystemModel& model, double tol, int max_iter) {
    SteadyState steady;
    steady.Pbar = steady_state_kalman(model, tol, max_iter);
    steady.rho = spectral_radius(model.A);
    steady.theta_c = critical_probability(model.A);
    return steady;
}

Trajectory simulate_process(const SystemModel& model, const Eigen::MatrixXd& Pbar,
                            int horizon, RandomStream& rng,
                            const std::optional<Eigen::VectorXd>& x0) {
    require(horizon >= 1, "horizon must be at least 1");
    const long n = model.A.rows();
    const long p = model.C.rows();

    const Eigen::MatrixXd q_sqrt = psd_sqrt(model.Q);
    const Eigen::MatrixXd r_sqrt = psd_sqrt(model.R);
    const Eigen::MatrixXd p0_sqrt = psd_sqrt(Pbar);

    // Steady-state gain for the prior covariance Sigma = A Pbar A^T + Q.
    const Eigen::MatrixXd sigma =
        symmetrized(model.A * Pbar * model.A.transpose() + model.Q);
    const Eigen::MatrixXd innov = model.C * sigma * model.C.transpose() + model.R;
    const Eigen::MatrixXd gain =
        sigma * model.C.transpose() * innov.ldlt().solve(
            Eigen::MatrixXd::Identity(innov.rows(), innov.cols()));

    const auto draw_normal = [&rng](long dim) {
        Eigen::VectorXd z(dim);
        for (long i = 0; i < dim; ++i) z(i) = rng.normal();
        return z;
    };

    Trajectory traj;
    traj.states.resize(n, horizon + 1);
    traj.measurements.resize(p, horizon);
    traj.estimates.resize(n, horizon + 1);

    traj.states.col(0) = x0 ? *x0 : Eigen::VectorXd(p0_sqrt * draw_normal(n));
    traj.estimates.col(0) = Eigen::VectorXd::Zero(n);

    for (int k = 1; k <= horizon; ++k) {
        traj.states.col(k) =
            model.A * traj.states.col(k - 1) + q_sqrt * draw_normal(n);
        traj.measurements.col(k - 1) =
            model.C * traj.states.col(k) + r_sqrt * draw_normal(p);
        const Eigen::VectorXd predicted = model.A * traj.estimates.col(k - 1);
        traj.estimates.col(k) =
            predicted + gain * (traj.measurements.col(k - 1) - model.C * predicted);
    }
    return traj;
}

}  // namespace remest
