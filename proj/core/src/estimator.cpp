#include "remest/estimator.hpp"

#include <cmath>
#include <stdexcept>

#include "remest/errors.hpp"

namespace remest {

Eigen::MatrixXd remote_step(const Eigen::MatrixXd& P, int gamma,
                            const Eigen::MatrixXd& Pbar, const Eigen::MatrixXd& A,
                            const Eigen::MatrixXd& Q) {
    if (gamma != 0 && gamma != 1)
        throw std::invalid_argument("reception outcome must be 0 or 1");
    if (gamma == 1) return Pbar;
    return h_operator(P, A, Q);
}

Eigen::MatrixXd expected_step(const Eigen::MatrixXd& EP, double theta,
                              const Eigen::MatrixXd& Pbar, const Eigen::MatrixXd& A,
                              const Eigen::MatrixXd& Q) {
    if (!(theta >= 0.0 && theta <= 1.0))
        throw std::invalid_argument("reception probability must be in [0, 1]");
    return theta * Pbar + (1.0 - theta) * h_operator(EP, A, Q);
}

ExpectedCovarianceSeries expected_series(const SystemModel& model,
                                         const SteadyState& steady, double theta,
                                         int T, double cap) {
    if (T < 1) throw std::invalid_argument("horizon must be at least 1");
    if (!(cap > steady.Pbar.trace()))
        throw std::invalid_argument("saturation cap must exceed tr(Pbar)");
    if (!(theta >= 0.0 && theta <= 1.0))
        throw std::invalid_argument("reception probability must be in [0, 1]");

    ExpectedCovarianceSeries series;
    series.traces.reserve(static_cast<std::size_t>(T));
    series.converged = (1.0 - theta) * steady.rho * steady.rho < 1.0;

    Eigen::MatrixXd EP = steady.Pbar;
    bool saturated = false;
    for (int k = 1; k <= T; ++k) {
        if (!saturated) {
            EP = expected_step(EP, theta, steady.Pbar, model.A, model.Q);
            const double tr = EP.trace();
            if (tr > cap) {
                saturated = true;
                series.traces.push_back(cap);
            } else {
                series.traces.push_back(tr);
            }
        } else {
            series.traces.push_back(cap);
        }
    }

    if (series.converged) {
        Eigen::MatrixXd V = steady.Pbar;
        for (int iter = 0; iter < 1000000; ++iter) {
            const Eigen::MatrixXd next =
                expected_step(V, theta, steady.Pbar, model.A, model.Q);
            const double delta = (next - V).cwiseAbs().maxCoeff();
            V = next;
            if (delta < 1e-10) break;
        }
        series.fixed_point_trace = V.trace();
    }
    return series;
}

ExpectedCovarianceSeries expected_series(const SystemModel& model, double theta,
                                         int T, double cap) {
    return expected_series(model, make_steady_state(model), theta, T, cap);
}

double epsilon_greedy_asymptotic_theta(const ChannelBank& bank, double epsilon) {
    if (!(epsilon >= 0.0 && epsilon <= 1.0))
        throw std::invalid_argument("exploration rate must be in [0, 1]");
    return (1.0 - epsilon) * bank.theta_star() + epsilon * bank.theta_mean();
}

double epsilon_stability_bound(const ChannelBank& bank, double theta_c) {
    if (!(bank.theta_star() > theta_c))
        throw StabilizabilityError(
            "no channel exceeds the critical probability; the bound is undefined");
    return (bank.theta_star() - theta_c) / (bank.theta_star() - bank.theta_mean());
}

}  // namespace remest
