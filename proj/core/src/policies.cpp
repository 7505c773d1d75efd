#include "remest/policies.hpp"

#include <algorithm>
#include <array>
#include <stdexcept>

#include "remest/errors.hpp"

namespace remest {

namespace {

void check_channel(const PosteriorState& state, int m) {
    if (m < 0 || m >= state.channels())
        throw std::out_of_range("channel index out of range");
}

std::vector<double> draw_samples(const PosteriorState& state, RandomStream& rng) {
    std::vector<double> samples(static_cast<std::size_t>(state.channels()));
    for (int m = 0; m < state.channels(); ++m)
        samples[static_cast<std::size_t>(m)] =
            rng.beta(state.alpha[static_cast<std::size_t>(m)],
                     state.beta[static_cast<std::size_t>(m)]);
    return samples;
}

int argmax_lowest(const std::vector<double>& scores) {
    int best = 0;
    for (int m = 1; m < static_cast<int>(scores.size()); ++m)
        if (scores[static_cast<std::size_t>(m)] >
            scores[static_cast<std::size_t>(best)])
            best = m;
    return best;
}

}  // namespace

double posterior_mean(const PosteriorState& state, int m) {
    check_channel(state, m);
    const auto i = static_cast<std::size_t>(m);
    return state.alpha[i] / (state.alpha[i] + state.beta[i]);
}

double sample_beta(double a, double b, RandomStream& rng) {
    if (!(a > 0.0) || !(b > 0.0))
        throw std::invalid_argument("Beta parameters must be positive");
    return rng.beta(a, b);
}

PosteriorState update(PosteriorState state, int m, int gamma) {
    check_channel(state, m);
    if (gamma != 0 && gamma != 1)
        throw std::invalid_argument("reception outcome must be 0 or 1");
    const auto i = static_cast<std::size_t>(m);
    state.alpha[i] += static_cast<double>(gamma);
    state.beta[i] += static_cast<double>(1 - gamma);
    return state;
}

int select_epsilon_greedy(const PosteriorState& state, double epsilon,
                          RandomStream& rng) {
    if (!(epsilon >= 0.0 && epsilon <= 1.0))
        throw std::invalid_argument("exploration rate must be in [0, 1]");
    const int M = state.channels();
    if (rng.uniform() < epsilon) return rng.uniform_index(M);

    double best = posterior_mean(state, 0);
    for (int m = 1; m < M; ++m) {
        const double mean = posterior_mean(state, m);
        if (mean > best) best = mean;
    }
    std::vector<int> maximizers;
    for (int m = 0; m < M; ++m)
        if (posterior_mean(state, m) == best) maximizers.push_back(m);
    if (maximizers.size() == 1) return maximizers.front();
    return maximizers[static_cast<std::size_t>(
        rng.uniform_index(static_cast<int>(maximizers.size())))];
}

TsDraw select_ts(const PosteriorState& state, RandomStream& rng) {
    TsDraw draw;
    draw.samples = draw_samples(state, rng);
    draw.channel = argmax_lowest(draw.samples);
    return draw;
}

double obs_score(const PosteriorState& state, int m, double sample) {
    return std::max(sample, posterior_mean(state, m));
}

double sbs_score(const PosteriorState& state, int m, double sample,
                 double theta_c_hat) {
    if (posterior_mean(state, m) > theta_c_hat)
        return obs_score(state, m, sample);
    return sample;
}

int select_obs(const PosteriorState& state, RandomStream& rng) {
    std::vector<double> scores = draw_samples(state, rng);
    for (int m = 0; m < state.channels(); ++m)
        scores[static_cast<std::size_t>(m)] =
            obs_score(state, m, scores[static_cast<std::size_t>(m)]);
    return argmax_lowest(scores);
}

int select_sbs(const PosteriorState& state, double theta_c_hat, RandomStream& rng) {
    if (!(theta_c_hat >= 0.0 && theta_c_hat < 1.0))
        throw std::invalid_argument("believed critical probability must be in [0, 1)");
    std::vector<double> scores = draw_samples(state, rng);
    for (int m = 0; m < state.channels(); ++m)
        scores[static_cast<std::size_t>(m)] =
            sbs_score(state, m, scores[static_cast<std::size_t>(m)], theta_c_hat);
    return argmax_lowest(scores);
}

const std::string& policy_kind_name(PolicyKind kind) {
    static const std::array<std::string, 6> names = {
        "epsilon-greedy", "ts", "obs", "sbs", "oracle", "fixed"};
    return names[static_cast<std::size_t>(kind)];
}

std::optional<PolicyKind> policy_kind_from_name(const std::string& name) {
    for (PolicyKind kind :
         {PolicyKind::EpsilonGreedy, PolicyKind::ThompsonSampling, PolicyKind::Obs,
          PolicyKind::Sbs, PolicyKind::Oracle, PolicyKind::Fixed}) {
        if (policy_kind_name(kind) == name) return kind;
    }
    return std::nullopt;
}

Policy Policy::make(const PolicySpec& spec, double model_theta_c,
                    std::optional<int> best_channel, int channels) {
    if (channels < 2) throw ConfigError("policy needs at least two channels");

    if (spec.epsilon && spec.kind != PolicyKind::EpsilonGreedy)
        throw ConfigError("only epsilon-greedy accepts an exploration rate",
                          "epsilon");
    if (spec.theta_c_hat && spec.kind != PolicyKind::Sbs)
        throw ConfigError("only sbs accepts a believed critical probability",
                          "theta_c_hat");
    if (spec.fixed_channel && spec.kind != PolicyKind::Fixed)
        throw ConfigError("only fixed accepts a channel index", "fixed_channel");

    Policy policy;
    policy.spec_ = spec;
    switch (spec.kind) {
        case PolicyKind::EpsilonGreedy:
            if (!spec.epsilon)
                throw ConfigError("epsilon-greedy requires an exploration rate",
                                  "epsilon");
            if (!(*spec.epsilon > 0.0 && *spec.epsilon < 1.0))
                throw ConfigError("exploration rate must be in (0, 1)", "epsilon");
            policy.epsilon_ = *spec.epsilon;
            break;
        case PolicyKind::Sbs:
            policy.theta_c_hat_ =
                spec.theta_c_hat ? *spec.theta_c_hat : model_theta_c;
            if (!(policy.theta_c_hat_ >= 0.0 && policy.theta_c_hat_ < 1.0))
                throw ConfigError("believed critical probability must be in [0, 1)",
                                  "theta_c_hat");
            break;
        case PolicyKind::Oracle:
            if (!best_channel)
                throw ConfigError("oracle policy needs the channel bank's best "
                                  "channel at construction");
            policy.target_channel_ = *best_channel;
            break;
        case PolicyKind::Fixed:
            if (!spec.fixed_channel)
                throw ConfigError("fixed policy requires a channel index",
                                  "fixed_channel");
            if (*spec.fixed_channel < 1 || *spec.fixed_channel > channels)
                throw ConfigError("channel index out of range", "fixed_channel");
            policy.target_channel_ = *spec.fixed_channel - 1;
            break;
        case PolicyKind::ThompsonSampling:
        case PolicyKind::Obs:
            break;
    }
    return policy;
}

int Policy::select(const PosteriorState& state, RandomStream& rng) const {
    switch (spec_.kind) {
        case PolicyKind::EpsilonGreedy:
            return select_epsilon_greedy(state, epsilon_, rng);
        case PolicyKind::ThompsonSampling:
            return select_ts(state, rng).channel;
        case PolicyKind::Obs:
            return select_obs(state, rng);
        case PolicyKind::Sbs:
            return select_sbs(state, theta_c_hat_, rng);
        case PolicyKind::Oracle:
        case PolicyKind::Fixed:
            return target_channel_;
    }
    throw std::logic_error("unreachable policy kind");
}

}  // namespace remest
