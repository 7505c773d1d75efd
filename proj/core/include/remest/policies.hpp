#pragma once

#include <optional>
#include <string>
#include <vector>

#include "remest/rng.hpp"

namespace remest {

// Per-channel Beta pseudo-counts shared by all bandit policies. alpha_m - 1
// counts observed successes on channel m, alpha_m + beta_m - 2 counts
// attempted transmissions; exactly one channel changes per update.
struct PosteriorState {
    std::vector<double> alpha;
    std::vector<double> beta;

    explicit PosteriorState(int channels)
        : alpha(channels, 1.0), beta(channels, 1.0) {}

    int channels() const { return static_cast<int>(alpha.size()); }
};

// Posterior mean alpha_m / (alpha_m + beta_m).
double posterior_mean(const PosteriorState& state, int m);

// One Beta(a, b) draw; deterministic given the stream state.
double sample_beta(double a, double b, RandomStream& rng);

// Returns the updated state: alpha_m += gamma, beta_m += 1 - gamma.
PosteriorState update(PosteriorState state, int m, int gamma);

// Epsilon-greedy: with probability epsilon a uniform channel, otherwise the
// argmax of posterior means with ties broken uniformly at random.
int select_epsilon_greedy(const PosteriorState& state, double epsilon,
                          RandomStream& rng);

// Thompson sampling draw: one Beta sample per channel, argmax wins (lowest
// index on the measure-zero ties). The sample vector is exposed so the
// optimistic variants can be replayed against identical randomness.
struct TsDraw {
    int channel = 0;
    std::vector<double> samples;
};

TsDraw select_ts(const PosteriorState& state, RandomStream& rng);

// Per-channel scores as a function of a shared Thompson sample. The
// optimistic score floors the sample at the posterior mean; the
// stability-aware score applies that floor only to channels whose posterior
// mean is strictly above theta_c_hat, and falls back to the raw sample
// otherwise. By construction sample <= sbs <= obs, channelwise.
double obs_score(const PosteriorState& state, int m, double sample);
double sbs_score(const PosteriorState& state, int m, double sample,
                 double theta_c_hat);

int select_obs(const PosteriorState& state, RandomStream& rng);
int select_sbs(const PosteriorState& state, double theta_c_hat, RandomStream& rng);

enum class PolicyKind { EpsilonGreedy, ThompsonSampling, Obs, Sbs, Oracle, Fixed };

const std::string& policy_kind_name(PolicyKind kind);
std::optional<PolicyKind> policy_kind_from_name(const std::string& name);

// Declarative policy description as it appears in experiment configs.
// `epsilon` is required for EpsilonGreedy, `fixed_channel` (1-based) for
// Fixed; `theta_c_hat` optionally overrides the model-derived critical
// probability used by Sbs.
struct PolicySpec {
    PolicyKind kind = PolicyKind::ThompsonSampling;
    std::optional<double> epsilon;
    std::optional<double> theta_c_hat;
    std::optional<int> fixed_channel;
};

// A PolicySpec bound to its runtime context and ready to select channels.
// Oracle needs the identity of the best channel injected here; Sbs resolves
// its threshold against the model's critical probability unless the spec
// pins one.
class Policy {
public:
    // Throws ConfigError for a malformed spec (missing/invalid fields, or an
    // Oracle built without bank knowledge).
    static Policy make(const PolicySpec& spec, double model_theta_c,
                       std::optional<int> best_channel, int channels);

    int select(const PosteriorState& state, RandomStream& rng) const;

    PolicyKind kind() const { return spec_.kind; }
    const PolicySpec& spec() const { return spec_; }

    // Threshold actually used by Sbs selection (explicit or model-derived);
    // meaningless for other kinds.
    double effective_theta_c_hat() const { return theta_c_hat_; }

private:
    Policy() = default;

    PolicySpec spec_;
    double epsilon_ = 0.0;
    double theta_c_hat_ = 0.0;
    int target_channel_ = -1;  // 0-based, Oracle / Fixed only
};

}  // namespace remest
