// Channel-selection policies: posterior bookkeeping, the four bandit rules,
// their score orderings, and the declarative policy factory.
#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include "remest/channel_bank.hpp"
#include "remest/errors.hpp"
#include "remest/policies.hpp"
#include "remest/rng.hpp"

using namespace remest;

namespace {

// Builds a posterior with pinned pseudo-counts, for deterministic means.
PosteriorState state_with(std::vector<double> alpha, std::vector<double> beta) {
    PosteriorState state(static_cast<int>(alpha.size()));
    state.alpha = std::move(alpha);
    state.beta = std::move(beta);
    return state;
}

std::vector<int> selection_histogram(int channels, int rounds,
                                     const std::function<int()>& pick) {
    std::vector<int> counts(static_cast<std::size_t>(channels), 0);
    for (int i = 0; i < rounds; ++i) ++counts[static_cast<std::size_t>(pick())];
    return counts;
}

}  // namespace

// =============================================================================
// Posterior state
// =============================================================================

TEST(Posterior, FreshStateIsUniform) {
    const PosteriorState state(4);
    EXPECT_EQ(state.channels(), 4);
    for (int m = 0; m < 4; ++m) {
        EXPECT_DOUBLE_EQ(state.alpha[static_cast<std::size_t>(m)], 1.0);
        EXPECT_DOUBLE_EQ(state.beta[static_cast<std::size_t>(m)], 1.0);
        EXPECT_DOUBLE_EQ(posterior_mean(state, m), 0.5);
    }
}

TEST(Posterior, UpdateMovesExactlyOneChannel) {
    PosteriorState state(3);
    state = update(std::move(state), 1, 1);
    EXPECT_DOUBLE_EQ(state.alpha[1], 2.0);
    EXPECT_DOUBLE_EQ(state.beta[1], 1.0);
    EXPECT_DOUBLE_EQ(posterior_mean(state, 1), 2.0 / 3.0);

    state = update(std::move(state), 1, 0);
    EXPECT_DOUBLE_EQ(state.alpha[1], 2.0);
    EXPECT_DOUBLE_EQ(state.beta[1], 2.0);
    EXPECT_DOUBLE_EQ(posterior_mean(state, 1), 0.5);

    // Untouched channels still at the prior.
    EXPECT_DOUBLE_EQ(posterior_mean(state, 0), 0.5);
    EXPECT_DOUBLE_EQ(posterior_mean(state, 2), 0.5);
}

TEST(Posterior, PseudoCountMassGrowsByOnePerStep) {
    RandomStream rng(30);
    PosteriorState state(4);
    const int steps = 250;
    for (int k = 0; k < steps; ++k)
        state = update(std::move(state), rng.uniform_index(4), rng.bernoulli(0.5));
    double mass = 0.0;
    for (int m = 0; m < 4; ++m)
        mass += state.alpha[static_cast<std::size_t>(m)] +
                state.beta[static_cast<std::size_t>(m)];
    EXPECT_DOUBLE_EQ(mass, 2.0 * 4 + steps);
}

TEST(Posterior, SuccessRunExample) {
    // Ten successes then five failures on one channel: mean 11/17.
    PosteriorState state(2);
    for (int i = 0; i < 10; ++i) state = update(std::move(state), 0, 1);
    for (int i = 0; i < 5; ++i) state = update(std::move(state), 0, 0);
    EXPECT_DOUBLE_EQ(state.alpha[0], 11.0);
    EXPECT_DOUBLE_EQ(state.beta[0], 6.0);
    EXPECT_DOUBLE_EQ(posterior_mean(state, 0), 11.0 / 17.0);
}

TEST(Posterior, ValidatesArguments) {
    PosteriorState state(2);
    EXPECT_THROW(posterior_mean(state, 2), std::out_of_range);
    EXPECT_THROW(update(PosteriorState(2), -1, 1), std::out_of_range);
    EXPECT_THROW(update(PosteriorState(2), 0, 2), std::invalid_argument);
    RandomStream rng(31);
    EXPECT_THROW(sample_beta(0.0, 1.0, rng), std::invalid_argument);
    EXPECT_THROW(sample_beta(1.0, -1.0, rng), std::invalid_argument);
}

TEST(Posterior, SampleBetaTracksTheMean) {
    RandomStream rng(32);
    const int n = 50000;
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
        const double x = sample_beta(20.0, 10.0, rng);
        ASSERT_GT(x, 0.0);
        ASSERT_LT(x, 1.0);
        sum += x;
    }
    EXPECT_NEAR(sum / n, 20.0 / 30.0, 0.005);
}

// =============================================================================
// Epsilon-greedy selection
// =============================================================================

TEST(EpsilonGreedy, FreshStateSelectsUniformly) {
    // All posterior means tie, so both branches land uniform.
    RandomStream rng(33);
    const PosteriorState state(4);
    const int rounds = 100000;
    const auto counts = selection_histogram(
        4, rounds, [&] { return select_epsilon_greedy(state, 0.12, rng); });
    for (const int c : counts) {
        // 4-sigma multinomial band around rounds / 4.
        EXPECT_NEAR(static_cast<double>(c) / rounds, 0.25,
                    4.0 * std::sqrt(0.25 * 0.75 / rounds));
    }
}

TEST(EpsilonGreedy, ExploitsTheUniqueBestMean) {
    // Means (0.75, 0.5, 0.5, 0.5): exploitation always picks channel 0, so
    // P(channel 0) = (1 - eps) + eps / M.
    RandomStream rng(34);
    const PosteriorState state = state_with({3, 1, 1, 1}, {1, 1, 1, 1});
    const double eps = 0.12;
    const int rounds = 100000;
    const auto counts = selection_histogram(
        4, rounds, [&] { return select_epsilon_greedy(state, eps, rng); });
    const double p0 = (1.0 - eps) + eps / 4.0;  // 0.91
    EXPECT_NEAR(static_cast<double>(counts[0]) / rounds, p0,
                4.0 * std::sqrt(p0 * (1.0 - p0) / rounds));
    for (int m = 1; m < 4; ++m) {
        EXPECT_NEAR(static_cast<double>(counts[static_cast<std::size_t>(m)]) / rounds,
                    eps / 4.0, 4.0 * std::sqrt(0.03 * 0.97 / rounds));
    }
}

TEST(EpsilonGreedy, TieBreaksUniformlyAmongExactMaximizers) {
    // Channels 0 and 2 share the best mean; 1 and 3 are strictly worse and
    // can only be reached by exploration.
    RandomStream rng(35);
    const PosteriorState state = state_with({3, 1, 3, 1}, {1, 3, 1, 3});
    const double eps = 0.2;
    const int rounds = 100000;
    const auto counts = selection_histogram(
        4, rounds, [&] { return select_epsilon_greedy(state, eps, rng); });
    const double p_best = (1.0 - eps) / 2.0 + eps / 4.0;  // 0.45
    const double p_rest = eps / 4.0;                      // 0.05
    EXPECT_NEAR(static_cast<double>(counts[0]) / rounds, p_best, 0.0075);
    EXPECT_NEAR(static_cast<double>(counts[2]) / rounds, p_best, 0.0075);
    EXPECT_NEAR(static_cast<double>(counts[1]) / rounds, p_rest, 0.0035);
    EXPECT_NEAR(static_cast<double>(counts[3]) / rounds, p_rest, 0.0035);
}

TEST(EpsilonGreedy, RejectsOutOfRangeRate) {
    RandomStream rng(36);
    const PosteriorState state(2);
    EXPECT_THROW(select_epsilon_greedy(state, -0.1, rng), std::invalid_argument);
    EXPECT_THROW(select_epsilon_greedy(state, 1.1, rng), std::invalid_argument);
}

// =============================================================================
// Thompson sampling
// =============================================================================

TEST(ThompsonSampling, ChannelIsArgmaxOfExposedSamples) {
    RandomStream rng(37);
    PosteriorState state = state_with({5, 2, 9}, {3, 4, 1});
    for (int i = 0; i < 1000; ++i) {
        const TsDraw draw = select_ts(state, rng);
        ASSERT_EQ(draw.samples.size(), 3u);
        const auto it = std::max_element(draw.samples.begin(), draw.samples.end());
        EXPECT_EQ(draw.channel,
                  static_cast<int>(std::distance(draw.samples.begin(), it)));
    }
}

TEST(ThompsonSampling, FreshStateSelectsUniformly) {
    RandomStream rng(38);
    const PosteriorState state(4);
    const int rounds = 100000;
    const auto counts = selection_histogram(
        4, rounds, [&] { return select_ts(state, rng).channel; });
    for (const int c : counts) {
        EXPECT_NEAR(static_cast<double>(c) / rounds, 0.25,
                    4.0 * std::sqrt(0.25 * 0.75 / rounds));
    }
}

TEST(ThompsonSampling, ConcentratedPosteriorDominates) {
    // Channel 1 has observed a million successes; its sample is essentially
    // its mean and beats the diffuse competitor nearly always.
    RandomStream rng(39);
    const PosteriorState state = state_with({1, 1e6}, {1, 1});
    int second = 0;
    const int rounds = 10000;
    for (int i = 0; i < rounds; ++i) second += select_ts(state, rng).channel;
    EXPECT_GT(static_cast<double>(second) / rounds, 0.999);
}

// =============================================================================
// Optimistic and stability-aware scores
// =============================================================================

TEST(Scores, OptimisticFloorsAtTheMean) {
    const PosteriorState state = state_with({3, 1}, {1, 1});  // means 0.75, 0.5
    EXPECT_DOUBLE_EQ(obs_score(state, 0, 0.2), 0.75);  // lifted to the mean
    EXPECT_DOUBLE_EQ(obs_score(state, 0, 0.9), 0.9);   // sample already higher
    EXPECT_DOUBLE_EQ(obs_score(state, 1, 0.5), 0.5);
}

TEST(Scores, StabilityAwareAppliesFloorOnlyAboveThreshold) {
    const PosteriorState state = state_with({3, 1}, {1, 1});  // means 0.75, 0.5
    const double theta_c_hat = 0.6;
    // Channel 0: mean 0.75 > 0.6, so it gets the optimistic floor.
    EXPECT_DOUBLE_EQ(sbs_score(state, 0, 0.2, theta_c_hat), 0.75);
    // Channel 1: mean 0.5 <= 0.6, so the raw sample passes through.
    EXPECT_DOUBLE_EQ(sbs_score(state, 1, 0.2, theta_c_hat), 0.2);
    // Threshold comparison is strict: mean exactly at the threshold gets none.
    EXPECT_DOUBLE_EQ(sbs_score(state, 1, 0.3, 0.5), 0.3);
}

TEST(Scores, SandwichHoldsForEverySharedSample) {
    // sample <= sbs <= obs channelwise, for random posteriors and samples.
    RandomStream rng(40);
    for (int trial = 0; trial < 10000; ++trial) {
        const int M = 2 + rng.uniform_index(4);
        PosteriorState state(M);
        for (int m = 0; m < M; ++m) {
            state.alpha[static_cast<std::size_t>(m)] = 1.0 + rng.uniform_index(40);
            state.beta[static_cast<std::size_t>(m)] = 1.0 + rng.uniform_index(40);
        }
        const double theta_c_hat = rng.uniform() * 0.99;
        for (int m = 0; m < M; ++m) {
            const double sample = rng.uniform();
            const double sbs = sbs_score(state, m, sample, theta_c_hat);
            const double obs = obs_score(state, m, sample);
            ASSERT_LE(sample, sbs);
            ASSERT_LE(sbs, obs);
        }
    }
}

TEST(Scores, ThresholdExtremesCollapseTheVariants) {
    // theta_c_hat = 0 puts every channel above threshold (all means > 0), so
    // the stability-aware score equals the optimistic one; a threshold above
    // every mean turns it into plain Thompson scoring.
    RandomStream rng(41);
    const PosteriorState state = state_with({3, 5, 2}, {2, 1, 6});
    for (int trial = 0; trial < 1000; ++trial) {
        for (int m = 0; m < 3; ++m) {
            const double sample = rng.uniform();
            EXPECT_DOUBLE_EQ(sbs_score(state, m, sample, 0.0),
                             obs_score(state, m, sample));
            EXPECT_DOUBLE_EQ(sbs_score(state, m, sample, 0.99), sample);
        }
    }
}

TEST(Selection, SbsValidatesThreshold) {
    RandomStream rng(42);
    const PosteriorState state(2);
    EXPECT_THROW(select_sbs(state, -0.1, rng), std::invalid_argument);
    EXPECT_THROW(select_sbs(state, 1.0, rng), std::invalid_argument);
}

// =============================================================================
// Policy kinds and the factory
// =============================================================================

TEST(PolicyKinds, NamesRoundTrip) {
    for (PolicyKind kind :
         {PolicyKind::EpsilonGreedy, PolicyKind::ThompsonSampling, PolicyKind::Obs,
          PolicyKind::Sbs, PolicyKind::Oracle, PolicyKind::Fixed}) {
        const auto parsed = policy_kind_from_name(policy_kind_name(kind));
        ASSERT_TRUE(parsed.has_value());
        EXPECT_EQ(*parsed, kind);
    }
    EXPECT_EQ(policy_kind_name(PolicyKind::EpsilonGreedy), "epsilon-greedy");
    EXPECT_EQ(policy_kind_name(PolicyKind::ThompsonSampling), "ts");
    EXPECT_FALSE(policy_kind_from_name("greedy").has_value());
}

TEST(PolicyFactory, RejectsMalformedSpecs) {
    PolicySpec spec;

    spec.kind = PolicyKind::EpsilonGreedy;
    EXPECT_THROW(Policy::make(spec, 0.5, 0, 4), ConfigError);  // missing rate
    spec.epsilon = 1.0;
    EXPECT_THROW(Policy::make(spec, 0.5, 0, 4), ConfigError);  // not in (0,1)

    spec = PolicySpec{};
    spec.kind = PolicyKind::ThompsonSampling;
    spec.epsilon = 0.1;  // irrelevant option for this kind
    EXPECT_THROW(Policy::make(spec, 0.5, 0, 4), ConfigError);

    spec = PolicySpec{};
    spec.kind = PolicyKind::Obs;
    spec.theta_c_hat = 0.5;
    EXPECT_THROW(Policy::make(spec, 0.5, 0, 4), ConfigError);

    spec = PolicySpec{};
    spec.kind = PolicyKind::Fixed;
    EXPECT_THROW(Policy::make(spec, 0.5, 0, 4), ConfigError);  // missing channel
    spec.fixed_channel = 5;
    EXPECT_THROW(Policy::make(spec, 0.5, 0, 4), ConfigError);  // out of range
    spec.fixed_channel = 0;
    EXPECT_THROW(Policy::make(spec, 0.5, 0, 4), ConfigError);  // 1-based input

    spec = PolicySpec{};
    spec.kind = PolicyKind::Oracle;
    EXPECT_THROW(Policy::make(spec, 0.5, std::nullopt, 4), ConfigError);

    spec = PolicySpec{};
    spec.kind = PolicyKind::Sbs;
    spec.theta_c_hat = 1.0;
    EXPECT_THROW(Policy::make(spec, 0.5, 0, 4), ConfigError);
}

TEST(PolicyFactory, ErrorsCarryTheFieldName) {
    PolicySpec spec;
    spec.kind = PolicyKind::ThompsonSampling;
    spec.epsilon = 0.1;
    try {
        Policy::make(spec, 0.5, 0, 4);
        FAIL() << "expected ConfigError";
    } catch (const ConfigError& e) {
        EXPECT_EQ(e.field(), "epsilon");
        EXPECT_NE(std::string(e.what()).find("epsilon-greedy"), std::string::npos);
    }
}

TEST(PolicyFactory, SbsThresholdDefaultsToModelValue) {
    PolicySpec spec;
    spec.kind = PolicyKind::Sbs;
    const Policy derived = Policy::make(spec, 0.42, 0, 4);
    EXPECT_DOUBLE_EQ(derived.effective_theta_c_hat(), 0.42);

    spec.theta_c_hat = 0.3;
    const Policy pinned = Policy::make(spec, 0.42, 0, 4);
    EXPECT_DOUBLE_EQ(pinned.effective_theta_c_hat(), 0.3);
}

TEST(PolicyFactory, OracleAndFixedSelectTheirTarget) {
    RandomStream rng(43);
    const PosteriorState state(4);

    PolicySpec spec;
    spec.kind = PolicyKind::Oracle;
    const Policy oracle = Policy::make(spec, 0.5, 2, 4);
    for (int i = 0; i < 100; ++i) EXPECT_EQ(oracle.select(state, rng), 2);

    spec = PolicySpec{};
    spec.kind = PolicyKind::Fixed;
    spec.fixed_channel = 4;  // 1-based in the spec, 0-based at selection
    const Policy fixed = Policy::make(spec, 0.5, std::nullopt, 4);
    for (int i = 0; i < 100; ++i) EXPECT_EQ(fixed.select(state, rng), 3);
}

TEST(PolicyFactory, DispatchMatchesFreeFunctions) {
    // The bound policy replays the same stream as the free selection calls.
    const PosteriorState state = state_with({5, 2, 9, 1}, {3, 4, 1, 2});

    PolicySpec spec;
    spec.kind = PolicyKind::ThompsonSampling;
    const Policy ts_policy = Policy::make(spec, 0.5, 0, 4);
    RandomStream a(44), b(44);
    for (int i = 0; i < 200; ++i)
        EXPECT_EQ(ts_policy.select(state, a), select_ts(state, b).channel);

    spec = PolicySpec{};
    spec.kind = PolicyKind::Sbs;
    spec.theta_c_hat = 0.55;
    const Policy sbs_policy = Policy::make(spec, 0.9, 0, 4);
    RandomStream c(45), d(45);
    for (int i = 0; i < 200; ++i)
        EXPECT_EQ(sbs_policy.select(state, c), select_sbs(state, 0.55, d));
}

// =============================================================================
// Closed-loop consistency
// =============================================================================

namespace {

// Plays a selection rule against a real bank for `steps`, returning the
// final posterior and pull counts.
struct PlayResult {
    PosteriorState state;
    std::vector<long> pulls;
};

template <typename Select>
PlayResult play(const ChannelBank& bank, int steps, RandomStream& rng,
                const Select& select) {
    PlayResult result{PosteriorState(bank.size()),
                      std::vector<long>(static_cast<std::size_t>(bank.size()), 0)};
    for (int k = 0; k < steps; ++k) {
        const int m = select(result.state, rng);
        const int gamma = bank.draw(m, rng);
        result.state = update(std::move(result.state), m, gamma);
        ++result.pulls[static_cast<std::size_t>(m)];
    }
    return result;
}

}  // namespace

TEST(ClosedLoop, SamplingPoliciesLearnTheBestChannel) {
    const ChannelBank bank({0.8, 0.4, 0.3, 0.2});
    RandomStream rng(46);
    const auto ts_pick = [&](const PosteriorState& s, RandomStream& r) {
        return select_ts(s, r).channel;
    };
    const auto obs_pick = [&](const PosteriorState& s, RandomStream& r) {
        return select_obs(s, r);
    };
    const auto sbs_pick = [&](const PosteriorState& s, RandomStream& r) {
        return select_sbs(s, 0.52, r);
    };
    const auto check = [&](const PlayResult& result) {
        // The best channel dominates the pull counts...
        const auto it = std::max_element(result.pulls.begin(), result.pulls.end());
        EXPECT_EQ(std::distance(result.pulls.begin(), it), 0);
        // ...and its posterior mean is close to the truth.
        EXPECT_NEAR(posterior_mean(result.state, 0), 0.8, 0.05);
        // Every channel was tried at least once.
        for (const long p : result.pulls) EXPECT_GE(p, 1);
    };
    check(play(bank, 10000, rng, ts_pick));
    check(play(bank, 10000, rng, obs_pick));
    check(play(bank, 10000, rng, sbs_pick));
}

TEST(ClosedLoop, DeterministicGivenSeed) {
    const ChannelBank bank({0.7, 0.5, 0.3});
    RandomStream a(47), b(47);
    const auto pick = [](const PosteriorState& s, RandomStream& r) {
        return select_obs(s, r);
    };
    const PlayResult ra = play(bank, 2000, a, pick);
    const PlayResult rb = play(bank, 2000, b, pick);
    EXPECT_EQ(ra.pulls, rb.pulls);
    EXPECT_EQ(ra.state.alpha, rb.state.alpha);
    EXPECT_EQ(ra.state.beta, rb.state.beta);
}
