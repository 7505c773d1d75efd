#pragma once

#include <vector>

#include "remest/rng.hpp"

namespace remest {

// Bank of M i.i.d. Bernoulli packet-loss channels. Immutable after
// construction; reception probabilities must be pairwise distinct so the
// best channel is unique.
class ChannelBank {
public:
    // Throws std::invalid_argument if fewer than two channels, any theta is
    // outside [0, 1], or two thetas are closer than 1e-12.
    explicit ChannelBank(std::vector<double> thetas);

    int size() const { return static_cast<int>(thetas_.size()); }
    const std::vector<double>& thetas() const { return thetas_; }
    double theta(int m) const;

    int best_channel() const { return m_star_; }
    double theta_star() const { return theta_star_; }
    double theta_worst() const { return theta_worst_; }
    double theta_mean() const { return theta_mean_; }

    // One transmission attempt on channel m: 1 with probability theta_m.
    int draw(int m, RandomStream& rng) const;

    // Condition for the remote estimator to be stabilizable at all:
    // theta* strictly above the critical probability.
    bool is_stabilizable(double theta_c) const { return theta_star_ > theta_c; }

private:
    std::vector<double> thetas_;
    int m_star_ = 0;
    double theta_star_ = 0.0;
    double theta_worst_ = 0.0;
    double theta_mean_ = 0.0;
};

}  // namespace remest
