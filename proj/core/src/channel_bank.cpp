#include "remest/channel_bank.hpp"

#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace remest {

ChannelBank::ChannelBank(std::vector<double> thetas) : thetas_(std::move(thetas)) {
    const int M = size();
    if (M < 2) throw std::invalid_argument("channel bank needs at least two channels");
    for (int m = 0; m < M; ++m) {
        const double t = thetas_[m];
        if (!(t >= 0.0 && t <= 1.0)) {
            std::ostringstream msg;
            msg << "reception probability " << t << " at channel " << (m + 1)
                << " is outside [0, 1]";
            throw std::invalid_argument(msg.str());
        }
    }
    for (int i = 0; i < M; ++i) {
        for (int j = i + 1; j < M; ++j) {
            if (std::abs(thetas_[i] - thetas_[j]) < 1e-12) {
                std::ostringstream msg;
                msg << "reception probabilities of channels " << (i + 1) << " and "
                    << (j + 1) << " are not distinct";
                throw std::invalid_argument(msg.str());
            }
        }
    }
    m_star_ = 0;
    theta_star_ = thetas_[0];
    theta_worst_ = thetas_[0];
    for (int m = 1; m < M; ++m) {
        if (thetas_[m] > theta_star_) {
            theta_star_ = thetas_[m];
            m_star_ = m;
        }
        if (thetas_[m] < theta_worst_) theta_worst_ = thetas_[m];
    }
    theta_mean_ =
        std::accumulate(thetas_.begin(), thetas_.end(), 0.0) / static_cast<double>(M);
}

double ChannelBank::theta(int m) const {
    if (m < 0 || m >= size()) throw std::out_of_range("channel index out of range");
    return thetas_[static_cast<std::size_t>(m)];
}

int ChannelBank::draw(int m, RandomStream& rng) const {
    if (m < 0 || m >= size()) throw std::out_of_range("channel index out of range");
    return rng.bernoulli(thetas_[static_cast<std::size_t>(m)]);
}

}  // namespace remest
