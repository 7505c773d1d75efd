#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace remest {

// SplitMix64 finalizer. Used for deriving well-separated stream seeds from
// (master seed, policy ordinal, run index) so that Monte Carlo cells can be
// executed in any order, on any number of workers, with identical results.
constexpr std::uint64_t splitmix64_mix(std::uint64_t x) noexcept {
    x ^= x >> 30;
    x *= 0xBF58476D1CE4E5B9ULL;
    x ^= x >> 27;
    x *= 0x94D049BB133111EBULL;
    x ^= x >> 31;
    return x;
}

constexpr std::uint64_t derive_stream_seed(std::uint64_t master_seed,
                                           std::uint64_t policy_ordinal,
                                           std::uint64_t run_index) noexcept {
    return splitmix64_mix(master_seed ^ splitmix64_mix(policy_ordinal) ^
                          splitmix64_mix(run_index * 0x9E3779B97F4A7C15ULL));
}

// One random stream, owned by exactly one Monte Carlo run (never shared
// across threads). The engine is std::mt19937_64, which the standard pins
// down bit-for-bit; the distribution transforms below are spelled out here
// instead of using std::*_distribution so that draw sequences do not depend
// on the standard library implementation.
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_bits() { return engine_(); }

    // Uniform on [0, 1), 53-bit resolution.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    // Uniform integer in {0, ..., n-1}. n is tiny here (channel counts), so
    // the floor construction is adequate.
    int uniform_index(int n) {
        int idx = static_cast<int>(uniform() * static_cast<double>(n));
        return idx < n ? idx : n - 1;
    }

    // One Bernoulli(p) trial; strict comparison direction fixed for
    // reproducibility.
    int bernoulli(double p) { return uniform() < p ? 1 : 0; }

    // Standard normal via the Marsaglia polar method, second variate cached.
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u, v, s;
        do {
            u = 2.0 * uniform() - 1.0;
            v = 2.0 * uniform() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double factor = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * factor;
        has_spare_ = true;
        return u * factor;
    }

    // Gamma(shape, 1) via the Marsaglia-Tsang squeeze method. Shapes below 1
    // are lifted with the standard power-of-uniform boost.
    double gamma(double shape) {
        if (shape < 1.0) {
            const double u = uniform();
            return gamma(shape + 1.0) * std::pow(u, 1.0 / shape);
        }
        const double d = shape - 1.0 / 3.0;
        const double c = 1.0 / std::sqrt(9.0 * d);
        for (;;) {
            double x, v;
            do {
                x = normal();
                v = 1.0 + c * x;
            } while (v <= 0.0);
            v = v * v * v;
            const double u = uniform();
            const double x2 = x * x;
            if (u < 1.0 - 0.0331 * x2 * x2) return d * v;
            if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v;
        }
    }

    // Beta(a, b) from two gamma variates.
    double beta(double a, double b) {
        const double x = gamma(a);
        const double y = gamma(b);
        return x / (x + y);
    }

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace remest
