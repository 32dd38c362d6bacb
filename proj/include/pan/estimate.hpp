#pragma once

#include <cmath>
#include <cstdint>

namespace pan {

// Monte Carlo result.  `diverged` marks overflow of the underlying weights
// (blow-up regimes are reported, not thrown).
struct Estimate {
    double mean = 0.0;
    double stderr_ = 0.0;
    long long n = 0;
    std::uint64_t seed = 0;
    bool diverged = false;
};

// Streaming mean/variance accumulator (Welford).
class Accumulator {
public:
    void add(double x) {
        ++n_;
        double d = x - mean_;
        mean_ += d / static_cast<double>(n_);
        m2_ += d * (x - mean_);
    }

    Estimate estimate(std::uint64_t seed) const {
        Estimate e;
        e.mean = mean_;
        e.n = n_;
        e.seed = seed;
        if (n_ > 1) {
            double var = m2_ / static_cast<double>(n_ - 1);
            e.stderr_ = var > 0.0 ? std::sqrt(var / static_cast<double>(n_)) : 0.0;
        }
        return e;
    }

    long long count() const { return n_; }
    double mean() const { return mean_; }

private:
    long long n_ = 0;
    double mean_ = 0.0;
    double m2_ = 0.0;
};

} // namespace pan
