#pragma once

#include <cmath>
#include <cstdint>

#include "pan/errors.hpp"

namespace pan {

// Counter-based splittable stream: output i is a hash of (key, i), so replay
// is exact and substreams derived from replicate indices are independent of
// the order in which they are consumed.  This is the SplitMix64 generator
// with a per-stream key.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : key_(mix(seed ^ 0x6a09e667f3bcc909ull)) {}

    // Independent stream for replicate/worker `idx`; deterministic in (parent seed, idx).
    Rng substream(std::uint64_t idx) const {
        Rng r(raw_tag{}, mix(key_ ^ mix(idx + 0xbb67ae8584caa73bull)));
        return r;
    }

    std::uint64_t next_u64() {
        ctr_ += 0x9e3779b97f4a7c15ull;
        return mix(key_ + ctr_);
    }

    // Uniform in [0, 1).
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform in (0, 1]; safe for log().
    double uniform_pos() { return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53; }

    // Uniform integer in [0, bound).
    std::uint64_t below(std::uint64_t bound) {
        // Lemire's multiply-shift with rejection to kill modulo bias.
        while (true) {
            std::uint64_t x = next_u64();
            __uint128_t m = static_cast<__uint128_t>(x) * bound;
            std::uint64_t lo = static_cast<std::uint64_t>(m);
            if (lo >= bound || lo >= (-bound) % bound) return static_cast<std::uint64_t>(m >> 64);
        }
    }

    double uniform(double a, double b) { return a + (b - a) * uniform(); }

    // Standard normal via Box-Muller; second value cached so a stream's
    // output sequence is a pure function of its key.
    double gaussian() {
        if (have_cached_) {
            have_cached_ = false;
            return cached_;
        }
        double u1 = uniform_pos();
        double u2 = uniform();
        double r = std::sqrt(-2.0 * std::log(u1));
        double a = 6.283185307179586476925286766559 * u2;
        cached_ = r * std::sin(a);
        have_cached_ = true;
        return r * std::cos(a);
    }

    // Exact Poisson sample: product inversion for small means, Hormann's
    // PTRS transformed rejection for large ones.
    long long poisson(double mean) {
        if (mean < 0.0 || !std::isfinite(mean)) throw domain_error("poisson: mean must be finite and >= 0");
        if (mean == 0.0) return 0;
        if (mean < 30.0) {
            const double limit = std::exp(-mean);
            long long k = 0;
            double prod = uniform_pos();
            while (prod > limit) {
                prod *= uniform_pos();
                ++k;
            }
            return k;
        }
        // PTRS (W. Hormann 1993, "The transformed rejection method for
        // generating Poisson random variables").
        const double slam = std::sqrt(mean);
        const double loglam = std::log(mean);
        const double b = 0.931 + 2.53 * slam;
        const double a = -0.059 + 0.02483 * b;
        const double invalpha = 1.1239 + 1.1328 / (b - 3.4);
        const double vr = 0.9277 - 3.6224 / (b - 2.0);
        while (true) {
            double u = uniform() - 0.5;
            double v = uniform_pos();
            double us = 0.5 - std::fabs(u);
            double kf = std::floor((2.0 * a / us + b) * u + mean + 0.43);
            if (us >= 0.07 && v <= vr) return static_cast<long long>(kf);
            if (kf < 0.0 || (us < 0.013 && v > us)) continue;
            if (std::log(v * invalpha / (a / (us * us) + b)) <=
                kf * loglam - mean - std::lgamma(kf + 1.0)) {
                return static_cast<long long>(kf);
            }
        }
    }

private:
    struct raw_tag {};
    Rng(raw_tag, std::uint64_t key) : key_(key) {}

    static std::uint64_t mix(std::uint64_t z) {
        z ^= z >> 30;
        z *= 0xbf58476d1ce4e5b9ull;
        z ^= z >> 27;
        z *= 0x94d049bb133111ebull;
        z ^= z >> 31;
        return z;
    }

    std::uint64_t key_;
    std::uint64_t ctr_ = 0;
    double cached_ = 0.0;
    bool have_cached_ = false;
};

} // namespace pan
