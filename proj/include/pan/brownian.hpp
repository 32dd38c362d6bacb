#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "pan/estimate.hpp"
#include "pan/geometry.hpp"
#include "pan/rng.hpp"

namespace pan {

// Discrete-time Brownian path.  steps = ceil(t/dt); the final increment is
// shortened so the last position sits exactly at time t.
struct BrownianPath {
    Vec3 start;
    double dt = 0.0;
    double t = 0.0;
    long long steps = 0;
    std::vector<Vec3> positions; // length steps + 1

    // Time of grid index i (the last index maps to exactly t).
    double time_of(long long i) const { return i >= steps ? t : i * dt; }
};

struct Domain {
    enum class Shape { ball, box } shape = Shape::ball;
    double size = 1.0; // ball radius or box half-width, centered at origin

    bool inside(const Vec3& p) const {
        return shape == Shape::ball ? p.norm2() <= size * size : p.norm_inf() <= size;
    }
};

BrownianPath sample_path(const Vec3& start, double t, double dt, Rng& rng);

// Standard bridge on [0,1] from and to the origin: B_s - s B_1.
BrownianPath sample_bridge(double dt, Rng& rng);

// First grid time strictly outside the closed domain; nullopt if none.
std::optional<double> first_exit(const BrownianPath& path, const Domain& domain);

struct ExitBoundResult {
    Estimate lhs; // P(B_t in A, max |B_s| <= 2R)
    Estimate rhs; // P(B_t in A ∩ B(0,R)) * P(max |B^0_s| <= R t^{-1/2})
};

ExitBoundResult exit_lower_bound_check(double R, double t, const Box& target_set,
                                       long long replicates, double dt, std::uint64_t seed);

} // namespace pan
