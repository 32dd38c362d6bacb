#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "pan/brownian.hpp"
#include "pan/estimate.hpp"
#include "pan/poisson_field.hpp"
#include "pan/potential.hpp"

namespace pan {

struct FKConfig {
    double theta = 0.0;
    double t = 1.0;
    double dt = 1e-3;
    double cap = 1e4;       // symmetric potential clamp
    long long n_paths = 1000;
    Vec3 start;
    TruncationScheme scheme;
    std::optional<Domain> domain; // survival restriction: exit => contribute 0

    void validate() const;
};

// m points exactly at the origin, window large enough for the given scheme
// and path envelope.
PoissonField planted_field(int m, double window_half_width);

// E exp{theta \int_0^t clamp(V(B_s)) ds} over n_paths, with optional survival
// indicator.  Overflow is reported as a flagged infinite estimate.
Estimate quenched_moment(const PoissonField& field, const FKConfig& cfg, std::uint64_t seed);

// Same paths re-integrated under each clamp (pathwise-coupled across caps).
std::vector<Estimate> cap_sweep(const PoissonField& field, const std::vector<double>& caps,
                                const FKConfig& cfg, std::uint64_t seed);

struct GrowthRate {
    double exponent = 0.0;
    double residual = 0.0; // max abs deviation of the fit
};

// Least-squares slope of log(log-moment) against log t.
GrowthRate growth_rate(const std::vector<std::pair<double, double>>& log_moments);

struct FKEigenResult {
    Estimate mc_integral;
    double bound = 0.0;
    double lambda = 0.0; // principal eigenvalue on the ball
    double K = 0.0;      // sup of zeta over B(0, 2R)
};

// MC estimate of \int_{B(0,R)} E_x[exp{\int_0^t zeta(B_s) ds}; T_R >= t] dx
// against the lower bound (2 pi t0)^{3/2} e^{-t0 K} e^{(t+t0) lambda}.
FKEigenResult fk_eigen_consistency(const std::function<double(const Vec3&)>& zeta, double R,
                                   double t, double t0, double dt, long long n_paths, int grid_n,
                                   std::uint64_t seed);

} // namespace pan
