#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "pan/geometry.hpp"
#include "pan/poisson_field.hpp"
#include "pan/rng.hpp"

namespace pan {

// Smoothstep-based cutoff: 1 on [0,1], 0 on [3,inf), C^1, derivative in [-3/4, 0].
struct CutoffProfile {
    static double alpha(double lambda);
    static double alpha_prime(double lambda);
};

enum class TailPolicy { drop, gaussian_surrogate };

// Truncation/evaluation parameters for the compensated potential.
struct TruncationScheme {
    double a = 1.0;           // truncation radius
    double epsilon = 1.0;     // compensator intensity scale
    double p = 2.0;           // kernel exponent, d/2 < p < d with d = 3
    double tail_radius = 4.0; // evaluation window radius around x (>= 3a)
    TailPolicy tail_policy = TailPolicy::drop;

    void validate() const;
};

struct PotentialValue {
    double value = 0.0;
    double tail_std = 0.0; // std dev of the dropped far-field contribution at unit intensity
};

// (1 - alpha(|x|/a)) / |x|^p : 0 inside radius a, exactly |x|^{-p} beyond 3a.
double kernel_La(const Vec3& x, const TruncationScheme& scheme);

// C_a = \int alpha(|x|/a)/|x|^2 dx = 4 pi a \int_0^inf alpha.
double compensator_Ca(double a);

// \int_{|y|<=rho} L_a(y) dy by adaptive radial quadrature.
double kernel_ball_integral(const TruncationScheme& scheme, double rho);

// sqrt(\int_{|y|>rho} L_a(y)^2 dy) in closed form (kernel is |y|^{-p} out there).
double tail_std_of(const TruncationScheme& scheme);

// Local singular part: sum of alpha(|y-x|/a)/|y-x|^2 over field points.
// A point exactly at x yields +infinity.
double eval_singular_local(const PoissonField& field, const Vec3& x, const TruncationScheme& scheme);

// Compensated truncated field: sum of L_a(x-y) minus epsilon * window integral of L_a.
// tail_rng is required (and consumed) only for TailPolicy::gaussian_surrogate.
PotentialValue eval_truncated_field(const PoissonField& field, const Vec3& x,
                                    const TruncationScheme& scheme, Rng* tail_rng = nullptr);

// Renormalized potential via the decomposition: truncated + singular - epsilon*C_a.
PotentialValue eval_renormalized(const PoissonField& field, const Vec3& x,
                                 const TruncationScheme& scheme, Rng* tail_rng = nullptr);

// Exact MGF of the truncated field at the origin:
// exp{ epsilon * 4 pi \int_0^inf Psi(theta L_a(r)) r^2 dr },  Psi(l) = e^l - 1 - l.
double truncated_mgf_exact(double theta, const TruncationScheme& scheme);

// (log R)^{-1} sup over sampled |x|<=R of |field value|, one entry per R.
std::vector<std::pair<double, double>> sup_field_decay_probe(double a,
                                                             const std::vector<double>& R_list,
                                                             long long samples_per_R,
                                                             std::uint64_t seed);

} // namespace pan
