#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace pan {

// Built-in slowly varying families l(t), plus a tabulated fallback.
enum class SvFamily { constant, log_pow, loglog_pow, log_times_loglog_pow, custom_table };

struct SlowlyVaryingSpec {
    SvFamily family = SvFamily::constant;
    double exponent = 1.0; // the power `a` where applicable
    double value = 1.0;    // constant-family value
    std::vector<std::pair<double, double>> table; // (t, l(t)), increasing t

    double eval(double t) const;
};

enum class Branch { zero, infinite, inconclusive };
enum class Side { limsup, liminf };

struct RateVerdict {
    int k = 0;
    double time_exponent = 0.0; // (k+1)/(k-1)
    double l_exponent = 0.0;    // 2/(3(k-1))
    Branch branch = Branch::inconclusive;
};

// floor((8 theta)^{-1}) for theta in (0, 1/16); boundary-inclusive against
// floating point (1/24 -> 3).
int k_of_theta(double theta);

// floor(kappa / (4 theta)) for 0 < theta < kappa/8.
long long anderson_index(double theta, double kappa);

// Convergence of \int_1^inf dt/(t l(t)):  convergent -> zero, divergent -> infinite.
Branch limsup_integral_test(const SlowlyVaryingSpec& l);

// Exists c>0 with \int_1^inf t^{-1} e^{-c l(t)} dt = inf  -> zero; else infinite.
Branch liminf_integral_test(const SlowlyVaryingSpec& l);

// Finite-horizon quadrature versions; report inconclusive instead of guessing.
Branch limsup_integral_test_numeric(const SlowlyVaryingSpec& l, double horizon = 1e12);
Branch liminf_integral_test_numeric(const SlowlyVaryingSpec& l, double horizon = 1e12);

// t^{(k+1)/(k-1)} l(t)^{+-2/(3(k-1))}; plus sign for limsup, minus for liminf.
double predicted_normalization(double theta, const SlowlyVaryingSpec& l, double t, Side side);

RateVerdict rate_verdict(double theta, const SlowlyVaryingSpec& l, Side side);

struct ExtremeRow {
    int n = 0;
    long long cells = 0;
    double cell_volume = 0.0;
    double p_emp = 0.0;
    double p_exact = 0.0;
    double stderr_ = 0.0;
};

struct ExtremeResult {
    std::vector<ExtremeRow> rows;
    double slope_exact = 0.0; // least-squares log2 slope of p_exact vs n
};

// P(max cell count >= 3) over the lattice of ball cells B(2^{-n} z, 2^{-n} delta),
// z in 2r Z^3 with |z| <= delta 2^{2n} - r, at unit intensity.
ExtremeResult extreme_scaling_experiment(int n_min, int n_max, double delta, double r,
                                         long long replicates, std::uint64_t seed);

} // namespace pan
