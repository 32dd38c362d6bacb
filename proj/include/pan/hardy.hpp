#pragma once

#include <vector>

namespace pan {

// Radial profile g(r) on an increasing grid starting at r=0, normalized on
// construction so that 4 pi \int g^2 r^2 dr = 1 (trapezoid on the grid).
// Values are kept in extended precision: the normalized near-optimizer family
// spans far beyond the double exponent range.
class RadialProfile {
public:
    RadialProfile(std::vector<double> grid, std::vector<double> values);
    RadialProfile(std::vector<double> grid, std::vector<long double> values);

    const std::vector<double>& grid() const { return grid_; }
    const std::vector<long double>& values() const { return values_; }

private:
    std::vector<double> grid_;
    std::vector<long double> values_;
};

// [\int g^2 dr] / [\int g'^2 r^2 dr]  (the 4 pi factors cancel); <= 4 up to
// grid error by the sharp Hardy inequality.
double hardy_ratio(const RadialProfile& profile);

// The explicit near-optimizer family: M^{1/2} on [0, 1/M], r^{-1/2} on
// [1/M, M], (2M - r)/M^{3/2} on [M, 2M], 0 beyond.  Geometric grid with the
// breakpoints inserted exactly.
RadialProfile g_M_profile(double log_M, int grid_n);

// Exact (pre-normalization) g_M value at radius r.
double g_M_value(double log_M, double r);

struct GMRatio {
    double quadrature = 0.0;
    double closed_form = 0.0;
};

// closed_form = 4 - 28 (7/3 + log(M)/2)^{-1}.
GMRatio hardy_ratio_gM(double log_M, int grid_n);

// Largest eigenvalue of (1/2) u'' + theta (x+delta)^{-2} on (0, r) with
// Dirichlet ends: the radial reduction u = r g of the ball functional.
double H_functional(double theta, double r, double delta, int grid_n);

enum class Dichotomy { zero, infinite };

// sup over r, delta -> 0 of the functional: zero iff theta <= 1/8.
Dichotomy H_dichotomy(double theta);

struct ScalingCheck {
    double value = 0.0;
    double scaled_value = 0.0; // should equal a^2 * value
};

// F(g) = theta \int g^2/|x|^2 - (1/2) \int |grad g|^2 for the profile and for
// its rescaling g_a(x) = a^{3/2} g(a x).
ScalingCheck scaling_identity_check(const RadialProfile& profile, double theta, double a);

} // namespace pan
