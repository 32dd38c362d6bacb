#include "pan/hardy.hpp"

#include <cmath>
#include <utility>

#include "pan/errors.hpp"
#include "pan/spectral.hpp"

namespace pan {

namespace {
constexpr double kPi = 3.14159265358979323846264338328;

// \int g^2 dr, trapezoid, extended precision (the g_M family spans ~500
// decades, so double accumulators underflow/overflow).
template <class V>
long double int_g2(const std::vector<double>& r, const std::vector<V>& g) {
    long double s = 0.0L;
    for (std::size_t i = 0; i + 1 < r.size(); ++i) {
        long double gi = g[i], gj = g[i + 1];
        s += 0.5L * (gi * gi + gj * gj) * (static_cast<long double>(r[i + 1]) - r[i]);
    }
    return s;
}

// \int g'^2 r^2 dr with the finite-difference slope per interval.
template <class V>
long double int_dg2_r2(const std::vector<double>& r, const std::vector<V>& g) {
    long double s = 0.0L;
    for (std::size_t i = 0; i + 1 < r.size(); ++i) {
        long double a = r[i], b = r[i + 1];
        long double dr = b - a;
        if (dr <= 0.0L) continue;
        long double sl = (static_cast<long double>(g[i + 1]) - g[i]) / dr;
        s += sl * sl * dr * (b * b + a * b + a * a) / 3.0L;
    }
    return s;
}

template <class V>
long double int_g2_r2(const std::vector<double>& r, const std::vector<V>& g) {
    long double s = 0.0L;
    for (std::size_t i = 0; i + 1 < r.size(); ++i) {
        long double a = r[i], b = r[i + 1];
        long double ga = g[i], gb = g[i + 1];
        s += 0.5L * (ga * ga * a * a + gb * gb * b * b) * (b - a);
    }
    return s;
}

} // namespace

RadialProfile::RadialProfile(std::vector<double> grid, std::vector<double> values)
    : RadialProfile(std::move(grid), std::vector<long double>(values.begin(), values.end())) {}

RadialProfile::RadialProfile(std::vector<double> grid, std::vector<long double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
    if (grid_.size() != values_.size() || grid_.size() < 2)
        throw domain_error("RadialProfile: need matching grid/values with >= 2 nodes");
    if (grid_.front() < 0.0) throw domain_error("RadialProfile: radii must be >= 0");
    for (std::size_t i = 1; i < grid_.size(); ++i)
        if (!(grid_[i] > grid_[i - 1])) throw domain_error("RadialProfile: grid must increase");
    for (long double v : values_)
        if (!std::isfinite(static_cast<double>(v)))
            throw domain_error("RadialProfile: values must be finite");
    long double n2 = 4.0L * static_cast<long double>(kPi) * int_g2_r2(grid_, values_);
    if (!(n2 > 0.0L)) throw domain_error("RadialProfile: zero norm");
    long double scale = 1.0L / std::sqrt(n2);
    for (long double& v : values_) v *= scale;
}

double hardy_ratio(const RadialProfile& profile) {
    long double num = int_g2(profile.grid(), profile.values());
    long double den = int_dg2_r2(profile.grid(), profile.values());
    if (!(den > 0.0L)) throw domain_error("hardy_ratio: profile has zero gradient");
    return static_cast<double>(num / den);
}

namespace {

// The linear ramp factor e^{-3 log M / 2} underflows double near log M ~ 500,
// so the branch values are produced in extended precision.
long double g_M_value_ext(double log_M, double r) {
    if (!(log_M > 0.0)) throw domain_error("g_M: need M > 1");
    const double M = std::exp(log_M);
    if (r <= 1.0 / M) return std::exp(0.5L * static_cast<long double>(log_M));
    if (r <= M) return 1.0L / std::sqrt(static_cast<long double>(r));
    if (r <= 2.0 * M)
        return (2.0L * static_cast<long double>(M) - r) *
               std::exp(-1.5L * static_cast<long double>(log_M));
    return 0.0L;
}

} // namespace

double g_M_value(double log_M, double r) {
    return static_cast<double>(g_M_value_ext(log_M, r));
}

RadialProfile g_M_profile(double log_M, int grid_n) {
    if (!(log_M > 0.0)) throw domain_error("g_M_profile: need M > 1");
    if (grid_n < 16) throw domain_error("g_M_profile: grid_n too small");
    const double M = std::exp(log_M);
    const double lo = 0.1 / M;
    const double log_lo = std::log(lo);
    const double log_hi = std::log(2.0 * M);
    std::vector<double> grid;
    grid.reserve(static_cast<std::size_t>(grid_n) + 8);
    grid.push_back(0.0);
    const double breaks[3] = {1.0 / M, M, 2.0 * M};
    int next_break = 0;
    for (int i = 0; i < grid_n; ++i) {
        double r = std::exp(log_lo + (log_hi - log_lo) * i / (grid_n - 1));
        while (next_break < 3 && breaks[next_break] < r * (1.0 - 1e-13)) {
            grid.push_back(breaks[next_break]);
            ++next_break;
        }
        if (next_break < 3 && std::fabs(breaks[next_break] - r) <= 1e-13 * r) {
            r = breaks[next_break];
            ++next_break;
        }
        grid.push_back(r);
    }
    while (next_break < 3) grid.push_back(breaks[next_break++]);
    std::vector<long double> values;
    values.reserve(grid.size());
    for (double r : grid) values.push_back(g_M_value_ext(log_M, r));
    return RadialProfile(std::move(grid), std::move(values));
}

GMRatio hardy_ratio_gM(double log_M, int grid_n) {
    GMRatio out;
    out.quadrature = hardy_ratio(g_M_profile(log_M, grid_n));
    out.closed_form = 4.0 - 28.0 / (7.0 / 3.0 + 0.5 * log_M);
    return out;
}

double H_functional(double theta, double r, double delta, int grid_n) {
    if (!(r > 0.0)) throw domain_error("H_functional: r must be > 0");
    if (delta < 0.0) throw domain_error("H_functional: delta must be >= 0");
    if (theta > 0.125 && delta == 0.0)
        throw domain_error("H_functional: unbounded for theta > 1/8 with delta = 0");
    if (grid_n < 3) throw domain_error("H_functional: grid_n too small");
    const double h = r / (grid_n + 1);
    std::vector<double> diag(static_cast<std::size_t>(grid_n));
    std::vector<double> off(static_cast<std::size_t>(grid_n) - 1, 0.5 / (h * h));
    for (int i = 0; i < grid_n; ++i) {
        double x = h * (i + 1);
        diag[static_cast<std::size_t>(i)] = -1.0 / (h * h) + theta / ((x + delta) * (x + delta));
    }
    return largest_eigenvalue_tridiag(diag, off);
}

Dichotomy H_dichotomy(double theta) {
    if (!(theta > 0.0)) throw domain_error("H_dichotomy: theta must be > 0");
    return theta <= 0.125 ? Dichotomy::zero : Dichotomy::infinite;
}

ScalingCheck scaling_identity_check(const RadialProfile& profile, double theta, double a) {
    if (!(a > 0.0)) throw domain_error("scaling_identity_check: a must be > 0");
    auto functional = [&](const std::vector<double>& r, const std::vector<long double>& g) {
        return static_cast<double>(4.0L * static_cast<long double>(kPi) *
                                   (static_cast<long double>(theta) * int_g2(r, g) -
                                    0.5L * int_dg2_r2(r, g)));
    };
    ScalingCheck out;
    out.value = functional(profile.grid(), profile.values());
    std::vector<double> rs(profile.grid().size());
    std::vector<long double> gs(profile.values().size());
    const long double amp = std::pow(static_cast<long double>(a), 1.5L);
    for (std::size_t i = 0; i < rs.size(); ++i) {
        rs[i] = profile.grid()[i] / a;
        gs[i] = amp * profile.values()[i];
    }
    out.scaled_value = functional(rs, gs);
    return out;
}

} // namespace pan
