#include "pan/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pan/errors.hpp"
#include "pan/poisson_field.hpp"
#include "pan/rng.hpp"

namespace pan {

double SlowlyVaryingSpec::eval(double t) const {
    if (!(t >= std::exp(2.0)) && family != SvFamily::custom_table)
        throw domain_error("slowly varying spec: evaluate at t >= e^2");
    switch (family) {
        case SvFamily::constant:
            return value;
        case SvFamily::log_pow:
            return std::pow(std::log(t), exponent);
        case SvFamily::loglog_pow:
            return std::pow(std::log(std::log(t)), exponent);
        case SvFamily::log_times_loglog_pow:
            return std::log(t) * std::pow(std::log(std::log(t)), exponent);
        case SvFamily::custom_table: {
            if (table.size() < 2) throw domain_error("custom_table: need at least 2 entries");
            if (t <= table.front().first) return table.front().second;
            if (t >= table.back().first) return table.back().second;
            auto it = std::lower_bound(table.begin(), table.end(), std::make_pair(t, 0.0));
            auto lo = it - 1;
            // interpolate linearly in log t
            double w = (std::log(t) - std::log(lo->first)) /
                       (std::log(it->first) - std::log(lo->first));
            return lo->second + w * (it->second - lo->second);
        }
    }
    throw domain_error("slowly varying spec: unknown family");
}

int k_of_theta(double theta) {
    if (!(theta > 0.0 && theta < 1.0 / 16.0))
        throw domain_error("k_of_theta: theta must lie in (0, 1/16)");
    double x = 1.0 / (8.0 * theta);
    return static_cast<int>(std::floor(x + x * 1e-12));
}

long long anderson_index(double theta, double kappa) {
    if (!(kappa > 0.0)) throw domain_error("anderson_index: kappa must be > 0");
    if (!(theta > 0.0 && theta < kappa / 8.0))
        throw domain_error("anderson_index: theta must lie in (0, kappa/8)");
    double x = kappa / (4.0 * theta);
    return static_cast<long long>(std::floor(x + x * 1e-12));
}

Branch limsup_integral_test(const SlowlyVaryingSpec& l) {
    switch (l.family) {
        case SvFamily::constant:
            return Branch::infinite; // harmonic integral diverges
        case SvFamily::log_pow:
            return l.exponent > 1.0 ? Branch::zero : Branch::infinite;
        case SvFamily::loglog_pow:
            return Branch::infinite; // diverges for every power of log log
        case SvFamily::log_times_loglog_pow:
            return l.exponent > 1.0 ? Branch::zero : Branch::infinite;
        case SvFamily::custom_table:
            return limsup_integral_test_numeric(l);
    }
    return Branch::inconclusive;
}

Branch liminf_integral_test(const SlowlyVaryingSpec& l) {
    switch (l.family) {
        case SvFamily::constant:
            return Branch::zero;
        case SvFamily::log_pow:
            // any positive power of log t beats every c; exponent 0 is constant
            return l.exponent > 0.0 ? Branch::infinite : Branch::zero;
        case SvFamily::loglog_pow:
            // e^{-c l} = (log t)^{-c} style tails: divergent iff exponent <= 1
            return l.exponent <= 1.0 ? Branch::zero : Branch::infinite;
        case SvFamily::log_times_loglog_pow:
            return Branch::infinite;
        case SvFamily::custom_table:
            return liminf_integral_test_numeric(l);
    }
    return Branch::inconclusive;
}

namespace {

// Least-squares slope of y against x.
double lsq_slope(const std::vector<double>& x, const std::vector<double>& y) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

} // namespace

Branch limsup_integral_test_numeric(const SlowlyVaryingSpec& l, double horizon) {
    // Decade increments d_j of \int dt/(t l(t)); fit d_j ~ j^{-beta}.
    // beta clearly above 1: convergent; clearly below 1: divergent; else inconclusive.
    const int jmax = static_cast<int>(std::floor(std::log10(horizon)));
    std::vector<double> xs, ys;
    for (int j = 2; j < jmax; ++j) {
        double t0 = std::pow(10.0, j), t1 = std::pow(10.0, j + 1);
        // midpoint rule in log t, 64 panels per decade
        double d = 0.0;
        const int m = 64;
        for (int i = 0; i < m; ++i) {
            double u = std::log(t0) + (i + 0.5) * (std::log(t1) - std::log(t0)) / m;
            d += 1.0 / l.eval(std::exp(u));
        }
        d *= (std::log(t1) - std::log(t0)) / m;
        if (!(d > 0.0)) return Branch::inconclusive;
        xs.push_back(std::log(static_cast<double>(j)));
        ys.push_back(std::log(d));
    }
    if (xs.size() < 4) return Branch::inconclusive;
    double beta = -lsq_slope(xs, ys);
    if (beta > 1.5) return Branch::zero;
    if (beta < 0.9) return Branch::infinite;
    return Branch::inconclusive;
}

Branch liminf_integral_test_numeric(const SlowlyVaryingSpec& l, double horizon) {
    // A finite horizon can certify divergence only when l stays bounded
    // (then \int t^{-1} e^{-c l} dt inherits the harmonic divergence for all c).
    // Growth that is slow at the horizon may still converge for every c,
    // so anything unbounded-looking is honestly inconclusive.
    const int jmax = static_cast<int>(std::floor(std::log10(horizon)));
    double first = l.eval(std::pow(10.0, 2.0));
    double last = l.eval(std::pow(10.0, static_cast<double>(jmax)));
    if (last <= first * 1.01) return Branch::zero;
    return Branch::inconclusive;
}

double predicted_normalization(double theta, const SlowlyVaryingSpec& l, double t, Side side) {
    if (!(t >= std::exp(2.0))) throw domain_error("predicted_normalization: need t >= e^2");
    int k = k_of_theta(theta);
    double texp = static_cast<double>(k + 1) / static_cast<double>(k - 1);
    double lexp = 2.0 / (3.0 * static_cast<double>(k - 1));
    double s = side == Side::limsup ? 1.0 : -1.0;
    return std::pow(t, texp) * std::pow(l.eval(t), s * lexp);
}

RateVerdict rate_verdict(double theta, const SlowlyVaryingSpec& l, Side side) {
    RateVerdict v;
    v.k = k_of_theta(theta);
    v.time_exponent = static_cast<double>(v.k + 1) / static_cast<double>(v.k - 1);
    v.l_exponent = 2.0 / (3.0 * static_cast<double>(v.k - 1));
    v.branch = side == Side::limsup ? limsup_integral_test(l) : liminf_integral_test(l);
    return v;
}

namespace {

// Open-addressing counter table keyed by cell index, reused across replicates
// via epoch stamps so no clearing is needed.
class CellCounter {
public:
    explicit CellCounter(std::size_t capacity_hint) {
        std::size_t cap = 64;
        while (cap < capacity_hint * 4) cap <<= 1;
        keys_.assign(cap, 0);
        epochs_.assign(cap, 0);
        counts_.assign(cap, 0);
        mask_ = cap - 1;
    }

    void new_replicate() { ++epoch_; }

    // returns the count after insertion
    int add(std::uint64_t key) {
        std::size_t i = (key * 0x9e3779b97f4a7c15ull) & mask_;
        while (true) {
            if (epochs_[i] != epoch_ || keys_[i] == 0) {
                // treat slot as empty for this epoch (key 0 never occurs: offset below)
                keys_[i] = key;
                epochs_[i] = epoch_;
                counts_[i] = 1;
                return 1;
            }
            if (keys_[i] == key && epochs_[i] == epoch_) return ++counts_[i];
            i = (i + 1) & mask_;
        }
    }

private:
    std::vector<std::uint64_t> keys_;
    std::vector<std::uint32_t> epochs_;
    std::vector<std::uint16_t> counts_;
    std::size_t mask_ = 0;
    std::uint32_t epoch_ = 1;
};

} // namespace

ExtremeResult extreme_scaling_experiment(int n_min, int n_max, double delta, double r,
                                         long long replicates, std::uint64_t seed) {
    if (n_min < 1 || n_max < n_min) throw domain_error("extremes: bad n range");
    if (!(delta > 0.0 && r > 0.0)) throw domain_error("extremes: delta, r must be > 0");
    if (r < delta)
        throw domain_error("extremes: cells overlap (need r >= delta for disjoint balls)");
    if (replicates < 100) throw domain_error("extremes: need >= 100 replicates");

    constexpr double kFourThirdsPi = 4.18879020478639098461685784437;
    ExtremeResult out;
    Rng root(seed);
    for (int n = n_min; n <= n_max; ++n) {
        const double scale = std::pow(2.0, -n);
        const double region = delta / (scale * scale) - r; // delta 2^{2n} - r
        if (region < r) throw domain_error("extremes: region too small at n=" + std::to_string(n));
        LatticeSpec lat{2.0 * r, delta, region, CellShape::ball};
        const long long N = lattice_cell_count(lat);
        const double v = kFourThirdsPi * (scale * delta) * (scale * delta) * (scale * delta);
        const double mean_points = static_cast<double>(N) * v;

        CellCounter counter(static_cast<std::size_t>(mean_points) + 64);
        Rng rng = root.substream(static_cast<std::uint64_t>(n));
        long long hits = 0;
        for (long long rep = 0; rep < replicates; ++rep) {
            counter.new_replicate();
            // Points of the unit-intensity field restricted to the union of the
            // disjoint cells: total count is Poisson(N v), and each point lands
            // in a uniformly chosen cell (positions within a cell never matter
            // for the counts).
            long long total = rng.poisson(mean_points);
            bool hit = false;
            for (long long i = 0; i < total; ++i) {
                std::uint64_t cell = rng.below(static_cast<std::uint64_t>(N)) + 1;
                if (counter.add(cell) >= 3) hit = true;
            }
            if (hit) ++hits;
        }
        ExtremeRow row;
        row.n = n;
        row.cells = N;
        row.cell_volume = v;
        row.p_emp = static_cast<double>(hits) / static_cast<double>(replicates);
        row.p_exact = 1.0 - exact_max_count_cdf(N, v, 2);
        row.stderr_ = std::sqrt(std::fmax(row.p_exact * (1.0 - row.p_exact), 0.0) /
                                static_cast<double>(replicates));
        out.rows.push_back(row);
    }
    std::vector<double> xs, ys;
    for (const ExtremeRow& row : out.rows) {
        xs.push_back(static_cast<double>(row.n));
        ys.push_back(std::log2(row.p_exact));
    }
    out.slope_exact = lsq_slope(xs, ys);
    return out;
}

} // namespace pan
