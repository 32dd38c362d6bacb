#include "pan/poisson_field.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "pan/errors.hpp"
#include "pan/rng.hpp"

namespace pan {

PoissonField sample_field(const Box& window, double intensity, std::uint64_t seed) {
    if (intensity < 0.0) throw domain_error("sample_field: intensity must be >= 0");
    if (window.degenerate()) throw domain_error("sample_field: degenerate window");
    PoissonField field;
    field.window = window;
    field.intensity = intensity;
    field.seed = seed;
    Rng rng(seed);
    long long n = rng.poisson(intensity * window.volume());
    field.points.reserve(static_cast<std::size_t>(n));
    for (long long i = 0; i < n; ++i) {
        Vec3 p{rng.uniform(window.lo.x, window.hi.x), rng.uniform(window.lo.y, window.hi.y),
               rng.uniform(window.lo.z, window.hi.z)};
        field.points.push_back(p);
    }
    return field;
}

namespace {

bool in_cell(const Vec3& d, double radius, CellShape shape) {
    return shape == CellShape::ball ? d.norm2() <= radius * radius : d.norm_inf() <= radius;
}

} // namespace

long long count_in_cell(const PoissonField& field, const Vec3& center, double radius,
                        CellShape shape) {
    if (radius < 0.0) throw domain_error("count_in_cell: negative radius");
    if (!field.window.contains_ball(center, shape == CellShape::ball ? radius : radius))
        throw out_of_window_error("count_in_cell: cell extends beyond the sampled window");
    long long n = 0;
    for (const Vec3& p : field.points)
        if (in_cell(p - center, radius, shape)) ++n;
    return n;
}

long long lattice_cell_count(const LatticeSpec& lattice) {
    if (lattice.spacing <= 0.0) throw domain_error("lattice: spacing must be > 0");
    if (lattice.region_radius < 0.0) return 0;
    const long long m = static_cast<long long>(std::floor(lattice.region_radius / lattice.spacing));
    const double r2 = lattice.region_radius * lattice.region_radius;
    const double s2 = lattice.spacing * lattice.spacing;
    long long count = 0;
    for (long long ix = -m; ix <= m; ++ix) {
        for (long long iy = -m; iy <= m; ++iy) {
            double rem = r2 / s2 - static_cast<double>(ix * ix + iy * iy);
            if (rem < 0.0) continue;
            count += 2 * static_cast<long long>(std::floor(std::sqrt(rem))) + 1;
        }
    }
    return count;
}

long long max_count_over_lattice(const PoissonField& field, const LatticeSpec& lattice) {
    if (lattice.spacing <= 0.0) throw domain_error("lattice: spacing must be > 0");
    if (!field.window.contains_ball({0, 0, 0}, lattice.region_radius + lattice.cell_radius))
        throw out_of_window_error("max_count_over_lattice: lattice cells extend beyond the window");
    // Point-driven: bin each point into the lattice cells that can contain it.
    const double s = lattice.spacing;
    const long long reach = static_cast<long long>(std::ceil(lattice.cell_radius / s));
    const double r2max = lattice.region_radius * lattice.region_radius;
    // counts keyed by packed center index
    std::vector<std::pair<std::uint64_t, long long>> hits;
    auto key_of = [](long long ix, long long iy, long long iz) {
        auto enc = [](long long v) { return static_cast<std::uint64_t>(v + (1ll << 20)) & 0x1fffff; };
        return (enc(ix) << 42) | (enc(iy) << 21) | enc(iz);
    };
    for (const Vec3& p : field.points) {
        long long bx = std::llround(p.x / s), by = std::llround(p.y / s), bz = std::llround(p.z / s);
        for (long long ix = bx - reach; ix <= bx + reach; ++ix) {
            for (long long iy = by - reach; iy <= by + reach; ++iy) {
                for (long long iz = bz - reach; iz <= bz + reach; ++iz) {
                    Vec3 c{ix * s, iy * s, iz * s};
                    if (c.norm2() > r2max) continue;
                    if (!in_cell(p - c, lattice.cell_radius, lattice.cell_shape)) continue;
                    hits.emplace_back(key_of(ix, iy, iz), 1);
                }
            }
        }
    }
    if (hits.empty()) return 0;
    std::sort(hits.begin(), hits.end());
    long long best = 0, run = 0;
    std::uint64_t cur = hits.front().first;
    for (const auto& [k, one] : hits) {
        if (k == cur) {
            run += one;
        } else {
            if (run > best) best = run;
            cur = k;
            run = one;
        }
    }
    return std::max(best, run);
}

double poisson_cdf(double mean, int k) {
    if (k < 0) throw domain_error("poisson_cdf: k must be >= 0");
    if (mean < 0.0) throw domain_error("poisson_cdf: mean must be >= 0");
    // sum_{j<=k} e^{-v} v^j / j!  accumulated in long double
    long double term = std::exp(static_cast<long double>(-mean));
    long double sum = term;
    for (int j = 1; j <= k; ++j) {
        term *= mean / j;
        sum += term;
    }
    return static_cast<double>(sum > 1.0L ? 1.0L : sum);
}

double poisson_tail_geq(double mean, int k) {
    if (k <= 0) return 1.0;
    if (mean == 0.0) return 0.0;
    if (mean < 1.0 || k > mean) {
        // forward series from j=k, stable for small upper tails
        long double term = std::exp(static_cast<long double>(-mean));
        for (int j = 1; j < k; ++j) term *= mean / j;
        term *= mean / k;
        long double sum = 0.0L;
        int j = k;
        while (term > 0.0L) {
            sum += term;
            ++j;
            term *= mean / j;
            if (j > k + 2000 || term < sum * 1e-22L) {
                sum += term; // remainder negligible beyond this
                break;
            }
        }
        return static_cast<double>(sum);
    }
    return 1.0 - poisson_cdf(mean, k - 1);
}

double exact_max_count_cdf(long long num_cells, double cell_volume, int k) {
    if (num_cells < 1) throw domain_error("exact_max_count_cdf: need at least one cell");
    if (cell_volume <= 0.0) throw domain_error("exact_max_count_cdf: cell_volume must be > 0");
    if (k < 0) throw domain_error("exact_max_count_cdf: k must be >= 0");
    double tail = poisson_tail_geq(cell_volume, k + 1);
    // (1 - tail)^N, via exp(N log1p(-tail)) to survive N ~ 1e10.
    if (tail >= 1.0) return 0.0;
    return std::exp(static_cast<double>(num_cells) * std::log1p(-tail));
}

AssociationResult check_association(const Box& window, double intensity,
                                    const std::vector<Box>& cells,
                                    const std::vector<long long>& thresholds, Direction direction,
                                    long long replicates, std::uint64_t seed) {
    if (cells.size() != thresholds.size())
        throw domain_error("check_association: cells/thresholds size mismatch");
    if (cells.empty()) throw domain_error("check_association: no cells");
    if (replicates < 100) throw domain_error("check_association: need at least 100 replicates");
    for (const Box& c : cells)
        if (!window.contains(c)) throw out_of_window_error("check_association: cell outside window");

    Rng root(seed);
    long long hits = 0;
    for (long long rep = 0; rep < replicates; ++rep) {
        PoissonField f = sample_field(window, intensity, root.substream(rep).next_u64());
        bool all = true;
        for (std::size_t j = 0; j < cells.size() && all; ++j) {
            long long n = 0;
            for (const Vec3& p : f.points)
                if (cells[j].contains(p)) ++n;
            all = direction == Direction::geq ? n >= thresholds[j] : n <= thresholds[j];
        }
        if (all) ++hits;
    }
    AssociationResult res;
    double p = static_cast<double>(hits) / static_cast<double>(replicates);
    res.joint.mean = p;
    res.joint.stderr_ = std::sqrt(std::fmax(p * (1.0 - p), 0.0) / static_cast<double>(replicates));
    res.joint.n = replicates;
    res.joint.seed = seed;
    res.product = 1.0;
    for (std::size_t j = 0; j < cells.size(); ++j) {
        double mean = intensity * cells[j].volume();
        double marginal = direction == Direction::geq
                              ? poisson_tail_geq(mean, static_cast<int>(thresholds[j]))
                              : poisson_cdf(mean, static_cast<int>(thresholds[j]));
        res.product *= marginal;
    }
    return res;
}

} // namespace pan
