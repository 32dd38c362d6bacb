#pragma once

#include <cstdint>
#include <vector>

#include "pan/estimate.hpp"
#include "pan/geometry.hpp"

namespace pan {

enum class CellShape { ball, cube };

// Realized homogeneous Poisson configuration on a box window.
// Immutable after construction; safe to share across workers.
struct PoissonField {
    std::vector<Vec3> points;
    Box window;
    double intensity = 0.0;
    std::uint64_t seed = 0;
};

// Lattice of cells centered at spacing*Z^3 within |center| <= region_radius.
// cell_radius is the ball radius or the cube half-width.
struct LatticeSpec {
    double spacing = 1.0;
    double cell_radius = 0.5;
    double region_radius = 1.0;
    CellShape cell_shape = CellShape::ball;
};

enum class Direction { geq, leq };

struct AssociationResult {
    Estimate joint;
    double product = 0.0;
};

PoissonField sample_field(const Box& window, double intensity, std::uint64_t seed);

// Exact count of stored points in the closed cell; the cell must fit in the window.
long long count_in_cell(const PoissonField& field, const Vec3& center, double radius,
                        CellShape shape);

long long max_count_over_lattice(const PoissonField& field, const LatticeSpec& lattice);

// Number of lattice centers enumerated by `lattice` (|spacing*k| <= region_radius).
long long lattice_cell_count(const LatticeSpec& lattice);

// (P(Poisson(cell_volume) <= k))^num_cells, for disjoint (independent) cells.
double exact_max_count_cdf(long long num_cells, double cell_volume, int k);

// P(Poisson(mean) >= k) and <= k, summed stably.
double poisson_tail_geq(double mean, int k);
double poisson_cdf(double mean, int k);

// Empirical joint exceedance vs the product of exact marginals (association bound).
AssociationResult check_association(const Box& window, double intensity,
                                    const std::vector<Box>& cells,
                                    const std::vector<long long>& thresholds, Direction direction,
                                    long long replicates, std::uint64_t seed);

} // namespace pan
