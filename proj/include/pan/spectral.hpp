#pragma once

#include <cstdint>
#include <vector>

#include "pan/asymptotics.hpp"
#include "pan/geometry.hpp"
#include "pan/poisson_field.hpp"
#include "pan/potential.hpp"

namespace pan {

// Dirichlet problem for (1/2) Laplacian + zeta on the cube [-R,R]^3,
// 7-point stencil on grid_n interior nodes per axis, h = 2R/(grid_n+1).
// A non-empty mask restricts the domain (0 = clamped to the boundary value 0),
// which is how balls are realized on the cube grid.
struct DirichletProblem {
    double box_half_width = 1.0;
    int grid_n = 31;
    std::vector<double> potential;   // size grid_n^3, row-major (x fastest)
    std::vector<std::uint8_t> mask;  // empty = all nodes active
    double solver_tol = 1e-8;
    int max_iter = 200;

    double h() const { return 2.0 * box_half_width / (grid_n + 1); }
    Vec3 node(int ix, int iy, int iz) const {
        const double s = h();
        return {-box_half_width + s * (ix + 1), -box_half_width + s * (iy + 1),
                -box_half_width + s * (iz + 1)};
    }
};

struct EigenResult {
    double lambda = 0.0;
    double eigenvector_norm_check = 0.0; // | h^3 sum v^2 - 1 |
    int iterations = 0;
    std::vector<double> eigenvector; // unit discrete L2, masked nodes zero
};

// Node mask for the ball |x| <= radius on the problem's grid.
std::vector<std::uint8_t> ball_mask(const DirichletProblem& problem, double radius);

// Largest eigenvalue of (1/2) Delta_h + diag(zeta) with Dirichlet boundary,
// by shift-and-invert power iteration with conjugate-gradient solves.
EigenResult principal_eigenvalue(const DirichletProblem& problem);

// Eigenvalue of the clamped field potential theta * renormalized(x).
double eigenvalue_of_field(const PoissonField& field, double theta, double R, int grid_n,
                           const TruncationScheme& scheme, double clamp);

// Largest eigenvalue of a symmetric tridiagonal matrix (Sturm bisection).
double largest_eigenvalue_tridiag(const std::vector<double>& diag,
                                  const std::vector<double>& offdiag);

// Box scales of the eigenvalue localization argument; k = 2 uses the
// t^3 l(t)^{+-2/3} branch.
double scale_R_k(double t, int k, const SlowlyVaryingSpec& l);
double scale_S_k(double t, int k, const SlowlyVaryingSpec& l);

} // namespace pan
