#include "pan/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pan/errors.hpp"

namespace pan {

namespace {

// Matrix-free application of A = (1/2) Delta_h + diag(zeta) on active nodes.
struct Operator {
    const DirichletProblem& pb;
    double inv_h2;

    explicit Operator(const DirichletProblem& p) : pb(p) {
        double h = p.h();
        inv_h2 = 1.0 / (h * h);
    }

    bool active(int ix, int iy, int iz) const {
        if (ix < 0 || iy < 0 || iz < 0 || ix >= pb.grid_n || iy >= pb.grid_n || iz >= pb.grid_n)
            return false;
        if (pb.mask.empty()) return true;
        return pb.mask[idx(ix, iy, iz)] != 0;
    }

    std::size_t idx(int ix, int iy, int iz) const {
        return static_cast<std::size_t>((iz * pb.grid_n + iy) * pb.grid_n + ix);
    }

    void apply(const std::vector<double>& v, std::vector<double>& out) const {
        const int n = pb.grid_n;
        for (int iz = 0; iz < n; ++iz) {
            for (int iy = 0; iy < n; ++iy) {
                for (int ix = 0; ix < n; ++ix) {
                    std::size_t i = idx(ix, iy, iz);
                    if (!pb.mask.empty() && pb.mask[i] == 0) {
                        out[i] = 0.0;
                        continue;
                    }
                    double nb = 0.0;
                    if (active(ix - 1, iy, iz)) nb += v[i - 1];
                    if (active(ix + 1, iy, iz)) nb += v[i + 1];
                    if (active(ix, iy - 1, iz)) nb += v[i - static_cast<std::size_t>(n)];
                    if (active(ix, iy + 1, iz)) nb += v[i + static_cast<std::size_t>(n)];
                    if (active(ix, iy, iz - 1)) nb += v[i - static_cast<std::size_t>(n) * n];
                    if (active(ix, iy, iz + 1)) nb += v[i + static_cast<std::size_t>(n) * n];
                    out[i] = 0.5 * inv_h2 * (nb - 6.0 * v[i]) + pb.potential[i] * v[i];
                }
            }
        }
    }
};

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

// CG solve of (sigma I - A) x = b.  Returns false if the operator turns out
// not to be positive definite at this shift.
bool cg_solve(const Operator& op, double sigma, const std::vector<double>& b,
              std::vector<double>& x, double reltol, int maxit) {
    const std::size_t m = b.size();
    std::vector<double> r = b, p = b, Ap(m);
    std::fill(x.begin(), x.end(), 0.0);
    double rr = dot(r, r);
    const double stop = reltol * reltol * rr;
    if (rr == 0.0) return true;
    for (int it = 0; it < maxit; ++it) {
        op.apply(p, Ap);
        for (std::size_t i = 0; i < m; ++i) Ap[i] = sigma * p[i] - Ap[i];
        double pAp = dot(p, Ap);
        if (pAp <= 0.0) return false; // shift not above the spectrum
        double alpha = rr / pAp;
        for (std::size_t i = 0; i < m; ++i) {
            x[i] += alpha * p[i];
            r[i] -= alpha * Ap[i];
        }
        double rr_new = dot(r, r);
        if (rr_new <= stop) return true;
        double beta = rr_new / rr;
        rr = rr_new;
        for (std::size_t i = 0; i < m; ++i) p[i] = r[i] + beta * p[i];
    }
    return true; // partially converged solves still advance the outer iteration
}

} // namespace

std::vector<std::uint8_t> ball_mask(const DirichletProblem& problem, double radius) {
    const int n = problem.grid_n;
    std::vector<std::uint8_t> mask(static_cast<std::size_t>(n) * n * n, 0);
    std::size_t i = 0;
    for (int iz = 0; iz < n; ++iz)
        for (int iy = 0; iy < n; ++iy)
            for (int ix = 0; ix < n; ++ix, ++i)
                mask[i] = problem.node(ix, iy, iz).norm() <= radius ? 1 : 0;
    return mask;
}

EigenResult principal_eigenvalue(const DirichletProblem& problem) {
    if (problem.grid_n < 3) throw domain_error("principal_eigenvalue: grid_n must be >= 3");
    const std::size_t m = static_cast<std::size_t>(problem.grid_n) * problem.grid_n * problem.grid_n;
    if (problem.potential.size() != m)
        throw domain_error("principal_eigenvalue: potential size mismatch");
    if (!problem.mask.empty() && problem.mask.size() != m)
        throw domain_error("principal_eigenvalue: mask size mismatch");
    for (std::size_t i = 0; i < m; ++i) {
        bool on = problem.mask.empty() || problem.mask[i] != 0;
        if (on && !std::isfinite(problem.potential[i]))
            throw domain_error("principal_eigenvalue: potential must be finite (pre-clamp it)");
    }

    Operator op(problem);
    std::vector<double> v(m, 0.0), Av(m), w(m);
    long long active = 0;
    for (std::size_t i = 0; i < m; ++i)
        if (problem.mask.empty() || problem.mask[i] != 0) {
            v[i] = 1.0;
            ++active;
        }
    if (active == 0) throw domain_error("principal_eigenvalue: empty domain mask");
    double nv = std::sqrt(dot(v, v));
    for (double& x : v) x /= nv;

    op.apply(v, Av);
    double lambda = dot(v, Av);
    double margin = 1.0;
    int iterations = 0;
    double residual = 0.0;
    for (int outer = 0; outer < problem.max_iter; ++outer) {
        ++iterations;
        residual = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            double r = Av[i] - lambda * v[i];
            residual += r * r;
        }
        residual = std::sqrt(residual);
        if (residual < problem.solver_tol) break;

        double sigma = lambda + margin;
        if (!cg_solve(op, sigma, v, w, 1e-11, 10000)) {
            margin *= 4.0;
            continue;
        }
        double nw = std::sqrt(dot(w, w));
        if (!(nw > 0.0) || !std::isfinite(nw))
            throw numerical_error("principal_eigenvalue: inverse iteration broke down");
        for (std::size_t i = 0; i < m; ++i) v[i] = w[i] / nw;
        op.apply(v, Av);
        double lambda_new = dot(v, Av);
        // Keep the shift a finite distance above the spectrum: a tiny margin
        // would make the inner solves hopelessly ill-conditioned.
        margin = std::fmax(2.0 * std::fabs(lambda_new - lambda), 0.25);
        lambda = lambda_new;
    }
    if (residual >= problem.solver_tol)
        throw numerical_error("principal_eigenvalue: no convergence, last residual " +
                              std::to_string(residual));

    // normalize to unit discrete L2
    const double h = problem.h();
    const double scale = std::pow(h, -1.5);
    EigenResult out;
    out.lambda = lambda;
    out.iterations = iterations;
    out.eigenvector.resize(m);
    double s2 = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        out.eigenvector[i] = v[i] * scale;
        s2 += out.eigenvector[i] * out.eigenvector[i];
    }
    out.eigenvector_norm_check = std::fabs(h * h * h * s2 - 1.0);
    return out;
}

double eigenvalue_of_field(const PoissonField& field, double theta, double R, int grid_n,
                           const TruncationScheme& scheme, double clamp) {
    if (clamp <= 0.0) throw domain_error("eigenvalue_of_field: clamp must be > 0");
    DirichletProblem pb;
    pb.box_half_width = R;
    pb.grid_n = grid_n;
    pb.potential.resize(static_cast<std::size_t>(grid_n) * grid_n * grid_n);
    std::size_t i = 0;
    for (int iz = 0; iz < grid_n; ++iz) {
        for (int iy = 0; iy < grid_n; ++iy) {
            for (int ix = 0; ix < grid_n; ++ix, ++i) {
                double z = theta * eval_renormalized(field, pb.node(ix, iy, iz), scheme).value;
                pb.potential[i] = std::fmin(std::fmax(z, -clamp), clamp);
            }
        }
    }
    return principal_eigenvalue(pb).lambda;
}

double largest_eigenvalue_tridiag(const std::vector<double>& diag,
                                  const std::vector<double>& offdiag) {
    const std::size_t n = diag.size();
    if (n == 0) throw domain_error("largest_eigenvalue_tridiag: empty matrix");
    if (offdiag.size() + 1 != n)
        throw domain_error("largest_eigenvalue_tridiag: offdiag size mismatch");
    // Gershgorin bracket
    double lo = diag[0], hi = diag[0];
    for (std::size_t i = 0; i < n; ++i) {
        double r = 0.0;
        if (i > 0) r += std::fabs(offdiag[i - 1]);
        if (i + 1 < n) r += std::fabs(offdiag[i]);
        lo = std::fmin(lo, diag[i] - r);
        hi = std::fmax(hi, diag[i] + r);
    }
    // count of eigenvalues < sigma via the LDL^T inertia of T - sigma I
    auto count_below = [&](double sigma) {
        long long count = 0;
        double d = diag[0] - sigma;
        if (d < 0.0) ++count;
        for (std::size_t i = 1; i < n; ++i) {
            double off2 = offdiag[i - 1] * offdiag[i - 1];
            if (d == 0.0) d = 1e-300;
            d = (diag[i] - sigma) - off2 / d;
            if (d < 0.0) ++count;
        }
        return count;
    };
    const long long target = static_cast<long long>(n) - 1; // all but the largest below sigma
    for (int it = 0; it < 200 && hi - lo > 1e-14 * std::fmax(1.0, std::fabs(hi)); ++it) {
        double mid = 0.5 * (lo + hi);
        if (count_below(mid) <= target)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

double scale_R_k(double t, int k, const SlowlyVaryingSpec& l) {
    if (k < 2) throw domain_error("scale_R_k: k must be >= 2");
    if (!(t > std::exp(1.0))) throw domain_error("scale_R_k: need t > e");
    if (k == 2) return t * t * t * std::pow(l.eval(t), 2.0 / 3.0);
    double km2 = static_cast<double>(k - 2);
    return std::pow(t, static_cast<double>(k) / km2) * std::pow(l.eval(t), 2.0 / (3.0 * km2));
}

double scale_S_k(double t, int k, const SlowlyVaryingSpec& l) {
    if (k < 2) throw domain_error("scale_S_k: k must be >= 2");
    if (!(t > std::exp(1.0))) throw domain_error("scale_S_k: need t > e");
    if (k == 2) return t * t * t * std::pow(l.eval(t), -2.0 / 3.0);
    double km2 = static_cast<double>(k - 2);
    return std::pow(t, static_cast<double>(k) / km2) * std::pow(l.eval(t), -2.0 / (3.0 * km2));
}

} // namespace pan
