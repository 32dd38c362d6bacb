#include "pan/feynman_kac.hpp"

#include <cmath>
#include <limits>

#include "pan/errors.hpp"
#include "pan/rng.hpp"
#include "pan/spectral.hpp"

namespace pan {

void FKConfig::validate() const {
    if (!(t > 0.0)) throw domain_error("fk: t must be > 0");
    if (!(dt > 0.0 && dt <= t)) throw domain_error("fk: need 0 < dt <= t");
    if (!(cap > 0.0)) throw domain_error("fk: cap must be > 0");
    if (n_paths < 1) throw domain_error("fk: n_paths must be >= 1");
    scheme.validate();
}

PoissonField planted_field(int m, double window_half_width) {
    if (m < 0) throw domain_error("planted_field: m must be >= 0");
    PoissonField f;
    f.window = Box::centered_cube(window_half_width);
    f.intensity = 0.0;
    f.seed = 0;
    f.points.assign(static_cast<std::size_t>(m), Vec3{0, 0, 0});
    return f;
}

namespace {

// Renormalized value with the compensating constants hoisted out of the loop.
double renormalized_value(const PoissonField& field, const Vec3& x, const TruncationScheme& scheme,
                          double comp_const) {
    const double rho2 = scheme.tail_radius * scheme.tail_radius;
    const double a = scheme.a;
    const double cut2 = 9.0 * a * a;
    if (!field.window.contains_ball(x, scheme.tail_radius))
        throw out_of_window_error("quenched_moment: path left the usable window");
    double sum = 0.0;
    for (const Vec3& y : field.points) {
        Vec3 d = y - x;
        double r2 = d.norm2();
        if (r2 > rho2) continue;
        if (r2 == 0.0) return std::numeric_limits<double>::infinity();
        double r = std::sqrt(r2);
        if (r2 <= cut2) {
            // alpha/r^2 + (1-alpha)/r^p merge exactly into r^{-2} when p = 2
            sum += CutoffProfile::alpha(r / a) / r2 +
                   (1.0 - CutoffProfile::alpha(r / a)) / std::pow(r, scheme.p);
        } else {
            sum += 1.0 / std::pow(r, scheme.p);
        }
    }
    return sum - comp_const;
}

double clamp(double v, double cap) { return std::fmin(std::fmax(v, -cap), cap); }

} // namespace

Estimate quenched_moment(const PoissonField& field, const FKConfig& cfg, std::uint64_t seed) {
    std::vector<Estimate> one = cap_sweep(field, {cfg.cap}, cfg, seed);
    return one.front();
}

std::vector<Estimate> cap_sweep(const PoissonField& field, const std::vector<double>& caps,
                                const FKConfig& cfg, std::uint64_t seed) {
    cfg.validate();
    if (caps.empty()) throw domain_error("cap_sweep: no caps");
    for (std::size_t j = 1; j < caps.size(); ++j)
        if (caps[j] <= caps[j - 1]) throw domain_error("cap_sweep: caps must be strictly increasing");

    const double comp_const =
        cfg.scheme.epsilon *
        (kernel_ball_integral(cfg.scheme, cfg.scheme.tail_radius) + compensator_Ca(cfg.scheme.a));

    Rng root(seed);
    std::vector<Accumulator> acc(caps.size());
    std::vector<bool> diverged(caps.size(), false);
    std::vector<double> values;
    for (long long rep = 0; rep < cfg.n_paths; ++rep) {
        Rng stream = root.substream(static_cast<std::uint64_t>(rep));
        BrownianPath path = sample_path(cfg.start, cfg.t, cfg.dt, stream);
        bool alive = true;
        if (cfg.domain) {
            for (const Vec3& p : path.positions) {
                if (!cfg.domain->inside(p)) {
                    alive = false;
                    break;
                }
            }
        }
        if (!alive) {
            for (auto& a : acc) a.add(0.0);
            continue;
        }
        if (cfg.theta == 0.0) {
            for (auto& a : acc) a.add(1.0);
            continue;
        }
        values.clear();
        values.reserve(path.positions.size());
        for (const Vec3& p : path.positions)
            values.push_back(renormalized_value(field, p, cfg.scheme, comp_const));
        for (std::size_t j = 0; j < caps.size(); ++j) {
            double integral = 0.0;
            for (long long i = 0; i < path.steps; ++i) {
                double step_dt = path.time_of(i + 1) - path.time_of(i);
                integral += 0.5 * step_dt * (clamp(values[static_cast<std::size_t>(i)], caps[j]) +
                                             clamp(values[static_cast<std::size_t>(i) + 1], caps[j]));
            }
            double w = std::exp(cfg.theta * integral);
            if (!std::isfinite(w)) {
                diverged[j] = true;
                w = std::numeric_limits<double>::max();
            }
            acc[j].add(w);
        }
    }
    std::vector<Estimate> out;
    out.reserve(caps.size());
    for (std::size_t j = 0; j < caps.size(); ++j) {
        Estimate e = acc[j].estimate(seed);
        if (diverged[j]) {
            e.mean = std::numeric_limits<double>::infinity();
            e.stderr_ = std::numeric_limits<double>::infinity();
            e.diverged = true;
        }
        out.push_back(e);
    }
    return out;
}

GrowthRate growth_rate(const std::vector<std::pair<double, double>>& log_moments) {
    if (log_moments.size() < 3) throw domain_error("growth_rate: need at least 3 points");
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < log_moments.size(); ++i) {
        auto [t, lm] = log_moments[i];
        if (i > 0 && t <= log_moments[i - 1].first)
            throw domain_error("growth_rate: t values must increase");
        if (!(lm > 0.0)) throw domain_error("growth_rate: log-moments must be positive");
        xs.push_back(std::log(t));
        ys.push_back(std::log(lm));
    }
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
    }
    GrowthRate g;
    g.exponent = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    double intercept = (sy - g.exponent * sx) / n;
    for (std::size_t i = 0; i < xs.size(); ++i)
        g.residual = std::fmax(g.residual, std::fabs(ys[i] - (intercept + g.exponent * xs[i])));
    return g;
}

FKEigenResult fk_eigen_consistency(const std::function<double(const Vec3&)>& zeta, double R,
                                   double t, double t0, double dt, long long n_paths, int grid_n,
                                   std::uint64_t seed) {
    if (!(R > 0.0)) throw domain_error("fk_eigen_consistency: R must be > 0");
    if (!(t0 > 0.0 && t0 < t)) throw domain_error("fk_eigen_consistency: need 0 < t0 < t");

    FKEigenResult out;
    // sup of zeta over B(0, 2R), sampled on a grid
    out.K = -std::numeric_limits<double>::infinity();
    const int ns = 41;
    for (int iz = 0; iz < ns; ++iz) {
        for (int iy = 0; iy < ns; ++iy) {
            for (int ix = 0; ix < ns; ++ix) {
                Vec3 x{-2.0 * R + 4.0 * R * ix / (ns - 1), -2.0 * R + 4.0 * R * iy / (ns - 1),
                       -2.0 * R + 4.0 * R * iz / (ns - 1)};
                if (x.norm() > 2.0 * R) continue;
                double v = zeta(x);
                if (!std::isfinite(v))
                    throw domain_error("fk_eigen_consistency: zeta must be bounded on B(0,2R)");
                out.K = std::fmax(out.K, v);
            }
        }
    }

    DirichletProblem pb;
    pb.box_half_width = R;
    pb.grid_n = grid_n;
    pb.potential.resize(static_cast<std::size_t>(grid_n) * grid_n * grid_n);
    std::size_t i = 0;
    for (int iz = 0; iz < grid_n; ++iz)
        for (int iy = 0; iy < grid_n; ++iy)
            for (int ix = 0; ix < grid_n; ++ix, ++i) pb.potential[i] = zeta(pb.node(ix, iy, iz));
    pb.mask = ball_mask(pb, R);
    out.lambda = principal_eigenvalue(pb).lambda;

    constexpr double kTwoPi = 6.28318530717958647692528676656;
    out.bound = std::pow(kTwoPi * t0, 1.5) * std::exp(-t0 * out.K) *
                std::exp((t + t0) * out.lambda);

    const Domain ball{Domain::Shape::ball, R};
    const double volume = (kTwoPi * 2.0 / 3.0) * R * R * R; // 4 pi R^3 / 3
    Rng root(seed);
    Accumulator acc;
    for (long long rep = 0; rep < n_paths; ++rep) {
        Rng stream = root.substream(static_cast<std::uint64_t>(rep));
        Vec3 x;
        do {
            x = {stream.uniform(-R, R), stream.uniform(-R, R), stream.uniform(-R, R)};
        } while (x.norm() > R);
        BrownianPath path = sample_path(x, t, dt, stream);
        bool survived = true;
        for (const Vec3& p : path.positions) {
            if (!ball.inside(p)) {
                survived = false;
                break;
            }
        }
        if (!survived) {
            acc.add(0.0);
            continue;
        }
        double integral = 0.0;
        double prev = zeta(path.positions[0]);
        for (long long k = 1; k <= path.steps; ++k) {
            double cur = zeta(path.positions[static_cast<std::size_t>(k)]);
            integral += 0.5 * (path.time_of(k) - path.time_of(k - 1)) * (prev + cur);
            prev = cur;
        }
        acc.add(std::exp(integral));
    }
    out.mc_integral = acc.estimate(seed);
    out.mc_integral.mean *= volume;
    out.mc_integral.stderr_ *= volume;
    return out;
}

} // namespace pan
