#include "pan/brownian.hpp"

#include <cmath>

#include "pan/errors.hpp"

namespace pan {

BrownianPath sample_path(const Vec3& start, double t, double dt, Rng& rng) {
    if (!(t > 0.0)) throw domain_error("sample_path: t must be > 0");
    if (!(dt > 0.0 && dt <= t)) throw domain_error("sample_path: need 0 < dt <= t");
    BrownianPath path;
    path.start = start;
    path.dt = dt;
    path.t = t;
    path.steps = static_cast<long long>(std::ceil(t / dt - 1e-12));
    path.positions.resize(static_cast<std::size_t>(path.steps) + 1);
    path.positions[0] = start;
    Vec3 pos = start;
    const double sd = std::sqrt(dt);
    for (long long i = 1; i <= path.steps; ++i) {
        double step_dt = i == path.steps ? t - (i - 1) * dt : dt;
        double s = i == path.steps ? std::sqrt(std::fmax(step_dt, 0.0)) : sd;
        pos += Vec3{s * rng.gaussian(), s * rng.gaussian(), s * rng.gaussian()};
        path.positions[static_cast<std::size_t>(i)] = pos;
    }
    return path;
}

BrownianPath sample_bridge(double dt, Rng& rng) {
    BrownianPath path = sample_path({0, 0, 0}, 1.0, dt, rng);
    const Vec3 end = path.positions.back();
    for (long long i = 0; i <= path.steps; ++i) {
        double s = path.time_of(i);
        path.positions[static_cast<std::size_t>(i)] =
            path.positions[static_cast<std::size_t>(i)] - s * end;
    }
    path.positions.back() = {0, 0, 0};
    return path;
}

std::optional<double> first_exit(const BrownianPath& path, const Domain& domain) {
    for (long long i = 0; i <= path.steps; ++i) {
        if (!domain.inside(path.positions[static_cast<std::size_t>(i)])) return path.time_of(i);
    }
    return std::nullopt;
}

ExitBoundResult exit_lower_bound_check(double R, double t, const Box& target_set,
                                       long long replicates, double dt, std::uint64_t seed) {
    if (!(R > 0.0 && t > 0.0)) throw domain_error("exit_lower_bound_check: R, t must be > 0");
    if (replicates < 1000) throw domain_error("exit_lower_bound_check: need >= 1000 replicates");
    Rng root(seed);

    Accumulator lhs_acc, end_acc, bridge_acc;
    const double bridge_cap = R / std::sqrt(t);
    for (long long rep = 0; rep < replicates; ++rep) {
        Rng s1 = root.substream(2 * rep);
        BrownianPath path = sample_path({0, 0, 0}, t, dt, s1);
        bool confined = true;
        for (const Vec3& p : path.positions) {
            if (p.norm() > 2.0 * R) {
                confined = false;
                break;
            }
        }
        const Vec3& end = path.positions.back();
        lhs_acc.add(confined && target_set.contains(end) ? 1.0 : 0.0);
        end_acc.add(target_set.contains(end) && end.norm() <= R ? 1.0 : 0.0);

        Rng s2 = root.substream(2 * rep + 1);
        BrownianPath bridge = sample_bridge(dt, s2);
        bool ok = true;
        for (const Vec3& p : bridge.positions) {
            if (p.norm() > bridge_cap) {
                ok = false;
                break;
            }
        }
        bridge_acc.add(ok ? 1.0 : 0.0);
    }

    ExitBoundResult out;
    out.lhs = lhs_acc.estimate(seed);
    Estimate end_est = end_acc.estimate(seed);
    Estimate bridge_est = bridge_acc.estimate(seed);
    out.rhs.mean = end_est.mean * bridge_est.mean;
    // product of independent estimates: first-order error propagation
    out.rhs.stderr_ = std::sqrt(end_est.stderr_ * end_est.stderr_ * bridge_est.mean * bridge_est.mean +
                                bridge_est.stderr_ * bridge_est.stderr_ * end_est.mean * end_est.mean);
    out.rhs.n = replicates;
    out.rhs.seed = seed;
    return out;
}

} // namespace pan
