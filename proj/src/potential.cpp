#include "pan/potential.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pan/errors.hpp"
#include "pan/quadrature.hpp"

namespace pan {

namespace {
constexpr double kPi = 3.14159265358979323846264338328;

double psi(double lambda) { return std::expm1(lambda) - lambda; }
} // namespace

double CutoffProfile::alpha(double lambda) {
    if (lambda <= 1.0) return 1.0;
    if (lambda >= 3.0) return 0.0;
    double x = 0.5 * (lambda - 1.0);
    return 1.0 - x * x * (3.0 - 2.0 * x);
}

double CutoffProfile::alpha_prime(double lambda) {
    if (lambda <= 1.0 || lambda >= 3.0) return 0.0;
    double x = 0.5 * (lambda - 1.0);
    return -3.0 * x * (1.0 - x);
}

void TruncationScheme::validate() const {
    if (a <= 0.0) throw domain_error("scheme: a must be > 0");
    if (!(epsilon > 0.0 && epsilon <= 1.0)) throw domain_error("scheme: epsilon must be in (0,1]");
    if (!(p > 1.5 && p < 3.0)) throw domain_error("scheme: p must satisfy 3/2 < p < 3");
    if (tail_radius < 3.0 * a) throw domain_error("scheme: tail_radius must be >= 3a");
}

double kernel_La(const Vec3& x, const TruncationScheme& scheme) {
    double r = x.norm();
    if (r <= scheme.a) return 0.0;
    return (1.0 - CutoffProfile::alpha(r / scheme.a)) / std::pow(r, scheme.p);
}

double compensator_Ca(double a) {
    if (a <= 0.0) throw domain_error("compensator_Ca: a must be > 0");
    double integral = integrate([](double u) { return CutoffProfile::alpha(u); }, 0.0, 3.0, 1e-12);
    return 4.0 * kPi * a * integral;
}

double kernel_ball_integral(const TruncationScheme& scheme, double rho) {
    scheme.validate();
    if (rho < 0.0) throw domain_error("kernel_ball_integral: rho must be >= 0");
    auto f = [&](double r) {
        if (r <= scheme.a) return 0.0;
        return (1.0 - CutoffProfile::alpha(r / scheme.a)) * std::pow(r, 2.0 - scheme.p);
    };
    return 4.0 * kPi * integrate(f, 0.0, rho, 1e-11);
}

double tail_std_of(const TruncationScheme& scheme) {
    // beyond tail_radius >= 3a the kernel is exactly r^{-p}
    double rho = scheme.tail_radius;
    double var = 4.0 * kPi * std::pow(rho, 3.0 - 2.0 * scheme.p) / (2.0 * scheme.p - 3.0);
    return std::sqrt(var);
}

double eval_singular_local(const PoissonField& field, const Vec3& x,
                           const TruncationScheme& scheme) {
    scheme.validate();
    if (!field.window.contains_ball(x, 3.0 * scheme.a))
        throw out_of_window_error("eval_singular_local: support ball outside window");
    double sum = 0.0;
    const double cut2 = 9.0 * scheme.a * scheme.a;
    for (const Vec3& y : field.points) {
        Vec3 d = y - x;
        double r2 = d.norm2();
        if (r2 > cut2) continue;
        if (r2 == 0.0) return std::numeric_limits<double>::infinity();
        double r = std::sqrt(r2);
        sum += CutoffProfile::alpha(r / scheme.a) / r2;
    }
    return sum;
}

PotentialValue eval_truncated_field(const PoissonField& field, const Vec3& x,
                                    const TruncationScheme& scheme, Rng* tail_rng) {
    scheme.validate();
    const double rho = scheme.tail_radius;
    if (!field.window.contains_ball(x, rho))
        throw out_of_window_error("eval_truncated_field: evaluation ball outside window");
    double sum = 0.0;
    const double rho2 = rho * rho;
    for (const Vec3& y : field.points) {
        Vec3 d = y - x;
        if (d.norm2() > rho2) continue;
        sum += kernel_La(d, scheme);
    }
    PotentialValue out;
    out.tail_std = tail_std_of(scheme);
    out.value = sum - scheme.epsilon * kernel_ball_integral(scheme, rho);
    if (scheme.tail_policy == TailPolicy::gaussian_surrogate) {
        if (!tail_rng)
            throw domain_error("eval_truncated_field: gaussian_surrogate needs an rng");
        out.value += std::sqrt(scheme.epsilon) * out.tail_std * tail_rng->gaussian();
    }
    return out;
}

PotentialValue eval_renormalized(const PoissonField& field, const Vec3& x,
                                 const TruncationScheme& scheme, Rng* tail_rng) {
    PotentialValue out = eval_truncated_field(field, x, scheme, tail_rng);
    out.value += eval_singular_local(field, x, scheme) - scheme.epsilon * compensator_Ca(scheme.a);
    return out;
}

double truncated_mgf_exact(double theta, const TruncationScheme& scheme) {
    scheme.validate();
    if (theta == 0.0) return 1.0;
    const double a = scheme.a;
    const double p = scheme.p;
    auto near = [&](double r) {
        if (r <= a) return 0.0;
        double la = (1.0 - CutoffProfile::alpha(r / a)) / std::pow(r, p);
        return psi(theta * la) * r * r;
    };
    double inner = integrate_rel(near, 0.0, 3.0 * a, 1e-14, 1e-10);
    // r in [3a, inf): L_a = r^{-p}; substitute u = 1/r
    auto far = [&](double u) {
        if (u <= 0.0) return theta * theta * 0.5 * std::pow(u, 2.0 * p - 4.0);
        return psi(theta * std::pow(u, p)) / (u * u * u * u);
    };
    double outer = integrate_rel(far, 0.0, 1.0 / (3.0 * a), 1e-14, 1e-10);
    double integral = 4.0 * kPi * (inner + outer);
    return std::exp(scheme.epsilon * integral);
}

std::vector<std::pair<double, double>> sup_field_decay_probe(double a,
                                                             const std::vector<double>& R_list,
                                                             long long samples_per_R,
                                                             std::uint64_t seed) {
    if (a <= 0.0) throw domain_error("sup_field_decay_probe: a must be > 0");
    for (std::size_t i = 1; i < R_list.size(); ++i)
        if (R_list[i] <= R_list[i - 1])
            throw domain_error("sup_field_decay_probe: R_list must be increasing");
    TruncationScheme scheme;
    scheme.a = a;
    scheme.epsilon = 1.0;
    scheme.tail_radius = 3.0 * a;
    const double rho = scheme.tail_radius;
    const double comp = kernel_ball_integral(scheme, rho);

    std::vector<std::pair<double, double>> out;
    Rng root(seed);
    for (std::size_t i = 0; i < R_list.size(); ++i) {
        double R = R_list[i];
        Box window = Box::centered_cube(R + rho);
        PoissonField field = sample_field(window, 1.0, root.substream(i).next_u64());
        // bucket index with cell size rho so evaluation touches 27 buckets
        const double cs = rho;
        auto bucket = [&](const Vec3& p) {
            auto enc = [](long long v) {
                return static_cast<std::uint64_t>(v + (1ll << 20)) & 0x1fffff;
            };
            long long bx = std::llround(std::floor(p.x / cs));
            long long by = std::llround(std::floor(p.y / cs));
            long long bz = std::llround(std::floor(p.z / cs));
            return (enc(bx) << 42) | (enc(by) << 21) | enc(bz);
        };
        std::vector<std::pair<std::uint64_t, std::uint32_t>> index;
        index.reserve(field.points.size());
        for (std::uint32_t j = 0; j < field.points.size(); ++j)
            index.emplace_back(bucket(field.points[j]), j);
        std::sort(index.begin(), index.end());

        Rng xs = root.substream(0x1000 + i);
        double sup = 0.0;
        for (long long s = 0; s < samples_per_R; ++s) {
            Vec3 x;
            do {
                x = {xs.uniform(-R, R), xs.uniform(-R, R), xs.uniform(-R, R)};
            } while (x.norm() > R);
            double sum = 0.0;
            for (int dx = -1; dx <= 1; ++dx) {
                for (int dy = -1; dy <= 1; ++dy) {
                    for (int dz = -1; dz <= 1; ++dz) {
                        Vec3 corner{x.x + dx * cs, x.y + dy * cs, x.z + dz * cs};
                        std::uint64_t key = bucket(corner);
                        auto lo = std::lower_bound(index.begin(), index.end(),
                                                   std::make_pair(key, std::uint32_t{0}));
                        for (auto it = lo; it != index.end() && it->first == key; ++it) {
                            Vec3 d = field.points[it->second] - x;
                            if (d.norm2() > rho * rho) continue;
                            sum += kernel_La(d, scheme);
                        }
                    }
                }
            }
            double v = sum - comp;
            sup = std::fmax(sup, std::fabs(v));
        }
        out.emplace_back(R, sup / std::log(R));
    }
    return out;
}

} // namespace pan
