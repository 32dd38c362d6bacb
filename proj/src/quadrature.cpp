#include "pan/quadrature.hpp"

namespace pan {
namespace {

struct Budget {
    long remaining;
};

double simpson(double fa, double fm, double fb, double h6) { return h6 * (fa + 4.0 * fm + fb); }

double adapt(const std::function<double(double)>& f, double a, double b, double fa, double fm,
             double fb, double whole, double tol, Budget& budget, int depth) {
    if (budget.remaining-- <= 0) throw numerical_error("integrate: subdivision cap exceeded");
    double m = 0.5 * (a + b);
    double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    double flm = f(lm), frm = f(rm);
    double h12 = (b - a) / 12.0;
    double left = simpson(fa, flm, fm, h12);
    double right = simpson(fm, frm, fb, h12);
    double delta = left + right - whole;
    if (depth > 0 && (std::fabs(delta) <= 15.0 * tol || b - a < 1e-300)) {
        return left + right + delta / 15.0;
    }
    return adapt(f, a, m, fa, flm, fm, left, 0.5 * tol, budget, depth + 1) +
           adapt(f, m, b, fm, frm, fb, right, 0.5 * tol, budget, depth + 1);
}

double run(const std::function<double(double)>& f, double a, double b, double tol, long cap) {
    if (!(b >= a)) throw domain_error("integrate: b < a");
    if (a == b) return 0.0;
    Budget budget{cap};
    double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    double whole = simpson(fa, fm, fb, (b - a) / 6.0);
    return adapt(f, a, b, fa, fm, fb, whole, tol, budget, 0);
}

} // namespace

double integrate(const std::function<double(double)>& f, double a, double b, double abstol,
                 long max_subdivisions) {
    return run(f, a, b, abstol, max_subdivisions);
}

double integrate_rel(const std::function<double(double)>& f, double a, double b, double abstol,
                     double reltol, long max_subdivisions) {
    double rough = run(f, a, b, abstol * 100.0, max_subdivisions);
    double tol = abstol + reltol * std::fabs(rough);
    return run(f, a, b, tol, max_subdivisions);
}

double integrate_to_inf(const std::function<double(double)>& f, double a, double abstol,
                        long max_subdivisions) {
    auto g = [&](double u) {
        double om = 1.0 - u;
        double r = a + u / om;
        return f(r) / (om * om);
    };
    // Stop just short of u=1; the Jacobian-weighted integrand must vanish there.
    return run(g, 0.0, 1.0 - 1e-12, abstol, max_subdivisions);
}

} // namespace pan
