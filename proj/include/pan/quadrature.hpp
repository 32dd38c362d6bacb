#pragma once

#include <cmath>
#include <functional>

#include "pan/errors.hpp"

namespace pan {

// Adaptive Simpson on [a,b] to absolute tolerance `abstol`, with a hard cap
// on the number of subdivisions (throws numerical_error on cap).
double integrate(const std::function<double(double)>& f, double a, double b, double abstol,
                 long max_subdivisions = 1000000);

// Same, but convergence is judged against abstol + reltol*|integral|.
double integrate_rel(const std::function<double(double)>& f, double a, double b, double abstol,
                     double reltol, long max_subdivisions = 1000000);

// \int_a^\infty f(r) dr via the substitution r = a + u/(1-u).
double integrate_to_inf(const std::function<double(double)>& f, double a, double abstol,
                        long max_subdivisions = 1000000);

} // namespace pan
