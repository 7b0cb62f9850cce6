#pragma once

#include <functional>

namespace fracheat::quad {

using Integrand = std::function<double(double)>;

struct Result {
    double value = 0.0;
    double error = 0.0;
};

// Double-exponential (tanh-sinh) rule on [a, b]; tolerant of integrable endpoint
// singularities. Never evaluates f at the endpoints.
Result finite(const Integrand& f, double a, double b, double rel_tol = 1e-13);

// exp-sinh rule on [a, infinity).
Result semi_infinite(const Integrand& f, double a, double rel_tol = 1e-13);

// Adaptive 31-point Gauss-Kronrod on [a, b] for smooth integrands.
Result gauss_kronrod(const Integrand& f, double a, double b, double rel_tol = 1e-14,
                     unsigned max_depth = 15);

struct Extremum {
    double x = 0.0;
    double value = 0.0;
};

// Brent's method for a local maximum of f on [a, b].
Extremum maximize(const Integrand& f, double a, double b);

}  // namespace fracheat::quad
