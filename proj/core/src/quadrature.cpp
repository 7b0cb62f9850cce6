#include "fracheat/quadrature.hpp"

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/tools/minima.hpp>

#include <cmath>
#include <limits>
#include <stdexcept>

#include "fracheat/error.hpp"

namespace fracheat::quad {

Result finite(const Integrand& f, double a, double b, double rel_tol) {
    if (a == b) return {};
    thread_local boost::math::quadrature::tanh_sinh<double> rule(15);
    Result r;
    try {
        double l1 = 0.0;
        r.value = rule.integrate(f, a, b, rel_tol, &r.error, &l1);
    } catch (const std::exception& e) {
        throw NumericalError(std::string("quad::finite: ") + e.what());
    }
    return r;
}

Result semi_infinite(const Integrand& f, double a, double rel_tol) {
    thread_local boost::math::quadrature::exp_sinh<double> rule(9);
    Result r;
    try {
        double l1 = 0.0;
        // exp_sinh integrates over [a, inf) after shifting.
        auto shifted = [&f, a](double x) { return f(a + x); };
        r.value = rule.integrate(shifted, rel_tol, &r.error, &l1);
    } catch (const std::exception& e) {
        throw NumericalError(std::string("quad::semi_infinite: ") + e.what());
    }
    return r;
}

Result gauss_kronrod(const Integrand& f, double a, double b, double rel_tol, unsigned max_depth) {
    if (a == b) return {};
    Result r;
    r.value = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, max_depth,
                                                                            rel_tol, &r.error);
    return r;
}

Extremum maximize(const Integrand& f, double a, double b) {
    if (a == b) return {a, f(a)};
    const int bits = std::numeric_limits<double>::digits / 2;
    std::uintmax_t iters = 200;
    auto [x, neg] = boost::math::tools::brent_find_minima([&f](double s) { return -f(s); }, a, b,
                                                          bits, iters);
    return {x, -neg};
}

}  // namespace fracheat::quad
