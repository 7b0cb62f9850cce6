#include <doctest.h>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include <cmath>
#include <limits>
#include <numbers>

#include "fracheat/error.hpp"
#include "fracheat/estimates.hpp"
#include "fracheat/rearrange.hpp"
#include "fracheat/zygmund.hpp"
#include "support.hpp"

using namespace fracheat;
using fracheat::testing::random_function;
using fracheat::testing::rel_err;

namespace {

constexpr double kE = std::numbers::e;
const double kInf = std::numeric_limits<double>::infinity();
const GridSpec kLine = make_grid(1, 8.0, 256);

double w(double s) { return std::log(kE + 1.0 / s); }

// Independent oracle: tanh-sinh directly on [a, b] in the original variable.
double weight_oracle(double alpha, double a, double b) {
    boost::math::quadrature::tanh_sinh<double> rule;
    return rule.integrate([alpha](double s) { return std::pow(w(s), alpha); }, a, b);
}

}  // namespace

TEST_SUITE("zygmund") {

TEST_CASE("log weight") {
    for (double alpha : {0.0, 0.5, 1.0, 2.0}) {
        const LogWeight lw{alpha};
        CHECK(lw(1.0) == doctest::Approx(std::pow(std::log(kE + 1.0), alpha)).epsilon(1e-15));
        double prev = kInf;
        for (double s : geometric_grid(1e-8, 1e4, 60)) {
            CHECK(lw(s) <= prev);
            prev = lw(s);
        }
    }
}

TEST_CASE("weight integral against oracles") {
    // alpha = 1 closed form: s log(e + 1/s) + log(1 + e s) / e
    auto closed = [](double s) { return s * w(s) + std::log1p(kE * s) / kE; };
    CHECK(rel_err(log_weight_integral(1.0, 0.0, 1.0), closed(1.0)) <= 1e-13);
    CHECK(rel_err(log_weight_integral(1.0, 0.25, 3.0), closed(3.0) - closed(0.25)) <= 1e-13);
    for (double alpha : {0.5, 2.0, 3.5}) {
        CHECK(rel_err(log_weight_integral(alpha, 0.0, 1.0), weight_oracle(alpha, 0.0, 1.0)) <= 1e-11);
        CHECK(rel_err(log_weight_integral(alpha, 1e-6, 0.5), weight_oracle(alpha, 1e-6, 0.5)) <= 1e-11);
    }
    CHECK(log_weight_integral(0.0, 2.0, 5.0) == doctest::Approx(3.0).epsilon(1e-14));
    CHECK_THROWS_AS(log_weight_integral(1.0, 2.0, 1.0), PreconditionError);
}

TEST_CASE("frak norm examples") {
    for (double n : {2.0, 8.0, 64.0, 256.0})
        for (double alpha : {0.5, 1.0, 2.0})
            CHECK(rel_err(frak_norm(appendix_fn(n, alpha), 1.0, alpha), 1.0 / std::log(kE + n)) <= 1e-12);

    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const SampledFunction f = random_function(kLine, seed, 3.0, true);
        for (double q : {1.0, 2.0, 3.0}) CHECK(rel_err(frak_norm(f, q, 0.0), lq_norm(f, q)) <= 1e-12);
    }
    CHECK(frak_norm(SampledFunction::zeros(kLine), 1.0, 1.0) == 0.0);
    CHECK_THROWS_AS(frak_norm(indicator_ball(kLine, 1.0), 0.5, 1.0), PreconditionError);
}

TEST_CASE("q = infinity is the sup norm in every family") {
    const SampledFunction f = random_function(kLine, 3, 2.0, true);
    for (auto family : {NormFamily::FrakWeak, NormFamily::Zygmund, NormFamily::WeakZygmund, NormFamily::DoublestarWeak})
        CHECK(evaluate(NormSpec{family, kInf, 1.0, std::nullopt}, f) == f.sup_abs());
}

TEST_CASE("norm spec validation and names") {
    CHECK_THROWS_AS(NormSpec({NormFamily::Zygmund, 1.0, 0.0, 1.0}).validate(), PreconditionError);
    CHECK_THROWS_AS(NormSpec({NormFamily::FrakWeak, 1.0, 0.0, -1.0}).validate(), PreconditionError);
    CHECK_THROWS_AS(NormSpec({NormFamily::FrakWeak, 0.9, 0.0, std::nullopt}).validate(), PreconditionError);
    for (auto family : {NormFamily::FrakWeak, NormFamily::Zygmund, NormFamily::WeakZygmund, NormFamily::DoublestarWeak})
        CHECK(parse_norm_family(to_string(family)) == family);
    CHECK_THROWS_AS(parse_norm_family("lorentz"), PreconditionError);
}

TEST_CASE("zygmund and weak zygmund examples") {
    for (double alpha : {0.5, 1.0, 2.0}) {
        const Rearrangement wf = witness_weak_not_frak(1.0, alpha, 0.1, 1e-12, 64);
        CHECK(weak_zygmund_norm(wf, 1.0, alpha) == doctest::Approx(1.0).epsilon(1e-12));
    }

    // alpha = 0 on the cell-aligned set [-8, 8): every family reduces to |E|.
    const SampledFunction box = SampledFunction::constant(kLine, 1.0);
    CHECK(zygmund_norm(box, 1.0, 0.0) == doctest::Approx(16.0).epsilon(1e-13));
    CHECK(frak_norm(box, 1.0, 0.0) == doctest::Approx(16.0).epsilon(1e-13));

    const Rearrangement unit({0.0, 1.0}, {1.0});
    for (double alpha : {0.5, 1.0, 2.0})
        for (double q : {1.0, 2.0})
            CHECK(rel_err(zygmund_norm(unit, q, alpha), std::pow(weight_oracle(alpha, 0.0, 1.0), 1.0 / q)) <= 1e-11);
}

TEST_CASE("uniformly local norm") {
    const GridSpec g = make_grid(1, 8.0, 512);
    const double rho = 2.0;
    const SampledFunction f = pointwise_product(random_function(g, 4, 0.5), indicator_ball(g, 0.5));
    CHECK(rel_err(ul_frak_norm(f, 1.0, 1.0, rho), frak_norm(f, 1.0, 1.0)) <= 1e-14);
    CHECK_THROWS_AS(ul_frak_norm(f, 1.0, 1.0, 0.0), PreconditionError);

    // Radius doubling: an interval of radius 2 rho is covered by 3 lattice balls of radius rho.
    const SampledFunction spread = random_function(g, 5, 6.0);
    for (double alpha : {0.0, 1.0}) {
        const double small = ul_frak_norm(spread, 1.0, alpha, 0.5);
        const double big = ul_frak_norm(spread, 1.0, alpha, 1.0);
        CHECK(big >= small * (1 - 1e-14));
        CHECK(big <= 4.0 * small);
    }

    // Shift by a lattice vector (rho / 2 = 1 = 16 cells).
    const SampledFunction bump = phi_c(1, 2.0, g);
    std::vector<double> shifted(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) shifted[(i + 32) % g.size()] = bump[i];
    const double a = ul_frak_norm(bump, 1.0, 0.5, rho);
    const double b = ul_frak_norm(SampledFunction(g, shifted), 1.0, 0.5, rho);
    CHECK(rel_err(a, b) < 0.05);
}

TEST_CASE("ball lattice layout") {
    const GridSpec g = make_grid(2, 4.0, 32);
    const BallLattice lattice(g, 2.0);
    CHECK(lattice.centers() == 64);  // spacing 1 on each axis of an 8-wide box
    CHECK(lattice.max_ball_measure() <= std::numbers::pi * 4.0 * 1.1);
    CHECK_THROWS_AS(BallLattice(g, 2.0, 1.5), PreconditionError);
}

TEST_CASE("holder product") {
    const SampledFunction f = random_function(kLine, 6, 3.0);
    const HolderCheck id = holder_product_check(f, SampledFunction::constant(kLine, 1.0), 1.0, kInf, 1.0, 0.0);
    CHECK(rel_err(id.lhs, id.rhs) <= 1e-14);

    const SampledFunction chi = indicator_ball(kLine, 1.0);
    const HolderCheck c = holder_product_check(chi, chi, 2.0, 2.0, 1.0, 1.0);
    // Both sides from the explicit step: sup_s w(s) min(s, 2).
    const double step = frak_norm(Rearrangement({0.0, 2.0}, {1.0}), 1.0, 1.0);
    CHECK(rel_err(c.lhs, step) <= 1e-14);
    CHECK(rel_err(c.rhs, step) <= 1e-14);

    const double p = 3.0;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const HolderCheck h = holder_product_check(random_function(kLine, seed, 2.0, true),
                                                   random_function(kLine, seed + 40, 3.0, true), p / (p - 1), p,
                                                   0.5, 0.5);
        CHECK(h.lhs <= h.rhs * (1 + 1e-10));
    }
    CHECK_THROWS_AS(holder_product_check(chi, chi, 2.0, 3.0, 1.0, 1.0), PreconditionError);
}

TEST_CASE("power identity") {
    const SampledFunction f = random_function(kLine, 8, 3.0, true);
    CHECK(power_identity_check(f, 1.0, 2.0, 1.0).relative_gap() == 0.0);

    const SampledFunction chi = indicator_ball(kLine, 1.0);
    const IdentityCheck c = power_identity_check(chi, 2.0, 1.0, 1.0);
    CHECK(c.relative_gap() <= 1e-14);

    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const SampledFunction g = random_function(kLine, seed, 2.0, true);
        CHECK(power_identity_check(g, 3.0, 1.0, 0.5).relative_gap() <= 1e-12);
        CHECK(power_identity_check(g, 2.0, 1.0, 0.5).relative_gap() <= 1e-12);
    }
    CHECK_THROWS_AS(power_identity_check(f, 0.5, 1.0, 1.0), PreconditionError);
}

TEST_CASE("log interpolation") {
    const GridSpec g = make_grid(1, 8.0, 512);
    const SampledFunction phi = phi_c(1, 2.0, g);
    const LogInterpolationCheck eq = log_interpolation(phi, 0.5, 0.5, 1.0);
    CHECK(rel_err(eq.lhs, eq.rhs) <= 1e-14);

    const LogInterpolationCheck c = log_interpolation(phi, 0.0, 0.5, 1.0);
    CHECK(c.lhs <= c.rhs_ball * (1 + 1e-12));
    CHECK(std::isfinite(c.empirical_constant));

    // Bounded data: lhs shrinks with the balls.
    const SampledFunction f = random_function(g, 3, 4.0);
    double prev = kInf;
    for (double rho : {1.0, 0.5, 0.25, 0.125}) {
        const LogInterpolationCheck r = log_interpolation(f, 0.0, 0.5, rho);
        CHECK(r.lhs < prev);
        CHECK(r.lhs <= r.rhs_ball * (1 + 1e-12));
        prev = r.lhs;
    }
    CHECK_THROWS_AS(log_interpolation(f, 1.0, 0.5, 1.0), PreconditionError);
}

TEST_CASE("property: homogeneity and triangle inequality") {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const SampledFunction f = random_function(kLine, seed, 3.0, true);
        const SampledFunction g = random_function(kLine, seed + 200, 2.0, true);
        for (double alpha : {0.0, 1.0, 2.0}) {
            const double nf = frak_norm(f, 1.0, alpha);
            CHECK(frak_norm(scaled(f, -2.5), 1.0, alpha) == doctest::Approx(2.5 * nf).epsilon(1e-14));
            CHECK(frak_norm(axpy(1.0, f, 1.0, g), 1.0, alpha) <= (nf + frak_norm(g, 1.0, alpha)) * (1 + 1e-12));
        }
    }
}

TEST_CASE("property: inclusion chain and upper bound") {
    double c_min = kInf, c_max = 0.0;
    for (const auto& [name, r] : inclusion_corpus(7)) {
        for (double q : {1.0, 2.0})
            for (double alpha : {0.5, 1.0, 2.0}) {
                const InclusionRow row = inclusion_chain(name, r, q, alpha);
                CHECK_MESSAGE(row.ordered(), name);
            }
        const double c = frak_norm(r, 1.0, 1.0) / weak_zygmund_norm(r, 1.0, 2.0);
        c_min = std::min(c_min, c);
        c_max = std::max(c_max, c);
    }
    MESSAGE("frak / weak_zygmund(alpha + 1) over the corpus: [" << c_min << ", " << c_max << "]");
    CHECK(std::isfinite(c_max));
}

TEST_CASE("property: ratio collapse on f_n") {
    double prev = kInf;
    for (double n = 2; n <= 256; n *= 2) {
        const Rearrangement f = appendix_fn(n, 1.0);
        const double ratio = frak_norm(f, 1.0, 1.0) / weak_zygmund_norm(f, 1.0, 2.0);
        CHECK(ratio < prev);
        prev = ratio;
    }
}

TEST_CASE("property: doublestar reverse inequality") {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const SampledFunction f = random_function(kLine, seed, 3.0, true);
        for (double p : {2.0, 3.0}) {
            const double lhs = doublestar_norm(pointwise_pow(f, p), 1.0, 1.0);
            const double rhs = std::pow(doublestar_norm(f, p, 1.0), p);
            CHECK(lhs >= rhs * (1 - 1e-12));
        }
    }
}

}
