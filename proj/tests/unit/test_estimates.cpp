#include <doctest.h>

#include <cmath>
#include <numbers>

#include "fracheat/error.hpp"
#include "fracheat/estimates.hpp"
#include "fracheat/kernel.hpp"
#include "fracheat/rearrange.hpp"
#include "fracheat/solver.hpp"
#include "fracheat/zygmund.hpp"
#include "support.hpp"

using namespace fracheat;
using fracheat::testing::inf;
using fracheat::testing::rel_err;

namespace {

constexpr double kE = std::numbers::e;

double w(double s) { return std::log(kE + 1.0 / s); }

double spread(const std::vector<double>& v) {
    const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
    return *hi / *lo;
}

}  // namespace

TEST_SUITE("estimates") {

TEST_CASE("geometric grid") {
    const auto g = geometric_grid(1e-4, 1.0, 5);
    REQUIRE(g.size() == 5);
    CHECK(g.front() == 1e-4);
    CHECK(g.back() == 1.0);
    CHECK(g[2] == doctest::Approx(1e-2).epsilon(1e-14));
}

TEST_CASE("weighted integral bounds") {
    const auto s1 = geometric_grid(1e-6, 1e2, 40);
    const RatioTrace exact = lemma31_check(1, 0.0, 0.0, 1.0, s1);
    for (double r : exact.ratio) CHECK(std::abs(r - 1.0) <= 1e-10);

    // q = 0, alpha = 1 has the antiderivative s log(e + 1/s) + log(1 + e s) / e.
    const RatioTrace one = lemma31_check(1, 0.0, 1.0, 1.0, s1);
    for (std::size_t i = 0; i < s1.size(); ++i) {
        const double s = s1[i];
        CHECK(rel_err(one.lhs[i], s * w(s) + std::log1p(kE * s) / kE) <= 1e-10);
    }

    const RatioTrace v2 = lemma31_check(2, 0.0, -2.0, 1.0, geometric_grid(1e-6, 0.5, 40));
    CHECK(std::isfinite(v2.max_ratio()));
    CHECK(v2.max_ratio() < 2.0);

    const RatioTrace v3 = lemma31_check(3, -2.0, 2.0, 1.0, geometric_grid(1e-4, 1e2, 40));
    CHECK(std::isfinite(v3.max_ratio()));
    CHECK(v3.max_ratio() < 2.0);

    CHECK_THROWS_AS(lemma31_check(1, -1.0, 0.0, 1.0, s1), PreconditionError);
    CHECK_THROWS_AS(lemma31_check(2, 0.0, -0.5, 1.0, s1), PreconditionError);
    CHECK_THROWS_AS(lemma31_check(3, -0.5, 0.0, 1.0, s1), PreconditionError);
    CHECK_THROWS_AS(lemma31_check(4, 0.0, 0.0, 1.0, s1), PreconditionError);
}

TEST_CASE("pure logarithmic integrand against its antiderivative") {
    const auto s = geometric_grid(1e-6, 0.5, 30);
    for (double alpha : {-2.0, -3.5}) {
        const RatioTrace t = pure_log_check(alpha, s);
        for (std::size_t i = 0; i < s.size(); ++i) {
            const double exact = std::pow(std::log(1.0 / s[i]), alpha + 1.0) / (-alpha - 1.0);
            CHECK(rel_err(t.lhs[i], exact) <= 1e-10);
        }
    }
}

TEST_CASE("rearranged kernel integral") {
    const auto t = geometric_grid(1e-4, 1.0, 40);
    for (double theta : {1.0, 2.0}) {
        const RatioTrace flat = lemma32_check(1, theta, 1.0, 1.0, 0.0, t);
        CHECK(spread(flat.ratio) <= 1 + 1e-9);
        // ||h_t||_1 = omega_n int_0^inf (1 + r)^{-n-theta} r^{n-1} dr for n = 1.
        CHECK(rel_err(flat.lhs.front(), 2.0 / theta) <= 1e-10);
    }
    const RatioTrace crit = lemma32_check(1, 1.0, 1.0, 2.0, 1.0, t);
    CHECK(crit.max_ratio() < 10.0);
    const RatioTrace neg = lemma32_check(1, 1.0, 1.0, 2.0, -1.0, t);
    CHECK(neg.max_ratio() < 10.0);
    CHECK(spread(neg.ratio) < 2.0);
    CHECK_THROWS_AS(lemma32_check(1, 1.0, 2.0, 1.0, 0.0, t), PreconditionError);
    CHECK_THROWS_AS(lemma32_check(1, 1.0, 1.0, 1.0, -1.0, t), PreconditionError);
}

TEST_CASE("semigroup decay in weak zygmund norms") {
    const GridSpec g = make_grid(1, 16.0, 1024);
    const auto t = geometric_grid(1e-4, 1.0, 40);
    const SampledFunction chi = indicator_ball(g, 1.0);

    const DecayTrace contraction = prop31_check(chi, {1.0, 1.0, 0.5, 0.5, 2.0}, t);
    CHECK(contraction.finite_positive());
    CHECK(contraction.max_ratio() <= 1 + 1e-10);

    // alpha = beta = 0 reduces to the L^1 -> L^2 smoothing ratio.
    const DecayTrace l2 = prop31_check(chi, {1.0, 2.0, 0.0, 0.0, 2.0}, t);
    const SmoothingTrace sm = smoothing_check(chi, 2.0, 1.0, 2.0, t);
    for (std::size_t i = 0; i < t.size(); ++i) CHECK(rel_err(l2.ratio[i], sm.ratio[i]) <= 1e-10);

    const SampledFunction phi = phi_c(1, 2.0, g);
    const DecayTrace sup = prop31_check(phi, {1.0, inf(), 0.5, 0.0, 2.0}, geometric_grid(1e-3, 1.0, 30));
    CHECK(sup.finite_positive());
    MESSAGE("critical profile, (r, q) = (1, inf): ratio in [" << sup.min_ratio() << ", " << sup.max_ratio() << "]");
    CHECK(sup.min_ratio() > 0.0);

    CHECK_THROWS_AS(prop31_check(chi, {2.0, 1.0, 0.0, 0.0, 2.0}, t), PreconditionError);
    CHECK_THROWS_AS(prop31_check(chi, {1.0, 1.0, 1.0, 0.5, 2.0}, t), PreconditionError);
}

TEST_CASE("uniformly local decay") {
    const GridSpec g = make_grid(1, 8.0, 1024);
    const auto t = geometric_grid(1e-4, 1.0, 20);
    const DecayParams params{1.0, 2.0, 0.5, 0.0, 2.0};

    const SampledFunction inside = pointwise_product(indicator_ball(g, 0.25), smooth_bump(g, 0.25));
    const DecayTrace local = prop32_check(inside, params, 1.0, t);
    const DecayTrace global = prop31_check(inside, params, t);
    // While S(t) f still sits inside one unit ball the local norm is the global one.
    for (std::size_t i = 0; i < t.size() && t[i] <= 0.1; ++i) {
        INFO("t = " << t[i]);
        CHECK(rel_err(local.ratio[i], global.ratio[i]) < 0.05);
    }

    std::vector<double> bumps(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double x = g.center(i);
        const double d = x - 2.0 * std::round(x / 2.0);
        bumps[i] = std::abs(d) < 0.5 ? std::exp(1.0 - 1.0 / (1.0 - 4.0 * d * d)) : 0.0;
    }
    const DecayTrace periodic = prop32_check(SampledFunction(g, bumps), params, 1.0, t);
    CHECK(periodic.finite_positive());
    CHECK(periodic.max_ratio() < 10.0);

    CHECK_THROWS_AS(prop32_check(inside, params, 0.5, t), PreconditionError);
}

TEST_CASE("critical profile") {
    const GridSpec g = make_grid(1, 8.0, 512);
    const SampledFunction phi = phi_c(1, 2.0, g);
    // Radially decreasing: f*(s) is the profile at radius s / 2, except in the averaged center cells.
    const Rearrangement r = rearrange(phi);
    for (std::size_t i = g.size() / 2 + 1; i < g.size() / 2 + 30; ++i) {
        const double x = g.center(i);
        CHECK(phi[i] == doctest::Approx(phi_c_profile(1, 2.0, x)).epsilon(1e-15));
        CHECK(r.value(2.0 * x - 1e-9) == doctest::Approx(phi[i]).epsilon(1e-15));
    }

    const RatioTrace bound = phi_c_rearrangement_bound(phi, 1, 2.0, geometric_grid(g.cell_measure(), 2.0, 30));
    MESSAGE("f* against s^{-1} w(s)^{-n/theta-1}: max ratio " << bound.max_ratio());
    CHECK(bound.max_ratio() < 20.0);

    std::vector<double> norms;
    for (std::size_t m : {256u, 512u, 1024u, 2048u}) norms.push_back(frak_norm(phi_c(1, 2.0, make_grid(1, 8.0, m)), 1.0, 0.5));
    for (std::size_t i = 1; i < norms.size(); ++i) CHECK(rel_err(norms[i], norms[i - 1]) < 0.05);
    CHECK(std::isfinite(weak_zygmund_norm(phi, 1.0, 1.5)));
}

TEST_CASE("inclusion corpus") {
    const auto corpus = inclusion_corpus(7);
    CHECK(corpus.size() == 30);
    const auto again = inclusion_corpus(7);
    for (std::size_t i = 0; i < corpus.size(); ++i) CHECK(corpus[i].second.levels() == again[i].second.levels());
}

TEST_CASE("strictness witnesses diverge") {
    double prev = 0.0;
    for (double s_min : {1e-10, 1e-50, 1e-100}) {
        const InclusionRow a = inclusion_chain("weak_not_frak", witness_weak_not_frak(1.0, 2.0, 0.1, s_min, 64), 1.0, 2.0);
        CHECK(a.weak == doctest::Approx(1.0).epsilon(1e-10));
        CHECK(a.frak > prev);
        prev = a.frak;
        const InclusionRow b =
            inclusion_chain("frak_not_zygmund", witness_frak_not_zygmund(1.0, 1.0, 0.1, s_min, 64), 1.0, 1.0);
        CHECK(b.frak == doctest::Approx(1.0).epsilon(1e-10));
        CHECK(b.zygmund > 3.0);
    }
    CHECK(prev > 50.0);
}

TEST_CASE("verify table layout") {
    csv::Table t = verify_table();
    CHECK(t.columns() == std::vector<std::string>{"check", "param_json", "t_or_s", "measured", "envelope", "ratio"});
    DecayTrace empty;
    CHECK(empty.to_csv().str() == "t,measured,envelope,ratio\n");
}

}
