#include <doctest.h>

#include <cmath>
#include <numbers>

#include "fracheat/error.hpp"
#include "fracheat/estimates.hpp"
#include "fracheat/solver.hpp"
#include "support.hpp"

using namespace fracheat;
using fracheat::testing::rel_err;

namespace {

SolverConfig small_config(double L = 8.0, double T = 0.25) {
    SolverConfig cfg;
    cfg.kernel = KernelSpec::automatic(1, 2.0);
    cfg.grid = make_grid(1, L, 128);
    cfg.T = T;
    cfg.time_steps = 64;
    return cfg;
}

double sup_diff(const SampledFunction& a, const SampledFunction& b) { return axpy(1.0, a, -1.0, b).sup_abs(); }

}  // namespace

TEST_SUITE("solver") {

TEST_CASE("configuration") {
    SolverConfig cfg = small_config();
    CHECK(cfg.p() == 3.0);
    CHECK(cfg.alpha() == 0.5);
    CHECK(cfg.rho() == doctest::Approx(0.5).epsilon(1e-15));
    cfg.gamma = 0.5;
    CHECK_THROWS_AS(cfg.validate(), PreconditionError);
    cfg.gamma = 0.0;
    cfg.kernel = KernelSpec::automatic(2, 2.0);
    CHECK_THROWS_AS(cfg.validate(), PreconditionError);
    CHECK(to_string(SolveStatus::MaxSweeps) == "MAX_SWEEPS");
}

TEST_CASE("time grid excludes t = 0") {
    const CriticalSolver solver(small_config());
    const auto t = solver.times();
    REQUIRE(t.size() == 64);
    CHECK(t.front() == 0.25 / 64);
    CHECK(t.back() == 0.25);
}

TEST_CASE("Duhamel map") {
    const SolverConfig cfg = small_config();
    const CriticalSolver solver(cfg);
    const SampledFunction phi = scaled(phi_c(1, 2.0, cfg.grid), 0.2);

    SolutionTrajectory zero;
    zero.t = solver.times();
    zero.u.assign(zero.t.size(), SampledFunction::zeros(cfg.grid));
    const SolutionTrajectory lin = solver.linear(phi);
    const SolutionTrajectory mapped = solver.duhamel_map(phi, zero);
    for (std::size_t k = 0; k < zero.t.size(); ++k) CHECK(sup_diff(mapped.u[k], lin.u[k]) <= 1e-14 * phi.sup_abs());

    const SolutionTrajectory trivial = solver.duhamel_map(SampledFunction::zeros(cfg.grid), zero);
    for (const auto& u : trivial.u) CHECK(u.sup_abs() == 0.0);

    SolutionTrajectory shortened = zero;
    shortened.u.pop_back();
    CHECK_THROWS_AS(solver.duhamel_map(phi, shortened), PreconditionError);
}

TEST_CASE("single Fourier mode evolves by its symbol") {
    const SolverConfig cfg = small_config();
    const CriticalSolver solver(cfg);
    const double L = cfg.grid.halfwidth();
    const double xi = 3.0 * std::numbers::pi / L;
    const SampledFunction mode = sample(cfg.grid, [&](std::span<const double> x) { return std::cos(xi * x[0]); });
    SolutionTrajectory zero;
    zero.t = solver.times();
    zero.u.assign(zero.t.size(), SampledFunction::zeros(cfg.grid));
    const SolutionTrajectory out = solver.duhamel_map(mode, zero);
    for (std::size_t k = 0; k < zero.t.size(); k += 7) {
        const SampledFunction expect = scaled(mode, std::exp(-zero.t[k] * xi * xi));
        CHECK(sup_diff(out.u[k], expect) <= 1e-12);
    }
}

TEST_CASE("Picard iteration") {
    const SolverConfig cfg = small_config();
    const CriticalSolver solver(cfg);
    const SampledFunction profile = phi_c(1, 2.0, cfg.grid);

    const SolutionTrajectory none = solver.picard_solve(SampledFunction::zeros(cfg.grid));
    CHECK(none.status == SolveStatus::Converged);
    CHECK(none.sweeps == 1);
    for (const auto& u : none.u) CHECK(u.sup_abs() == 0.0);

    const SampledFunction phi = scaled(profile, 0.1);
    const SolutionTrajectory u = solver.picard_solve(phi);
    REQUIRE(u.status == SolveStatus::Converged);
    CHECK(u.dx.size() == u.sweeps);
    for (double r : u.contraction_ratios()) CHECK(r <= 0.6);
    CHECK(u.t_event == cfg.T);
    CHECK(u.status_line() == "status,CONVERGED,0.25");

    const SolutionTrajectory big = solver.picard_solve(scaled(profile, 5.0));
    CHECK(big.status == SolveStatus::Blowup);
    CHECK(big.t_event < cfg.T);
    CHECK((!big.u.back().all_finite() || big.u.back().sup_abs() > cfg.blowup_factor * 5.0 * profile.sup_abs()));
}

TEST_CASE("metrics") {
    const SolverConfig cfg = small_config();
    const CriticalSolver solver(cfg);
    const SampledFunction phi = scaled(phi_c(1, 2.0, cfg.grid), 0.1);

    SolutionTrajectory zero;
    zero.t = solver.times();
    zero.u.assign(zero.t.size(), SampledFunction::zeros(cfg.grid));
    const MetricTraces m0 = solver.metrics(zero);
    for (double v : m0.suprema()) CHECK(v == 0.0);

    const auto lin = solver.metrics(solver.linear(phi)).suprema();
    const auto sol = solver.metrics(solver.picard_solve(phi)).suprema();
    for (int i = 0; i < 3; ++i) {
        CHECK(std::isfinite(sol[i]));
        CHECK(sol[i] <= 2.0 * lin[i]);
        CHECK(sol[i] >= lin[i]);
    }

    // d_X against zero equals the metric suprema.
    const auto d = solver.distance(solver.linear(phi), zero);
    for (int i = 0; i < 3; ++i) CHECK(rel_err(d[i], lin[i]) <= 1e-14);
    CHECK(xt_metrics(cfg, zero).to_csv().columns() == std::vector<std::string>{"t", "sup_norm", "m1", "m2", "m3"});
}

TEST_CASE("initial trace") {
    const SolverConfig cfg = small_config();
    const CriticalSolver solver(cfg);
    const SampledFunction phi = scaled(phi_c(1, 2.0, cfg.grid), 0.1);

    const SolutionTrajectory lin = solver.linear(phi);
    const InitialTrace flat = initial_trace_check(solver, phi, lin, 0.0);
    REQUIRE(flat.t.size() == 10);
    for (double v : flat.ul_diff) CHECK(v == 0.0);

    const SolutionTrajectory u = solver.picard_solve(phi);
    const InitialTrace tr = initial_trace_check(solver, phi, u, 0.0);
    for (std::size_t i = 1; i < tr.t.size(); ++i) CHECK(tr.ul_diff[i] > tr.ul_diff[i - 1]);
    CHECK(tr.decay_factor() < 1.0);

    SolutionTrajectory unfinished = u;
    unfinished.status = SolveStatus::MaxSweeps;
    CHECK_THROWS_AS(initial_trace_check(solver, phi, unfinished, 0.0), PreconditionError);
    CHECK_THROWS_AS(initial_trace_check(solver, phi, u, 0.5), PreconditionError);
    CHECK(tr.to_csv().columns() == std::vector<std::string>{"t", "ul_diff", "pairing"});
}

TEST_CASE("threshold scan preconditions") {
    const SolverConfig cfg = small_config();
    const CriticalSolver solver(cfg);
    const SampledFunction zero = SampledFunction::zeros(cfg.grid);
    CHECK_THROWS_AS(epsilon_threshold_scan(solver, zero, {0.1, 1.0}), PreconditionError);
    CHECK_THROWS_AS(epsilon_threshold_scan(solver, phi_c(1, 2.0, cfg.grid), {1.0, 0.1}), PreconditionError);
    CHECK_THROWS_AS(epsilon_threshold_scan(solver, phi_c(1, 2.0, cfg.grid), {50.0, 100.0}), PreconditionError);
}

TEST_CASE("property: nonnegative data stays above the linear flow") {
    const SolverConfig cfg = small_config();
    const CriticalSolver solver(cfg);
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const SampledFunction phi = scaled(fracheat::testing::random_function(cfg.grid, seed, 1.0), 0.3);
        const SolutionTrajectory u = solver.picard_solve(phi);
        REQUIRE(u.status == SolveStatus::Converged);
        for (std::size_t k = 0; k < u.t.size(); ++k)
            CHECK(u.u[k].sup_abs() >= solver.semigroup(u.t[k], phi).sup_abs() * (1 - 1e-14));
    }
}

TEST_CASE("property: time-grid refinement") {
    SolverConfig coarse = small_config();
    SolverConfig fine = coarse;
    fine.time_steps = 2 * coarse.time_steps;
    const SampledFunction phi = scaled(phi_c(1, 2.0, coarse.grid), 0.1);
    const SolutionTrajectory a = picard_solve(coarse, phi);
    const SolutionTrajectory b = picard_solve(fine, phi);
    const double ua = a.u[coarse.time_steps / 2 - 1].sup_abs();
    const double ub = b.u[fine.time_steps / 2 - 1].sup_abs();
    CHECK(rel_err(ua, ub) < 0.02);
}

TEST_CASE("property: parabolic scaling") {
    // u_l(x, t) = l u(l x, l^2 t) with l = 2: halve the box, quarter the horizon, double the data.
    const SolverConfig a = small_config(8.0, 0.25);
    const SolverConfig b = small_config(4.0, 0.0625);
    const SampledFunction phi = scaled(phi_c(1, 2.0, a.grid), 0.1);
    const std::vector<double> v(phi.values().begin(), phi.values().end());
    SampledFunction phi_b(b.grid, v);
    phi_b = scaled(phi_b, 2.0);
    const SolutionTrajectory ua = picard_solve(a, phi);
    const SolutionTrajectory ub = picard_solve(b, phi_b);
    REQUIRE(ua.status == SolveStatus::Converged);
    REQUIRE(ub.status == SolveStatus::Converged);
    for (std::size_t k = 0; k < ua.u.size(); ++k) {
        const SampledFunction expect(b.grid, std::vector<double>(ua.u[k].values().begin(), ua.u[k].values().end()));
        CHECK(sup_diff(ub.u[k], scaled(expect, 2.0)) < 0.05 * ub.u[k].sup_abs());
    }
}

}
