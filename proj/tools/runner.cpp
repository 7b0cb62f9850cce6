#include "runner.hpp"

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iostream>
#include <limits>
#include <numbers>
#include <random>

#include "fracheat/error.hpp"
#include "fracheat/estimates.hpp"
#include "fracheat/kernel.hpp"
#include "fracheat/rearrange.hpp"
#include "fracheat/solver.hpp"
#include "fracheat/zygmund.hpp"

namespace fracheat::cli {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start) {
    return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

// JSON numbers cannot carry infinity.
nlohmann::json real(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return v;
}

std::vector<double> grid_or(const Params& p, double lo, double hi) {
    return geometric_grid(p.lo.value_or(lo), p.hi.value_or(hi), p.points);
}

bool finite_positive(const std::vector<double>& v) {
    return !v.empty() && std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x) && x > 0.0; });
}

double max_of(const std::vector<double>& v) {
    return v.empty() ? 0.0 : *std::max_element(v.begin(), v.end());
}

SolverConfig solver_config(const Params& p) {
    SolverConfig cfg;
    cfg.kernel = KernelSpec::automatic(p.n, p.theta);
    cfg.grid = p.grid();
    cfg.T = p.T;
    cfg.time_steps = p.steps;
    cfg.gamma = p.gamma;
    cfg.max_sweeps = p.max_sweeps;
    cfg.tolerance = p.tolerance;
    return cfg;
}

// Snapshots up to, not including, the first non-finite one.
SolutionTrajectory finite_prefix(const SolutionTrajectory& u) {
    SolutionTrajectory out;
    for (std::size_t k = 0; k < u.u.size() && u.u[k].all_finite(); ++k) {
        out.t.push_back(u.t[k]);
        out.u.push_back(u.u[k]);
    }
    return out;
}

std::string solver_params(const Params& p) {
    return nlohmann::json{{"n", p.n},         {"theta", p.theta},  {"T", p.T},
                          {"grid_m", p.grid_m}, {"box_l", p.box_l}, {"steps", p.steps},
                          {"gamma", p.gamma}, {"profile", p.profile}}
        .dump();
}

}  // namespace

void Run::add_artifact(const std::string& file, csv::Table table) {
    artifacts_.emplace_back(file, std::move(table));
}

bool Run::all_pass() const {
    return std::all_of(summary_.begin(), summary_.end(), [](const SummaryRow& r) { return r.pass; });
}

void Run::emit() const {
    std::error_code ec;
    std::filesystem::create_directories(params_.out, ec);
    if (ec) throw IoError("cannot create output directory " + params_.out.string() + ": " + ec.message());
    for (const auto& [file, table] : artifacts_) table.write(params_.out / file);
    csv::Table summary({"subcommand", "check", "params", "max_ratio", "pass", "wall_ms"});
    for (const auto& r : summary_)
        summary.add_row({r.subcommand, r.check, r.params, csv::format_real(r.max_ratio), r.pass ? "1" : "0",
                         csv::format_real(std::round(r.wall_ms))});
    summary.write(params_.out / "summary.csv");
}

SampledFunction make_profile(const Params& p) {
    const GridSpec grid = p.grid();
    if (p.profile == "indicator") return indicator_ball(grid, p.radius);
    if (p.profile == "phi_c") return phi_c(p.n, p.theta, grid, p.radius);
    if (p.profile == "gaussian")
        return sample(grid, [&](std::span<const double> x) {
            double r2 = 0.0;
            for (double c : x) r2 += c * c;
            return std::exp(-r2 / (p.radius * p.radius));
        });
    if (p.profile == "bumps") {
        // Unit bumps of radius `radius` on a lattice of spacing 4 * radius.
        const double spacing = 4.0 * p.radius;
        return sample(grid, [&](std::span<const double> x) {
            double r2 = 0.0;
            for (double c : x) {
                const double d = c - spacing * std::round(c / spacing);
                r2 += d * d;
            }
            const double z = r2 / (p.radius * p.radius);
            return z < 1.0 ? std::exp(1.0 - 1.0 / (1.0 - z)) : 0.0;
        });
    }
    if (p.profile == "random") {
        std::mt19937_64 rng(p.seed);
        std::uniform_real_distribution<double> level(0.0, 1.0);
        const SampledFunction ball = indicator_ball(grid, p.radius);
        std::vector<double> v(grid.size());
        for (std::size_t i = 0; i < v.size(); ++i) v[i] = ball[i] * level(rng);
        return SampledFunction(grid, std::move(v));
    }
    throw PreconditionError("unknown profile '" + p.profile + "' (indicator, phi_c, gaussian, bumps, random)");
}

void run_norm(Run& run) {
    const Params& p = run.params();
    const auto start = Clock::now();
    const SampledFunction f = make_profile(p);
    const double alpha = p.alpha_or_default();
    std::vector<NormFamily> families;
    if (p.family == "all")
        families = {NormFamily::FrakWeak, NormFamily::Zygmund, NormFamily::WeakZygmund, NormFamily::DoublestarWeak};
    else
        families = {parse_norm_family(p.family)};

    csv::Table table({"family", "q", "alpha", "rho", "value"});
    for (NormFamily family : families) {
        NormSpec spec{family, p.q, alpha, family == NormFamily::FrakWeak ? p.rho : std::nullopt};
        spec.validate();
        const double value = evaluate(spec, f);
        table.add_row({to_string(family), csv::format_real(p.q), csv::format_real(alpha),
                       spec.rho ? csv::format_real(*spec.rho) : "", csv::format_real(value)});
        const std::string params =
            nlohmann::json{{"profile", p.profile}, {"q", real(p.q)}, {"alpha", alpha}, {"rho", p.rho ? real(*p.rho) : nullptr}}
                .dump();
        run.add_summary({"norm", to_string(family), params, value, std::isfinite(value) && value >= 0.0,
                         elapsed_ms(start)});
    }
    run.add_artifact("norm.csv", std::move(table));
}

void run_kernel(Run& run) {
    const Params& p = run.params();
    const auto start = Clock::now();
    const KernelSpec spec = KernelSpec::automatic(p.n, p.theta);
    require(p.points >= 2, "kernel: need --points >= 2");
    require(p.x_max > 0.0, "kernel: --x-max must be > 0");
    for (double t : p.times) require(t > 0.0, "kernel: every t must be > 0");
    std::vector<double> radii(p.points);
    for (std::size_t i = 0; i < p.points; ++i)
        radii[i] = p.x_max * static_cast<double>(i) / static_cast<double>(p.points - 1);
    csv::Table table = kernel_table(spec, radii, p.times);
    const ComparabilityFit fit = fit_comparability(spec, p.x_max, p.points, p.times);
    // The Gaussian decays faster than its majorant: only the upper bound holds.
    const bool pass = std::isfinite(fit.upper) && (p.theta == 2.0 || (fit.lower > 0.0 && fit.spread() < 50.0));
    const std::string params =
        nlohmann::json{{"n", p.n}, {"theta", p.theta}, {"x_max", p.x_max}, {"t", p.times}}.dump();
    run.add_summary({"kernel", "comparability", params, fit.upper, pass, elapsed_ms(start)});
    run.add_artifact("kernel.csv", std::move(table));
}

void run_verify(Run& run) {
    const Params& p = run.params();
    const auto start = Clock::now();
    csv::Table table = verify_table();
    nlohmann::json params{{"check", p.check}};
    double max_ratio = 0.0;
    bool pass = false;

    if (p.check == "lemma31" || p.check == "pure_log" || p.check == "lemma32" || p.check == "phi_c_bound") {
        RatioTrace trace;
        if (p.check == "lemma31") {
            const double lo = p.variant == 3 ? 1e-4 : 1e-6;
            const double hi = p.variant == 1 ? 1e2 : (p.variant == 2 ? 0.5 * p.S : 1e2);
            const auto s = grid_or(p, lo, hi);
            const double alpha = p.alpha.value_or(0.0);
            params.update({{"variant", p.variant}, {"q", p.q}, {"alpha", alpha}, {"S", p.S}});
            trace = lemma31_check(p.variant, p.q, alpha, p.S, s);
        } else if (p.check == "pure_log") {
            const double alpha = p.alpha.value_or(-2.0);
            params.update({{"alpha", alpha}});
            trace = pure_log_check(alpha, grid_or(p, 1e-6, 0.5));
        } else if (p.check == "lemma32") {
            params.update({{"n", p.n}, {"theta", p.theta}, {"r", p.r}, {"q", p.q}, {"gamma", p.gamma}});
            trace = lemma32_check(p.n, p.theta, p.r, p.q, p.gamma, grid_or(p, 1e-4, 1.0));
        } else {
            params.update({{"n", p.n}, {"theta", p.theta}, {"grid_m", p.grid_m}, {"box_l", p.box_l}});
            const SampledFunction phi = phi_c(p.n, p.theta, p.grid(), p.radius);
            trace = phi_c_rearrangement_bound(phi, p.n, p.theta, grid_or(p, p.grid().cell_measure(), 1.0));
        }
        max_ratio = trace.max_ratio();
        pass = finite_positive(trace.ratio);
        append_rows(table, p.check, params.dump(), trace);
    } else if (p.check == "prop31" || p.check == "prop32") {
        DecayParams dp{p.r, p.q, p.alpha_or_default(), p.beta, p.theta};
        params.update({{"n", p.n}, {"theta", p.theta}, {"r", real(p.r)}, {"q", real(p.q)}, {"alpha", dp.alpha},
                       {"beta", p.beta}, {"profile", p.profile}, {"grid_m", p.grid_m}, {"box_l", p.box_l}});
        const SampledFunction phi = make_profile(p);
        const auto t = grid_or(p, 1e-4, p.T);
        DecayTrace trace;
        if (p.check == "prop31") {
            trace = prop31_check(phi, dp, t);
        } else {
            params.update({{"T", p.T}});
            trace = prop32_check(phi, dp, p.T, t);
        }
        max_ratio = trace.max_ratio();
        pass = trace.bounded();
        params.update({{"tail_slope", trace.tail_slope()}});
        append_rows(table, p.check, params.dump(), trace);
    } else if (p.check == "smoothing") {
        params.update({{"n", p.n}, {"theta", p.theta}, {"r", real(p.r)}, {"q", real(p.q)}, {"profile", p.profile}});
        const SmoothingTrace trace = smoothing_check(make_profile(p), p.theta, p.r, p.q, grid_or(p, 1e-3, 1.0));
        for (std::size_t i = 0; i < trace.t.size(); ++i)
            table.add_row({p.check, params.dump(), csv::format_real(trace.t[i]), "", "",
                           csv::format_real(trace.ratio[i])});
        max_ratio = trace.max_ratio();
        pass = finite_positive(trace.ratio);
    } else {
        throw PreconditionError("unknown check '" + p.check +
                                "' (lemma31, pure_log, lemma32, prop31, prop32, phi_c_bound, smoothing)");
    }

    std::cout << "check,max_ratio,pass\n" << p.check << ',' << csv::format_real(max_ratio) << ',' << (pass ? 1 : 0) << '\n';
    run.add_summary({"verify", p.check, params.dump(), max_ratio, pass, elapsed_ms(start)});
    run.add_artifact("verify.csv", std::move(table));
}

void run_solve(Run& run) {
    const Params& p = run.params();
    const auto start = Clock::now();
    const CriticalSolver solver(solver_config(p));
    const SampledFunction phi = scaled(make_profile(p), p.eps);
    const SolutionTrajectory u = solver.picard_solve(phi);

    run.add_artifact("trajectory.csv", solver.metrics(finite_prefix(u)).to_csv());
    run.add_artifact("sweeps.csv", u.sweeps_table());
    std::cout << u.status_line() << '\n';

    const auto ratios = u.contraction_ratios();
    const double worst = max_of(ratios);
    // Blow-up is an outcome, not a failure; a converged run must contract.
    const bool pass = u.status != SolveStatus::Converged || worst <= 0.6;
    nlohmann::json params = nlohmann::json::parse(solver_params(p));
    params.update({{"eps", p.eps}, {"status", to_string(u.status)}, {"t_event", u.t_event}, {"sweeps", u.sweeps}});
    run.add_summary({"solve", "contraction", params.dump(), worst, pass, elapsed_ms(start)});
}

void run_scan(Run& run) {
    const Params& p = run.params();
    const auto start = Clock::now();
    const CriticalSolver solver(solver_config(p));
    const ThresholdScan scan = epsilon_threshold_scan(solver, make_profile(p), p.eps_grid, p.target_ratio);

    csv::Table table({"phase", "eps", "status", "sweeps"});
    for (const auto& pt : scan.history)
        table.add_row({"scan", csv::format_real(pt.eps), to_string(pt.status), std::to_string(pt.sweeps)});
    for (const auto& pt : scan.audit)
        table.add_row({"audit", csv::format_real(pt.eps), to_string(pt.status), std::to_string(pt.sweeps)});
    run.add_artifact("scan.csv", std::move(table));
    run.add_artifact("scan_ok_trajectory.csv", solver.metrics(finite_prefix(scan.ok_run)).to_csv());
    run.add_artifact("scan_blow_trajectory.csv", solver.metrics(finite_prefix(scan.blow_run)).to_csv());

    std::cout << "bracket," << csv::format_real(scan.eps_ok) << ',' << csv::format_real(scan.eps_blow) << '\n';
    nlohmann::json params = nlohmann::json::parse(solver_params(p));
    params.update({{"eps_ok", scan.eps_ok}, {"eps_blow", scan.eps_blow}, {"audit_consistent", scan.audit_consistent}});
    const bool pass = scan.audit_consistent && scan.bracket_ratio() < 4.0;
    run.add_summary({"scan", "bracket", params.dump(), scan.bracket_ratio(), pass, elapsed_ms(start)});
}

void run_appendix(Run& run) {
    const Params& p = run.params();
    const auto start = Clock::now();
    const double alpha = p.alpha.value_or(p.prop == "A1" ? 2.0 : 1.0);
    if (p.prop == "A2") {
        require(p.n_max >= 2, "appendix: --n-max must be >= 2");
        csv::Table table({"n", "frak_norm", "weak_zygmund_norm", "ratio"});
        std::vector<double> ratios;
        double worst_match = 0.0;
        for (int k = 2; k <= p.n_max; k *= 2) {
            const Rearrangement f = appendix_fn(k, alpha);
            const double frak = frak_norm(f, 1.0, alpha);
            const double weak = weak_zygmund_norm(f, 1.0, alpha + 1.0);
            const double exact = 1.0 / std::log(std::numbers::e + k);
            worst_match = std::max(worst_match, std::abs(frak - exact) / exact);
            ratios.push_back(frak / weak);
            table.add_row({std::to_string(k), csv::format_real(frak), csv::format_real(weak),
                           csv::format_real(ratios.back())});
        }
        bool decreasing = true;
        for (std::size_t i = 1; i < ratios.size(); ++i) decreasing = decreasing && ratios[i] < ratios[i - 1];
        const double collapse = ratios.front() / ratios.back();
        const bool pass = decreasing && worst_match <= 1e-6 && collapse >= 3.0;
        const std::string params = nlohmann::json{{"prop", "A2"}, {"alpha", alpha}, {"n_max", p.n_max},
                                                  {"collapse", collapse}, {"frak_rel_err", worst_match}}
                                       .dump();
        run.add_summary({"appendix", "A2", params, ratios.front(), pass, elapsed_ms(start)});
        run.add_artifact("appendix_A2.csv", std::move(table));
    } else if (p.prop == "A1") {
        csv::Table chain({"name", "weak", "frak", "zygmund", "ordered"});
        bool ordered = true;
        for (const auto& [name, r] : inclusion_corpus(p.seed)) {
            for (double q : {1.0, 2.0}) {
                const InclusionRow row = inclusion_chain(name, r, q, alpha);
                ordered = ordered && row.ordered();
                chain.add_row({name + "@q=" + csv::format_real(q), csv::format_real(row.weak),
                               csv::format_real(row.frak), csv::format_real(row.zygmund), row.ordered() ? "1" : "0"});
            }
        }
        csv::Table witness({"witness", "s_min", "weak", "frak", "zygmund"});
        double growth = 0.0;
        for (double s_min : {1e-10, 1e-50, 1e-100, 1e-200, 1e-300}) {
            const InclusionRow a =
                inclusion_chain("weak_not_frak", witness_weak_not_frak(1.0, alpha, 0.1, s_min, 64), 1.0, alpha);
            const InclusionRow b =
                inclusion_chain("frak_not_zygmund", witness_frak_not_zygmund(1.0, alpha, 0.1, s_min, 64), 1.0, alpha);
            for (const InclusionRow& row : {a, b})
                witness.add_row({row.name, csv::format_real(s_min), csv::format_real(row.weak),
                                 csv::format_real(row.frak), csv::format_real(row.zygmund)});
            growth = a.frak / a.weak;
        }
        const std::string params =
            nlohmann::json{{"prop", "A1"}, {"alpha", alpha}, {"seed", p.seed}, {"frak_over_weak", growth}}.dump();
        run.add_summary({"appendix", "A1", params, growth, ordered && growth > 10.0, elapsed_ms(start)});
        run.add_artifact("appendix_A1_chain.csv", std::move(chain));
        run.add_artifact("appendix_A1_witness.csv", std::move(witness));
    } else {
        throw PreconditionError("unknown --prop '" + p.prop + "' (A1, A2)");
    }
}

}  // namespace fracheat::cli
