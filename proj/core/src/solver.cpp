#include "fracheat/solver.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>

#include "fracheat/error.hpp"
#include "fracheat/spectral.hpp"
#include "fracheat/zygmund.hpp"

namespace fracheat {

namespace {

double log_weight(double t) { return std::log(std::numbers::e + 1.0 / t); }

}  // namespace

void SolverConfig::validate() const {
    kernel.validate();
    require(kernel.n == grid.dim(), "solver: kernel dimension differs from grid dimension");
    require(T > 0.0 && std::isfinite(T), "solver: T must be > 0");
    require(time_steps >= 1, "solver: need at least one time step");
    require(gamma >= 0.0 && gamma < alpha(), "solver: need 0 <= gamma < n/theta");
    require(max_sweeps >= 1, "solver: need at least one Picard sweep");
    require(tolerance > 0.0, "solver: tolerance must be > 0");
    require(blowup_factor > 1.0, "solver: blow-up factor must exceed 1");
}

double SolverConfig::rho() const { return std::pow(T, 1.0 / kernel.theta); }

std::string to_string(SolveStatus status) {
    switch (status) {
        case SolveStatus::Converged: return "CONVERGED";
        case SolveStatus::MaxSweeps: return "MAX_SWEEPS";
        case SolveStatus::Blowup: return "BLOWUP";
    }
    return "UNKNOWN";
}

std::array<double, 3> MetricTraces::suprema() const {
    auto sup = [](const std::vector<double>& v) { return v.empty() ? 0.0 : *std::max_element(v.begin(), v.end()); };
    return {sup(m1), sup(m2), sup(m3)};
}

csv::Table MetricTraces::to_csv() const {
    csv::Table table({"t", "sup_norm", "m1", "m2", "m3"});
    for (std::size_t i = 0; i < t.size(); ++i) table.add_reals({t[i], sup_norm[i], m1[i], m2[i], m3[i]});
    return table;
}

double SolutionTrajectory::dx_total(std::size_t sweep) const {
    const auto& d = dx.at(sweep);
    return d[0] + d[1] + d[2];
}

std::vector<double> SolutionTrajectory::contraction_ratios(std::size_t count) const {
    std::vector<double> out;
    if (dx.size() < 2) return out;
    const std::size_t first = dx.size() > count ? dx.size() - count : 1;
    for (std::size_t k = first; k < dx.size(); ++k) {
        const double prev = dx_total(k - 1);
        out.push_back(prev > 0 ? dx_total(k) / prev : 0.0);
    }
    return out;
}

csv::Table SolutionTrajectory::sweeps_table() const {
    csv::Table table({"sweep", "dx1", "dx2", "dx3"});
    for (std::size_t k = 0; k < dx.size(); ++k)
        table.add_row({std::to_string(k + 1), csv::format_real(dx[k][0]), csv::format_real(dx[k][1]),
                       csv::format_real(dx[k][2])});
    return table;
}

std::string SolutionTrajectory::status_line() const {
    return "status," + to_string(status) + "," + csv::format_real(t_event);
}

struct CriticalSolver::Impl {
    Semigroup semigroup;
    BallLattice lattice;
    std::vector<double> step_decay;  // e^{-dt |xi|^theta}
    std::vector<double> duhamel;     // (1 - e^{-dt |xi|^theta}) / |xi|^theta, dt at xi = 0

    Impl(const SolverConfig& cfg)
        : semigroup(cfg.grid, cfg.kernel.theta), lattice(cfg.grid, cfg.rho()) {
        const double dt = cfg.dt();
        const auto& lambda = semigroup.symbol();
        step_decay.resize(lambda.size());
        duhamel.resize(lambda.size());
        for (std::size_t i = 0; i < lambda.size(); ++i) {
            step_decay[i] = std::exp(-dt * lambda[i]);
            duhamel[i] = lambda[i] == 0.0 ? dt : -std::expm1(-dt * lambda[i]) / lambda[i];
        }
    }
};

CriticalSolver::CriticalSolver(SolverConfig cfg) : cfg_(std::move(cfg)) {
    cfg_.validate();
    impl_ = std::make_unique<Impl>(cfg_);
}

CriticalSolver::~CriticalSolver() = default;
CriticalSolver::CriticalSolver(CriticalSolver&&) noexcept = default;
CriticalSolver& CriticalSolver::operator=(CriticalSolver&&) noexcept = default;

std::vector<double> CriticalSolver::times() const {
    std::vector<double> t(cfg_.time_steps);
    for (std::size_t k = 0; k < t.size(); ++k)
        t[k] = cfg_.T * static_cast<double>(k + 1) / static_cast<double>(cfg_.time_steps);
    return t;
}

double CriticalSolver::ul_norm(const SampledFunction& f, double q, double alpha) const {
    return impl_->lattice.norm(f, q, alpha);
}

SampledFunction CriticalSolver::semigroup(double t, const SampledFunction& phi) const {
    return impl_->semigroup.apply(t, phi);
}

SolutionTrajectory CriticalSolver::linear(const SampledFunction& phi) const {
    require(phi.grid() == cfg_.grid, "solver: initial data grid mismatch");
    SolutionTrajectory out;
    out.t = times();
    for (double t : out.t) out.u.push_back(semigroup(t, phi));
    out.t_event = cfg_.T;
    return out;
}

SolutionTrajectory CriticalSolver::duhamel_map(const SampledFunction& phi, const SolutionTrajectory& u) const {
    require(phi.grid() == cfg_.grid, "solver: initial data grid mismatch");
    require(u.u.size() == cfg_.time_steps, "duhamel_map: trajectory must cover the full time grid");
    const auto& plan = impl_->semigroup.plan();
    const auto& decay = impl_->step_decay;
    const auto& mult = impl_->duhamel;
    const double p = cfg_.p();
    const double cap = cfg_.blowup_factor * phi.sup_abs();

    spectral::Spectrum lin = plan.forward(phi.values());
    spectral::Spectrum duh(lin.size(), {0.0, 0.0});
    spectral::Spectrum total(lin.size());

    SolutionTrajectory out;
    out.t_event = cfg_.T;
    const auto t = times();
    for (std::size_t k = 0; k < t.size(); ++k) {
        const SampledFunction F = signed_power(u.u[k], p);
        if (!F.all_finite()) {
            out.status = SolveStatus::Blowup;
            out.t_event = t[k];
            return out;
        }
        const spectral::Spectrum Fh = plan.forward(F.values());
        for (std::size_t i = 0; i < lin.size(); ++i) {
            lin[i] *= decay[i];
            duh[i] = decay[i] * duh[i] + mult[i] * Fh[i];
            total[i] = lin[i] + duh[i];
        }
        SampledFunction next(cfg_.grid, plan.inverse(total));
        out.t.push_back(t[k]);
        const bool blown = !next.all_finite() || next.sup_abs() > cap;
        out.u.push_back(std::move(next));
        if (blown) {
            out.status = SolveStatus::Blowup;
            out.t_event = t[k];
            return out;
        }
    }
    return out;
}

std::array<double, 3> CriticalSolver::distance(const SolutionTrajectory& a, const SolutionTrajectory& b) const {
    require(a.u.size() == b.u.size(), "distance: trajectories cover different time grids");
    const double n = cfg_.kernel.n, theta = cfg_.kernel.theta;
    const double p = cfg_.p(), alpha = cfg_.alpha(), gamma = cfg_.gamma;
    std::array<double, 3> d{0.0, 0.0, 0.0};
    for (std::size_t k = 0; k < a.u.size(); ++k) {
        const double t = a.t[k];
        const SampledFunction diff = axpy(1.0, a.u[k], -1.0, b.u[k]);
        d[0] = std::max(d[0], ul_norm(diff, 1.0, alpha));
        const double w2 = std::pow(t, n / theta * (1.0 - 1.0 / p)) * std::pow(log_weight(t), -gamma / p + alpha);
        d[1] = std::max(d[1], w2 * ul_norm(diff, p, gamma));
        const double w3 = std::pow(t, n / theta) * std::pow(log_weight(t), alpha);
        d[2] = std::max(d[2], w3 * diff.sup_abs());
    }
    return d;
}

MetricTraces CriticalSolver::metrics(const SolutionTrajectory& u) const {
    const double n = cfg_.kernel.n, theta = cfg_.kernel.theta;
    const double p = cfg_.p(), alpha = cfg_.alpha(), gamma = cfg_.gamma;
    MetricTraces out;
    for (std::size_t k = 0; k < u.u.size(); ++k) {
        const double t = u.t[k];
        require(u.u[k].all_finite(), "xt_metrics: trajectory must be finite");
        out.t.push_back(t);
        out.sup_norm.push_back(u.u[k].sup_abs());
        out.m1.push_back(ul_norm(u.u[k], 1.0, alpha));
        out.m2.push_back(std::pow(t, n / theta * (1.0 - 1.0 / p)) * std::pow(log_weight(t), -gamma / p + alpha) *
                         ul_norm(u.u[k], p, gamma));
        out.m3.push_back(std::pow(t, n / theta) * std::pow(log_weight(t), alpha) * out.sup_norm.back());
    }
    return out;
}

SolutionTrajectory CriticalSolver::picard_solve(const SampledFunction& phi) const {
    SolutionTrajectory u = linear(phi);
    SolutionTrajectory zero;
    zero.t = u.t;
    zero.u.assign(u.u.size(), SampledFunction::zeros(cfg_.grid));
    const auto base = distance(u, zero);
    const double scale = base[0] + base[1] + base[2];
    std::vector<std::array<double, 3>> history;
    for (std::size_t sweep = 1; sweep <= cfg_.max_sweeps; ++sweep) {
        SolutionTrajectory next = duhamel_map(phi, u);
        if (next.status == SolveStatus::Blowup) {
            next.dx = std::move(history);
            next.sweeps = sweep;
            return next;
        }
        const auto d = distance(next, u);
        history.push_back(d);
        u = std::move(next);
        u.dx = history;
        u.sweeps = sweep;
        if (d[0] + d[1] + d[2] <= cfg_.tolerance * scale) {
            u.status = SolveStatus::Converged;
            return u;
        }
    }
    u.status = SolveStatus::MaxSweeps;
    return u;
}

SolutionTrajectory duhamel_map(const SolverConfig& cfg, const SampledFunction& phi,
                               const SolutionTrajectory& u) {
    return CriticalSolver(cfg).duhamel_map(phi, u);
}

SolutionTrajectory picard_solve(const SolverConfig& cfg, const SampledFunction& phi) {
    return CriticalSolver(cfg).picard_solve(phi);
}

MetricTraces xt_metrics(const SolverConfig& cfg, const SolutionTrajectory& u) {
    return CriticalSolver(cfg).metrics(u);
}

double InitialTrace::decay_factor() const {
    if (ul_diff.empty() || ul_diff.back() == 0.0) return 0.0;
    return ul_diff.front() / ul_diff.back();
}

bool InitialTrace::pairing_monotone() const {
    for (std::size_t i = 1; i < pairing.size(); ++i)
        if (pairing[i] < pairing[i - 1]) return false;
    return true;
}

csv::Table InitialTrace::to_csv() const {
    csv::Table table({"t", "ul_diff", "pairing"});
    for (std::size_t i = 0; i < t.size(); ++i) table.add_reals({t[i], ul_diff[i], pairing[i]});
    return table;
}

SampledFunction smooth_bump(const GridSpec& grid, double R) {
    require(R > 0.0, "smooth_bump: radius must be > 0");
    return sample(grid, [R](std::span<const double> x) {
        double r2 = 0.0;
        for (double c : x) r2 += c * c;
        const double z = r2 / (R * R);
        return z < 1.0 ? std::exp(1.0 - 1.0 / (1.0 - z)) : 0.0;
    });
}

InitialTrace initial_trace_check(const CriticalSolver& solver, const SampledFunction& phi,
                                 const SolutionTrajectory& u, double beta) {
    const auto& cfg = solver.config();
    require(u.status == SolveStatus::Converged, "initial_trace_check: trajectory has not converged");
    require(beta >= 0.0 && beta < cfg.alpha(), "initial_trace_check: need 0 <= beta < n/theta");
    require(!u.t.empty(), "initial_trace_check: empty trajectory");
    const SampledFunction eta = smooth_bump(cfg.grid);
    const double base = pairing(phi, eta);
    const double end = u.t.front() * 10.0 * (1 + 1e-12);
    InitialTrace trace;
    for (std::size_t k = 0; k < u.t.size() && u.t[k] <= end; ++k) {
        const SampledFunction diff = axpy(1.0, u.u[k], -1.0, solver.semigroup(u.t[k], phi));
        trace.t.push_back(u.t[k]);
        trace.ul_diff.push_back(solver.ul_norm(diff, 1.0, beta));
        trace.pairing.push_back(std::abs(pairing(u.u[k], eta) - base));
    }
    return trace;
}

ThresholdScan epsilon_threshold_scan(const CriticalSolver& solver, const SampledFunction& profile,
                                     const std::vector<double>& eps_grid, double target_ratio) {
    require(!eps_grid.empty(), "epsilon_threshold_scan: empty eps grid");
    require(std::is_sorted(eps_grid.begin(), eps_grid.end()) && eps_grid.front() > 0.0,
            "epsilon_threshold_scan: eps grid must be positive and ascending");
    require(target_ratio > 1.0, "epsilon_threshold_scan: target ratio must exceed 1");
    ThresholdScan scan;
    auto run = [&](double eps, std::vector<ScanPoint>& log) {
        SolutionTrajectory traj = solver.picard_solve(scaled(profile, eps));
        log.push_back({eps, traj.status, traj.sweeps});
        return traj;
    };

    std::size_t first_bad = eps_grid.size();
    SolutionTrajectory lo_run, hi_run;
    for (std::size_t i = 0; i < eps_grid.size(); ++i) {
        SolutionTrajectory traj = run(eps_grid[i], scan.history);
        if (traj.status != SolveStatus::Converged) {
            first_bad = i;
            hi_run = std::move(traj);
            break;
        }
        lo_run = std::move(traj);
    }
    if (first_bad == 0)
        throw PreconditionError("epsilon_threshold_scan: no eps in the grid converges; widen the grid downward");
    if (first_bad == eps_grid.size())
        throw PreconditionError("epsilon_threshold_scan: every eps in the grid converges; widen the grid upward");

    double lo = eps_grid[first_bad - 1], hi = eps_grid[first_bad];
    while (hi / lo > target_ratio) {
        const double mid = std::sqrt(lo * hi);
        SolutionTrajectory traj = run(mid, scan.history);
        if (traj.status == SolveStatus::Converged) {
            lo = mid;
            lo_run = std::move(traj);
        } else {
            hi = mid;
            hi_run = std::move(traj);
        }
    }
    scan.eps_ok = lo;
    scan.eps_blow = hi;
    scan.ok_run = std::move(lo_run);
    scan.blow_run = std::move(hi_run);

    scan.audit_consistent = true;
    for (double f : {0.25, 0.5, 0.75}) {
        run(f * lo, scan.audit);
        scan.audit_consistent = scan.audit_consistent && scan.audit.back().status == SolveStatus::Converged;
    }
    for (double f : {1.5, 2.0}) {
        run(f * hi, scan.audit);
        scan.audit_consistent = scan.audit_consistent && scan.audit.back().status != SolveStatus::Converged;
    }
    return scan;
}

}  // namespace fracheat
