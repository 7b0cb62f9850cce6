#pragma once

#include <array>
#include <memory>
#include <string>
#include <vector>

#include "fracheat/csv.hpp"
#include "fracheat/kernel.hpp"
#include "fracheat/sampled.hpp"

namespace fracheat {

struct SolverConfig {
    KernelSpec kernel;
    GridSpec grid{1, 8.0, 512};
    double T = 0.25;
    std::size_t time_steps = 256;
    double gamma = 0.0;               // secondary exponent, 0 <= gamma < n/theta
    std::size_t max_sweeps = 15;
    double tolerance = 1e-10;         // on d_X, relative to the metric sum of u^(0)
    double blowup_factor = 1e8;       // cap on sup|u| / sup|phi|

    void validate() const;
    double p() const { return 1.0 + kernel.theta / kernel.n; }
    double alpha() const { return kernel.n / kernel.theta; }
    double rho() const;
    double dt() const { return T / static_cast<double>(time_steps); }
};

enum class SolveStatus { Converged, MaxSweeps, Blowup };
std::string to_string(SolveStatus status);

struct MetricTraces {
    std::vector<double> t;
    std::vector<double> sup_norm;
    std::vector<double> m1;  // |||u|||_{1,alpha;rho}
    std::vector<double> m2;  // t^{(n/theta)(1-1/p)} [log(e+1/t)]^{-gamma/p+alpha} |||u|||_{p,gamma;rho}
    std::vector<double> m3;  // t^{n/theta} [log(e+1/t)]^alpha ||u||_inf
    std::array<double, 3> suprema() const;
    csv::Table to_csv() const;  // t,sup_norm,m1,m2,m3
};

struct SolutionTrajectory {
    std::vector<double> t;               // t_k = k T / N_t, k = 1..N_t
    std::vector<SampledFunction> u;      // snapshots at t
    std::vector<std::array<double, 3>> dx;  // (d1, d2, d3) per sweep
    SolveStatus status = SolveStatus::Converged;
    double t_event = 0.0;                // blow-up time, or T
    std::size_t sweeps = 0;

    double dx_total(std::size_t sweep) const;
    // dx_total(k) / dx_total(k - 1) over the last `count` sweeps
    std::vector<double> contraction_ratios(std::size_t count = 3) const;
    csv::Table sweeps_table() const;  // sweep,dx1,dx2,dx3
    std::string status_line() const;  // status,<STATUS>,<t_event>
};

/// Shared operators for one configuration: semigroup, Duhamel multipliers and
/// the ball lattice of radius T^{1/theta}.
class CriticalSolver {
public:
    explicit CriticalSolver(SolverConfig cfg);
    ~CriticalSolver();
    CriticalSolver(CriticalSolver&&) noexcept;
    CriticalSolver& operator=(CriticalSolver&&) noexcept;

    const SolverConfig& config() const { return cfg_; }
    std::vector<double> times() const;

    // u^(0)(t_k) = S(t_k) phi
    SolutionTrajectory linear(const SampledFunction& phi) const;
    // Phi(u)(t_k) = S(t_k) phi + sum_{j=1..k} S(t_k - t_j) M(dt) F_p(u(t_j))
    SolutionTrajectory duhamel_map(const SampledFunction& phi, const SolutionTrajectory& u) const;
    SolutionTrajectory picard_solve(const SampledFunction& phi) const;

    MetricTraces metrics(const SolutionTrajectory& u) const;
    // (d1, d2, d3) between two trajectories on the same time grid
    std::array<double, 3> distance(const SolutionTrajectory& a, const SolutionTrajectory& b) const;

    double ul_norm(const SampledFunction& f, double q, double alpha) const;
    SampledFunction semigroup(double t, const SampledFunction& phi) const;

private:
    struct Impl;
    SolverConfig cfg_;
    std::unique_ptr<Impl> impl_;
};

SolutionTrajectory duhamel_map(const SolverConfig& cfg, const SampledFunction& phi,
                               const SolutionTrajectory& u);
SolutionTrajectory picard_solve(const SolverConfig& cfg, const SampledFunction& phi);
MetricTraces xt_metrics(const SolverConfig& cfg, const SolutionTrajectory& u);

struct InitialTrace {
    std::vector<double> t;         // ascending, first decade of the time grid
    std::vector<double> ul_diff;   // |||u(t) - S(t)phi|||_{1,beta;rho}
    std::vector<double> pairing;   // |<u(t), eta> - <phi, eta>|
    // ul_diff at the smallest t / ul_diff at the largest t of the decade
    double decay_factor() const;
    // pairing non-decreasing in t
    bool pairing_monotone() const;
    csv::Table to_csv() const;  // t,ul_diff,pairing
};

// Smooth bump exp(1 - 1/(1 - |x|^2/R^2)) on |x| < R.
SampledFunction smooth_bump(const GridSpec& grid, double R = 1.0);

InitialTrace initial_trace_check(const CriticalSolver& solver, const SampledFunction& phi,
                                 const SolutionTrajectory& u, double beta);

struct ScanPoint {
    double eps = 0.0;
    SolveStatus status = SolveStatus::Converged;
    std::size_t sweeps = 0;
};

struct ThresholdScan {
    double eps_ok = 0.0;
    double eps_blow = 0.0;
    SolutionTrajectory ok_run;
    SolutionTrajectory blow_run;
    std::vector<ScanPoint> history;  // every evaluated eps, in order
    std::vector<ScanPoint> audit;    // eps_ok * {1/4, 1/2, 3/4}, eps_blow * {3/2, 2}
    bool audit_consistent = false;
    double bracket_ratio() const { return eps_blow / eps_ok; }
};

// phi = eps * profile. Bisects (geometrically) the first CONVERGED ->
// non-converged transition of eps_grid until eps_blow / eps_ok <= target_ratio.
ThresholdScan epsilon_threshold_scan(const CriticalSolver& solver, const SampledFunction& profile,
                                     const std::vector<double>& eps_grid, double target_ratio = 1.1);

}  // namespace fracheat
