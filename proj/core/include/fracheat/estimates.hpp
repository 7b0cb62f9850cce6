#pragma once

#include <span>
#include <string>
#include <vector>

#include "fracheat/csv.hpp"
#include "fracheat/rearrange.hpp"
#include "fracheat/sampled.hpp"

namespace fracheat {

/// Measured norms against a theoretical envelope over an ascending t grid.
struct DecayTrace {
    std::vector<double> t;
    std::vector<double> measured;
    std::vector<double> envelope;
    std::vector<double> ratio;  // measured / (envelope * source norm)

    double max_ratio() const;
    double min_ratio() const;
    bool finite_positive() const;
    // Least-squares slope of log(ratio) against log(t) over the last decade
    // of the grid (t >= t_max / 10).
    double tail_slope() const;
    // max over the last quarter of the trace / overall max
    double settled_fraction() const;
    // finite, positive, |tail_slope| <= slope_tol
    bool bounded(double slope_tol = 0.1) const;

    csv::Table to_csv() const;  // t,measured,envelope,ratio
};

// Geometric grid of `points` values from lo to hi inclusive.
std::vector<double> geometric_grid(double lo, double hi, std::size_t points);

struct RatioTrace {
    std::vector<double> s;
    std::vector<double> lhs;
    std::vector<double> rhs;
    std::vector<double> ratio;
    double max_ratio() const;
};

// Weighted integrals against their shapes:
//   1: int_0^s tau^q w^a            vs  s^{q+1} w(s)^a        (q > -1)
//   2: int_0^s tau^{-1} w^a         vs  w(s)^{a+1}            (a < -1, s < S)
//   3: int_s^inf tau^q w^a          vs  s^{q+1} w(s)^a        (q < -1)
// with w(s) = log(e + 1/s).
RatioTrace lemma31_check(int variant, double q, double alpha, double S, std::span<const double> s_grid);

// int_0^s tau^{-1} (log 1/tau)^alpha dtau by quadrature next to its
// antiderivative (log 1/s)^{alpha+1} / (-alpha - 1), s < 1, alpha < -1.
RatioTrace pure_log_check(double alpha, std::span<const double> s_grid);

// h_t^*(s) = h_t(x) at |x| = (s / omega_n)^{1/n}.
double majorant_rearrangement(int n, double theta, double t, double s);
double unit_ball_volume(int n);

// Rearranged kernel integral: int_0^inf tau^{q(1-1/r)} w^gamma (h_t^*)^q against
// t^{-(nq/theta)(1/r-1/q)} [log(e+1/t)]^gamma.
RatioTrace lemma32_check(int n, double theta, double r, double q, double gamma,
                         std::span<const double> t_grid);

struct DecayParams {
    double r = 1.0;
    double q = 1.0;
    double alpha = 0.0;
    double beta = 0.0;
    double theta = 2.0;

    void validate() const;
    // t^{-(n/theta)(1/r-1/q)} [log(e+1/t)]^{-alpha/r+beta/q}
    double envelope(int n, double t) const;
};

// ||S(t)phi||_{q,beta} / (envelope(t) ||phi||_{r,alpha}).
DecayTrace prop31_check(const SampledFunction& phi, const DecayParams& params,
                        std::span<const double> t_grid);

// Uniformly local variant with rho = T^{1/theta}; every t must satisfy t <= T.
DecayTrace prop32_check(const SampledFunction& phi, const DecayParams& params, double T,
                        std::span<const double> t_grid);

// |x|^{-n} [log(e + 1/|x|)]^{-n/theta - 1}
double phi_c_profile(int n, double theta, double radius);

// phi_c chi_{B(0,R)} on the grid. Cells touching the origin carry the cell
// average of phi_c instead of the center value.
SampledFunction phi_c(int n, double theta, const GridSpec& grid, double R = 1.0);

// f*(s) / (s^{-1} [log(e+1/s)]^{-n/theta-1}) for the sampled profile.
RatioTrace phi_c_rearrangement_bound(const SampledFunction& phi, int n, double theta,
                                     std::span<const double> s_grid);

// Analytic rearrangements used by the inclusion comparisons (q = 1 forms).
//
// f_n^*(s) = n [log(e+n)]^{-alpha-1} chi_{(0,1/n)}(s)
Rearrangement appendix_fn(double n, double alpha);
// (f^*)^q = d/ds {[log(e+1/s)]^{-alpha}} on (s_min, delta): step averages on a
// geometric partition with `per_decade` steps.
Rearrangement witness_frak_not_zygmund(double q, double alpha, double delta, double s_min,
                                       int per_decade);
// f^*(s) = s^{-1/q} [log(e+1/s)]^{-alpha/q} on (s_min, delta), each step
// carrying the value at its right end.
Rearrangement witness_weak_not_frak(double q, double alpha, double delta, double s_min,
                                    int per_decade);

struct InclusionRow {
    std::string name;
    double weak = 0.0;
    double frak = 0.0;
    double zygmund = 0.0;
    // weak <= frak <= zygmund up to rel_tol
    bool ordered(double rel_tol = 1e-10) const;
};

InclusionRow inclusion_chain(const std::string& name, const Rearrangement& r, double q, double alpha);

// 30 rearrangements: indicators, truncated power-log profiles, random steps.
std::vector<std::pair<std::string, Rearrangement>> inclusion_corpus(unsigned long long seed);

// `check,param_json,t_or_s,measured,envelope,ratio`
csv::Table verify_table();
void append_rows(csv::Table& table, const std::string& check, const std::string& params,
                 const DecayTrace& trace);
void append_rows(csv::Table& table, const std::string& check, const std::string& params,
                 const RatioTrace& trace);

}  // namespace fracheat
