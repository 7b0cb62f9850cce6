#pragma once

#include <span>
#include <vector>

#include "fracheat/csv.hpp"
#include "fracheat/sampled.hpp"

namespace fracheat {

/// Non-increasing rearrangement f* stored as a right-continuous step function:
/// f*(s) = levels[k] on [breaks[k], breaks[k+1]), f*(s) = tail for s >= breaks.back().
///
/// Equal adjacent levels are merged on construction, so levels are strictly
/// decreasing. Grid functions have tail == 0.
class Rearrangement {
public:
    Rearrangement() = default;
    Rearrangement(std::vector<double> breaks, std::vector<double> levels, double tail = 0.0);

    // Exact rearrangement of a piecewise-constant grid function: descending sort
    // of |values|, each value occupying one cell measure.
    static Rearrangement from_values(std::span<const double> values, double cell_measure);

    std::size_t steps() const { return levels_.size(); }
    const std::vector<double>& breaks() const { return breaks_; }
    const std::vector<double>& levels() const { return levels_; }
    double tail() const { return tail_; }
    double support_measure() const { return breaks_.empty() ? 0.0 : breaks_.back(); }
    bool empty() const { return levels_.empty() && tail_ == 0.0; }

    double value(double s) const;
    double sup() const { return levels_.empty() ? tail_ : levels_.front(); }

    // int_0^s f*(tau) dtau, exact.
    double integral_to(double s) const;
    // int_0^infinity f*(s)^q ds (infinite when tail > 0).
    double mass(double q = 1.0) const;
    // |{s : f*(s) > lambda}|
    double distribution(double lambda) const;

    // (f*)^q, still a rearrangement.
    Rearrangement power(double q) const;
    Rearrangement scaled(double k) const;

    // Index k of the step containing s (s in [breaks[k], breaks[k+1])); steps() if beyond.
    std::size_t step_index(double s) const;
    double cumulative_at_break(std::size_t k) const { return cumulative_[k]; }

private:
    std::vector<double> breaks_;
    std::vector<double> levels_;
    double tail_ = 0.0;
    std::vector<double> cumulative_;  // int_0^{breaks[k]} f*
};

Rearrangement rearrange(const SampledFunction& f);

// mu_f(lambda) = |{x : |f(x)| > lambda}|
double distribution_function(const SampledFunction& f, double lambda);

// f**(s) = (1/s) int_0^s f*.
double maximal_average(const Rearrangement& r, double s);

/// s -> f**(s) as a callable view over a rearrangement.
class MaximalAverage {
public:
    explicit MaximalAverage(const Rearrangement& r) : r_(&r) {}
    double operator()(double s) const { return maximal_average(*r_, s); }
    // s f**(s) = int_0^s f*, non-decreasing in s.
    double cumulative(double s) const { return r_->integral_to(s); }

private:
    const Rearrangement* r_;
};

// int_s^infinity f**(tau) g**(tau) dtau in closed form (both tails must vanish).
double oneil_rhs(const Rearrangement& f, const Rearrangement& g, double s);

// (1/s) int_0^s f1*(tau) f2*(tau) dtau in closed form.
double product_rhs(const Rearrangement& f1, const Rearrangement& f2, double s);

struct InequalityTrace {
    std::vector<double> s;
    std::vector<double> lhs;
    std::vector<double> rhs;

    // max over s of (lhs - rhs)
    double max_violation() const;
    // max over s of (lhs - rhs) / rhs, with rhs == 0 counted only if lhs > 0.
    double max_relative_violation() const;
};

// (f*g)**(s) <= int_s^inf f** g**, convolution on the torus.
InequalityTrace check_oneil(const SampledFunction& f, const SampledFunction& g,
                            std::span<const double> s_grid);

// (f1 f2)**(s) <= (1/s) int_0^s f1* f2*.
InequalityTrace check_product(const SampledFunction& f1, const SampledFunction& f2,
                              std::span<const double> s_grid);

// `s_break,level` rows, ascending s; the last row carries the tail.
csv::Table to_csv(const Rearrangement& r);

}  // namespace fracheat
