#pragma once

#include <span>
#include <vector>

#include "fracheat/csv.hpp"
#include "fracheat/sampled.hpp"
#include "fracheat/spectral.hpp"

namespace fracheat {

enum class KernelMethod { ClosedFormGauss, ClosedFormPoisson, FourierInversion };

struct KernelSpec {
    int n = 1;
    double theta = 2.0;
    KernelMethod method = KernelMethod::FourierInversion;

    // Closed form when one exists, Fourier inversion otherwise.
    static KernelSpec automatic(int n, double theta);
    void validate() const;
};

// G_theta(x, 1) as a function of y = |x|, by radial Fourier inversion:
//   n = 1: (1/pi) int_0^inf cos(y r) exp(-r^theta) dr
//   n = 2: (1/2pi) int_0^inf r J0(y r) exp(-r^theta) dr
// Panels run between consecutive zeros of the oscillator; partial sums are
// accelerated with Wynn's epsilon algorithm.
double kernel_profile(int n, double theta, double y);

// G_theta(x, t) with |x| = radius; t > 0.
double kernel_eval(const KernelSpec& spec, double radius, double t);
double kernel_eval(const KernelSpec& spec, std::span<const double> x, double t);

// h_{theta,t}(x) = t^{-n/theta} (1 + t^{-1/theta}|x|)^{-n-theta}
double majorant_eval(int n, double theta, double radius, double t);

/// e^{-t |xi|^theta} on the half-spectrum lattice of a grid.
class SemigroupSymbol {
public:
    SemigroupSymbol(const GridSpec& grid, double theta, double t);
    const GridSpec& grid() const { return grid_; }
    double theta() const { return theta_; }
    double t() const { return t_; }
    const std::vector<double>& multiplier() const { return multiplier_; }

private:
    GridSpec grid_;
    double theta_;
    double t_;
    std::vector<double> multiplier_;
};

/// S_theta(t) on the torus: one FFT plan and the frequency norms |xi|^theta,
/// reused for every t.
class Semigroup {
public:
    Semigroup(const GridSpec& grid, double theta);

    const GridSpec& grid() const { return plan_.grid(); }
    double theta() const { return theta_; }
    const spectral::FourierPlan& plan() const { return plan_; }
    // |xi|^theta per half-spectrum entry.
    const std::vector<double>& symbol() const { return lambda_; }

    SemigroupSymbol symbol_at(double t) const { return SemigroupSymbol(grid(), theta_, t); }
    SampledFunction apply(double t, const SampledFunction& phi) const;
    SampledFunction apply(const SemigroupSymbol& symbol, const SampledFunction& phi) const;

private:
    spectral::FourierPlan plan_;
    double theta_;
    std::vector<double> lambda_;
};

SampledFunction semigroup_apply(const KernelSpec& spec, double t, const SampledFunction& phi);
SampledFunction semigroup_apply(const SemigroupSymbol& symbol, const SampledFunction& phi);

struct SmoothingTrace {
    std::vector<double> t;
    std::vector<double> ratio;  // ||S(t)phi||_q t^{(n/theta)(1/r-1/q)} / ||phi||_r
    double max_ratio() const;
};

SmoothingTrace smoothing_check(const SampledFunction& phi, double theta, double r, double q,
                               std::span<const double> t_grid);

struct ComparabilityFit {
    double lower = 0.0;  // min G/h over the sampled set
    double upper = 0.0;  // max G/h
    double spread() const { return upper / lower; }
};

// min and max of G_theta/h_{theta,t} over |x| in [0, radius_max] (points samples) and t in ts.
ComparabilityFit fit_comparability(const KernelSpec& spec, double radius_max, std::size_t points,
                                   std::span<const double> ts);

// `x,t,G,h,ratio` rows for every (x, t) pair.
csv::Table kernel_table(const KernelSpec& spec, std::span<const double> radii,
                        std::span<const double> ts);

}  // namespace fracheat
