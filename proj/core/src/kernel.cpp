#include "fracheat/kernel.hpp"

#include <boost/math/special_functions/bessel.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "fracheat/error.hpp"
#include "fracheat/quadrature.hpp"

namespace fracheat {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr std::size_t kMaxPanels = 4000;
constexpr std::size_t kWynnStart = 12;
constexpr std::size_t kCachedZeros = 4000;

void check_n_theta(int n, double theta, const char* where) {
    require(n == 1 || n == 2, std::string(where) + ": n must be 1 or 2");
    require(theta > 0.0 && theta <= 2.0, std::string(where) + ": theta must lie in (0, 2]");
}

// Zeros of J0, cached; McMahon's expansion beyond the cache.
double bessel_j0_zero(std::size_t k) {
    static const std::vector<double> zeros = [] {
        std::vector<double> z;
        z.reserve(kCachedZeros);
        boost::math::cyl_bessel_j_zero(0.0, 1, static_cast<unsigned>(kCachedZeros), std::back_inserter(z));
        return z;
    }();
    if (k <= zeros.size()) return zeros[k - 1];
    const double b = (static_cast<double>(k) - 0.25) * kPi;
    return b + 1.0 / (8.0 * b) - 31.0 / (384.0 * b * b * b);
}

/// Wynn epsilon over a stream of partial sums; keeps one anti-diagonal.
class WynnEpsilon {
public:
    double push(double partial) {
        std::vector<double> next{partial};
        for (std::size_t k = 0; k < diag_.size(); ++k) {
            const double diff = next[k] - diag_[k];
            if (diff == 0.0 || !std::isfinite(diff)) break;
            const double prev = k == 0 ? 0.0 : diag_[k - 1];
            next.push_back(prev + 1.0 / diff);
        }
        diag_ = std::move(next);
        // Even columns carry the estimates.
        const std::size_t last_even = (diag_.size() - 1) & ~std::size_t{1};
        return diag_[last_even];
    }

private:
    std::vector<double> diag_;
};

}  // namespace

KernelSpec KernelSpec::automatic(int n, double theta) {
    KernelSpec s{n, theta, KernelMethod::FourierInversion};
    if (theta == 2.0) s.method = KernelMethod::ClosedFormGauss;
    if (theta == 1.0) s.method = KernelMethod::ClosedFormPoisson;
    return s;
}

void KernelSpec::validate() const {
    check_n_theta(n, theta, "KernelSpec");
    if (method == KernelMethod::ClosedFormGauss)
        require(theta == 2.0, "KernelSpec: the Gaussian closed form needs theta = 2");
    if (method == KernelMethod::ClosedFormPoisson)
        require(theta == 1.0, "KernelSpec: the Poisson closed form needs theta = 1");
}

double kernel_profile(int n, double theta, double y) {
    check_n_theta(n, theta, "kernel_profile");
    require(y >= 0.0 && std::isfinite(y), "kernel_profile: |x| must be finite and >= 0");
    const double prefactor = n == 1 ? 1.0 / kPi : 1.0 / (2.0 * kPi);
    if (y == 0.0) {
        // int_0^inf r^{n-1} e^{-r^theta} dr = Gamma(n/theta) / theta
        return prefactor * std::tgamma(n / theta) / theta;
    }

    auto integrand = [n, theta, y](double r) {
        const double damp = std::exp(-std::pow(r, theta));
        return n == 1 ? std::cos(y * r) * damp : r * boost::math::cyl_bessel_j(0, y * r) * damp;
    };
    auto zero = [n, y](std::size_t k) {
        return n == 1 ? (static_cast<double>(k) - 0.5) * kPi / y : bessel_j0_zero(k) / y;
    };
    // Beyond r_max the envelope r^{n-1} e^{-r^theta} is below 1e-18.
    const double r_max = std::pow(50.0, 1.0 / theta);

    // First panel [0, z_1]: tanh-sinh near the origin, where r^theta is not smooth.
    const double z1 = std::min(zero(1), r_max);
    const double split = std::min(z1, 1.0);
    double partial = quad::finite(integrand, 0.0, split).value;
    if (z1 > split) partial += quad::gauss_kronrod(integrand, split, z1, 1e-14, 12).value;
    if (z1 >= r_max) return prefactor * partial;

    WynnEpsilon wynn;
    wynn.push(partial);
    double est = partial, prev_est = partial;
    double peak = std::abs(partial);
    int stable = 0;
    for (std::size_t k = 1; k < kMaxPanels; ++k) {
        const double a = zero(k);
        const double b = std::min(zero(k + 1), r_max);
        partial += quad::gauss_kronrod(integrand, a, b, 1e-14, 8).value;
        if (b >= r_max) return prefactor * partial;
        peak = std::max(peak, std::abs(partial));
        est = wynn.push(partial);
        if (k >= kWynnStart) {
            const double scale = std::max(std::abs(est), 1e-2 * peak);
            stable = std::abs(est - prev_est) <= 1e-14 * scale ? stable + 1 : 0;
            if (stable >= 3) return prefactor * est;
        }
        prev_est = est;
    }
    return prefactor * est;
}

double kernel_eval(const KernelSpec& spec, double radius, double t) {
    spec.validate();
    require(t > 0.0, "kernel_eval: t must be > 0");
    require(radius >= 0.0, "kernel_eval: |x| must be >= 0");
    const double n = spec.n;
    switch (spec.method) {
        case KernelMethod::ClosedFormGauss:
            return std::pow(4.0 * kPi * t, -n / 2.0) * std::exp(-radius * radius / (4.0 * t));
        case KernelMethod::ClosedFormPoisson: {
            const double s = t * t + radius * radius;
            return spec.n == 1 ? t / (kPi * s) : t / (2.0 * kPi * s * std::sqrt(s));
        }
        case KernelMethod::FourierInversion: {
            const double scale = std::pow(t, -1.0 / spec.theta);
            return std::pow(t, -n / spec.theta) * kernel_profile(spec.n, spec.theta, scale * radius);
        }
    }
    throw PreconditionError("kernel_eval: unknown method");
}

double kernel_eval(const KernelSpec& spec, std::span<const double> x, double t) {
    double r2 = 0.0;
    for (double c : x) r2 += c * c;
    return kernel_eval(spec, std::sqrt(r2), t);
}

double majorant_eval(int n, double theta, double radius, double t) {
    check_n_theta(n, theta, "majorant_eval");
    require(t > 0.0, "majorant_eval: t must be > 0");
    return std::pow(t, -n / theta) * std::pow(1.0 + std::pow(t, -1.0 / theta) * radius, -n - theta);
}

SemigroupSymbol::SemigroupSymbol(const GridSpec& grid, double theta, double t)
    : grid_(grid), theta_(theta), t_(t) {
    check_n_theta(grid.dim(), theta, "SemigroupSymbol");
    require(t >= 0.0 && std::isfinite(t), "semigroup: t must be finite and >= 0");
    multiplier_ = spectral::frequency_norms(grid);
    for (double& m : multiplier_) m = std::exp(-t * std::pow(m, theta));
}

Semigroup::Semigroup(const GridSpec& grid, double theta) : plan_(grid), theta_(theta) {
    check_n_theta(grid.dim(), theta, "Semigroup");
    lambda_ = spectral::frequency_norms(grid);
    for (double& l : lambda_) l = std::pow(l, theta);
}

SampledFunction Semigroup::apply(double t, const SampledFunction& phi) const {
    require(t >= 0.0 && std::isfinite(t), "semigroup: t must be finite and >= 0");
    require(phi.grid() == grid(), "semigroup: grid mismatch");
    if (t == 0.0) return phi;
    std::vector<double> m(lambda_.size());
    for (std::size_t i = 0; i < m.size(); ++i) m[i] = std::exp(-t * lambda_[i]);
    return spectral::apply_multiplier(plan_, phi, m);
}

SampledFunction Semigroup::apply(const SemigroupSymbol& symbol, const SampledFunction& phi) const {
    require(symbol.grid() == grid() && phi.grid() == grid(), "semigroup: grid mismatch");
    if (symbol.t() == 0.0) return phi;
    return spectral::apply_multiplier(plan_, phi, symbol.multiplier());
}

SampledFunction semigroup_apply(const KernelSpec& spec, double t, const SampledFunction& phi) {
    spec.validate();
    require(spec.n == phi.grid().dim(), "semigroup_apply: kernel dimension differs from grid");
    return Semigroup(phi.grid(), spec.theta).apply(t, phi);
}

SampledFunction semigroup_apply(const SemigroupSymbol& symbol, const SampledFunction& phi) {
    return Semigroup(symbol.grid(), symbol.theta()).apply(symbol, phi);
}

double SmoothingTrace::max_ratio() const {
    return ratio.empty() ? 0.0 : *std::max_element(ratio.begin(), ratio.end());
}

SmoothingTrace smoothing_check(const SampledFunction& phi, double theta, double r, double q,
                               std::span<const double> t_grid) {
    require(r >= 1.0 && r <= q, "smoothing_check: need 1 <= r <= q");
    const double inv_r = std::isinf(r) ? 0.0 : 1.0 / r;
    const double inv_q = std::isinf(q) ? 0.0 : 1.0 / q;
    const double rate = phi.grid().dim() / theta * (inv_r - inv_q);
    const double source = lq_norm(phi, r);
    require(source > 0.0, "smoothing_check: phi must be nonzero");
    const Semigroup semigroup(phi.grid(), theta);
    SmoothingTrace trace;
    for (double t : t_grid) {
        require(t > 0.0, "smoothing_check: t must be > 0");
        trace.t.push_back(t);
        trace.ratio.push_back(lq_norm(semigroup.apply(t, phi), q) * std::pow(t, rate) / source);
    }
    return trace;
}

ComparabilityFit fit_comparability(const KernelSpec& spec, double radius_max, std::size_t points,
                                   std::span<const double> ts) {
    require(points >= 2, "fit_comparability: need at least two radii");
    ComparabilityFit fit{std::numeric_limits<double>::infinity(), 0.0};
    for (double t : ts) {
        for (std::size_t i = 0; i < points; ++i) {
            const double r = radius_max * static_cast<double>(i) / static_cast<double>(points - 1);
            const double ratio = kernel_eval(spec, r, t) / majorant_eval(spec.n, spec.theta, r, t);
            fit.lower = std::min(fit.lower, ratio);
            fit.upper = std::max(fit.upper, ratio);
        }
    }
    return fit;
}

csv::Table kernel_table(const KernelSpec& spec, std::span<const double> radii,
                        std::span<const double> ts) {
    csv::Table table({"x", "t", "G", "h", "ratio"});
    for (double t : ts) {
        for (double r : radii) {
            const double g = kernel_eval(spec, r, t);
            const double h = majorant_eval(spec.n, spec.theta, r, t);
            table.add_reals({r, t, g, h, g / h});
        }
    }
    return table;
}

}  // namespace fracheat
