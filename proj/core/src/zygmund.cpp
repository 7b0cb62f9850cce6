#include "fracheat/zygmund.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>

#include "fracheat/error.hpp"
#include "fracheat/quadrature.hpp"

namespace fracheat {

namespace {

constexpr double kE = std::numbers::e;
constexpr int kPointsPerDecade = 64;
constexpr std::size_t kRefinedCandidates = 3;

void check_exponents(double q, double alpha, const char* where) {
    require(q >= 1.0, std::string(where) + ": q must be >= 1");
    require(alpha >= 0.0 && std::isfinite(alpha), std::string(where) + ": alpha must be >= 0");
}

double smallest_width(const Rearrangement& r) {
    double w = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < r.steps(); ++k) w = std::min(w, r.breaks()[k + 1] - r.breaks()[k]);
    return w;
}

// Breakpoints plus a geometric grid from (smallest width)/10 up to the support
// measure; beyond the support every objective here is non-increasing.
std::vector<double> candidate_points(const Rearrangement& r) {
    std::vector<double> pts(r.breaks().begin() + 1, r.breaks().end());
    const double hi = r.support_measure();
    const double lo = smallest_width(r) / 10.0;
    if (lo < hi) {
        const double step = std::pow(10.0, 1.0 / kPointsPerDecade);
        for (double s = lo; s < hi; s *= step) pts.push_back(s);
    }
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    return pts;
}

// sup over s in (0, support] of a continuous objective g: dense candidates, then
// Brent refinement around the best few sampled local maxima.
double sup_continuous(const Rearrangement& r, const std::function<double(double)>& g) {
    const auto pts = candidate_points(r);
    if (pts.empty()) return 0.0;
    std::vector<double> vals(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) vals[i] = g(pts[i]);

    std::vector<std::size_t> peaks;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const bool left_ok = i == 0 || vals[i] >= vals[i - 1];
        const bool right_ok = i + 1 == pts.size() || vals[i] >= vals[i + 1];
        if (left_ok && right_ok) peaks.push_back(i);
    }
    std::sort(peaks.begin(), peaks.end(), [&](std::size_t a, std::size_t b) { return vals[a] > vals[b]; });
    if (peaks.size() > kRefinedCandidates) peaks.resize(kRefinedCandidates);

    double best = *std::max_element(vals.begin(), vals.end());
    for (std::size_t i : peaks) {
        const double a = i == 0 ? pts[0] * 0.5 : pts[i - 1];
        const double b = i + 1 == pts.size() ? pts[i] : pts[i + 1];
        const auto ext = quad::maximize(g, a, b);
        best = std::max(best, ext.value);
    }
    return best;
}

// Smaller root s1 of log(e+1/s)(e s + 1) = alpha, the local maximum of
// s -> s w(s)^alpha; nullopt when s w(s)^alpha is increasing everywhere.
std::optional<double> weak_local_max(double alpha) {
    auto psi = [](double s) { return std::log(kE + 1.0 / s) * (kE * s + 1.0); };
    // psi' = e log(e + 1/s) - 1/s vanishes at the minimizer of psi.
    auto dpsi = [](double s) { return kE * std::log(kE + 1.0 / s) - 1.0 / s; };
    double lo = 1e-300, hi = 10.0;
    for (int it = 0; it < 200; ++it) {
        const double mid = std::sqrt(lo * hi);
        (dpsi(mid) < 0 ? lo : hi) = mid;
    }
    const double s_min = std::sqrt(lo * hi);
    if (alpha <= psi(s_min)) return std::nullopt;
    lo = 1e-300;
    hi = s_min;
    if (psi(lo) < alpha) return std::nullopt;
    for (int it = 0; it < 200; ++it) {
        const double mid = std::sqrt(lo * hi);
        (psi(mid) > alpha ? lo : hi) = mid;
    }
    return std::sqrt(lo * hi);
}

}  // namespace

double LogWeight::operator()(double s) const {
    if (alpha == 0.0) return 1.0;
    return std::pow(std::log(kE + 1.0 / s), alpha);
}

double log_weight_integral(double alpha, double a, double b) {
    require(0 <= a && a <= b, "log_weight_integral: need 0 <= a <= b");
    if (a == b) return 0.0;
    if (alpha == 0.0) return b - a;
    if (alpha == 1.0) {
        // d/ds [s log(e + 1/s) + log(1 + e s)/e] = log(e + 1/s)
        auto W = [](double s) {
            return s == 0.0 ? 0.0 : s * std::log(kE + 1.0 / s) + std::log1p(kE * s) / kE;
        };
        return W(b) - W(a);
    }
    // s = e^{-x}: the integrand e^{-x} [log(e + e^x)]^alpha is smooth at every scale.
    auto f = [alpha](double x) {
        if (x > 745.0) return 0.0;
        const double lw = x > 30.0 ? x + std::log1p(kE * std::exp(-x)) : std::log(kE + std::exp(x));
        return std::exp(-x) * std::pow(lw, alpha);
    };
    const double xb = -std::log(b);
    if (a == 0.0) return quad::semi_infinite(f, xb).value;
    return quad::gauss_kronrod(f, xb, -std::log(a), 1e-13, 10).value;
}

std::string to_string(NormFamily family) {
    switch (family) {
        case NormFamily::FrakWeak: return "frak";
        case NormFamily::Zygmund: return "zygmund";
        case NormFamily::WeakZygmund: return "weak_zygmund";
        case NormFamily::DoublestarWeak: return "doublestar";
    }
    return "unknown";
}

NormFamily parse_norm_family(const std::string& name) {
    if (name == "frak") return NormFamily::FrakWeak;
    if (name == "zygmund") return NormFamily::Zygmund;
    if (name == "weak_zygmund") return NormFamily::WeakZygmund;
    if (name == "doublestar") return NormFamily::DoublestarWeak;
    throw PreconditionError("unknown norm family '" + name +
                            "' (expected frak, zygmund, weak_zygmund, doublestar)");
}

void NormSpec::validate() const {
    check_exponents(q, alpha, "NormSpec");
    if (rho) {
        require(family == NormFamily::FrakWeak, "NormSpec: rho is only defined for the frak family");
        require(*rho > 0, "NormSpec: rho must be > 0");
    }
}

double frak_norm(const Rearrangement& r, double q, double alpha) {
    check_exponents(q, alpha, "frak_norm");
    if (std::isinf(q)) return r.sup();
    require(r.tail() == 0.0, "frak_norm: rearrangement must have zero tail");
    const Rearrangement rq = q == 1.0 ? r : r.power(q);
    const LogWeight w{alpha};
    const double best = sup_continuous(rq, [&](double s) { return w(s) * rq.integral_to(s); });
    return std::pow(best, 1.0 / q);
}

double zygmund_norm(const Rearrangement& r, double q, double alpha) {
    check_exponents(q, alpha, "zygmund_norm");
    if (std::isinf(q)) return r.sup();
    require(r.tail() == 0.0, "zygmund_norm: rearrangement must have zero tail");
    double total = 0.0;
    for (std::size_t k = 0; k < r.steps(); ++k)
        total += std::pow(r.levels()[k], q) * log_weight_integral(alpha, r.breaks()[k], r.breaks()[k + 1]);
    return std::pow(total, 1.0 / q);
}

double weak_zygmund_norm(const Rearrangement& r, double q, double alpha) {
    check_exponents(q, alpha, "weak_zygmund_norm");
    if (std::isinf(q)) return r.sup();
    require(r.tail() == 0.0, "weak_zygmund_norm: rearrangement must have zero tail");
    const LogWeight w{alpha};
    auto phi = [&w](double s) { return s * w(s); };
    const auto s1 = weak_local_max(alpha);
    double best = 0.0;
    for (std::size_t k = 0; k < r.steps(); ++k) {
        const double a = r.breaks()[k], b = r.breaks()[k + 1];
        double m = phi(b);  // left limit at b: f* still equals this level
        if (a > 0) m = std::max(m, phi(a));
        if (s1 && a < *s1 && *s1 < b) m = std::max(m, phi(*s1));
        best = std::max(best, m * std::pow(r.levels()[k], q));
    }
    return std::pow(best, 1.0 / q);
}

double doublestar_norm(const Rearrangement& r, double q, double alpha) {
    check_exponents(q, alpha, "doublestar_norm");
    if (std::isinf(q)) return r.sup();
    require(r.tail() == 0.0, "doublestar_norm: rearrangement must have zero tail");
    const LogWeight w{alpha};
    const double best = sup_continuous(r, [&](double s) {
        const double avg = r.integral_to(s) / s;
        return w(s) * s * std::pow(avg, q);
    });
    return std::pow(best, 1.0 / q);
}

double frak_norm(const SampledFunction& f, double q, double alpha) { return frak_norm(rearrange(f), q, alpha); }
double zygmund_norm(const SampledFunction& f, double q, double alpha) { return zygmund_norm(rearrange(f), q, alpha); }
double weak_zygmund_norm(const SampledFunction& f, double q, double alpha) {
    return weak_zygmund_norm(rearrange(f), q, alpha);
}
double doublestar_norm(const SampledFunction& f, double q, double alpha) {
    return doublestar_norm(rearrange(f), q, alpha);
}

BallLattice::BallLattice(const GridSpec& grid, double rho, std::optional<double> spacing)
    : grid_(grid), rho_(rho) {
    require(rho > 0 && std::isfinite(rho), "ul_frak_norm: rho must be > 0");
    const double step = spacing.value_or(rho / 2.0);
    require(step > 0 && step <= rho / 2.0 * (1 + 1e-12), "BallLattice: spacing must be in (0, rho/2]");
    const double L = grid.halfwidth();

    std::vector<double> axis;
    const long kmax = static_cast<long>(std::floor(L / step));
    for (long k = -kmax; k <= kmax; ++k) {
        const double z = static_cast<double>(k) * step;
        if (z >= -L && z < L) axis.push_back(z);
    }
    auto wrap = [L](double d) {
        const double period = 2.0 * L;
        d = std::fmod(d + L, period);
        if (d < 0) d += period;
        return d - L;
    };
    auto add_center = [&](double z0, double z1) {
        std::vector<std::size_t> idx;
        for (std::size_t i = 0; i < grid.size(); ++i) {
            const auto x = grid.node(i);
            const double d0 = wrap(x[0] - z0);
            const double d1 = grid.dim() == 2 ? wrap(x[1] - z1) : 0.0;
            if (d0 * d0 + d1 * d1 < rho * rho) idx.push_back(i);
        }
        points_.push_back({z0, z1});
        members_.push_back(std::move(idx));
    };
    if (grid.dim() == 1) {
        for (double z : axis) add_center(z, 0.0);
    } else {
        for (double z0 : axis)
            for (double z1 : axis) add_center(z0, z1);
    }
}

double BallLattice::max_ball_measure() const {
    std::size_t m = 0;
    for (const auto& mem : members_) m = std::max(m, mem.size());
    return static_cast<double>(m) * grid_.cell_measure();
}

std::pair<double, std::size_t> BallLattice::norm_with_center(const SampledFunction& f, double q,
                                                             double alpha) const {
    require(f.grid() == grid_, "ul_frak_norm: grid mismatch with ball lattice");
    check_exponents(q, alpha, "ul_frak_norm");
    double best = 0.0;
    std::size_t arg = 0;
    std::vector<double> local;
    for (std::size_t c = 0; c < members_.size(); ++c) {
        local.clear();
        bool any = false;
        for (std::size_t i : members_[c]) {
            local.push_back(f[i]);
            any = any || f[i] != 0.0;
        }
        if (!any) continue;
        const double v = std::isinf(q)
                             ? std::abs(*std::max_element(local.begin(), local.end(),
                                                          [](double a, double b) { return std::abs(a) < std::abs(b); }))
                             : frak_norm(Rearrangement::from_values(local, grid_.cell_measure()), q, alpha);
        if (v > best) {
            best = v;
            arg = c;
        }
    }
    return {best, arg};
}

double BallLattice::norm(const SampledFunction& f, double q, double alpha) const {
    return norm_with_center(f, q, alpha).first;
}

double ul_frak_norm(const SampledFunction& f, double q, double alpha, double rho) {
    return BallLattice(f.grid(), rho).norm(f, q, alpha);
}

double evaluate(const NormSpec& spec, const SampledFunction& f) {
    spec.validate();
    if (spec.rho) return ul_frak_norm(f, spec.q, spec.alpha, *spec.rho);
    switch (spec.family) {
        case NormFamily::FrakWeak: return frak_norm(f, spec.q, spec.alpha);
        case NormFamily::Zygmund: return zygmund_norm(f, spec.q, spec.alpha);
        case NormFamily::WeakZygmund: return weak_zygmund_norm(f, spec.q, spec.alpha);
        case NormFamily::DoublestarWeak: return doublestar_norm(f, spec.q, spec.alpha);
    }
    throw PreconditionError("evaluate: unknown norm family");
}

HolderCheck holder_product_check(const SampledFunction& f1, const SampledFunction& f2, double q1,
                                 double q2, double alpha1, double alpha2) {
    check_exponents(q1, alpha1, "holder_product_check");
    check_exponents(q2, alpha2, "holder_product_check");
    const double inv1 = std::isinf(q1) ? 0.0 : 1.0 / q1;
    const double inv2 = std::isinf(q2) ? 0.0 : 1.0 / q2;
    require(std::abs(inv1 + inv2 - 1.0) <= 1e-12, "holder_product_check: need 1/q1 + 1/q2 = 1");
    HolderCheck out;
    out.alpha = alpha1 * inv1 + alpha2 * inv2;
    out.lhs = frak_norm(pointwise_product(f1, f2), 1.0, out.alpha);
    out.rhs = frak_norm(f1, q1, alpha1) * frak_norm(f2, q2, alpha2);
    return out;
}

double IdentityCheck::relative_gap() const {
    const double scale = std::max(std::abs(lhs), std::abs(rhs));
    return scale == 0.0 ? 0.0 : std::abs(lhs - rhs) / scale;
}

IdentityCheck power_identity_check(const SampledFunction& f, double r, double q, double alpha) {
    require(r > 0, "power_identity_check: r must be > 0");
    require(r * q >= 1.0, "power_identity_check: need r q >= 1");
    const Rearrangement base = rearrange(f);
    return {frak_norm(base.power(r), q, alpha), std::pow(frak_norm(base, r * q, alpha), r)};
}

LogInterpolationCheck log_interpolation(const SampledFunction& f, double alpha, double beta,
                                        double rho) {
    require(0 <= alpha && alpha <= beta, "log_interpolation: need 0 <= alpha <= beta");
    const BallLattice lattice(f.grid(), rho);
    LogInterpolationCheck out;
    out.lhs = lattice.norm(f, 1.0, alpha);
    const double ul_beta = lattice.norm(f, 1.0, beta);
    out.rhs = std::pow(std::log(kE + 1.0 / rho), alpha - beta) * ul_beta;
    out.rhs_ball = std::pow(std::log(kE + 1.0 / lattice.max_ball_measure()), alpha - beta) * ul_beta;
    out.empirical_constant = out.rhs > 0 ? out.lhs / out.rhs : 0.0;
    return out;
}

}  // namespace fracheat
