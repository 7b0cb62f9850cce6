#include "fracheat/estimates.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "fracheat/error.hpp"
#include "fracheat/kernel.hpp"
#include "fracheat/quadrature.hpp"
#include "fracheat/zygmund.hpp"

namespace fracheat {

namespace {

constexpr double kE = std::numbers::e;
constexpr double kPi = std::numbers::pi;

double inverse(double p) { return std::isinf(p) ? 0.0 : 1.0 / p; }

// log(e + 1/tau) given x = log(1/tau), safe for |x| large.
double log_weight_at_log(double x) {
    if (x > 30.0) return x + std::log1p(kE * std::exp(-x));
    return std::log(kE + std::exp(x));
}

double w(double s) { return std::log(kE + 1.0 / s); }

double max_of(const std::vector<double>& v) {
    return v.empty() ? 0.0 : *std::max_element(v.begin(), v.end());
}

void push(RatioTrace& trace, double s, double lhs, double rhs) {
    trace.s.push_back(s);
    trace.lhs.push_back(lhs);
    trace.rhs.push_back(rhs);
    trace.ratio.push_back(lhs / rhs);
}

// Geometric partition of [lo, hi] with `per_decade` steps per decade.
std::vector<double> geometric_partition(double lo, double hi, int per_decade) {
    require(0 < lo && lo < hi, "witness: need 0 < s_min < delta");
    require(per_decade >= 1, "witness: per_decade must be >= 1");
    const double decades = std::log10(hi / lo);
    const auto steps = static_cast<std::size_t>(std::ceil(decades * per_decade));
    std::vector<double> b(steps + 1);
    for (std::size_t k = 0; k <= steps; ++k)
        b[k] = lo * std::pow(10.0, decades * static_cast<double>(k) / static_cast<double>(steps));
    b.front() = lo;
    b.back() = hi;
    return b;
}

}  // namespace

double DecayTrace::max_ratio() const { return max_of(ratio); }

double DecayTrace::min_ratio() const {
    return ratio.empty() ? 0.0 : *std::min_element(ratio.begin(), ratio.end());
}

bool DecayTrace::finite_positive() const {
    return !ratio.empty() &&
           std::all_of(ratio.begin(), ratio.end(), [](double r) { return std::isfinite(r) && r > 0; });
}

double DecayTrace::tail_slope() const {
    if (t.size() < 2) return 0.0;
    const double cutoff = t.back() / 10.0 * (1 - 1e-12);
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int count = 0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (t[i] < cutoff) continue;
        const double x = std::log(t[i]), y = std::log(ratio[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++count;
    }
    if (count < 2) return 0.0;
    const double denom = count * sxx - sx * sx;
    return denom == 0.0 ? 0.0 : (count * sxy - sx * sy) / denom;
}

double DecayTrace::settled_fraction() const {
    if (ratio.empty()) return 0.0;
    const std::size_t start = ratio.size() - std::max<std::size_t>(1, ratio.size() / 4);
    const double tail = *std::max_element(ratio.begin() + static_cast<long>(start), ratio.end());
    return tail / max_ratio();
}

bool DecayTrace::bounded(double slope_tol) const {
    return finite_positive() && std::abs(tail_slope()) <= slope_tol;
}

csv::Table DecayTrace::to_csv() const {
    csv::Table table({"t", "measured", "envelope", "ratio"});
    for (std::size_t i = 0; i < t.size(); ++i) table.add_reals({t[i], measured[i], envelope[i], ratio[i]});
    return table;
}

std::vector<double> geometric_grid(double lo, double hi, std::size_t points) {
    require(0 < lo && lo <= hi, "geometric_grid: need 0 < lo <= hi");
    require(points >= 1, "geometric_grid: need at least one point");
    if (points == 1) return {lo};
    std::vector<double> g(points);
    const double step = std::log(hi / lo) / static_cast<double>(points - 1);
    for (std::size_t i = 0; i < points; ++i) g[i] = lo * std::exp(step * static_cast<double>(i));
    g.back() = hi;
    return g;
}

double RatioTrace::max_ratio() const { return max_of(ratio); }

RatioTrace lemma31_check(int variant, double q, double alpha, double S, std::span<const double> s_grid) {
    switch (variant) {
        case 1: require(q > -1.0, "lemma31 variant 1: need q > -1"); break;
        case 2:
            require(alpha < -1.0, "lemma31 variant 2: need alpha < -1");
            require(S > 0.0, "lemma31 variant 2: need S > 0");
            break;
        case 3: require(q < -1.0, "lemma31 variant 3: need q < -1"); break;
        default: throw PreconditionError("lemma31: variant must be 1, 2 or 3");
    }
    RatioTrace trace;
    for (double s : s_grid) {
        require(s > 0.0, "lemma31: s must be > 0");
        const double ls = std::log(1.0 / s);
        double lhs = 0.0, rhs = 0.0;
        if (variant == 1) {
            // tau = s e^{-v}
            auto f = [=](double v) {
                return std::exp(-(q + 1.0) * v) * std::pow(log_weight_at_log(ls + v), alpha);
            };
            lhs = std::pow(s, q + 1.0) * quad::semi_infinite(f, 0.0).value;
            rhs = std::pow(s, q + 1.0) * std::pow(w(s), alpha);
        } else if (variant == 2) {
            require(s < S, "lemma31 variant 2: s must be < S");
            auto f = [=](double v) { return std::pow(log_weight_at_log(ls + v), alpha); };
            lhs = quad::semi_infinite(f, 0.0).value;
            rhs = std::pow(w(s), alpha + 1.0);
        } else {
            // tau = s e^{v}
            auto f = [=](double v) {
                return std::exp((q + 1.0) * v) * std::pow(log_weight_at_log(ls - v), alpha);
            };
            lhs = std::pow(s, q + 1.0) * quad::semi_infinite(f, 0.0).value;
            rhs = std::pow(s, q + 1.0) * std::pow(w(s), alpha);
        }
        push(trace, s, lhs, rhs);
    }
    return trace;
}

RatioTrace pure_log_check(double alpha, std::span<const double> s_grid) {
    require(alpha < -1.0, "pure_log_check: need alpha < -1");
    RatioTrace trace;
    for (double s : s_grid) {
        require(s > 0.0 && s < 1.0, "pure_log_check: s must lie in (0, 1)");
        const double ls = std::log(1.0 / s);
        auto f = [=](double v) { return std::pow(ls + v, alpha); };
        push(trace, s, quad::semi_infinite(f, 0.0).value, std::pow(ls, alpha + 1.0) / (-alpha - 1.0));
    }
    return trace;
}

double unit_ball_volume(int n) {
    require(n == 1 || n == 2, "unit_ball_volume: n must be 1 or 2");
    return n == 1 ? 2.0 : kPi;
}

double majorant_rearrangement(int n, double theta, double t, double s) {
    require(s >= 0.0, "majorant_rearrangement: s must be >= 0");
    return majorant_eval(n, theta, std::pow(s / unit_ball_volume(n), 1.0 / n), t);
}

RatioTrace lemma32_check(int n, double theta, double r, double q, double gamma,
                         std::span<const double> t_grid) {
    require(1.0 <= r && r <= q && std::isfinite(q), "lemma32: need 1 <= r <= q < infinity");
    require(r < q || gamma >= 0.0, "lemma32: need gamma >= 0 when r = q");
    const double a = q * (1.0 - 1.0 / r);
    const double rate = n * q / theta * (1.0 / r - 1.0 / q);
    RatioTrace trace;
    for (double t : t_grid) {
        require(t > 0.0, "lemma32: t must be > 0");
        // tau = tau_c e^{x}, tau_c the measure of the ball of radius t^{1/theta}
        const double tau_c = unit_ball_volume(n) * std::pow(t, n / theta);
        const double log_tc = std::log(tau_c);
        auto integrand = [=](double x) {
            if (!std::isfinite(x)) return 0.0;
            const double log_tau = log_tc + x;
            // log h_t^*(tau), with log(1 + e^z) evaluated stably
            const double z = (log_tau - std::log(unit_ball_volume(n))) / n - std::log(t) / theta;
            const double softplus = z > 30.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
            const double log_h = -n / theta * std::log(t) - (n + theta) * softplus;
            const double log_f = (1.0 + a) * log_tau + gamma * std::log(log_weight_at_log(-log_tau)) + q * log_h;
            return std::exp(log_f);
        };
        const double right = quad::semi_infinite(integrand, 0.0).value;
        const double left = quad::semi_infinite([&](double x) { return integrand(-x); }, 0.0).value;
        push(trace, t, left + right, std::pow(t, -rate) * std::pow(w(t), gamma));
    }
    return trace;
}

void DecayParams::validate() const {
    require(1.0 <= r && r <= q, "decay check: need 1 <= r <= q <= infinity");
    require(alpha >= 0.0 && beta >= 0.0, "decay check: need alpha, beta >= 0");
    require(r < q || alpha <= beta, "decay check: need alpha <= beta when r = q");
    require(theta > 0.0 && theta <= 2.0, "decay check: theta must lie in (0, 2]");
}

double DecayParams::envelope(int n, double t) const {
    const double rate = n / theta * (inverse(r) - inverse(q));
    return std::pow(t, -rate) * std::pow(w(t), -alpha * inverse(r) + beta * inverse(q));
}

DecayTrace prop31_check(const SampledFunction& phi, const DecayParams& params,
                        std::span<const double> t_grid) {
    params.validate();
    const int n = phi.grid().dim();
    const double source = frak_norm(phi, params.r, params.alpha);
    require(source > 0.0, "prop31_check: phi must be nonzero");
    const Semigroup semigroup(phi.grid(), params.theta);
    DecayTrace trace;
    for (double t : t_grid) {
        require(t > 0.0, "prop31_check: t must be > 0");
        const double measured = frak_norm(semigroup.apply(t, phi), params.q, params.beta);
        const double env = params.envelope(n, t);
        trace.t.push_back(t);
        trace.measured.push_back(measured);
        trace.envelope.push_back(env);
        trace.ratio.push_back(measured / (env * source));
    }
    return trace;
}

DecayTrace prop32_check(const SampledFunction& phi, const DecayParams& params, double T,
                        std::span<const double> t_grid) {
    params.validate();
    require(T > 0.0, "prop32_check: T must be > 0");
    const int n = phi.grid().dim();
    const BallLattice lattice(phi.grid(), std::pow(T, 1.0 / params.theta));
    const double source = lattice.norm(phi, params.r, params.alpha);
    require(source > 0.0, "prop32_check: phi must be nonzero");
    const Semigroup semigroup(phi.grid(), params.theta);
    DecayTrace trace;
    for (double t : t_grid) {
        require(t > 0.0 && t <= T * (1 + 1e-12), "prop32_check: t must lie in (0, T]");
        const double measured = lattice.norm(semigroup.apply(t, phi), params.q, params.beta);
        const double env = params.envelope(n, t);
        trace.t.push_back(t);
        trace.measured.push_back(measured);
        trace.envelope.push_back(env);
        trace.ratio.push_back(measured / (env * source));
    }
    return trace;
}

double phi_c_profile(int n, double theta, double radius) {
    require(radius > 0.0, "phi_c: |x| must be > 0");
    return std::pow(radius, -n) * std::pow(w(radius), -n / theta - 1.0);
}

namespace {

// int_0^R r^{-1} [log(e + 1/r)]^{-a} dr, a > 1, via u = log(e + 1/r):
// int_{u_R}^inf u^{-a} / (1 - e^{1-u}) du.
double radial_log_integral(double a, double R) {
    const double uR = w(R);
    auto rest = [a](double u) { return std::pow(u, -a) / std::expm1(u - 1.0); };
    return std::pow(uR, 1.0 - a) / (a - 1.0) + quad::semi_infinite(rest, uR).value;
}

double origin_cell_average(int n, double theta, double h) {
    const double a = n / theta + 1.0;
    if (n == 1) return radial_log_integral(a, h) / h;
    // Cell [0,h]^2 in polar coordinates, symmetric about the diagonal.
    auto ray = [=](double phi) { return radial_log_integral(a, h / std::cos(phi)); };
    return 2.0 * quad::gauss_kronrod(ray, 0.0, kPi / 4.0, 1e-12, 10).value / (h * h);
}

}  // namespace

SampledFunction phi_c(int n, double theta, const GridSpec& grid, double R) {
    require(grid.dim() == n, "phi_c: grid dimension differs from n");
    require(theta > 0.0 && theta <= 2.0, "phi_c: theta must lie in (0, 2]");
    require(R > 0.0, "phi_c: truncation radius must be > 0");
    const double h = grid.spacing();
    const double avg = origin_cell_average(n, theta, h);
    std::vector<double> values(grid.size(), 0.0);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const auto x = grid.node(i);
        const double radius = grid.norm_of_node(i);
        if (radius >= R) continue;
        bool touches_origin = true;
        for (int d = 0; d < n; ++d) touches_origin = touches_origin && std::abs(x[d]) < h;
        values[i] = touches_origin ? avg : phi_c_profile(n, theta, radius);
    }
    return SampledFunction(grid, std::move(values));
}

RatioTrace phi_c_rearrangement_bound(const SampledFunction& phi, int n, double theta,
                                     std::span<const double> s_grid) {
    const Rearrangement r = rearrange(phi);
    RatioTrace trace;
    for (double s : s_grid) {
        require(s > 0.0, "phi_c_rearrangement_bound: s must be > 0");
        push(trace, s, r.value(s), std::pow(w(s), -n / theta - 1.0) / s);
    }
    return trace;
}

Rearrangement appendix_fn(double n, double alpha) {
    require(n > 0.0, "appendix_fn: n must be > 0");
    return Rearrangement({0.0, 1.0 / n}, {n * std::pow(std::log(kE + n), -alpha - 1.0)});
}

Rearrangement witness_frak_not_zygmund(double q, double alpha, double delta, double s_min,
                                       int per_decade) {
    require(q >= 1.0 && alpha > 0.0, "witness: need q >= 1 and alpha > 0");
    // G(s) = [log(e+1/s)]^{-alpha} is the running integral of (f*)^q.
    auto G = [alpha](double s) { return std::pow(w(s), -alpha); };
    std::vector<double> breaks{0.0};
    const auto part = geometric_partition(s_min, delta, per_decade);
    breaks.insert(breaks.end(), part.begin(), part.end());
    std::vector<double> levels;
    for (std::size_t k = 0; k + 1 < breaks.size(); ++k) {
        const double avg = (G(breaks[k + 1]) - (k == 0 ? 0.0 : G(breaks[k]))) /
                           (breaks[k + 1] - breaks[k]);
        levels.push_back(std::pow(avg, 1.0 / q));
    }
    return Rearrangement(std::move(breaks), std::move(levels));
}

Rearrangement witness_weak_not_frak(double q, double alpha, double delta, double s_min,
                                    int per_decade) {
    require(q >= 1.0 && alpha >= 0.0, "witness: need q >= 1 and alpha >= 0");
    std::vector<double> breaks{0.0};
    const auto part = geometric_partition(s_min, delta, per_decade);
    breaks.insert(breaks.end(), part.begin(), part.end());
    std::vector<double> levels;
    for (std::size_t k = 0; k + 1 < breaks.size(); ++k) {
        const double s = breaks[k + 1];
        levels.push_back(std::pow(s, -1.0 / q) * std::pow(w(s), -alpha / q));
    }
    return Rearrangement(std::move(breaks), std::move(levels));
}

bool InclusionRow::ordered(double rel_tol) const {
    return weak <= frak * (1 + rel_tol) && frak <= zygmund * (1 + rel_tol);
}

InclusionRow inclusion_chain(const std::string& name, const Rearrangement& r, double q, double alpha) {
    return {name, weak_zygmund_norm(r, q, alpha), frak_norm(r, q, alpha), zygmund_norm(r, q, alpha)};
}

std::vector<std::pair<std::string, Rearrangement>> inclusion_corpus(unsigned long long seed) {
    std::vector<std::pair<std::string, Rearrangement>> out;
    const double measures[] = {1e-6, 1e-4, 1e-3, 0.01, 0.1, 0.5, 1.0, 2.0, 10.0, 100.0};
    for (int i = 0; i < 10; ++i) {
        const double height = 1.0 + i;
        out.emplace_back("indicator_" + std::to_string(i), Rearrangement({0.0, measures[i]}, {height}));
    }
    const double exps[][2] = {{0.2, 0.0}, {0.5, 0.0}, {0.8, 0.0}, {0.5, 1.0}, {0.5, -1.0},
                              {0.9, 2.0}, {0.3, 3.0}, {0.7, -0.5}, {0.95, 1.0}, {0.1, 0.5}};
    for (int i = 0; i < 10; ++i) {
        const double a = exps[i][0], b = exps[i][1];
        // s^{-a} [log(e+1/s)]^{-b} on (1e-12, 1), right-end step values
        const auto part = geometric_partition(1e-12, 1.0, 16);
        std::vector<double> breaks{0.0};
        breaks.insert(breaks.end(), part.begin(), part.end());
        std::vector<double> levels;
        for (std::size_t k = 1; k < breaks.size(); ++k) {
            double v = std::pow(breaks[k], -a) * std::pow(w(breaks[k]), -b);
            if (!levels.empty()) v = std::min(v, levels.back());
            levels.push_back(v);
        }
        out.emplace_back("powerlog_" + std::to_string(i), Rearrangement(std::move(breaks), std::move(levels)));
    }
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int i = 0; i < 10; ++i) {
        const int steps = 3 + static_cast<int>(rng() % 40);
        std::vector<double> breaks{0.0}, levels;
        for (int k = 0; k < steps; ++k) {
            breaks.push_back(breaks.back() + std::pow(10.0, -4.0 + 4.0 * unit(rng)));
            levels.push_back(std::pow(10.0, 3.0 * unit(rng)));
        }
        std::sort(levels.begin(), levels.end(), std::greater<>());
        out.emplace_back("random_" + std::to_string(i), Rearrangement(std::move(breaks), std::move(levels)));
    }
    return out;
}

csv::Table verify_table() {
    return csv::Table({"check", "param_json", "t_or_s", "measured", "envelope", "ratio"});
}

void append_rows(csv::Table& table, const std::string& check, const std::string& params,
                 const DecayTrace& trace) {
    for (std::size_t i = 0; i < trace.t.size(); ++i)
        table.add_row({check, params, csv::format_real(trace.t[i]), csv::format_real(trace.measured[i]),
                       csv::format_real(trace.envelope[i]), csv::format_real(trace.ratio[i])});
}

void append_rows(csv::Table& table, const std::string& check, const std::string& params,
                 const RatioTrace& trace) {
    for (std::size_t i = 0; i < trace.s.size(); ++i)
        table.add_row({check, params, csv::format_real(trace.s[i]), csv::format_real(trace.lhs[i]),
                       csv::format_real(trace.rhs[i]), csv::format_real(trace.ratio[i])});
}

}  // namespace fracheat
