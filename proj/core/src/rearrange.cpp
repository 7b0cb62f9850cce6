#include "fracheat/rearrange.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "fracheat/error.hpp"
#include "fracheat/spectral.hpp"

namespace fracheat {

Rearrangement::Rearrangement(std::vector<double> breaks, std::vector<double> levels, double tail)
    : tail_(tail) {
    require(!breaks.empty() && breaks.front() == 0.0, "Rearrangement: breaks must start at 0");
    require(levels.size() + 1 == breaks.size(), "Rearrangement: need one more break than levels");
    require(std::isfinite(tail) && tail >= 0.0, "Rearrangement: tail must be finite and >= 0");
    for (std::size_t k = 0; k < levels.size(); ++k) {
        require(breaks[k + 1] > breaks[k], "Rearrangement: breaks must be strictly ascending");
        require(std::isfinite(levels[k]) && levels[k] >= 0.0, "Rearrangement: levels must be finite and >= 0");
        if (k > 0) require(levels[k] <= levels[k - 1], "Rearrangement: levels must be non-increasing");
    }
    require(levels.empty() || tail <= levels.back(), "Rearrangement: tail exceeds last level");

    // Merge equal neighbours; drop zero steps when the tail is zero.
    breaks_.push_back(0.0);
    for (std::size_t k = 0; k < levels.size(); ++k) {
        if (levels[k] == 0.0 && tail == 0.0) break;
        if (!levels_.empty() && levels_.back() == levels[k]) {
            breaks_.back() = breaks[k + 1];
        } else {
            levels_.push_back(levels[k]);
            breaks_.push_back(breaks[k + 1]);
        }
    }
    if (!levels_.empty() && tail_ > 0.0 && levels_.back() == tail_) {
        levels_.pop_back();
        breaks_.pop_back();
    }
    cumulative_.assign(breaks_.size(), 0.0);
    for (std::size_t k = 0; k < levels_.size(); ++k)
        cumulative_[k + 1] = cumulative_[k] + levels_[k] * (breaks_[k + 1] - breaks_[k]);
}

Rearrangement Rearrangement::from_values(std::span<const double> values, double cell_measure) {
    require(cell_measure > 0, "Rearrangement::from_values: cell measure must be > 0");
    std::vector<double> mags(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!std::isfinite(values[i])) throw NumericalError("rearrange: non-finite value");
        mags[i] = std::abs(values[i]);
    }
    std::sort(mags.begin(), mags.end(), std::greater<>());

    std::vector<double> breaks{0.0};
    std::vector<double> levels;
    std::size_t count = 0;
    for (std::size_t i = 0; i < mags.size() && mags[i] > 0.0;) {
        std::size_t j = i;
        while (j < mags.size() && mags[j] == mags[i]) ++j;
        count += j - i;
        levels.push_back(mags[i]);
        // Integer count times cell measure keeps cell-aligned breakpoints exact.
        breaks.push_back(static_cast<double>(count) * cell_measure);
        i = j;
    }
    return Rearrangement(std::move(breaks), std::move(levels), 0.0);
}

std::size_t Rearrangement::step_index(double s) const {
    auto it = std::upper_bound(breaks_.begin(), breaks_.end(), s);
    if (it == breaks_.end()) return levels_.size();
    return static_cast<std::size_t>(it - breaks_.begin()) - 1;
}

double Rearrangement::value(double s) const {
    require(s >= 0, "Rearrangement::value: s must be >= 0");
    const std::size_t k = step_index(s);
    return k < levels_.size() ? levels_[k] : tail_;
}

double Rearrangement::integral_to(double s) const {
    if (s <= 0) return 0.0;
    const std::size_t k = step_index(s);
    if (k >= levels_.size()) {
        const double base = cumulative_.back();
        return tail_ > 0 ? base + tail_ * (s - support_measure()) : base;
    }
    return cumulative_[k] + levels_[k] * (s - breaks_[k]);
}

double Rearrangement::mass(double q) const {
    if (tail_ > 0) return std::numeric_limits<double>::infinity();
    double m = 0.0;
    for (std::size_t k = 0; k < levels_.size(); ++k)
        m += std::pow(levels_[k], q) * (breaks_[k + 1] - breaks_[k]);
    return m;
}

double Rearrangement::distribution(double lambda) const {
    require(lambda > 0, "distribution: lambda must be > 0");
    if (tail_ > lambda) return std::numeric_limits<double>::infinity();
    double m = 0.0;
    for (std::size_t k = 0; k < levels_.size() && levels_[k] > lambda; ++k) m = breaks_[k + 1];
    return m;
}

Rearrangement Rearrangement::power(double q) const {
    require(q > 0, "Rearrangement::power: exponent must be > 0");
    std::vector<double> lv(levels_.size());
    for (std::size_t k = 0; k < lv.size(); ++k) lv[k] = std::pow(levels_[k], q);
    return Rearrangement(breaks_, std::move(lv), std::pow(tail_, q));
}

Rearrangement Rearrangement::scaled(double k) const {
    const double a = std::abs(k);
    if (a == 0.0) return Rearrangement({0.0}, {}, 0.0);
    std::vector<double> lv(levels_.size());
    for (std::size_t i = 0; i < lv.size(); ++i) lv[i] = a * levels_[i];
    return Rearrangement(breaks_, std::move(lv), a * tail_);
}

Rearrangement rearrange(const SampledFunction& f) {
    return Rearrangement::from_values(f.values(), f.grid().cell_measure());
}

double distribution_function(const SampledFunction& f, double lambda) {
    require(lambda > 0, "distribution_function: lambda must be > 0");
    std::size_t count = 0;
    for (double v : f.values())
        if (std::abs(v) > lambda) ++count;
    return static_cast<double>(count) * f.grid().cell_measure();
}

double maximal_average(const Rearrangement& r, double s) {
    require(s > 0, "maximal_average: s must be > 0");
    return r.integral_to(s) / s;
}

namespace {

std::vector<double> merged_breaks(const Rearrangement& a, const Rearrangement& b) {
    std::vector<double> out;
    out.reserve(a.breaks().size() + b.breaks().size());
    std::merge(a.breaks().begin(), a.breaks().end(), b.breaks().begin(), b.breaks().end(),
               std::back_inserter(out));
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

// Cumulative F(tau) = A + a tau on the step containing tau0.
struct Affine {
    double offset;
    double slope;
};

Affine cumulative_piece(const Rearrangement& r, double tau0) {
    const std::size_t k = r.step_index(tau0);
    if (k >= r.steps()) return {r.cumulative_at_break(r.steps()), 0.0};
    const double slope = r.levels()[k];
    return {r.cumulative_at_break(k) - slope * r.breaks()[k], slope};
}

}  // namespace

double oneil_rhs(const Rearrangement& f, const Rearrangement& g, double s) {
    require(s > 0, "oneil_rhs: s must be > 0");
    require(f.tail() == 0 && g.tail() == 0, "oneil_rhs: rearrangements must have zero tail");
    // f**(tau) g**(tau) = (A + a tau)(B + b tau) / tau^2 on each merged piece.
    const auto knots = merged_breaks(f, g);
    double total = 0.0;
    auto piece = [&](double lo, double hi) {
        const double mid = std::isinf(hi) ? lo + 1.0 : 0.5 * (lo + hi);
        const Affine F = cumulative_piece(f, mid);
        const Affine G = cumulative_piece(g, mid);
        const double c2 = F.offset * G.offset;
        const double c1 = F.offset * G.slope + F.slope * G.offset;
        const double c0 = F.slope * G.slope;
        if (std::isinf(hi)) {
            // Beyond both supports the slopes vanish.
            total += c2 / lo;
            return;
        }
        total += c2 * (1.0 / lo - 1.0 / hi) + c1 * std::log(hi / lo) + c0 * (hi - lo);
    };
    double lo = s;
    for (double knot : knots) {
        if (knot <= lo) continue;
        piece(lo, knot);
        lo = knot;
    }
    piece(lo, std::numeric_limits<double>::infinity());
    return total;
}

double product_rhs(const Rearrangement& f1, const Rearrangement& f2, double s) {
    require(s > 0, "product_rhs: s must be > 0");
    const auto knots = merged_breaks(f1, f2);
    double acc = 0.0;
    double lo = 0.0;
    auto add = [&](double a, double b) {
        const double mid = 0.5 * (a + b);
        acc += f1.value(mid) * f2.value(mid) * (b - a);
    };
    for (double knot : knots) {
        if (knot <= lo) continue;
        if (knot >= s) break;
        add(lo, knot);
        lo = knot;
    }
    if (lo < s) add(lo, s);
    return acc / s;
}

double InequalityTrace::max_violation() const {
    double m = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < lhs.size(); ++i) m = std::max(m, lhs[i] - rhs[i]);
    return m;
}

double InequalityTrace::max_relative_violation() const {
    double m = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < lhs.size(); ++i) {
        if (rhs[i] > 0)
            m = std::max(m, (lhs[i] - rhs[i]) / rhs[i]);
        else
            m = std::max(m, lhs[i] > 0 ? std::numeric_limits<double>::infinity() : 0.0);
    }
    return m;
}

InequalityTrace check_oneil(const SampledFunction& f, const SampledFunction& g,
                            std::span<const double> s_grid) {
    expect_same_grid(f, g, "check_oneil");
    const Rearrangement conv = rearrange(spectral::circular_convolve(f, g));
    const Rearrangement rf = rearrange(f);
    const Rearrangement rg = rearrange(g);
    InequalityTrace trace;
    for (double s : s_grid) {
        trace.s.push_back(s);
        trace.lhs.push_back(maximal_average(conv, s));
        trace.rhs.push_back(oneil_rhs(rf, rg, s));
    }
    return trace;
}

InequalityTrace check_product(const SampledFunction& f1, const SampledFunction& f2,
                              std::span<const double> s_grid) {
    expect_same_grid(f1, f2, "check_product");
    const Rearrangement prod = rearrange(pointwise_product(f1, f2));
    const Rearrangement r1 = rearrange(f1);
    const Rearrangement r2 = rearrange(f2);
    InequalityTrace trace;
    for (double s : s_grid) {
        trace.s.push_back(s);
        trace.lhs.push_back(maximal_average(prod, s));
        trace.rhs.push_back(product_rhs(r1, r2, s));
    }
    return trace;
}

csv::Table to_csv(const Rearrangement& r) {
    csv::Table table({"s_break", "level"});
    for (std::size_t k = 0; k < r.steps(); ++k) table.add_reals({r.breaks()[k], r.levels()[k]});
    table.add_reals({r.support_measure(), r.tail()});
    return table;
}

}  // namespace fracheat
