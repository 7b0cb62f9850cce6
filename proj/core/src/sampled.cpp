#include "fracheat/sampled.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "fracheat/error.hpp"

namespace fracheat {

namespace {

bool is_power_of_two(std::size_t m) { return m != 0 && (m & (m - 1)) == 0; }

// Wrap a coordinate difference into [-L, L).
double periodic_delta(double d, double halfwidth) {
    const double period = 2.0 * halfwidth;
    d = std::fmod(d + halfwidth, period);
    if (d < 0) d += period;
    return d - halfwidth;
}

}  // namespace

GridSpec::GridSpec(int dim, double halfwidth, std::size_t points_per_axis)
    : dim_(dim), halfwidth_(halfwidth), points_(points_per_axis) {
    require(dim == 1 || dim == 2, "make_grid: dimension must be 1 or 2, got " + std::to_string(dim));
    require(halfwidth > 0 && std::isfinite(halfwidth), "make_grid: box halfwidth L must be > 0");
    require(points_per_axis >= 8 && is_power_of_two(points_per_axis),
            "make_grid: points per axis must be a power of two >= 8, got " +
                std::to_string(points_per_axis));
    size_ = dim == 1 ? points_ : points_ * points_;
    spacing_ = 2.0 * halfwidth_ / static_cast<double>(points_);
    cell_measure_ = dim == 1 ? spacing_ : spacing_ * spacing_;
}

double GridSpec::center(std::size_t i) const {
    return -halfwidth_ + (static_cast<double>(i) + 0.5) * spacing_;
}

std::array<double, 2> GridSpec::node(std::size_t flat) const {
    if (dim_ == 1) return {center(flat), 0.0};
    return {center(flat / points_), center(flat % points_)};
}

double GridSpec::norm_of_node(std::size_t flat) const {
    const auto x = node(flat);
    return std::hypot(x[0], x[1]);
}

bool GridSpec::operator==(const GridSpec& other) const {
    return dim_ == other.dim_ && points_ == other.points_ && halfwidth_ == other.halfwidth_;
}

GridSpec make_grid(int dim, double halfwidth, std::size_t points_per_axis) {
    return GridSpec(dim, halfwidth, points_per_axis);
}

SampledFunction::SampledFunction(GridSpec grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
    require(values_.size() == grid_.size(), "SampledFunction: value count does not match grid");
}

SampledFunction SampledFunction::zeros(const GridSpec& grid) {
    return SampledFunction(grid, std::vector<double>(grid.size(), 0.0));
}

SampledFunction SampledFunction::constant(const GridSpec& grid, double value) {
    return SampledFunction(grid, std::vector<double>(grid.size(), value));
}

double SampledFunction::sup_abs() const {
    double m = 0.0;
    for (double v : values_) m = std::max(m, std::abs(v));
    return m;
}

bool SampledFunction::all_finite() const {
    return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

SampledFunction sample(const GridSpec& grid, const PointFunction& f) {
    std::vector<double> values(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const auto x = grid.node(i);
        const double v = f(std::span<const double>(x.data(), static_cast<std::size_t>(grid.dim())));
        if (!std::isfinite(v)) {
            std::ostringstream os;
            os << "sample: non-finite value at node " << i << " (x = " << x[0];
            if (grid.dim() == 2) os << ", " << x[1];
            os << ")";
            throw NumericalError(os.str());
        }
        values[i] = v;
    }
    return SampledFunction(grid, std::move(values));
}

SampledFunction indicator_ball(const GridSpec& grid, double radius, std::array<double, 2> center) {
    require(radius > 0, "indicator_ball: radius must be > 0");
    std::vector<double> values(grid.size(), 0.0);
    const double L = grid.halfwidth();
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const auto x = grid.node(i);
        const double dx = periodic_delta(x[0] - center[0], L);
        const double dy = grid.dim() == 2 ? periodic_delta(x[1] - center[1], L) : 0.0;
        if (dx * dx + dy * dy < radius * radius) values[i] = 1.0;
    }
    return SampledFunction(grid, std::move(values));
}

double integral(const SampledFunction& f) {
    double s = 0.0;
    for (double v : f.values()) s += v;
    return s * f.grid().cell_measure();
}

double lq_norm(const SampledFunction& f, double q) {
    require(q >= 1, "lq_norm: q must be >= 1");
    if (std::isinf(q)) return f.sup_abs();
    double s = 0.0;
    for (double v : f.values()) s += std::pow(std::abs(v), q);
    return std::pow(s * f.grid().cell_measure(), 1.0 / q);
}

void expect_same_grid(const SampledFunction& f, const SampledFunction& g, const char* where) {
    if (f.grid() != g.grid()) throw PreconditionError(std::string(where) + ": grid mismatch");
}

SampledFunction axpy(double a, const SampledFunction& f, double b, const SampledFunction& g) {
    expect_same_grid(f, g, "axpy");
    std::vector<double> out(f.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = a * f[i] + b * g[i];
    return SampledFunction(f.grid(), std::move(out));
}

SampledFunction pointwise_pow(const SampledFunction& f, double power) {
    return pointwise_apply(f, [power](double v) { return std::pow(std::abs(v), power); });
}

SampledFunction pointwise_apply(const SampledFunction& f, const std::function<double(double)>& op) {
    std::vector<double> out(f.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = op(f[i]);
    return SampledFunction(f.grid(), std::move(out));
}

SampledFunction pointwise_product(const SampledFunction& f, const SampledFunction& g) {
    expect_same_grid(f, g, "pointwise_product");
    std::vector<double> out(f.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = f[i] * g[i];
    return SampledFunction(f.grid(), std::move(out));
}

SampledFunction scaled(const SampledFunction& f, double k) {
    return pointwise_apply(f, [k](double v) { return k * v; });
}

double signed_power(double s, double p) {
    if (s == 0.0) return 0.0;
    const double m = std::pow(std::abs(s), p);
    return s < 0 ? -m : m;
}

SampledFunction signed_power(const SampledFunction& f, double p) {
    return pointwise_apply(f, [p](double v) { return signed_power(v, p); });
}

double pairing(const SampledFunction& f, const SampledFunction& g) {
    expect_same_grid(f, g, "pairing");
    double s = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) s += f[i] * g[i];
    return s * f.grid().cell_measure();
}

csv::Table to_csv(const SampledFunction& f) {
    const auto& grid = f.grid();
    csv::Table table(grid.dim() == 1 ? std::vector<std::string>{"x1", "value"}
                                     : std::vector<std::string>{"x1", "x2", "value"});
    for (std::size_t i = 0; i < f.size(); ++i) {
        const auto x = grid.node(i);
        if (grid.dim() == 1)
            table.add_reals({x[0], f[i]});
        else
            table.add_reals({x[0], x[1], f[i]});
    }
    return table;
}

}  // namespace fracheat
