#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "fracheat/csv.hpp"

namespace fracheat {

/// Uniform periodic grid on the box [-L, L]^n with M cells per axis.
///
/// Nodes sit at cell centers x_i = -L + (i + 1/2) h, h = 2L/M, so the origin
/// is a cell corner, never a node. Storage is row-major: the first
/// coordinate varies slowest.
class GridSpec {
public:
    GridSpec(int dim, double halfwidth, std::size_t points_per_axis);

    int dim() const { return dim_; }
    double halfwidth() const { return halfwidth_; }
    std::size_t points_per_axis() const { return points_; }
    std::size_t size() const { return size_; }
    double spacing() const { return spacing_; }
    double cell_measure() const { return cell_measure_; }
    double total_measure() const { return cell_measure_ * static_cast<double>(size_); }

    double center(std::size_t axis_index) const;
    // Coordinates of the node with flat index `flat`; unused trailing entries are 0.
    std::array<double, 2> node(std::size_t flat) const;
    double norm_of_node(std::size_t flat) const;

    bool operator==(const GridSpec& other) const;
    bool operator!=(const GridSpec& other) const { return !(*this == other); }

private:
    int dim_;
    double halfwidth_;
    std::size_t points_;
    std::size_t size_;
    double spacing_;
    double cell_measure_;
};

GridSpec make_grid(int dim, double halfwidth, std::size_t points_per_axis);

using PointFunction = std::function<double(std::span<const double>)>;

/// Real values on a GridSpec; the carrier for initial data, snapshots and kernels.
class SampledFunction {
public:
    SampledFunction(GridSpec grid, std::vector<double> values);
    static SampledFunction zeros(const GridSpec& grid);
    static SampledFunction constant(const GridSpec& grid, double value);

    const GridSpec& grid() const { return grid_; }
    std::span<const double> values() const { return values_; }
    std::vector<double>& mutable_values() { return values_; }
    double operator[](std::size_t i) const { return values_[i]; }
    std::size_t size() const { return values_.size(); }

    double sup_abs() const;
    bool all_finite() const;

private:
    GridSpec grid_;
    std::vector<double> values_;
};

// values[i] = f(x_i). Throws NumericalError naming the node if f is not finite there.
SampledFunction sample(const GridSpec& grid, const PointFunction& f);

// Indicator of the open ball B(center, radius) (periodic distance).
SampledFunction indicator_ball(const GridSpec& grid, double radius,
                               std::array<double, 2> center = {0.0, 0.0});

// Midpoint quadrature: cell measure times the sum of values.
double integral(const SampledFunction& f);

// L^q norm on the grid; q = infinity gives max |f|.
double lq_norm(const SampledFunction& f, double q);

SampledFunction axpy(double a, const SampledFunction& f, double b, const SampledFunction& g);
SampledFunction pointwise_pow(const SampledFunction& f, double power);  // |f|^power
SampledFunction pointwise_apply(const SampledFunction& f, const std::function<double(double)>& op);
SampledFunction pointwise_product(const SampledFunction& f, const SampledFunction& g);
SampledFunction scaled(const SampledFunction& f, double k);

// F_p(s) = |s|^{p-1} s.
double signed_power(double s, double p);
SampledFunction signed_power(const SampledFunction& f, double p);

// Cell-weighted pairing <f, g> = h^n sum f_i g_i.
double pairing(const SampledFunction& f, const SampledFunction& g);

void expect_same_grid(const SampledFunction& f, const SampledFunction& g, const char* where);

// Header `x1[,x2],value`, one row per cell, row-major.
csv::Table to_csv(const SampledFunction& f);

}  // namespace fracheat
