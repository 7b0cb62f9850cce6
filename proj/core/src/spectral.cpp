#include "fracheat/spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <cstring>
#include <numbers>

#include "fracheat/error.hpp"

namespace fracheat::spectral {

struct FourierPlan::Impl {
    GridSpec grid;
    std::size_t n_real;
    std::size_t n_complex;
    double* real = nullptr;
    fftw_complex* cplx = nullptr;
    fftw_plan fwd = nullptr;
    fftw_plan bwd = nullptr;

    explicit Impl(const GridSpec& g) : grid(g) {
        const int m = static_cast<int>(g.points_per_axis());
        n_real = g.size();
        n_complex = g.dim() == 1 ? static_cast<std::size_t>(m / 2 + 1)
                                 : static_cast<std::size_t>(m) * static_cast<std::size_t>(m / 2 + 1);
        real = fftw_alloc_real(n_real);
        cplx = fftw_alloc_complex(n_complex);
        if (!real || !cplx) throw NumericalError("FourierPlan: allocation failed");
        if (g.dim() == 1) {
            fwd = fftw_plan_dft_r2c_1d(m, real, cplx, FFTW_ESTIMATE);
            bwd = fftw_plan_dft_c2r_1d(m, cplx, real, FFTW_ESTIMATE);
        } else {
            fwd = fftw_plan_dft_r2c_2d(m, m, real, cplx, FFTW_ESTIMATE);
            bwd = fftw_plan_dft_c2r_2d(m, m, cplx, real, FFTW_ESTIMATE);
        }
        if (!fwd || !bwd) throw NumericalError("FourierPlan: FFTW planning failed");
    }

    ~Impl() {
        if (fwd) fftw_destroy_plan(fwd);
        if (bwd) fftw_destroy_plan(bwd);
        if (real) fftw_free(real);
        if (cplx) fftw_free(cplx);
    }
};

FourierPlan::FourierPlan(const GridSpec& grid) : impl_(std::make_unique<Impl>(grid)) {}
FourierPlan::~FourierPlan() = default;
FourierPlan::FourierPlan(FourierPlan&&) noexcept = default;
FourierPlan& FourierPlan::operator=(FourierPlan&&) noexcept = default;

const GridSpec& FourierPlan::grid() const { return impl_->grid; }
std::size_t FourierPlan::spectrum_size() const { return impl_->n_complex; }

Spectrum FourierPlan::forward(std::span<const double> values) const {
    require(values.size() == impl_->n_real, "FourierPlan::forward: size mismatch");
    std::memcpy(impl_->real, values.data(), values.size() * sizeof(double));
    fftw_execute(impl_->fwd);
    Spectrum out(impl_->n_complex);
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = {impl_->cplx[k][0], impl_->cplx[k][1]};
    return out;
}

std::vector<double> FourierPlan::inverse(const Spectrum& spectrum) const {
    require(spectrum.size() == impl_->n_complex, "FourierPlan::inverse: size mismatch");
    for (std::size_t k = 0; k < spectrum.size(); ++k) {
        impl_->cplx[k][0] = spectrum[k].real();
        impl_->cplx[k][1] = spectrum[k].imag();
    }
    fftw_execute(impl_->bwd);
    const double scale = 1.0 / static_cast<double>(impl_->n_real);
    std::vector<double> out(impl_->n_real);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = impl_->real[i] * scale;
    return out;
}

std::vector<double> frequency_norms(const GridSpec& grid) {
    const std::size_t m = grid.points_per_axis();
    const double base = std::numbers::pi / grid.halfwidth();
    auto wavenumber = [m](std::size_t k) {
        return k <= m / 2 ? static_cast<double>(k) : static_cast<double>(k) - static_cast<double>(m);
    };
    std::vector<double> out;
    if (grid.dim() == 1) {
        out.resize(m / 2 + 1);
        for (std::size_t k = 0; k < out.size(); ++k) out[k] = base * static_cast<double>(k);
    } else {
        const std::size_t half = m / 2 + 1;
        out.resize(m * half);
        for (std::size_t i = 0; i < m; ++i) {
            const double ki = wavenumber(i);
            for (std::size_t j = 0; j < half; ++j)
                out[i * half + j] = base * std::hypot(ki, static_cast<double>(j));
        }
    }
    return out;
}

SampledFunction circular_convolve(const SampledFunction& f, const SampledFunction& g) {
    expect_same_grid(f, g, "circular_convolve");
    FourierPlan plan(f.grid());
    Spectrum a = plan.forward(f.values());
    const Spectrum b = plan.forward(g.values());
    const double h = f.grid().cell_measure();
    for (std::size_t k = 0; k < a.size(); ++k) a[k] *= b[k] * h;
    return SampledFunction(f.grid(), plan.inverse(a));
}

SampledFunction apply_multiplier(const FourierPlan& plan, const SampledFunction& f,
                                 const std::vector<double>& multiplier) {
    require(plan.grid() == f.grid(), "apply_multiplier: plan grid mismatch");
    require(multiplier.size() == plan.spectrum_size(), "apply_multiplier: multiplier size mismatch");
    Spectrum a = plan.forward(f.values());
    for (std::size_t k = 0; k < a.size(); ++k) a[k] *= multiplier[k];
    return SampledFunction(f.grid(), plan.inverse(a));
}

}  // namespace fracheat::spectral
