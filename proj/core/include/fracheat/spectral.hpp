#pragma once

#include <complex>
#include <memory>
#include <vector>

#include "fracheat/sampled.hpp"

namespace fracheat::spectral {

using Spectrum = std::vector<std::complex<double>>;

/// Real-to-complex DFT on a GridSpec (FFTW r2c/c2r, half-spectrum layout).
/// A plan owns its buffers; create one per worker.
class FourierPlan {
public:
    explicit FourierPlan(const GridSpec& grid);
    ~FourierPlan();
    FourierPlan(const FourierPlan&) = delete;
    FourierPlan& operator=(const FourierPlan&) = delete;
    FourierPlan(FourierPlan&&) noexcept;
    FourierPlan& operator=(FourierPlan&&) noexcept;

    const GridSpec& grid() const;
    std::size_t spectrum_size() const;

    Spectrum forward(std::span<const double> values) const;
    // Normalized inverse: inverse(forward(v)) == v up to rounding.
    std::vector<double> inverse(const Spectrum& spectrum) const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

// |xi| for each entry of the half spectrum; xi = (pi / L) * k with k the signed
// integer wavenumber on each axis.
std::vector<double> frequency_norms(const GridSpec& grid);

// Circular convolution (f * g)(x_k) = h^n sum_j f_j g_{k-j}, computed spectrally.
SampledFunction circular_convolve(const SampledFunction& f, const SampledFunction& g);

// Apply a real Fourier multiplier given on the half-spectrum lattice.
SampledFunction apply_multiplier(const FourierPlan& plan, const SampledFunction& f,
                                 const std::vector<double>& multiplier);

}  // namespace fracheat::spectral
