#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "permboot/ordinal.hpp"

namespace permboot {

/// 1/f^alpha noise request: spectral density k / f^alpha.
struct NoiseSpec {
    double alpha = 0.0;
    std::size_t length = 0;
    std::uint64_t seed = 0;
    double k = 1.0;

    /// Throws invalid_input unless length >= 2, alpha finite and k > 0.
    void validate() const;
};

/// Frequency-domain synthesis (Timmer & Koenig 1995). Each positive Fourier
/// frequency f = j/T gets real and imaginary parts ~ N(0, k f^-alpha / 2); the
/// zero-frequency term is 0 and the Nyquist term is real for even T. The
/// inverse transform is standardized to sample mean 0 and sample variance 1.
[[nodiscard]] TimeSeries generate_power_law_noise(const NoiseSpec& spec);

/// Raw periodogram at the positive Fourier frequencies j/T, j = 1..T/2.
struct Periodogram {
    std::vector<double> frequencies;
    std::vector<double> power;
};

[[nodiscard]] Periodogram periodogram(std::span<const double> series);

/// OLS slope of log(power) against log(frequency). Needs >= 8 bins with
/// positive power; throws fit_error on degenerate input.
[[nodiscard]] double fit_spectral_slope(const Periodogram& pg);

}  // namespace permboot
