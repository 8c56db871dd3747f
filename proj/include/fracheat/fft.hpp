#pragma once

// Thin RAII layer over FFTW for real transforms. Plans use FFTW_ESTIMATE so a
// given size always produces bit-identical output.

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace fracheat::fft {

/// Real-to-half-complex forward transform (n/2 + 1 coefficients, unnormalized).
std::vector<std::complex<double>> forward(std::span<const double> x);

/// Inverse of forward(), normalized by 1/n.
std::vector<double> inverse(std::span<const std::complex<double>> c, std::size_t n);

/// Circular convolution sum_j a[j] b[(i - j) mod n] of two equal-length sequences.
std::vector<double> circular_convolve(std::span<const double> a, std::span<const double> b);

/// Applies a real even multiplier m(k) (k = 0..n/2, the discrete mode index).
template <class M> std::vector<double> apply_multiplier(std::span<const double> x, M &&m) {
    auto c = forward(x);
    for (std::size_t k = 0; k < c.size(); ++k) c[k] *= m(k);
    return inverse(c, x.size());
}

} // namespace fracheat::fft
