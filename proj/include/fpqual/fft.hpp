#pragma once

#include <complex>
#include <span>
#include <vector>

namespace fpqual {

/// In-place forward radix-2 FFT. Size must be a power of two.
void fft_inplace(std::span<std::complex<double>> a);

int next_pow2(int n);

/// Direct DFT power at bins 0..floor(n/2). O(n^2); meant for short
/// ridge signatures where n stays small.
std::vector<double> dft_power(std::span<const double> x);

/// 2-D power spectrum of a real grid, zero-padded to powers of two.
/// Row-major, unshifted: bin (kx, ky) corresponds to frequency
/// (kx/padded_width, ky/padded_height) cycles/sample with the usual
/// wrap-around for the upper half.
struct Spectrum2D {
    int width = 0;   // padded width
    int height = 0;  // padded height
    std::vector<double> power;

    /// Signed frequency of a bin in cycles/sample, in [-0.5, 0.5).
    double freq_x(int kx) const { return (kx <= width / 2 ? kx : kx - width) / static_cast<double>(width); }
    double freq_y(int ky) const { return (ky <= height / 2 ? ky : ky - height) / static_cast<double>(height); }
};

Spectrum2D power_spectrum_2d(std::span<const double> values, int width, int height);

}  // namespace fpqual
