#include "fpqual/fft.hpp"

#include <cassert>
#include <cmath>
#include <numbers>

namespace fpqual {

void fft_inplace(std::span<std::complex<double>> a) {
    const std::size_t n = a.size();
    assert(n > 0 && (n & (n - 1)) == 0);

    // bit-reversal permutation
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }

    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = -2.0 * std::numbers::pi / static_cast<double>(len);
        const std::complex<double> wlen(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            std::complex<double> w(1.0, 0.0);
            for (std::size_t k = 0; k < len / 2; ++k) {
                const auto u = a[i + k];
                const auto v = a[i + k + len / 2] * w;
                a[i + k] = u + v;
                a[i + k + len / 2] = u - v;
                w *= wlen;
            }
        }
    }
}

int next_pow2(int n) {
    int p = 1;
    while (p < n) p <<= 1;
    return p;
}

std::vector<double> dft_power(std::span<const double> x) {
    const std::size_t n = x.size();
    std::vector<double> power(n / 2 + 1, 0.0);
    for (std::size_t k = 0; k <= n / 2; ++k) {
        double re = 0.0;
        double im = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double phase = -2.0 * std::numbers::pi * static_cast<double>(k) *
                                 static_cast<double>(i) / static_cast<double>(n);
            re += x[i] * std::cos(phase);
            im += x[i] * std::sin(phase);
        }
        power[k] = re * re + im * im;
    }
    return power;
}

Spectrum2D power_spectrum_2d(std::span<const double> values, int width, int height) {
    assert(static_cast<std::size_t>(width) * height == values.size());
    const int pw = next_pow2(width);
    const int ph = next_pow2(height);

    std::vector<std::complex<double>> grid(static_cast<std::size_t>(pw) * ph, {0.0, 0.0});
    for (int y = 0; y < height; ++y)
        for (int x = 0; x < width; ++x)
            grid[static_cast<std::size_t>(y) * pw + x] = values[static_cast<std::size_t>(y) * width + x];

    for (int y = 0; y < ph; ++y)
        fft_inplace(std::span(grid).subspan(static_cast<std::size_t>(y) * pw, pw));

    std::vector<std::complex<double>> column(static_cast<std::size_t>(ph));
    for (int x = 0; x < pw; ++x) {
        for (int y = 0; y < ph; ++y) column[static_cast<std::size_t>(y)] = grid[static_cast<std::size_t>(y) * pw + x];
        fft_inplace(column);
        for (int y = 0; y < ph; ++y) grid[static_cast<std::size_t>(y) * pw + x] = column[static_cast<std::size_t>(y)];
    }

    Spectrum2D out;
    out.width = pw;
    out.height = ph;
    out.power.resize(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) out.power[i] = std::norm(grid[i]);
    return out;
}

}  // namespace fpqual
