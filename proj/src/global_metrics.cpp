#include "fpqual/global_metrics.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "fpqual/errors.hpp"
#include "fpqual/fft.hpp"

namespace fpqual {

GlobalScore direction_continuity(const DirectionField& field, const SegmentationMask& mask,
                                 double abrupt_threshold_radians) {
    const BlockGrid& grid = field.grid;
    GlobalScore out;
    int total = 0, abrupt = 0;
    for (int by = 0; by < grid.rows; ++by) {
        for (int bx = 0; bx < grid.cols; ++bx) {
            const int i = grid.index(bx, by);
            if (!mask.foreground(i)) continue;
            // right and down neighbors cover every 4-adjacent pair once
            for (const auto& [dx, dy] : {std::pair{1, 0}, std::pair{0, 1}}) {
                const int nx = bx + dx;
                const int ny = by + dy;
                if (nx >= grid.cols || ny >= grid.rows) continue;
                const int j = grid.index(nx, ny);
                if (!mask.foreground(j)) continue;
                ++total;
                if (acute_angle_difference(field.angle[static_cast<std::size_t>(i)],
                                           field.angle[static_cast<std::size_t>(j)]) >
                    abrupt_threshold_radians)
                    ++abrupt;
            }
        }
    }
    if (total == 0) {
        out.warnings.push_back("no adjacent foreground block pairs");
        out.score = 0.0;
        return out;
    }
    out.score = 1.0 - static_cast<double>(abrupt) / total;
    return out;
}

GlobalScore frequency_uniformity(const RidgeGeometry& geom, const SegmentationMask& mask) {
    constexpr double kScale = 0.5;  // s0
    constexpr int kMinBlocks = 8;

    GlobalScore out;
    double sum = 0.0, sum_sq = 0.0;
    int n = 0;
    for (int i = 0; i < geom.grid.count(); ++i) {
        if (!mask.foreground(i) || !geom.is_defined(i)) continue;
        const double r = geom.ratio[static_cast<std::size_t>(i)];
        sum += r;
        sum_sq += r * r;
        ++n;
    }
    if (n < kMinBlocks) {
        out.warnings.push_back("fewer than 8 blocks with defined ridge geometry");
        out.score = 0.0;
        return out;
    }
    const double mean = sum / n;
    double variance = sum_sq / n - mean * mean;
    if (variance < 0.0) variance = 0.0;
    out.score = 1.0 / (1.0 + std::sqrt(variance) / kScale);
    return out;
}

SpectralResult spectral_energy_concentration(const GrayImage& img, int band_count,
                                             const FrequencyBand& roi) {
    if (band_count < 1) throw ConfigError("spectral bands: band count must be >= 1");
    if (!(roi.fmin > 0.0 && roi.fmin < roi.fmax && roi.fmax <= 0.5))
        throw ConfigError("spectral bands: ROI must satisfy 0 < fmin < fmax <= 0.5");
    if (img.width() < 2 || img.height() < 2)
        throw std::invalid_argument("spectral bands: image too small to window");

    const int w = img.width();
    const int h = img.height();
    const double pi = std::numbers::pi;

    double mean = 0.0;
    for (auto p : img.pixels()) mean += p;
    mean /= static_cast<double>(img.pixels().size());

    // Raised-cosine window on the mean-removed image keeps border leakage
    // out of the ROI.
    std::vector<double> windowed(static_cast<std::size_t>(w) * h);
    std::vector<double> wx(static_cast<std::size_t>(w)), wy(static_cast<std::size_t>(h));
    for (int x = 0; x < w; ++x) wx[static_cast<std::size_t>(x)] = 0.5 * (1.0 - std::cos(2.0 * pi * x / (w - 1)));
    for (int y = 0; y < h; ++y) wy[static_cast<std::size_t>(y)] = 0.5 * (1.0 - std::cos(2.0 * pi * y / (h - 1)));
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
            windowed[static_cast<std::size_t>(y) * w + x] =
                (img.at(x, y) - mean) * wx[static_cast<std::size_t>(x)] * wy[static_cast<std::size_t>(y)];

    const Spectrum2D spectrum = power_spectrum_2d(windowed, w, h);

    SpectralResult out;
    out.bands.band_count = band_count;
    out.bands.fmin = roi.fmin;
    out.bands.fmax = roi.fmax;
    out.bands.energy.assign(static_cast<std::size_t>(band_count), 0.0);
    const double band_width = (roi.fmax - roi.fmin) / band_count;

    for (int ky = 0; ky < spectrum.height; ++ky) {
        const double fy = spectrum.freq_y(ky);
        for (int kx = 0; kx < spectrum.width; ++kx) {
            const double f = std::hypot(spectrum.freq_x(kx), fy);
            if (f < roi.fmin || f >= roi.fmax) continue;
            auto t = static_cast<int>((f - roi.fmin) / band_width);
            if (t >= band_count) t = band_count - 1;
            out.bands.energy[static_cast<std::size_t>(t)] +=
                spectrum.power[static_cast<std::size_t>(ky) * spectrum.width + kx];
        }
    }

    double total = 0.0;
    for (double e : out.bands.energy) total += e;
    out.bands.normalized.assign(static_cast<std::size_t>(band_count), 0.0);
    if (total <= 0.0) {
        out.warnings.push_back("no spectral energy in the ROI");
        out.qf = 0.0;
        return out;
    }
    for (int t = 0; t < band_count; ++t)
        out.bands.normalized[static_cast<std::size_t>(t)] = out.bands.energy[static_cast<std::size_t>(t)] / total;

    if (band_count == 1) {
        out.qf = 1.0;  // log(1) = 0 limit, by convention
        return out;
    }
    double entropy = 0.0;
    for (double p : out.bands.normalized)
        if (p > 0.0) entropy -= p * std::log(p);
    out.qf = 1.0 - entropy / std::log(static_cast<double>(band_count));
    if (out.qf < 0.0) out.qf = 0.0;
    if (out.qf > 1.0) out.qf = 1.0;
    return out;
}

}  // namespace fpqual
