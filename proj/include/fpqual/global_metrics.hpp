#pragma once

#include <string>
#include <vector>

#include "fpqual/image.hpp"
#include "fpqual/local_metrics.hpp"
#include "fpqual/orientation.hpp"

namespace fpqual {

struct GlobalScore {
    double score = 0.0;
    std::vector<std::string> warnings;
};

/// Fraction of 4-adjacent foreground block pairs whose acute angular
/// difference stays within the abrupt-change threshold:
/// score = 1 - abrupt_pairs / total_pairs.
GlobalScore direction_continuity(const DirectionField& field, const SegmentationMask& mask,
                                 double abrupt_threshold_radians);

/// 1/(1 + s/s0) where s is the standard deviation of the ridge-to-valley
/// thickness ratio over blocks with defined geometry (s0 = 0.5). Needs at
/// least 8 defined blocks.
GlobalScore frequency_uniformity(const RidgeGeometry& geom, const SegmentationMask& mask);

/// Ring-band energies of the global power spectrum over the annular ROI.
struct SpectralBands {
    int band_count = 0;
    double fmin = 0.0;
    double fmax = 0.0;
    std::vector<double> energy;      // raw per-ring power
    std::vector<double> normalized;  // p_t, sums to 1 when ROI energy > 0

    double ring_center(int t) const {
        return fmin + (t + 0.5) * (fmax - fmin) / band_count;
    }
};

struct SpectralResult {
    double qf = 0.0;
    SpectralBands bands;
    std::vector<std::string> warnings;
};

/// Energy concentration of the windowed 2-D power spectrum over T
/// equal-width rings spanning [fmin, fmax] cycles/pixel:
/// Q_F = 1 - H(p)/log(T). T = 1 degenerates to 1 whenever the ROI holds
/// any energy.
SpectralResult spectral_energy_concentration(const GrayImage& img, int band_count,
                                             const FrequencyBand& roi);

}  // namespace fpqual
