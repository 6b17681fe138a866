#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "fpqual/image.hpp"
#include "fpqual/orientation.hpp"
#include "fpqual/signature.hpp"

namespace fpqual {

enum class BlockLabel : std::uint8_t { Good, Undetermined, Bad, Blank };

/// Per-block scalar map in [0,1]. Background or excluded blocks carry NaN
/// (no value); labels are present only for metrics that define them.
struct BlockQualityMap {
    BlockGrid grid;
    std::vector<double> values;
    std::vector<BlockLabel> labels;

    static BlockQualityMap no_values(const BlockGrid& grid) {
        return {grid, std::vector<double>(static_cast<std::size_t>(grid.count()),
                                          std::numeric_limits<double>::quiet_NaN()),
                {}};
    }
    bool has_value(int i) const { return !std::isnan(values[static_cast<std::size_t>(i)]); }
};

struct MetricOutput {
    BlockQualityMap map;
    double global = 0.0;
    std::vector<std::string> warnings;
};

struct SignatureParams {
    int window = 32;
    int averaging_width = 5;
};

/// Minimum usable sample count after border trimming; shorter signatures are
/// treated as not extractable.
inline constexpr int kMinSignatureSamples = 8;

/// Ridge signatures for every foreground block with defined orientation,
/// computed once and shared by the signature-based metrics.
class SignatureSet {
public:
    static SignatureSet compute(const GrayImage& img, const BlockGrid& grid,
                                const DirectionField& field, const SegmentationMask& mask,
                                const SignatureParams& params);

    const std::optional<RidgeSignature>& at(int block_index) const {
        return signatures_[static_cast<std::size_t>(block_index)];
    }
    const BlockGrid& grid() const { return grid_; }

private:
    BlockGrid grid_;
    std::vector<std::optional<RidgeSignature>> signatures_;
};

/// Inclusive frequency band in cycles/pixel.
struct FrequencyBand {
    double fmin = 1.0 / 25.0;
    double fmax = 1.0 / 3.0;
    bool contains(double f) const { return f >= fmin && f <= fmax; }
};

// --- orientation-strength measures ---------------------------------------

/// Orientation certainty: 1 - lambda_min/lambda_max of the block gradient
/// covariance (1 = strongly oriented). Global score is the foreground mean.
MetricOutput ocl_map(const TensorField& tensor, const SegmentationMask& mask);

/// Gradient coherence (lambda_max-lambda_min)/(lambda_max+lambda_min);
/// global score Q_S is the foreground mean.
MetricOutput coherence_map(const TensorField& tensor, const SegmentationMask& mask);

/// Local orientation quality: 1 - d/(pi/2) where d is the mean acute angle
/// difference to foreground 8-neighbors. Isolated blocks are excluded.
/// Global score is the GOQS.
MetricOutput loq_map(const DirectionField& field, const SegmentationMask& mask);

// --- ridge-shape measures --------------------------------------------------

/// Per-block ridge frequency (dominant DFT bin of the mean-removed
/// signature), mean ridge thickness, and ridge-to-valley thickness ratio
/// from mean-thresholded signature runs. Blocks whose signature has no
/// interior ridge and valley runs are marked undefined.
struct RidgeGeometry {
    BlockGrid grid;
    std::vector<std::uint8_t> defined;
    std::vector<double> frequency;  // cycles/pixel
    std::vector<double> thickness;  // pixels
    std::vector<double> ratio;

    bool is_defined(int i) const { return defined[static_cast<std::size_t>(i)] != 0; }
};

RidgeGeometry ridge_geometry(const SignatureSet& signatures, const SegmentationMask& mask);

/// Valid ranges for the four block features used by the good/undetermined/
/// bad/blank labeling.
struct SlThresholds {
    double ocl_min = 0.5;
    FrequencyBand frequency;
    double thickness_min = 1.5;
    double thickness_max = 15.0;
    double ratio_min = 0.4;
    double ratio_max = 2.5;
};

/// Labels each block (good iff all four features are in range, bad iff two
/// or more fail, blank when background) and reduces the counts to
/// S_L = (Ngood + 0.5*Nundetermined) / (Ngood + Nundetermined + Nbad).
MetricOutput block_classification_sl(const MetricOutput& ocl, const RidgeGeometry& geom,
                                     const SlThresholds& thresholds,
                                     const SegmentationMask& mask);

// --- Gabor-bank measure ------------------------------------------------------

struct GaborParams {
    int orientations = 8;       // m
    double frequency = 0.1;     // cycles/pixel
    double sigma = 4.0;         // pixels, isotropic envelope
    double threshold = 0.4;     // on the normalized response spread s/(s+1)
};

/// Spread of the m oriented Gabor response magnitudes at the block center,
/// as the coefficient of variation mapped through s/(s+1). A block is good
/// when the spread exceeds the threshold; the QI global score is the good
/// fraction of the foreground.
MetricOutput gabor_quality(const GrayImage& img, const BlockGrid& grid,
                           const SegmentationMask& mask, const GaborParams& params);

// --- intensity measures ---------------------------------------------------

struct VarianceContrastOutput {
    MetricOutput variance;  // block gray variance / 127.5^2, clamped to [0,1]
    MetricOutput contrast;  // signature peak-to-peak / 255
};

VarianceContrastOutput variance_contrast(const GrayImage& img, const BlockGrid& grid,
                                         const SegmentationMask& mask,
                                         const SignatureSet& signatures);

/// Local clarity: ridge/valley regions come from thresholding the signature
/// at its mean; the per-region gray histograms (32 bins) are normalized and
/// their overlap alpha taken. Block quality is 1 - alpha, global score GCS
/// the foreground mean. One-sided blocks are excluded and left valueless.
MetricOutput local_clarity(const GrayImage& img, const BlockGrid& grid,
                           const SegmentationMask& mask, const SignatureSet& signatures,
                           int histogram_bins = 32);

/// Per-block check that the signature spectrum has one dominant peak inside
/// the valid ridge band: value 1 when the peak bin holds at least
/// peak_ratio_threshold of the non-DC energy and its frequency is in band.
/// Global score is the passing fraction of the foreground.
MetricOutput sinusoid_spectrum_check(const SignatureSet& signatures, const SegmentationMask& mask,
                                     const FrequencyBand& band, double peak_ratio_threshold = 0.33);

}  // namespace fpqual
