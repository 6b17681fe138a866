#pragma once

#include <string>
#include <vector>

#include "fpqual/config.hpp"
#include "fpqual/global_metrics.hpp"
#include "fpqual/image.hpp"
#include "fpqual/local_metrics.hpp"

namespace fpqual {

/// Canonical metric names in report order. CSV consumers rely on these.
const std::vector<std::string>& canonical_metric_names();

/// All global scores for one image, each in [0, 1].
struct QualityReport {
    std::string image_id;
    std::vector<double> scores;  // aligned with canonical_metric_names()
    std::vector<std::string> warnings;

    double score(const std::string& metric_name) const;
};

/// Shared intermediate results; computed once per image and reused by every
/// metric so they all see the same grid, mask and differentiator.
struct PipelineArtifacts {
    BlockGrid grid;
    SegmentationMask mask;
    TensorField tensor;
    DirectionField field;
    SignatureSet signatures;
};

PipelineArtifacts compute_artifacts(const GrayImage& img, const ToolConfig& config);

/// Runs every metric. Throws std::invalid_argument for images below the
/// 32x32 minimum. `spectrum_out`, when given, receives the ring-band
/// decomposition behind the qf score.
QualityReport compute_quality_report(const GrayImage& img, const ToolConfig& config,
                                     SpectralResult* spectrum_out = nullptr);

/// Per-block map for one of the block-level metrics (ocl, sl, goqs, qs,
/// gabor_qi, variance, contrast, gcs, sinusoid_pass). Throws ConfigError for
/// names without a block map.
BlockQualityMap compute_metric_map(const GrayImage& img, const ToolConfig& config,
                                   const std::string& metric_name);

/// Map as CSV (rows x cols of values, background as empty cell).
std::string map_to_csv(const BlockQualityMap& map);

/// Map as a PGM heatmap: value*255 rounded, valueless blocks 0.
GrayImage map_to_heatmap(const BlockQualityMap& map);

}  // namespace fpqual
