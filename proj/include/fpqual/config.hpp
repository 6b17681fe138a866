#pragma once

#include <filesystem>
#include <string>

#include "fpqual/local_metrics.hpp"

namespace fpqual {

/// Flat, file-round-trippable tool configuration. Spatial parameters are
/// stated at the 500 dpi reference resolution and scaled to the image's
/// actual dpi at use (block size with dpi, frequencies against it).
struct ToolConfig {
    int block_size = 16;  // pixels at 500 dpi
    bool block_size_overridden = false;
    int dpi = 500;  // assumed resolution of images that carry none

    double variance_threshold = 100.0;  // intensity^2, foreground segmentation

    GaborParams gabor;        // frequency/sigma at 500 dpi
    FrequencyBand ridge_band;  // valid ridge frequencies at 500 dpi

    double sl_ocl_min = 0.5;
    double sl_thickness_min = 1.5;  // pixels at 500 dpi
    double sl_thickness_max = 15.0;
    double sl_ratio_min = 0.4;
    double sl_ratio_max = 2.5;

    int spectral_bands = 15;           // T ring bands
    double abrupt_threshold_deg = 15.0;

    double fixed_frr = 0.01;  // operating point for FAR reporting
    double fixed_far = 0.01;  // operating point for FRR reporting

    SignatureParams signature;  // window/averaging width at 500 dpi
    int clarity_bins = 32;
    double spectrum_peak_ratio = 0.33;

    /// Throws ConfigError on any field outside its documented range.
    void validate() const;

    /// round(block_size * dpi/500), clamped to >= 8; an explicit override is
    /// used as-is.
    int effective_block_size(int image_dpi) const;
    GaborParams effective_gabor(int image_dpi) const;
    FrequencyBand effective_ridge_band(int image_dpi) const;
    SlThresholds effective_sl_thresholds(int image_dpi) const;

    /// key=value text form; parses/dumps every field so that dump + load
    /// reproduces identical behavior.
    static ToolConfig load(const std::filesystem::path& path);
    std::string dump() const;
    void set(const std::string& key, const std::string& value);
};

}  // namespace fpqual
