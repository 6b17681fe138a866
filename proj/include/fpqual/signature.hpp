#pragma once

#include <vector>

#include "fpqual/image.hpp"
#include "fpqual/orientation.hpp"

namespace fpqual {

/// Gray-value profile sampled along the line through the block center normal
/// to the local ridge orientation; each sample averages a short segment
/// parallel to the ridges. For a pure sinusoidal grating the profile is
/// discretely periodic with the grating period.
struct RidgeSignature {
    std::vector<double> samples;
    int window = 0;           // requested length; samples may be fewer at borders
    int averaging_width = 0;
    int start = 0;            // index of samples[0] within the untrimmed window

    // sampling geometry, used to map pixels to signature positions
    double center_x = 0.0;
    double center_y = 0.0;
    double normal_x = 0.0;    // canonical unit normal (sample direction)
    double normal_y = 0.0;
    double ridge_x = 0.0;     // unit ridge direction (averaging direction)
    double ridge_y = 0.0;

    double mean() const;
    double peak_to_peak() const;
};

/// Samples the block's ridge profile with bilinear interpolation. Samples
/// whose averaging segment leaves the image are dropped from both ends
/// symmetrically. Throws std::invalid_argument when the block's orientation
/// certainty is zero (undefined orientation).
RidgeSignature extract_ridge_signature(const GrayImage& img, const BlockGrid& grid,
                                       int bx, int by, const DirectionField& field,
                                       int window, int averaging_width);

}  // namespace fpqual
