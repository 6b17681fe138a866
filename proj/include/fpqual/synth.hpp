#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fpqual/evaluation.hpp"
#include "fpqual/image.hpp"
#include "fpqual/orientation.hpp"

namespace fpqual {

/// Sinusoidal grating whose ridge orientation equals `angle`:
/// I(x,y) = 128 + 127*contrast*cos(2*pi/period * (x*cos(a) + y*sin(a))),
/// a = angle + pi/2, quantized to 8 bits. Throws std::invalid_argument when
/// the period leaves [3, min(width,height)/2].
GrayImage generate_grating(int width, int height, double angle, double period,
                           double contrast, int dpi = 500);

struct WhorlFixture {
    GrayImage image;
    DirectionField truth;  // analytic tangent field on the given grid
};

/// Concentric-circle pattern around the image center; ground-truth block
/// angle is the tangent of the circle through the block center.
WhorlFixture generate_whorl(int width, int height, double period, double contrast,
                            int block_size = 16, int dpi = 500);

/// Uniform white noise in [0, 255].
GrayImage generate_noise(int width, int height, std::uint64_t seed, int dpi = 500);

/// Controlled degradation, applied in order: contrast scaling about 128,
/// box blur, additive Gaussian noise (result clamped to [0,255]), block
/// occlusion to mean gray. The identity spec (0, 0, 1, 0) is a bit-identical
/// no-op. Deterministic given the seed.
struct DegradationSpec {
    double noise_sigma = 0.0;       // gray levels
    int blur_radius = 0;            // pixels; kernel is (2r+1)^2
    double contrast_scale = 1.0;    // [0, 1] leaves mean gray fixed
    double occlusion_fraction = 0.0;  // fraction of blocks blanked
};

GrayImage degrade(const GrayImage& img, const DegradationSpec& spec, std::uint64_t seed);

/// Synthetic genuine/impostor score model. Genuine records draw a quality
/// q ~ U[0,1] and a score ~ N(genuine_mean + coupling*(q-0.5), genuine_sd);
/// impostor scores are independent of their quality.
struct SyntheticScoreSpec {
    int n_genuine = 1000;
    int n_impostor = 1000;
    double genuine_mean = 3.0;
    double genuine_sd = 1.0;
    double impostor_mean = 0.0;
    double impostor_sd = 1.0;
    double coupling = 0.0;  // slope of genuine mean vs paired quality
    std::uint64_t seed = 1;
};

ScoreSet generate_score_set(const SyntheticScoreSpec& spec);

/// key=value sidecar lines describing a generated fixture (generator,
/// parameters, seed, RNG algorithm), one per line, deterministic order.
std::string fixture_metadata(const std::string& generator,
                             const std::vector<std::pair<std::string, std::string>>& params);

}  // namespace fpqual
