#pragma once

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <string>
#include <vector>

#include "fpqual/config.hpp"
#include "fpqual/image.hpp"
#include "fpqual/local_metrics.hpp"
#include "fpqual/orientation.hpp"

namespace fpqual::testutil {

inline constexpr double kDeg = std::numbers::pi / 180.0;

inline double percentile(std::vector<double> values, double p) {
    std::sort(values.begin(), values.end());
    return values[static_cast<std::size_t>(p * (values.size() - 1))];
}

/// Population variance of a pixel rectangle, accumulated the slow way; the
/// independent oracle for every block-variance expectation.
inline double brute_force_variance(const GrayImage& img, int x0, int y0, int w, int h) {
    double mean = 0.0;
    for (int y = y0; y < y0 + h; ++y)
        for (int x = x0; x < x0 + w; ++x) mean += img.at(x, y);
    mean /= static_cast<double>(w) * h;
    double var = 0.0;
    for (int y = y0; y < y0 + h; ++y)
        for (int x = x0; x < x0 + w; ++x) var += (img.at(x, y) - mean) * (img.at(x, y) - mean);
    return var / (static_cast<double>(w) * h);
}

struct Pipeline {
    BlockGrid grid;
    SegmentationMask mask;
    TensorField tensor;
    DirectionField field;
    SignatureSet signatures;
};

inline Pipeline run_pipeline(const GrayImage& img, double variance_threshold = 100.0,
                             int block_size = 16, SignatureParams sig_params = {}) {
    Pipeline p;
    p.grid = BlockGrid::over(img, block_size);
    p.mask = segment_foreground(img, p.grid, variance_threshold);
    p.tensor = structure_tensor_field(img, p.grid);
    p.field = direction_field(p.tensor);
    p.signatures = SignatureSet::compute(img, p.grid, p.field, p.mask, sig_params);
    return p;
}

class TempDir {
public:
    explicit TempDir(const std::string& tag) {
        path_ = std::filesystem::temp_directory_path() / ("fpqual_test_" + tag);
        std::filesystem::remove_all(path_);
        std::filesystem::create_directories(path_);
    }
    ~TempDir() { std::filesystem::remove_all(path_); }
    const std::filesystem::path& path() const { return path_; }

private:
    std::filesystem::path path_;
};

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

}  // namespace fpqual::testutil
