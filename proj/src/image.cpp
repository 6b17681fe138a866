#include "fpqual/image.hpp"

namespace fpqual {

BlockStats block_stats(const GrayImage& img, const BlockGrid& grid, int bx, int by) {
    const int x0 = grid.origin_x(bx);
    const int y0 = grid.origin_y(by);
    const int n = grid.block_size * grid.block_size;

    double sum = 0.0;
    double sum_sq = 0.0;
    for (int y = y0; y < y0 + grid.block_size; ++y) {
        for (int x = x0; x < x0 + grid.block_size; ++x) {
            const double v = img.at(x, y);
            sum += v;
            sum_sq += v * v;
        }
    }
    const double mean = sum / n;
    double variance = sum_sq / n - mean * mean;
    if (variance < 0.0) variance = 0.0;  // rounding guard
    return BlockStats{mean, variance};
}

int SegmentationMask::foreground_count() const {
    int n = 0;
    for (auto f : fg_) n += f;
    return n;
}

SegmentationMask segment_foreground(const GrayImage& img, const BlockGrid& grid,
                                    double variance_threshold) {
    SegmentationMask mask(grid);
    for (int by = 0; by < grid.rows; ++by) {
        for (int bx = 0; bx < grid.cols; ++bx) {
            const auto stats = block_stats(img, grid, bx, by);
            mask.set_foreground(grid.index(bx, by), stats.variance > variance_threshold);
        }
    }
    return mask;
}

}  // namespace fpqual
