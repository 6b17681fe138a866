#pragma once

#include <cassert>
#include <cstdint>
#include <span>
#include <vector>

namespace fpqual {

/// 8-bit single-channel raster. 0 is black (ridge ink), 255 is white
/// background. Immutable for consumers of the analysis pipeline; mutation
/// is only used while constructing an image.
class GrayImage {
public:
    GrayImage() = default;

    GrayImage(int width, int height, int dpi = 500)
        : width_(width), height_(height), dpi_(dpi),
          pixels_(static_cast<std::size_t>(width) * height, 0) {
        assert(width > 0 && height > 0 && dpi > 0);
    }

    GrayImage(int width, int height, std::vector<std::uint8_t> pixels, int dpi = 500)
        : width_(width), height_(height), dpi_(dpi), pixels_(std::move(pixels)) {
        assert(pixels_.size() == static_cast<std::size_t>(width_) * height_);
    }

    int width() const { return width_; }
    int height() const { return height_; }
    int dpi() const { return dpi_; }
    void set_dpi(int dpi) { dpi_ = dpi; }

    std::uint8_t at(int x, int y) const {
        assert(x >= 0 && x < width_ && y >= 0 && y < height_);
        return pixels_[static_cast<std::size_t>(y) * width_ + x];
    }
    std::uint8_t& at(int x, int y) {
        assert(x >= 0 && x < width_ && y >= 0 && y < height_);
        return pixels_[static_cast<std::size_t>(y) * width_ + x];
    }

    /// Edge-replicated access; any (x, y) is valid.
    std::uint8_t at_clamped(int x, int y) const {
        if (x < 0) x = 0;
        if (x >= width_) x = width_ - 1;
        if (y < 0) y = 0;
        if (y >= height_) y = height_ - 1;
        return pixels_[static_cast<std::size_t>(y) * width_ + x];
    }

    std::span<const std::uint8_t> pixels() const { return pixels_; }
    std::span<std::uint8_t> pixels() { return pixels_; }

    bool operator==(const GrayImage&) const = default;

private:
    int width_ = 0;
    int height_ = 0;
    int dpi_ = 500;
    std::vector<std::uint8_t> pixels_;
};

/// Non-overlapping square blocks anchored at the top-left corner.
/// Trailing partial blocks are discarded, so every metric over the same
/// (image, block_size) addresses identical block indices.
struct BlockGrid {
    int block_size = 16;
    int cols = 0;
    int rows = 0;

    static BlockGrid over(const GrayImage& img, int block_size) {
        assert(block_size >= 1);
        return BlockGrid{block_size, img.width() / block_size, img.height() / block_size};
    }

    int count() const { return cols * rows; }
    int index(int bx, int by) const {
        assert(bx >= 0 && bx < cols && by >= 0 && by < rows);
        return by * cols + bx;
    }
    int origin_x(int bx) const { return bx * block_size; }
    int origin_y(int by) const { return by * block_size; }
    double center_x(int bx) const { return origin_x(bx) + (block_size - 1) / 2.0; }
    double center_y(int by) const { return origin_y(by) + (block_size - 1) / 2.0; }

    bool operator==(const BlockGrid&) const = default;
};

struct BlockStats {
    double mean = 0.0;
    double variance = 0.0;  // population variance over the block's pixels
};

BlockStats block_stats(const GrayImage& img, const BlockGrid& grid, int bx, int by);

/// Per-block foreground flags. Background blocks are excluded from every
/// quality average.
class SegmentationMask {
public:
    SegmentationMask() = default;
    explicit SegmentationMask(const BlockGrid& grid, bool initial = false)
        : grid_(grid), fg_(static_cast<std::size_t>(grid.count()), initial ? 1 : 0) {}

    const BlockGrid& grid() const { return grid_; }
    bool foreground(int index) const { return fg_[static_cast<std::size_t>(index)] != 0; }
    bool foreground(int bx, int by) const { return foreground(grid_.index(bx, by)); }
    void set_foreground(int index, bool value) { fg_[static_cast<std::size_t>(index)] = value ? 1 : 0; }

    int foreground_count() const;

    bool operator==(const SegmentationMask&) const = default;

private:
    BlockGrid grid_;
    std::vector<std::uint8_t> fg_;
};

/// A block is foreground iff its gray-level variance exceeds the threshold.
/// Degenerate (constant) images yield an all-background mask.
SegmentationMask segment_foreground(const GrayImage& img, const BlockGrid& grid,
                                    double variance_threshold);

}  // namespace fpqual
