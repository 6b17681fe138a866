#include "fpqual/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "fpqual/rng.hpp"

namespace fpqual {

namespace {

std::uint8_t quantize(double v) {
    if (v < 0.0) return 0;
    if (v > 255.0) return 255;
    return static_cast<std::uint8_t>(std::lround(v));
}

void check_period(int width, int height, double period) {
    const double limit = std::min(width, height) / 2.0;
    if (!(period >= 3.0 && period <= limit))
        throw std::invalid_argument("period must lie in [3, min(width,height)/2]");
}

}  // namespace

GrayImage generate_grating(int width, int height, double angle, double period,
                           double contrast, int dpi) {
    check_period(width, height, period);
    const double pi = std::numbers::pi;
    const double a = angle + pi / 2.0;
    const double kx = std::cos(a) * 2.0 * pi / period;
    const double ky = std::sin(a) * 2.0 * pi / period;

    GrayImage img(width, height, dpi);
    for (int y = 0; y < height; ++y)
        for (int x = 0; x < width; ++x)
            img.at(x, y) = quantize(128.0 + 127.0 * contrast * std::cos(kx * x + ky * y));
    return img;
}

WhorlFixture generate_whorl(int width, int height, double period, double contrast,
                            int block_size, int dpi) {
    check_period(width, height, period);
    const double pi = std::numbers::pi;
    const double cx = (width - 1) / 2.0;
    const double cy = (height - 1) / 2.0;

    WhorlFixture fix{GrayImage(width, height, dpi), {}};
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            const double r = std::hypot(x - cx, y - cy);
            fix.image.at(x, y) = quantize(128.0 + 127.0 * contrast * std::cos(2.0 * pi * r / period));
        }
    }

    const BlockGrid grid = BlockGrid::over(fix.image, block_size);
    fix.truth.grid = grid;
    fix.truth.angle.assign(static_cast<std::size_t>(grid.count()), 0.0);
    fix.truth.certainty.assign(static_cast<std::size_t>(grid.count()), 1.0);
    for (int by = 0; by < grid.rows; ++by) {
        for (int bx = 0; bx < grid.cols; ++bx) {
            const double dx = grid.center_x(bx) - cx;
            const double dy = grid.center_y(by) - cy;
            const int i = grid.index(bx, by);
            if (dx == 0.0 && dy == 0.0) {
                fix.truth.certainty[static_cast<std::size_t>(i)] = 0.0;
                continue;
            }
            fix.truth.angle[static_cast<std::size_t>(i)] =
                normalize_orientation(std::atan2(dy, dx) + pi / 2.0);
        }
    }
    return fix;
}

GrayImage generate_noise(int width, int height, std::uint64_t seed, int dpi) {
    Rng rng(seed);
    GrayImage img(width, height, dpi);
    for (auto& p : img.pixels()) p = static_cast<std::uint8_t>(rng.below(256));
    return img;
}

GrayImage degrade(const GrayImage& img, const DegradationSpec& spec, std::uint64_t seed) {
    if (spec.contrast_scale < 0.0 || spec.contrast_scale > 1.0 || spec.blur_radius < 0 ||
        spec.noise_sigma < 0.0 || spec.occlusion_fraction < 0.0 || spec.occlusion_fraction > 1.0)
        throw std::invalid_argument("degradation spec out of range");

    const int w = img.width();
    const int h = img.height();
    std::vector<double> buf(static_cast<std::size_t>(w) * h);
    for (std::size_t i = 0; i < buf.size(); ++i) buf[i] = img.pixels()[i];

    if (spec.contrast_scale != 1.0)
        for (auto& v : buf) v = 128.0 + (v - 128.0) * spec.contrast_scale;

    if (spec.blur_radius > 0) {
        const int r = spec.blur_radius;
        const double inv = 1.0 / ((2 * r + 1) * (2 * r + 1));
        std::vector<double> blurred(buf.size());
        auto sample = [&](int x, int y) {
            x = std::clamp(x, 0, w - 1);
            y = std::clamp(y, 0, h - 1);
            return buf[static_cast<std::size_t>(y) * w + x];
        };
        for (int y = 0; y < h; ++y) {
            for (int x = 0; x < w; ++x) {
                double sum = 0.0;
                for (int dy = -r; dy <= r; ++dy)
                    for (int dx = -r; dx <= r; ++dx) sum += sample(x + dx, y + dy);
                blurred[static_cast<std::size_t>(y) * w + x] = sum * inv;
            }
        }
        buf = std::move(blurred);
    }

    Rng rng(seed);
    if (spec.noise_sigma > 0.0)
        for (auto& v : buf) v += rng.normal(0.0, spec.noise_sigma);

    GrayImage out(w, h, img.dpi());
    for (std::size_t i = 0; i < buf.size(); ++i) out.pixels()[i] = quantize(buf[i]);

    if (spec.occlusion_fraction > 0.0) {
        const BlockGrid grid = BlockGrid::over(out, 16);
        const int n = grid.count();
        const int k = static_cast<int>(std::floor(spec.occlusion_fraction * n + 1e-9));
        if (k > 0 && n > 0) {
            double mean = 0.0;
            for (auto p : out.pixels()) mean += p;
            mean /= static_cast<double>(out.pixels().size());
            const std::uint8_t fill = quantize(mean);

            std::vector<int> order(static_cast<std::size_t>(n));
            for (int i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i;
            for (int i = 0; i < k; ++i) {
                const auto j = i + static_cast<int>(rng.below(static_cast<std::uint64_t>(n - i)));
                std::swap(order[static_cast<std::size_t>(i)], order[static_cast<std::size_t>(j)]);
            }
            for (int i = 0; i < k; ++i) {
                const int bx = order[static_cast<std::size_t>(i)] % grid.cols;
                const int by = order[static_cast<std::size_t>(i)] / grid.cols;
                for (int y = grid.origin_y(by); y < grid.origin_y(by) + grid.block_size; ++y)
                    for (int x = grid.origin_x(bx); x < grid.origin_x(bx) + grid.block_size; ++x)
                        out.at(x, y) = fill;
            }
        }
    }
    return out;
}

ScoreSet generate_score_set(const SyntheticScoreSpec& spec) {
    if (spec.n_genuine < 1 || spec.n_impostor < 1)
        throw std::invalid_argument("score set needs at least one record per class");

    Rng rng(spec.seed);
    ScoreSet set;
    set.source_label = "synthetic";
    set.records.reserve(static_cast<std::size_t>(spec.n_genuine) + spec.n_impostor);

    for (int i = 0; i < spec.n_genuine; ++i) {
        ScoreRecord rec;
        rec.kind = ScoreKind::Genuine;
        const double q = rng.next_unit();
        rec.q_enrol = q;
        rec.q_test = q;
        rec.score = rng.normal(spec.genuine_mean + spec.coupling * (q - 0.5), spec.genuine_sd);
        set.records.push_back(rec);
    }
    for (int i = 0; i < spec.n_impostor; ++i) {
        ScoreRecord rec;
        rec.kind = ScoreKind::Impostor;
        const double q = rng.next_unit();
        rec.q_enrol = q;
        rec.q_test = q;
        rec.score = rng.normal(spec.impostor_mean, spec.impostor_sd);
        set.records.push_back(rec);
    }
    return set;
}

std::string fixture_metadata(const std::string& generator,
                             const std::vector<std::pair<std::string, std::string>>& params) {
    std::string out = "generator=" + generator + "\n";
    for (const auto& [key, value] : params) out += key + "=" + value + "\n";
    out += std::string("rng=") + Rng::algorithm_name() + "\n";
    return out;
}

}  // namespace fpqual
