#include "fpqual/local_metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "fpqual/errors.hpp"
#include "fpqual/fft.hpp"

namespace fpqual {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

/// Mean over foreground blocks that carry a value; 0 with a warning when
/// nothing contributes.
double foreground_mean(const BlockQualityMap& map, const SegmentationMask& mask,
                       std::vector<std::string>& warnings) {
    double sum = 0.0;
    int n = 0;
    for (int i = 0; i < map.grid.count(); ++i) {
        if (!mask.foreground(i) || !map.has_value(i)) continue;
        sum += map.values[static_cast<std::size_t>(i)];
        ++n;
    }
    if (n == 0) {
        warnings.push_back("empty foreground");
        return 0.0;
    }
    return sum / n;
}

struct RunStats {
    bool defined = false;
    double mean_ridge = 0.0;
    double mean_valley = 0.0;
};

// Mean lengths of interior below-mean (ridge) and above-mean (valley) runs.
// Runs touching either end of the signature are discarded as incomplete.
RunStats interior_run_means(const std::vector<double>& samples, double threshold) {
    RunStats stats;
    const std::size_t n = samples.size();
    if (n < 3) return stats;

    double ridge_sum = 0.0, valley_sum = 0.0;
    int ridge_n = 0, valley_n = 0;
    std::size_t run_start = 0;
    bool run_ridge = samples[0] < threshold;
    for (std::size_t k = 1; k <= n; ++k) {
        const bool ridge = k < n ? samples[k] < threshold : !run_ridge;
        if (ridge == run_ridge && k < n) continue;
        const bool touches_border = run_start == 0 || k == n;
        if (!touches_border) {
            if (run_ridge) {
                ridge_sum += static_cast<double>(k - run_start);
                ++ridge_n;
            } else {
                valley_sum += static_cast<double>(k - run_start);
                ++valley_n;
            }
        }
        run_start = k;
        run_ridge = ridge;
    }
    if (ridge_n == 0 || valley_n == 0) return stats;
    stats.defined = true;
    stats.mean_ridge = ridge_sum / ridge_n;
    stats.mean_valley = valley_sum / valley_n;
    return stats;
}

/// Power spectrum of the mean-removed signature, zero-padded to the full
/// window so border-trimmed signatures keep the same frequency scale
/// (bin k means k/length cycles/pixel).
struct SignatureSpectrum {
    std::vector<double> power;
    int length = 0;
};

SignatureSpectrum signature_spectrum(const RidgeSignature& sig) {
    SignatureSpectrum out;
    out.length = std::max<int>(sig.window, static_cast<int>(sig.samples.size()));
    std::vector<double> centered(static_cast<std::size_t>(out.length), 0.0);
    const double mean = sig.mean();
    for (std::size_t k = 0; k < sig.samples.size(); ++k) centered[k] = sig.samples[k] - mean;
    out.power = dft_power(centered);
    return out;
}

/// Dominant non-DC bin; 0 when the spectrum is empty (flat signature).
int dominant_bin(const SignatureSpectrum& spectrum) {
    int best = 0;
    double best_power = 0.0;
    for (std::size_t k = 1; k < spectrum.power.size(); ++k) {
        if (spectrum.power[k] > best_power) {
            best_power = spectrum.power[k];
            best = static_cast<int>(k);
        }
    }
    return best_power > 0.0 ? best : 0;
}

}  // namespace

SignatureSet SignatureSet::compute(const GrayImage& img, const BlockGrid& grid,
                                   const DirectionField& field, const SegmentationMask& mask,
                                   const SignatureParams& params) {
    SignatureSet set;
    set.grid_ = grid;
    set.signatures_.resize(static_cast<std::size_t>(grid.count()));
    for (int by = 0; by < grid.rows; ++by) {
        for (int bx = 0; bx < grid.cols; ++bx) {
            const int i = grid.index(bx, by);
            if (!mask.foreground(i) || field.certainty[static_cast<std::size_t>(i)] <= 0.0)
                continue;
            RidgeSignature sig = extract_ridge_signature(img, grid, bx, by, field,
                                                         params.window, params.averaging_width);
            if (static_cast<int>(sig.samples.size()) >= kMinSignatureSamples)
                set.signatures_[static_cast<std::size_t>(i)] = std::move(sig);
        }
    }
    return set;
}

MetricOutput ocl_map(const TensorField& tensor, const SegmentationMask& mask) {
    MetricOutput out;
    out.map = BlockQualityMap::no_values(tensor.grid);
    for (int i = 0; i < tensor.grid.count(); ++i) {
        if (!mask.foreground(i)) continue;
        const TensorEigen e = tensor_eigenvalues(tensor, i);
        const double q = e.lambda_max > 0.0 ? 1.0 - e.lambda_min / e.lambda_max : 0.0;
        out.map.values[static_cast<std::size_t>(i)] = std::clamp(q, 0.0, 1.0);
    }
    out.global = foreground_mean(out.map, mask, out.warnings);
    return out;
}

MetricOutput coherence_map(const TensorField& tensor, const SegmentationMask& mask) {
    MetricOutput out;
    out.map = BlockQualityMap::no_values(tensor.grid);
    for (int i = 0; i < tensor.grid.count(); ++i) {
        if (!mask.foreground(i)) continue;
        const TensorEigen e = tensor_eigenvalues(tensor, i);
        const double trace = e.lambda_max + e.lambda_min;
        const double c = trace > 0.0 ? (e.lambda_max - e.lambda_min) / trace : 0.0;
        out.map.values[static_cast<std::size_t>(i)] = std::clamp(c, 0.0, 1.0);
    }
    out.global = foreground_mean(out.map, mask, out.warnings);
    return out;
}

MetricOutput loq_map(const DirectionField& field, const SegmentationMask& mask) {
    const BlockGrid& grid = field.grid;
    MetricOutput out;
    out.map = BlockQualityMap::no_values(grid);
    const double half_pi = std::numbers::pi / 2.0;

    for (int by = 0; by < grid.rows; ++by) {
        for (int bx = 0; bx < grid.cols; ++bx) {
            const int i = grid.index(bx, by);
            if (!mask.foreground(i)) continue;
            double sum = 0.0;
            int n = 0;
            for (int dy = -1; dy <= 1; ++dy) {
                for (int dx = -1; dx <= 1; ++dx) {
                    if (dx == 0 && dy == 0) continue;
                    const int nx = bx + dx;
                    const int ny = by + dy;
                    if (nx < 0 || nx >= grid.cols || ny < 0 || ny >= grid.rows) continue;
                    const int j = grid.index(nx, ny);
                    if (!mask.foreground(j)) continue;
                    sum += acute_angle_difference(field.angle[static_cast<std::size_t>(i)],
                                                  field.angle[static_cast<std::size_t>(j)]);
                    ++n;
                }
            }
            if (n == 0) continue;  // isolated block: excluded from the GOQS
            const double d = sum / n;
            out.map.values[static_cast<std::size_t>(i)] = std::clamp(1.0 - d / half_pi, 0.0, 1.0);
        }
    }
    out.global = foreground_mean(out.map, mask, out.warnings);
    return out;
}

RidgeGeometry ridge_geometry(const SignatureSet& signatures, const SegmentationMask& mask) {
    const BlockGrid& grid = signatures.grid();
    RidgeGeometry geom;
    geom.grid = grid;
    geom.defined.assign(static_cast<std::size_t>(grid.count()), 0);
    geom.frequency.assign(static_cast<std::size_t>(grid.count()), 0.0);
    geom.thickness.assign(static_cast<std::size_t>(grid.count()), 0.0);
    geom.ratio.assign(static_cast<std::size_t>(grid.count()), 0.0);

    for (int i = 0; i < grid.count(); ++i) {
        if (!mask.foreground(i)) continue;
        const auto& sig = signatures.at(i);
        if (!sig) continue;

        const SignatureSpectrum spectrum = signature_spectrum(*sig);
        const int bin = dominant_bin(spectrum);
        if (bin == 0) continue;

        const RunStats runs = interior_run_means(sig->samples, sig->mean());
        if (!runs.defined || runs.mean_valley <= 0.0) continue;

        const auto idx = static_cast<std::size_t>(i);
        geom.defined[idx] = 1;
        geom.frequency[idx] = static_cast<double>(bin) / static_cast<double>(spectrum.length);
        geom.thickness[idx] = runs.mean_ridge;
        geom.ratio[idx] = runs.mean_ridge / runs.mean_valley;
    }
    return geom;
}

MetricOutput block_classification_sl(const MetricOutput& ocl, const RidgeGeometry& geom,
                                     const SlThresholds& thresholds,
                                     const SegmentationMask& mask) {
    const BlockGrid& grid = geom.grid;
    MetricOutput out;
    out.map = BlockQualityMap::no_values(grid);
    out.map.labels.assign(static_cast<std::size_t>(grid.count()), BlockLabel::Blank);

    int n_good = 0, n_undetermined = 0, n_bad = 0;
    for (int i = 0; i < grid.count(); ++i) {
        if (!mask.foreground(i)) continue;
        const auto idx = static_cast<std::size_t>(i);

        int failures = 0;
        if (!(ocl.map.has_value(i) && ocl.map.values[idx] >= thresholds.ocl_min)) ++failures;
        if (geom.is_defined(i)) {
            if (!thresholds.frequency.contains(geom.frequency[idx])) ++failures;
            if (!(geom.thickness[idx] >= thresholds.thickness_min &&
                  geom.thickness[idx] <= thresholds.thickness_max))
                ++failures;
            if (!(geom.ratio[idx] >= thresholds.ratio_min && geom.ratio[idx] <= thresholds.ratio_max))
                ++failures;
        } else {
            failures += 3;  // unmeasurable ridge structure fails every geometry feature
        }

        BlockLabel label;
        double value;
        if (failures == 0) {
            label = BlockLabel::Good;
            value = 1.0;
            ++n_good;
        } else if (failures == 1) {
            label = BlockLabel::Undetermined;
            value = 0.5;
            ++n_undetermined;
        } else {
            label = BlockLabel::Bad;
            value = 0.0;
            ++n_bad;
        }
        out.map.labels[idx] = label;
        out.map.values[idx] = value;
    }

    const int denom = n_good + n_undetermined + n_bad;
    if (denom == 0) {
        out.warnings.push_back("empty foreground");
        out.global = 0.0;
    } else {
        out.global = (n_good + 0.5 * n_undetermined) / denom;
    }
    return out;
}

MetricOutput gabor_quality(const GrayImage& img, const BlockGrid& grid,
                           const SegmentationMask& mask, const GaborParams& params) {
    if (params.sigma <= 0.0) throw ConfigError("gabor: sigma must be positive");
    if (params.orientations < 4) throw ConfigError("gabor: need at least 4 orientations");
    if (params.frequency <= 0.0) throw ConfigError("gabor: frequency must be positive");

    const double pi = std::numbers::pi;
    const int radius = static_cast<int>(std::ceil(3.0 * params.sigma));
    const double inv_two_sigma_sq = 1.0 / (2.0 * params.sigma * params.sigma);

    // Precompute the m kernels; the carrier runs normal to the orientation
    // each filter detects.
    const int m = params.orientations;
    const int side = 2 * radius + 1;
    std::vector<std::vector<std::complex<double>>> kernels(static_cast<std::size_t>(m));
    for (int k = 0; k < m; ++k) {
        const double ridge_angle = pi * k / m;
        const double carrier = ridge_angle + pi / 2.0;
        const double fx = std::cos(carrier) * 2.0 * pi * params.frequency;
        const double fy = std::sin(carrier) * 2.0 * pi * params.frequency;
        auto& kernel = kernels[static_cast<std::size_t>(k)];
        kernel.resize(static_cast<std::size_t>(side) * side);
        for (int dy = -radius; dy <= radius; ++dy) {
            for (int dx = -radius; dx <= radius; ++dx) {
                const double envelope = std::exp(-(dx * dx + dy * dy) * inv_two_sigma_sq);
                const double phase = fx * dx + fy * dy;
                kernel[static_cast<std::size_t>(dy + radius) * side + (dx + radius)] =
                    envelope * std::complex<double>(std::cos(phase), -std::sin(phase));
            }
        }
    }

    MetricOutput out;
    out.map = BlockQualityMap::no_values(grid);
    int n_good = 0, n_foreground = 0;
    std::vector<double> magnitudes(static_cast<std::size_t>(m));

    for (int by = 0; by < grid.rows; ++by) {
        for (int bx = 0; bx < grid.cols; ++bx) {
            const int i = grid.index(bx, by);
            if (!mask.foreground(i)) continue;
            ++n_foreground;

            const int cx = static_cast<int>(std::lround(grid.center_x(bx)));
            const int cy = static_cast<int>(std::lround(grid.center_y(by)));
            for (int k = 0; k < m; ++k) {
                std::complex<double> response(0.0, 0.0);
                const auto& kernel = kernels[static_cast<std::size_t>(k)];
                for (int dy = -radius; dy <= radius; ++dy)
                    for (int dx = -radius; dx <= radius; ++dx)
                        response += kernel[static_cast<std::size_t>(dy + radius) * side + (dx + radius)] *
                                    static_cast<double>(img.at_clamped(cx + dx, cy + dy));
                magnitudes[static_cast<std::size_t>(k)] = std::abs(response);
            }

            double mean = 0.0;
            for (double v : magnitudes) mean += v;
            mean /= m;
            double value = 0.0;
            if (mean > 0.0) {
                double var = 0.0;
                for (double v : magnitudes) var += (v - mean) * (v - mean);
                const double cov = std::sqrt(var / m) / mean;
                value = cov / (cov + 1.0);
            }
            out.map.values[static_cast<std::size_t>(i)] = value;
            if (value > params.threshold) ++n_good;
        }
    }

    if (n_foreground == 0) {
        out.warnings.push_back("empty foreground");
        out.global = 0.0;
    } else {
        out.global = static_cast<double>(n_good) / n_foreground;
    }
    return out;
}

VarianceContrastOutput variance_contrast(const GrayImage& img, const BlockGrid& grid,
                                         const SegmentationMask& mask,
                                         const SignatureSet& signatures) {
    constexpr double kMaxVariance = 127.5 * 127.5;
    VarianceContrastOutput out;
    out.variance.map = BlockQualityMap::no_values(grid);
    out.contrast.map = BlockQualityMap::no_values(grid);

    for (int by = 0; by < grid.rows; ++by) {
        for (int bx = 0; bx < grid.cols; ++bx) {
            const int i = grid.index(bx, by);
            if (!mask.foreground(i)) continue;
            const auto idx = static_cast<std::size_t>(i);
            out.variance.map.values[idx] =
                std::min(block_stats(img, grid, bx, by).variance / kMaxVariance, 1.0);
            if (const auto& sig = signatures.at(i))
                out.contrast.map.values[idx] = std::min(sig->peak_to_peak() / 255.0, 1.0);
        }
    }
    out.variance.global = foreground_mean(out.variance.map, mask, out.variance.warnings);
    out.contrast.global = foreground_mean(out.contrast.map, mask, out.contrast.warnings);
    return out;
}

MetricOutput local_clarity(const GrayImage& img, const BlockGrid& grid,
                           const SegmentationMask& mask, const SignatureSet& signatures,
                           int histogram_bins) {
    MetricOutput out;
    out.map = BlockQualityMap::no_values(grid);
    const int bins = histogram_bins;
    std::vector<double> ridge_hist(static_cast<std::size_t>(bins));
    std::vector<double> valley_hist(static_cast<std::size_t>(bins));

    for (int by = 0; by < grid.rows; ++by) {
        for (int bx = 0; bx < grid.cols; ++bx) {
            const int i = grid.index(bx, by);
            if (!mask.foreground(i)) continue;
            const auto& sig = signatures.at(i);
            if (!sig) continue;

            const double threshold = sig->mean();
            const int n_samples = static_cast<int>(sig->samples.size());

            // Ridge/valley region of a pixel comes from the signature sample
            // its normal projection lands on, not from the pixel's own value.
            bool any_ridge = false, any_valley = false;
            for (int k = 0; k < n_samples; ++k)
                (sig->samples[static_cast<std::size_t>(k)] < threshold ? any_ridge : any_valley) = true;
            if (!any_ridge || !any_valley) continue;  // one-sided segmentation: excluded

            std::fill(ridge_hist.begin(), ridge_hist.end(), 0.0);
            std::fill(valley_hist.begin(), valley_hist.end(), 0.0);

            const double mid = (sig->window - 1) / 2.0;
            const double half_span = (n_samples - 1) / 2.0 + 0.5;
            const double half_width = sig->averaging_width / 2.0;
            const double reach = std::hypot(half_span, half_width);
            const int px0 = std::max(0, static_cast<int>(std::floor(sig->center_x - reach)));
            const int px1 = std::min(img.width() - 1, static_cast<int>(std::ceil(sig->center_x + reach)));
            const int py0 = std::max(0, static_cast<int>(std::floor(sig->center_y - reach)));
            const int py1 = std::min(img.height() - 1, static_cast<int>(std::ceil(sig->center_y + reach)));

            for (int py = py0; py <= py1; ++py) {
                for (int px = px0; px <= px1; ++px) {
                    const double dx = px - sig->center_x;
                    const double dy = py - sig->center_y;
                    const double along = dx * sig->ridge_x + dy * sig->ridge_y;
                    if (std::fabs(along) > half_width) continue;
                    const double t = dx * sig->normal_x + dy * sig->normal_y;
                    const int k = static_cast<int>(std::lround(t + mid)) - sig->start;
                    if (k < 0 || k >= n_samples) continue;
                    const int bin = std::min(bins - 1, img.at(px, py) * bins / 256);
                    if (sig->samples[static_cast<std::size_t>(k)] < threshold)
                        ridge_hist[static_cast<std::size_t>(bin)] += 1.0;
                    else
                        valley_hist[static_cast<std::size_t>(bin)] += 1.0;
                }
            }

            double ridge_total = 0.0, valley_total = 0.0;
            for (int b = 0; b < bins; ++b) {
                ridge_total += ridge_hist[static_cast<std::size_t>(b)];
                valley_total += valley_hist[static_cast<std::size_t>(b)];
            }
            if (ridge_total == 0.0 || valley_total == 0.0) continue;

            double alpha = 0.0;
            for (int b = 0; b < bins; ++b)
                alpha += std::min(ridge_hist[static_cast<std::size_t>(b)] / ridge_total,
                                  valley_hist[static_cast<std::size_t>(b)] / valley_total);
            out.map.values[static_cast<std::size_t>(i)] = std::clamp(1.0 - alpha, 0.0, 1.0);
        }
    }
    out.global = foreground_mean(out.map, mask, out.warnings);
    return out;
}

MetricOutput sinusoid_spectrum_check(const SignatureSet& signatures, const SegmentationMask& mask,
                                     const FrequencyBand& band, double peak_ratio_threshold) {
    const BlockGrid& grid = signatures.grid();
    MetricOutput out;
    out.map = BlockQualityMap::no_values(grid);

    int n_pass = 0, n_foreground = 0;
    for (int i = 0; i < grid.count(); ++i) {
        if (!mask.foreground(i)) continue;
        ++n_foreground;
        const auto& sig = signatures.at(i);
        if (!sig) {
            out.map.values[static_cast<std::size_t>(i)] = 0.0;  // no extractable sinusoid
            continue;
        }

        const SignatureSpectrum spectrum = signature_spectrum(*sig);
        double total = 0.0, peak = 0.0;
        int peak_bin = 0;
        for (std::size_t k = 1; k < spectrum.power.size(); ++k) {
            total += spectrum.power[k];
            if (spectrum.power[k] > peak) {
                peak = spectrum.power[k];
                peak_bin = static_cast<int>(k);
            }
        }
        const double freq = static_cast<double>(peak_bin) / static_cast<double>(spectrum.length);
        const bool pass = total > 0.0 && peak >= peak_ratio_threshold * total && band.contains(freq);
        out.map.values[static_cast<std::size_t>(i)] = pass ? 1.0 : 0.0;
        if (pass) ++n_pass;
    }

    if (n_foreground == 0) {
        out.warnings.push_back("empty foreground");
        out.global = 0.0;
    } else {
        out.global = static_cast<double>(n_pass) / n_foreground;
    }
    return out;
}

}  // namespace fpqual
