#include "fpqual/report.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "fpqual/errors.hpp"
#include "fpqual/format.hpp"

namespace fpqual {

const std::vector<std::string>& canonical_metric_names() {
    static const std::vector<std::string> names = {
        "ocl",      "sl",       "goqs",          "qs",
        "gabor_qi", "variance", "contrast",      "gcs",
        "sinusoid_pass", "continuity", "freq_uniformity", "qf"};
    return names;
}

double QualityReport::score(const std::string& metric_name) const {
    const auto& names = canonical_metric_names();
    const auto it = std::find(names.begin(), names.end(), metric_name);
    if (it == names.end()) throw std::invalid_argument("unknown metric: " + metric_name);
    return scores[static_cast<std::size_t>(it - names.begin())];
}

namespace {

void require_metric_size(const GrayImage& img) {
    if (img.width() < 32 || img.height() < 32)
        throw std::invalid_argument("image too small for metric computation (minimum 32x32)");
}

void take_warnings(std::vector<std::string>& sink, const std::string& metric,
                   const std::vector<std::string>& warnings) {
    for (const auto& w : warnings) sink.push_back(metric + ": " + w);
}

}  // namespace

PipelineArtifacts compute_artifacts(const GrayImage& img, const ToolConfig& config) {
    require_metric_size(img);
    const int block_size = config.effective_block_size(img.dpi());
    PipelineArtifacts a;
    a.grid = BlockGrid::over(img, block_size);
    if (a.grid.count() == 0)
        throw std::invalid_argument("image smaller than a single analysis block");
    a.mask = segment_foreground(img, a.grid, config.variance_threshold);
    a.tensor = structure_tensor_field(img, a.grid);
    a.field = direction_field(a.tensor);
    a.signatures = SignatureSet::compute(img, a.grid, a.field, a.mask, config.signature);
    return a;
}

QualityReport compute_quality_report(const GrayImage& img, const ToolConfig& config,
                                     SpectralResult* spectrum_out) {
    const PipelineArtifacts a = compute_artifacts(img, config);
    const int dpi = img.dpi();

    QualityReport report;
    report.scores.assign(canonical_metric_names().size(), 0.0);
    auto put = [&report](const std::string& name, double value) {
        const auto& names = canonical_metric_names();
        const auto it = std::find(names.begin(), names.end(), name);
        report.scores[static_cast<std::size_t>(it - names.begin())] = std::clamp(value, 0.0, 1.0);
    };

    const MetricOutput ocl = ocl_map(a.tensor, a.mask);
    put("ocl", ocl.global);
    take_warnings(report.warnings, "ocl", ocl.warnings);

    const RidgeGeometry geom = ridge_geometry(a.signatures, a.mask);
    const MetricOutput sl =
        block_classification_sl(ocl, geom, config.effective_sl_thresholds(dpi), a.mask);
    put("sl", sl.global);
    take_warnings(report.warnings, "sl", sl.warnings);

    const MetricOutput loq = loq_map(a.field, a.mask);
    put("goqs", loq.global);
    take_warnings(report.warnings, "goqs", loq.warnings);

    const MetricOutput coherence = coherence_map(a.tensor, a.mask);
    put("qs", coherence.global);
    take_warnings(report.warnings, "qs", coherence.warnings);

    const MetricOutput gabor = gabor_quality(img, a.grid, a.mask, config.effective_gabor(dpi));
    put("gabor_qi", gabor.global);
    take_warnings(report.warnings, "gabor_qi", gabor.warnings);

    const VarianceContrastOutput vc = variance_contrast(img, a.grid, a.mask, a.signatures);
    put("variance", vc.variance.global);
    take_warnings(report.warnings, "variance", vc.variance.warnings);
    put("contrast", vc.contrast.global);
    take_warnings(report.warnings, "contrast", vc.contrast.warnings);

    const MetricOutput clarity = local_clarity(img, a.grid, a.mask, a.signatures, config.clarity_bins);
    put("gcs", clarity.global);
    take_warnings(report.warnings, "gcs", clarity.warnings);

    const MetricOutput sinusoid = sinusoid_spectrum_check(
        a.signatures, a.mask, config.effective_ridge_band(dpi), config.spectrum_peak_ratio);
    put("sinusoid_pass", sinusoid.global);
    take_warnings(report.warnings, "sinusoid_pass", sinusoid.warnings);

    const GlobalScore continuity = direction_continuity(
        a.field, a.mask, config.abrupt_threshold_deg * std::numbers::pi / 180.0);
    put("continuity", continuity.score);
    take_warnings(report.warnings, "continuity", continuity.warnings);

    const GlobalScore uniformity = frequency_uniformity(geom, a.mask);
    put("freq_uniformity", uniformity.score);
    take_warnings(report.warnings, "freq_uniformity", uniformity.warnings);

    SpectralResult spectral = spectral_energy_concentration(
        img, config.spectral_bands, config.effective_ridge_band(dpi));
    put("qf", spectral.qf);
    take_warnings(report.warnings, "qf", spectral.warnings);
    if (spectrum_out) *spectrum_out = std::move(spectral);

    return report;
}

BlockQualityMap compute_metric_map(const GrayImage& img, const ToolConfig& config,
                                   const std::string& metric_name) {
    const PipelineArtifacts a = compute_artifacts(img, config);
    const int dpi = img.dpi();

    if (metric_name == "ocl") return ocl_map(a.tensor, a.mask).map;
    if (metric_name == "qs") return coherence_map(a.tensor, a.mask).map;
    if (metric_name == "goqs") return loq_map(a.field, a.mask).map;
    if (metric_name == "gabor_qi")
        return gabor_quality(img, a.grid, a.mask, config.effective_gabor(dpi)).map;
    if (metric_name == "variance")
        return variance_contrast(img, a.grid, a.mask, a.signatures).variance.map;
    if (metric_name == "contrast")
        return variance_contrast(img, a.grid, a.mask, a.signatures).contrast.map;
    if (metric_name == "gcs")
        return local_clarity(img, a.grid, a.mask, a.signatures, config.clarity_bins).map;
    if (metric_name == "sinusoid_pass")
        return sinusoid_spectrum_check(a.signatures, a.mask, config.effective_ridge_band(dpi),
                                       config.spectrum_peak_ratio)
            .map;
    if (metric_name == "sl") {
        const MetricOutput ocl = ocl_map(a.tensor, a.mask);
        const RidgeGeometry geom = ridge_geometry(a.signatures, a.mask);
        return block_classification_sl(ocl, geom, config.effective_sl_thresholds(dpi), a.mask).map;
    }
    throw ConfigError("no block map for metric '" + metric_name +
                      "' (block maps: ocl, sl, goqs, qs, gabor_qi, variance, contrast, gcs, "
                      "sinusoid_pass)");
}

std::string map_to_csv(const BlockQualityMap& map) {
    std::string out;
    for (int by = 0; by < map.grid.rows; ++by) {
        for (int bx = 0; bx < map.grid.cols; ++bx) {
            if (bx > 0) out += ",";
            const int i = map.grid.index(bx, by);
            if (map.has_value(i)) out += format_number(map.values[static_cast<std::size_t>(i)]);
        }
        out += "\n";
    }
    return out;
}

GrayImage map_to_heatmap(const BlockQualityMap& map) {
    GrayImage img(std::max(map.grid.cols, 1), std::max(map.grid.rows, 1));
    for (int by = 0; by < map.grid.rows; ++by) {
        for (int bx = 0; bx < map.grid.cols; ++bx) {
            const int i = map.grid.index(bx, by);
            const double v = map.has_value(i) ? map.values[static_cast<std::size_t>(i)] : 0.0;
            img.at(bx, by) = static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0, 1.0) * 255.0));
        }
    }
    return img;
}

}  // namespace fpqual
