#include "fpqual/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "fpqual/errors.hpp"
#include "fpqual/format.hpp"

namespace fpqual {

namespace {

double parse_number(const std::string& key, const std::string& value) {
    std::size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(value, &pos);
    } catch (const std::exception&) {
        throw ConfigError("config: bad value for " + key + ": '" + value + "'");
    }
    if (pos != value.size() || !std::isfinite(v))
        throw ConfigError("config: bad value for " + key + ": '" + value + "'");
    return v;
}

int parse_int(const std::string& key, const std::string& value) {
    const double v = parse_number(key, value);
    if (v != std::floor(v)) throw ConfigError("config: " + key + " must be an integer");
    return static_cast<int>(v);
}

}  // namespace

void ToolConfig::validate() const {
    auto fail = [](const std::string& what) { throw ConfigError("config: " + what); };
    if (block_size < 8) fail("block_size must be >= 8 pixels");
    if (dpi < 50 || dpi > 5000) fail("dpi must lie in [50, 5000]");
    if (variance_threshold < 0.0) fail("variance_threshold must be >= 0");
    if (gabor.orientations < 4) fail("gabor_orientations must be >= 4");
    if (!(gabor.frequency > 0.0 && gabor.frequency <= 0.5)) fail("gabor_frequency must lie in (0, 0.5]");
    if (gabor.sigma <= 0.0) fail("gabor_sigma must be positive");
    if (!(gabor.threshold >= 0.0 && gabor.threshold <= 1.0)) fail("gabor_threshold must lie in [0, 1]");
    if (!(ridge_band.fmin > 0.0 && ridge_band.fmin < ridge_band.fmax && ridge_band.fmax <= 0.5))
        fail("ridge band must satisfy 0 < min < max <= 0.5");
    if (!(sl_ocl_min >= 0.0 && sl_ocl_min <= 1.0)) fail("sl_ocl_min must lie in [0, 1]");
    if (!(sl_thickness_min > 0.0 && sl_thickness_min < sl_thickness_max))
        fail("sl thickness range must satisfy 0 < min < max");
    if (!(sl_ratio_min > 0.0 && sl_ratio_min < sl_ratio_max))
        fail("sl ratio range must satisfy 0 < min < max");
    if (spectral_bands < 1) fail("spectral_bands must be >= 1");
    if (!(abrupt_threshold_deg > 0.0 && abrupt_threshold_deg < 90.0))
        fail("abrupt_threshold_deg must lie in (0, 90)");
    if (!(fixed_frr > 0.0 && fixed_frr < 1.0)) fail("fixed_frr must lie in (0, 1)");
    if (!(fixed_far > 0.0 && fixed_far < 1.0)) fail("fixed_far must lie in (0, 1)");
    if (signature.window < 8 || signature.window > 512) fail("signature_window must lie in [8, 512]");
    if (signature.averaging_width < 1 || signature.averaging_width % 2 == 0)
        fail("signature_avg_width must be odd and >= 1");
    if (clarity_bins < 2 || clarity_bins > 256) fail("clarity_bins must lie in [2, 256]");
    if (!(spectrum_peak_ratio > 0.0 && spectrum_peak_ratio <= 1.0))
        fail("spectrum_peak_ratio must lie in (0, 1]");
}

int ToolConfig::effective_block_size(int image_dpi) const {
    if (block_size_overridden) return block_size;
    const int scaled = static_cast<int>(std::lround(block_size * image_dpi / 500.0));
    return std::max(scaled, 8);
}

GaborParams ToolConfig::effective_gabor(int image_dpi) const {
    GaborParams g = gabor;
    g.frequency = gabor.frequency * 500.0 / image_dpi;
    g.sigma = gabor.sigma * image_dpi / 500.0;
    return g;
}

FrequencyBand ToolConfig::effective_ridge_band(int image_dpi) const {
    return FrequencyBand{ridge_band.fmin * 500.0 / image_dpi, ridge_band.fmax * 500.0 / image_dpi};
}

SlThresholds ToolConfig::effective_sl_thresholds(int image_dpi) const {
    SlThresholds t;
    t.ocl_min = sl_ocl_min;
    t.frequency = effective_ridge_band(image_dpi);
    t.thickness_min = sl_thickness_min * image_dpi / 500.0;
    t.thickness_max = sl_thickness_max * image_dpi / 500.0;
    t.ratio_min = sl_ratio_min;
    t.ratio_max = sl_ratio_max;
    return t;
}

void ToolConfig::set(const std::string& key, const std::string& value) {
    if (key == "block_size") {
        block_size = parse_int(key, value);
        block_size_overridden = true;
    } else if (key == "dpi") {
        dpi = parse_int(key, value);
    } else if (key == "variance_threshold") {
        variance_threshold = parse_number(key, value);
    } else if (key == "gabor_orientations") {
        gabor.orientations = parse_int(key, value);
    } else if (key == "gabor_frequency") {
        gabor.frequency = parse_number(key, value);
    } else if (key == "gabor_sigma") {
        gabor.sigma = parse_number(key, value);
    } else if (key == "gabor_threshold") {
        gabor.threshold = parse_number(key, value);
    } else if (key == "ridge_band_min") {
        ridge_band.fmin = parse_number(key, value);
    } else if (key == "ridge_band_max") {
        ridge_band.fmax = parse_number(key, value);
    } else if (key == "sl_ocl_min") {
        sl_ocl_min = parse_number(key, value);
    } else if (key == "sl_thickness_min") {
        sl_thickness_min = parse_number(key, value);
    } else if (key == "sl_thickness_max") {
        sl_thickness_max = parse_number(key, value);
    } else if (key == "sl_ratio_min") {
        sl_ratio_min = parse_number(key, value);
    } else if (key == "sl_ratio_max") {
        sl_ratio_max = parse_number(key, value);
    } else if (key == "spectral_bands") {
        spectral_bands = parse_int(key, value);
    } else if (key == "abrupt_threshold_deg") {
        abrupt_threshold_deg = parse_number(key, value);
    } else if (key == "fixed_frr") {
        fixed_frr = parse_number(key, value);
    } else if (key == "fixed_far") {
        fixed_far = parse_number(key, value);
    } else if (key == "signature_window") {
        signature.window = parse_int(key, value);
    } else if (key == "signature_avg_width") {
        signature.averaging_width = parse_int(key, value);
    } else if (key == "clarity_bins") {
        clarity_bins = parse_int(key, value);
    } else if (key == "spectrum_peak_ratio") {
        spectrum_peak_ratio = parse_number(key, value);
    } else {
        throw ConfigError("config: unknown key '" + key + "'");
    }
}

ToolConfig ToolConfig::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot read " + path.string());
    ToolConfig cfg;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config: " + path.string() + ":" + std::to_string(lineno) +
                              ": expected key=value");
        cfg.set(line.substr(0, eq), line.substr(eq + 1));
    }
    cfg.validate();
    return cfg;
}

std::string ToolConfig::dump() const {
    std::ostringstream out;
    out << "block_size=" << block_size << "\n";
    out << "dpi=" << dpi << "\n";
    out << "variance_threshold=" << format_number(variance_threshold) << "\n";
    out << "gabor_orientations=" << gabor.orientations << "\n";
    out << "gabor_frequency=" << format_number(gabor.frequency) << "\n";
    out << "gabor_sigma=" << format_number(gabor.sigma) << "\n";
    out << "gabor_threshold=" << format_number(gabor.threshold) << "\n";
    out << "ridge_band_min=" << format_number(ridge_band.fmin) << "\n";
    out << "ridge_band_max=" << format_number(ridge_band.fmax) << "\n";
    out << "sl_ocl_min=" << format_number(sl_ocl_min) << "\n";
    out << "sl_thickness_min=" << format_number(sl_thickness_min) << "\n";
    out << "sl_thickness_max=" << format_number(sl_thickness_max) << "\n";
    out << "sl_ratio_min=" << format_number(sl_ratio_min) << "\n";
    out << "sl_ratio_max=" << format_number(sl_ratio_max) << "\n";
    out << "spectral_bands=" << spectral_bands << "\n";
    out << "abrupt_threshold_deg=" << format_number(abrupt_threshold_deg) << "\n";
    out << "fixed_frr=" << format_number(fixed_frr) << "\n";
    out << "fixed_far=" << format_number(fixed_far) << "\n";
    out << "signature_window=" << signature.window << "\n";
    out << "signature_avg_width=" << signature.averaging_width << "\n";
    out << "clarity_bins=" << clarity_bins << "\n";
    out << "spectrum_peak_ratio=" << format_number(spectrum_peak_ratio) << "\n";
    return out.str();
}

}  // namespace fpqual
