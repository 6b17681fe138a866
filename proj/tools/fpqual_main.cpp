#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "fpqual/config.hpp"
#include "fpqual/errors.hpp"
#include "fpqual/evaluation.hpp"
#include "fpqual/format.hpp"
#include "fpqual/image_io.hpp"
#include "fpqual/report.hpp"
#include "fpqual/synth.hpp"

namespace fs = std::filesystem;
using namespace fpqual;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitPartialFailure = 1;
constexpr int kExitConfigError = 2;

struct CommonOptions {
    std::string config_path;
    int dpi = 0;         // 0 = config default
    int block_size = 0;  // 0 = config default
    std::vector<std::string> metrics;
};

void add_common_options(CLI::App* cmd, CommonOptions& opts) {
    cmd->add_option("--config", opts.config_path, "key=value config file");
    cmd->add_option("--dpi", opts.dpi, "resolution override for loaded images");
    cmd->add_option("--block-size", opts.block_size, "analysis block size in pixels");
    cmd->add_option("--metrics", opts.metrics, "comma-separated metric subset")->delimiter(',');
}

ToolConfig make_config(const CommonOptions& opts) {
    ToolConfig cfg;
    if (!opts.config_path.empty()) cfg = ToolConfig::load(opts.config_path);
    if (opts.dpi > 0) cfg.set("dpi", std::to_string(opts.dpi));
    if (opts.block_size > 0) cfg.set("block_size", std::to_string(opts.block_size));
    cfg.validate();
    return cfg;
}

std::vector<std::string> selected_metrics(const CommonOptions& opts) {
    if (opts.metrics.empty()) return canonical_metric_names();
    const auto& names = canonical_metric_names();
    for (const auto& m : opts.metrics)
        if (std::find(names.begin(), names.end(), m) == names.end())
            throw ConfigError("unknown metric '" + m + "'");
    return opts.metrics;
}

/// File arguments are taken as-is; directory arguments expand to their
/// .pgm/.png entries sorted by name, so runs are order-stable.
std::vector<fs::path> expand_inputs(const std::vector<std::string>& paths) {
    std::vector<fs::path> files;
    for (const auto& p : paths) {
        const fs::path path(p);
        if (fs::is_directory(path)) {
            std::vector<fs::path> entries;
            for (const auto& entry : fs::directory_iterator(path)) {
                const auto ext = entry.path().extension().string();
                if (entry.is_regular_file() && (ext == ".pgm" || ext == ".png"))
                    entries.push_back(entry.path());
            }
            std::sort(entries.begin(), entries.end());
            files.insert(files.end(), entries.begin(), entries.end());
        } else {
            files.push_back(path);
        }
    }
    return files;
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw FormatError(path.string() + ": cannot open for writing");
    out << text;
    if (!out) throw FormatError(path.string() + ": write failed");
}

// ---- score -----------------------------------------------------------------

struct ScoreArgs {
    CommonOptions common;
    std::vector<std::string> inputs;
    std::string out_path;
    std::string spectrum_path;
};

int run_score(const ScoreArgs& args) {
    const ToolConfig cfg = make_config(args.common);
    const std::vector<std::string> metrics = selected_metrics(args.common);
    const std::vector<fs::path> files = expand_inputs(args.inputs);
    if (files.empty()) throw ConfigError("score: no input images");
    if (!args.spectrum_path.empty() && files.size() != 1)
        throw ConfigError("--dump-spectrum needs exactly one input image");

    std::string csv;
    int failures = 0;
    std::vector<QualityReport> reports;
    for (const auto& file : files) {
        try {
            const GrayImage img = load_image(file, cfg.dpi);
            SpectralResult spectrum;
            QualityReport report = compute_quality_report(img, cfg, &spectrum);
            report.image_id = file.string();
            for (const auto& w : report.warnings)
                std::cerr << "warning: " << file.string() << ": " << w << "\n";
            reports.push_back(std::move(report));

            if (!args.spectrum_path.empty()) {
                std::string spec_csv = "ring,center_frequency,p\n";
                for (int t = 0; t < spectrum.bands.band_count; ++t)
                    spec_csv += std::to_string(t) + "," + format_number(spectrum.bands.ring_center(t)) +
                                "," + format_number(spectrum.bands.normalized[static_cast<std::size_t>(t)]) +
                                "\n";
                write_text(args.spectrum_path, spec_csv);
            }
        } catch (const std::exception& e) {
            std::cerr << "error: " << file.string() << ": " << e.what() << "\n";
            ++failures;
        }
    }

    if (files.size() == 1 && args.out_path.empty() && !reports.empty()) {
        // single-image form: one line per metric
        for (const auto& name : metrics)
            std::cout << name << "," << format_number(reports[0].score(name)) << "\n";
    } else {
        csv = "image";
        for (const auto& name : metrics) csv += "," + name;
        csv += "\n";
        for (const auto& report : reports) {
            csv += report.image_id;
            for (const auto& name : metrics) csv += "," + format_number(report.score(name));
            csv += "\n";
        }
        if (args.out_path.empty())
            std::cout << csv;
        else
            write_text(args.out_path, csv);
    }
    return failures == 0 ? kExitOk : kExitPartialFailure;
}

// ---- map -------------------------------------------------------------------

struct MapArgs {
    CommonOptions common;
    std::string metric;
    std::string input;
    std::string out_path;
    std::string heatmap_path;
};

int run_map(const MapArgs& args) {
    const ToolConfig cfg = make_config(args.common);
    const GrayImage img = load_image(args.input, cfg.dpi);
    const BlockQualityMap map = compute_metric_map(img, cfg, args.metric);
    const std::string csv = map_to_csv(map);
    if (args.out_path.empty())
        std::cout << csv;
    else
        write_text(args.out_path, csv);
    if (!args.heatmap_path.empty()) save_pgm(map_to_heatmap(map), args.heatmap_path);
    return kExitOk;
}

// ---- compare ---------------------------------------------------------------

struct CompareArgs {
    CommonOptions common;
    std::vector<std::string> inputs;
    std::string out_path;
};

int run_compare(const CompareArgs& args) {
    const ToolConfig cfg = make_config(args.common);
    const std::vector<std::string> metrics = selected_metrics(args.common);
    const std::vector<fs::path> files = expand_inputs(args.inputs);

    std::vector<std::vector<double>> rows;
    int failures = 0;
    for (const auto& file : files) {
        try {
            const GrayImage img = load_image(file, cfg.dpi);
            const QualityReport report = compute_quality_report(img, cfg);
            std::vector<double> row;
            for (const auto& name : metrics) row.push_back(report.score(name));
            rows.push_back(std::move(row));
        } catch (const std::exception& e) {
            std::cerr << "error: " << file.string() << ": " << e.what() << "\n";
            ++failures;
        }
    }
    if (rows.size() < 2) throw EvalError("compare: need at least 2 scored images");

    const CorrelationMatrix matrix = metric_correlation_matrix(metrics, rows);
    std::string csv = "metric";
    for (const auto& name : matrix.names) csv += "," + name;
    csv += "\n";
    for (std::size_t i = 0; i < matrix.names.size(); ++i) {
        csv += matrix.names[i];
        for (std::size_t j = 0; j < matrix.names.size(); ++j) {
            const double v = matrix.at(i, j);
            csv += ",";
            if (!std::isnan(v)) csv += format_number(v);  // undefined stays empty
        }
        csv += "\n";
    }
    if (args.out_path.empty())
        std::cout << csv;
    else
        write_text(args.out_path, csv);
    return failures == 0 ? kExitOk : kExitPartialFailure;
}

// ---- evaluate ----------------------------------------------------------------

struct EvaluateArgs {
    CommonOptions common;
    std::string scores_path;
    std::string quality_key = "pair";
    std::vector<double> fractions = {0.0, 0.05, 0.10, 0.15, 0.20, 0.25, 0.30};
    std::string out_path;
    std::string separation_path;
};

int run_evaluate(const EvaluateArgs& args) {
    const ToolConfig cfg = make_config(args.common);
    const ScoreSet scores = read_score_csv(args.scores_path);

    const RejectionCurve curve =
        rejection_sweep(scores, args.quality_key, args.fractions, cfg.fixed_frr, cfg.fixed_far);

    std::string csv = "fraction,eer,far_at_frr,frr_at_far\n";
    for (const auto& point : curve.points) {
        csv += format_number(point.fraction);
        if (point.attainable) {
            csv += "," + format_number(point.eer) + "," + format_number(point.far_at_frr) + "," +
                   format_number(point.frr_at_far);
        } else {
            csv += ",,,";  // unattainable point
        }
        csv += "\n";
    }
    if (args.out_path.empty())
        std::cout << csv;
    else
        write_text(args.out_path, csv);

    std::cout << "# records=" << scores.records.size() << " genuine=" << scores.genuine_count()
              << " impostor=" << scores.impostor_count() << " quality=" << curve.quality_key << "\n";
    if (!curve.points.empty() && curve.points.front().attainable) {
        const auto& p0 = curve.points.front();
        std::cout << "# baseline eer=" << format_number(p0.eer)
                  << " far_at_frr=" << format_number(p0.far_at_frr)
                  << " frr_at_far=" << format_number(p0.frr_at_far) << "\n";
    }

    const bool any_subject = std::any_of(scores.records.begin(), scores.records.end(),
                                         [](const ScoreRecord& r) { return !r.subject.empty(); });
    if (!args.separation_path.empty()) {
        if (!any_subject)
            throw ConfigError("evaluate: --separation needs a subject column in the score CSV");
        // per subject: each genuine score against the subject's impostor scores
        std::vector<std::string> subjects;
        for (const auto& r : scores.records)
            if (std::find(subjects.begin(), subjects.end(), r.subject) == subjects.end())
                subjects.push_back(r.subject);
        std::string sep_csv = "subject,genuine_score,separation\n";
        for (const auto& subject : subjects) {
            std::vector<double> impostors;
            for (const auto& r : scores.records)
                if (r.subject == subject && r.kind == ScoreKind::Impostor)
                    impostors.push_back(r.score);
            for (const auto& r : scores.records) {
                if (r.subject != subject || r.kind != ScoreKind::Genuine) continue;
                sep_csv += subject + "," + format_number(r.score) + ",";
                try {
                    sep_csv += format_number(separation_statistic(r.score, impostors));
                } catch (const EvalError& e) {
                    std::cerr << "warning: subject " << subject << ": " << e.what() << "\n";
                }
                sep_csv += "\n";
            }
        }
        write_text(args.separation_path, sep_csv);
    }
    return kExitOk;
}

// ---- synth ------------------------------------------------------------------

struct SynthArgs {
    std::string kind;
    int width = 256;
    int height = 256;
    double angle_deg = 30.0;
    double period = 8.0;
    double contrast = 1.0;
    std::uint64_t seed = 1;
    int dpi = 500;
    DegradationSpec degradation;
    // scoreset parameters
    SyntheticScoreSpec score_spec;
    std::string out_path;
};

int run_synth(const SynthArgs& args) {
    std::vector<std::pair<std::string, std::string>> params;
    auto add = [&params](const std::string& k, const std::string& v) { params.emplace_back(k, v); };

    if (args.kind == "scoreset") {
        const ScoreSet set = generate_score_set(args.score_spec);
        write_score_csv(set, args.out_path);
        add("n_genuine", std::to_string(args.score_spec.n_genuine));
        add("n_impostor", std::to_string(args.score_spec.n_impostor));
        add("genuine_mean", format_number(args.score_spec.genuine_mean));
        add("genuine_sd", format_number(args.score_spec.genuine_sd));
        add("impostor_mean", format_number(args.score_spec.impostor_mean));
        add("impostor_sd", format_number(args.score_spec.impostor_sd));
        add("coupling", format_number(args.score_spec.coupling));
        add("seed", std::to_string(args.score_spec.seed));
        write_text(args.out_path + ".meta", fixture_metadata("scoreset", params));
        return kExitOk;
    }

    GrayImage img;
    if (args.kind == "grating") {
        img = generate_grating(args.width, args.height, args.angle_deg * std::numbers::pi / 180.0,
                               args.period, args.contrast, args.dpi);
        add("width", std::to_string(args.width));
        add("height", std::to_string(args.height));
        add("angle_deg", format_number(args.angle_deg));
        add("period", format_number(args.period));
        add("contrast", format_number(args.contrast));
    } else if (args.kind == "whorl") {
        img = generate_whorl(args.width, args.height, args.period, args.contrast, 16, args.dpi).image;
        add("width", std::to_string(args.width));
        add("height", std::to_string(args.height));
        add("period", format_number(args.period));
        add("contrast", format_number(args.contrast));
    } else if (args.kind == "noise") {
        img = generate_noise(args.width, args.height, args.seed, args.dpi);
        add("width", std::to_string(args.width));
        add("height", std::to_string(args.height));
        add("seed", std::to_string(args.seed));
    } else {
        throw ConfigError("synth: unknown generator '" + args.kind + "'");
    }

    const DegradationSpec identity;
    const bool degraded = args.degradation.noise_sigma != identity.noise_sigma ||
                          args.degradation.blur_radius != identity.blur_radius ||
                          args.degradation.contrast_scale != identity.contrast_scale ||
                          args.degradation.occlusion_fraction != identity.occlusion_fraction;
    if (degraded) {
        img = degrade(img, args.degradation, args.seed);
        add("noise_sigma", format_number(args.degradation.noise_sigma));
        add("blur_radius", std::to_string(args.degradation.blur_radius));
        add("contrast_scale", format_number(args.degradation.contrast_scale));
        add("occlusion_fraction", format_number(args.degradation.occlusion_fraction));
        add("degrade_seed", std::to_string(args.seed));
    }
    add("dpi", std::to_string(args.dpi));

    save_pgm(img, args.out_path);
    write_text(args.out_path + ".meta", fixture_metadata(args.kind, params));
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"fpqual: fingerprint image-quality estimation toolkit"};
    app.require_subcommand(0, 1);

    bool dump_config = false;
    std::string dump_config_file;
    app.add_flag("--dump-config", dump_config, "print the effective configuration and exit");
    app.add_option("--config", dump_config_file, "config file for --dump-config");

    ScoreArgs score_args;
    auto* score = app.add_subcommand("score", "global quality scores per image");
    add_common_options(score, score_args.common);
    score->add_option("images", score_args.inputs, "image files or directories")->required();
    score->add_option("--out", score_args.out_path, "output CSV path (default stdout)");
    score->add_option("--dump-spectrum", score_args.spectrum_path, "ring energy CSV (single image)");

    MapArgs map_args;
    auto* map = app.add_subcommand("map", "per-block quality map for one metric");
    add_common_options(map, map_args.common);
    map->add_option("--metric", map_args.metric, "metric name")->required();
    map->add_option("image", map_args.input, "image file")->required();
    map->add_option("--out", map_args.out_path, "output CSV path (default stdout)");
    map->add_option("--heatmap", map_args.heatmap_path, "also write a PGM heatmap");

    CompareArgs compare_args;
    auto* compare = app.add_subcommand("compare", "pairwise metric correlation over a corpus");
    add_common_options(compare, compare_args.common);
    compare->add_option("images", compare_args.inputs, "image files or directories")->required();
    compare->add_option("--out", compare_args.out_path, "output CSV path (default stdout)");

    EvaluateArgs eval_args;
    auto* evaluate = app.add_subcommand("evaluate", "rejection sweep over a score CSV");
    add_common_options(evaluate, eval_args.common);
    evaluate->add_option("--scores", eval_args.scores_path, "score CSV file")->required();
    evaluate->add_option("--quality-key", eval_args.quality_key,
                         "quality column ('pair' = sqrt(q_enrol*q_test))");
    evaluate->add_option("--fractions", eval_args.fractions, "ascending rejection fractions in [0,1)")
        ->delimiter(',');
    evaluate->add_option("--out", eval_args.out_path, "rejection curve CSV (default stdout)");
    evaluate->add_option("--separation", eval_args.separation_path,
                         "per-subject separation statistic CSV");

    SynthArgs synth_args;
    auto* synth = app.add_subcommand("synth", "synthetic fixtures (grating|whorl|noise|scoreset)");
    synth->add_option("kind", synth_args.kind, "grating|whorl|noise|scoreset")->required();
    synth->add_option("--width", synth_args.width);
    synth->add_option("--height", synth_args.height);
    synth->add_option("--angle-deg", synth_args.angle_deg, "ridge orientation (grating)");
    synth->add_option("--period", synth_args.period, "ridge period in pixels");
    synth->add_option("--contrast", synth_args.contrast);
    synth->add_option("--seed", synth_args.seed);
    synth->add_option("--dpi", synth_args.dpi);
    synth->add_option("--noise-sigma", synth_args.degradation.noise_sigma, "post-degradation");
    synth->add_option("--blur-radius", synth_args.degradation.blur_radius, "post-degradation");
    synth->add_option("--contrast-scale", synth_args.degradation.contrast_scale, "post-degradation");
    synth->add_option("--occlusion", synth_args.degradation.occlusion_fraction, "post-degradation");
    synth->add_option("--n-genuine", synth_args.score_spec.n_genuine, "scoreset");
    synth->add_option("--n-impostor", synth_args.score_spec.n_impostor, "scoreset");
    synth->add_option("--genuine-mean", synth_args.score_spec.genuine_mean, "scoreset");
    synth->add_option("--genuine-sd", synth_args.score_spec.genuine_sd, "scoreset");
    synth->add_option("--impostor-mean", synth_args.score_spec.impostor_mean, "scoreset");
    synth->add_option("--impostor-sd", synth_args.score_spec.impostor_sd, "scoreset");
    synth->add_option("--coupling", synth_args.score_spec.coupling, "scoreset");
    synth->add_option("--out", synth_args.out_path, "output path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfigError;
    }

    try {
        if (dump_config) {
            ToolConfig cfg;
            if (!dump_config_file.empty()) cfg = ToolConfig::load(dump_config_file);
            std::cout << cfg.dump();
            return kExitOk;
        }
        if (score->parsed()) return run_score(score_args);
        if (map->parsed()) return run_map(map_args);
        if (compare->parsed()) return run_compare(compare_args);
        if (evaluate->parsed()) return run_evaluate(eval_args);
        if (synth->parsed()) {
            synth_args.score_spec.seed = synth_args.seed;
            return run_synth(synth_args);
        }
        std::cout << app.help();
        return kExitOk;
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfigError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitPartialFailure;
    }
}
