#include "fpqual/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>

#include "fpqual/errors.hpp"
#include "fpqual/format.hpp"

namespace fpqual {

int ScoreSet::genuine_count() const {
    int n = 0;
    for (const auto& r : records) n += r.kind == ScoreKind::Genuine;
    return n;
}

int ScoreSet::impostor_count() const {
    int n = 0;
    for (const auto& r : records) n += r.kind == ScoreKind::Impostor;
    return n;
}

double pair_quality(const ScoreRecord& record) {
    return std::sqrt(record.q_enrol * record.q_test);
}

double separation_statistic(double genuine_score, std::span<const double> impostor_scores) {
    if (impostor_scores.size() < 2)
        throw EvalError("separation statistic: need at least 2 impostor scores");
    double mean = 0.0;
    for (double s : impostor_scores) mean += s;
    mean /= static_cast<double>(impostor_scores.size());
    double variance = 0.0;
    for (double s : impostor_scores) variance += (s - mean) * (s - mean);
    variance /= static_cast<double>(impostor_scores.size());  // population
    if (variance <= 0.0)
        throw EvalError("separation statistic: impostor scores have zero spread");
    return (genuine_score - mean) / std::sqrt(variance);
}

double pearson_correlation(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw EvalError("pearson: length mismatch");
    const std::size_t n = x.size();
    if (n < 2) throw EvalError("pearson: need at least 2 samples");

    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);

    double sxx = 0.0, syy = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = x[i] - mx;
        const double dy = y[i] - my;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    if (sxx <= 0.0 || syy <= 0.0) throw EvalError("pearson: zero variance");
    double r = sxy / std::sqrt(sxx * syy);
    return std::clamp(r, -1.0, 1.0);
}

CorrelationMatrix metric_correlation_matrix(const std::vector<std::string>& metric_names,
                                            const std::vector<std::vector<double>>& per_image_scores) {
    const std::size_t m = metric_names.size();
    if (m < 2) throw EvalError("correlation matrix: need at least 2 metrics");
    if (per_image_scores.size() < 2) throw EvalError("correlation matrix: need at least 2 images");
    for (const auto& row : per_image_scores)
        if (row.size() != m) throw EvalError("correlation matrix: ragged score table");

    CorrelationMatrix out;
    out.names = metric_names;
    out.values.assign(m * m, 1.0);

    std::vector<std::vector<double>> columns(m, std::vector<double>(per_image_scores.size()));
    for (std::size_t i = 0; i < per_image_scores.size(); ++i)
        for (std::size_t j = 0; j < m; ++j) columns[j][i] = per_image_scores[i][j];

    for (std::size_t a = 0; a < m; ++a) {
        for (std::size_t b = a + 1; b < m; ++b) {
            double r;
            try {
                r = pearson_correlation(columns[a], columns[b]);
            } catch (const EvalError&) {
                r = std::numeric_limits<double>::quiet_NaN();  // undefined: zero variance
            }
            out.values[a * m + b] = r;
            out.values[b * m + a] = r;
        }
    }
    return out;
}

namespace {

struct SortedScores {
    std::vector<double> genuine;   // ascending
    std::vector<double> impostor;  // ascending

    static SortedScores from(const ScoreSet& scores) {
        SortedScores s;
        for (const auto& r : scores.records)
            (r.kind == ScoreKind::Genuine ? s.genuine : s.impostor).push_back(r.score);
        std::sort(s.genuine.begin(), s.genuine.end());
        std::sort(s.impostor.begin(), s.impostor.end());
        return s;
    }

    // FAR = fraction of impostor scores >= t (acceptance at equality)
    double far_at(double t) const {
        const auto it = std::lower_bound(impostor.begin(), impostor.end(), t);
        return static_cast<double>(impostor.end() - it) / static_cast<double>(impostor.size());
    }
    // FRR = fraction of genuine scores < t
    double frr_at(double t) const {
        const auto it = std::lower_bound(genuine.begin(), genuine.end(), t);
        return static_cast<double>(it - genuine.begin()) / static_cast<double>(genuine.size());
    }

    std::vector<double> distinct_thresholds() const {
        std::vector<double> all;
        all.reserve(genuine.size() + impostor.size());
        all.insert(all.end(), genuine.begin(), genuine.end());
        all.insert(all.end(), impostor.begin(), impostor.end());
        std::sort(all.begin(), all.end());
        all.erase(std::unique(all.begin(), all.end()), all.end());
        return all;
    }
};

void require_both_classes(const SortedScores& s) {
    if (s.genuine.empty() || s.impostor.empty())
        throw EvalError("error rates: need at least one genuine and one impostor score");
}

double eer_of(const SortedScores& s) {
    require_both_classes(s);
    double best_gap = std::numeric_limits<double>::infinity();
    double eer = 0.0;
    for (double t : s.distinct_thresholds()) {
        const double far = s.far_at(t);
        const double frr = s.frr_at(t);
        const double gap = std::fabs(far - frr);
        if (gap < best_gap) {  // strict: ties stay with the lower threshold
            best_gap = gap;
            eer = 0.5 * (far + frr);
        }
    }
    return eer;
}

double operating_point_of(const SortedScores& s, const OperatingPoint& op) {
    require_both_classes(s);
    const auto n_fixed = static_cast<double>(op.fix == OperatingPoint::Fix::Far ? s.impostor.size()
                                                                                : s.genuine.size());
    if (op.rate > 0.0 && op.rate < 1.0 / n_fixed)
        throw EvalError("operating point: rate " + format_number(op.rate) +
                        " unattainable, minimum resolvable rate is " + format_number(1.0 / n_fixed));

    std::vector<double> thresholds = s.distinct_thresholds();
    // A threshold above every score rejects everything: FAR = 0. Needed when
    // no real score satisfies the FAR constraint.
    thresholds.push_back(thresholds.back() + 1.0);

    if (op.fix == OperatingPoint::Fix::Far) {
        for (double t : thresholds)  // ascending: first hit is the lowest threshold
            if (s.far_at(t) <= op.rate) return s.frr_at(t);
    } else {
        for (auto it = thresholds.rbegin(); it != thresholds.rend(); ++it)  // highest threshold
            if (s.frr_at(*it) <= op.rate) return s.far_at(*it);
    }
    throw EvalError("operating point: no threshold satisfies the constraint");
}

}  // namespace

ErrorRates error_rates_at(const ScoreSet& scores, double threshold) {
    const SortedScores s = SortedScores::from(scores);
    require_both_classes(s);
    return ErrorRates{s.far_at(threshold), s.frr_at(threshold)};
}

double compute_eer(const ScoreSet& scores) {
    return eer_of(SortedScores::from(scores));
}

double error_at_operating_point(const ScoreSet& scores, const OperatingPoint& op) {
    return operating_point_of(SortedScores::from(scores), op);
}

RejectionCurve rejection_sweep(const ScoreSet& scores, const std::string& quality_key,
                               std::span<const double> fractions,
                               double fixed_frr, double fixed_far) {
    int column = -1;
    if (!quality_key.empty() && quality_key != "pair") {
        const auto it = std::find(scores.extra_columns.begin(), scores.extra_columns.end(), quality_key);
        if (it == scores.extra_columns.end()) {
            std::string available = "pair";
            for (const auto& c : scores.extra_columns) available += "," + c;
            throw EvalError("rejection sweep: unknown quality column '" + quality_key +
                            "' (available: " + available + ")");
        }
        column = static_cast<int>(it - scores.extra_columns.begin());
    }

    double prev = -1.0;
    for (double f : fractions) {
        if (!(f >= 0.0 && f < 1.0 && f > prev))
            throw EvalError("rejection sweep: fractions must be ascending in [0, 1)");
        prev = f;
    }

    const std::size_t n = scores.records.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    auto quality_of = [&](std::size_t i) {
        return column < 0 ? pair_quality(scores.records[i])
                          : scores.records[i].extra[static_cast<std::size_t>(column)];
    };
    // stable: quality ties keep input order
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return quality_of(a) < quality_of(b); });

    RejectionCurve curve;
    curve.quality_key = quality_key.empty() ? "pair" : quality_key;
    curve.fixed_frr = fixed_frr;
    curve.fixed_far = fixed_far;

    for (double f : fractions) {
        const auto drop = static_cast<std::size_t>(std::floor(f * static_cast<double>(n) + 1e-9));
        ScoreSet kept;
        kept.extra_columns = scores.extra_columns;
        std::vector<std::uint8_t> dropped(n, 0);
        for (std::size_t i = 0; i < drop && i < n; ++i) dropped[order[i]] = 1;
        for (std::size_t i = 0; i < n; ++i)
            if (!dropped[i]) kept.records.push_back(scores.records[i]);

        RejectionPoint point;
        point.fraction = f;
        try {
            const SortedScores s = SortedScores::from(kept);
            point.eer = eer_of(s);
            point.far_at_frr = operating_point_of(s, {OperatingPoint::Fix::Frr, fixed_frr});
            point.frr_at_far = operating_point_of(s, {OperatingPoint::Fix::Far, fixed_far});
            point.attainable = true;
        } catch (const EvalError&) {
            point.attainable = false;
        }
        curve.points.push_back(point);
    }
    return curve;
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.push_back("");
    return fields;
}

double parse_double(const std::string& s, int row) {
    std::size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &pos);
    } catch (const std::exception&) {
        throw FormatError("score CSV row " + std::to_string(row) + ": bad number '" + s + "'");
    }
    if (pos != s.size() || !std::isfinite(v))
        throw FormatError("score CSV row " + std::to_string(row) + ": bad number '" + s + "'");
    return v;
}

}  // namespace

ScoreSet read_score_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw FormatError(path.string() + ": unreadable file");

    std::string line;
    int row = 0;
    // header
    do {
        if (!std::getline(in, line)) throw FormatError(path.string() + ": missing header");
        ++row;
    } while (line.empty() || line[0] == '#');

    const std::vector<std::string> header = split_csv_line(line);
    if (header.size() < 4 || header[0] != "kind" || header[1] != "score" ||
        header[2] != "q_enrol" || header[3] != "q_test")
        throw FormatError(path.string() + ": header must start with kind,score,q_enrol,q_test");

    ScoreSet set;
    set.source_label = path.filename().string();
    bool has_subject = false;
    std::size_t extra_start = 4;
    if (header.size() > 4 && header[4] == "subject") {
        has_subject = true;
        extra_start = 5;
    }
    for (std::size_t c = extra_start; c < header.size(); ++c) set.extra_columns.push_back(header[c]);

    while (std::getline(in, line)) {
        ++row;
        if (line.empty() || line[0] == '#') continue;
        const std::vector<std::string> fields = split_csv_line(line);
        if (fields.size() != header.size())
            throw FormatError("score CSV row " + std::to_string(row) + ": expected " +
                              std::to_string(header.size()) + " fields, got " +
                              std::to_string(fields.size()));
        ScoreRecord rec;
        if (fields[0] == "genuine")
            rec.kind = ScoreKind::Genuine;
        else if (fields[0] == "impostor")
            rec.kind = ScoreKind::Impostor;
        else
            throw FormatError("score CSV row " + std::to_string(row) + ": kind must be genuine or impostor");
        rec.score = parse_double(fields[1], row);
        rec.q_enrol = parse_double(fields[2], row);
        rec.q_test = parse_double(fields[3], row);
        if (!(rec.q_enrol >= 0.0 && rec.q_enrol <= 1.0 && rec.q_test >= 0.0 && rec.q_test <= 1.0))
            throw FormatError("score CSV row " + std::to_string(row) + ": qualities must lie in [0,1]");
        if (has_subject) rec.subject = fields[4];
        for (std::size_t c = extra_start; c < fields.size(); ++c)
            rec.extra.push_back(parse_double(fields[c], row));
        set.records.push_back(std::move(rec));
    }
    return set;
}

void write_score_csv(const ScoreSet& scores, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw FormatError(path.string() + ": cannot open for writing");

    const bool has_subject =
        std::any_of(scores.records.begin(), scores.records.end(),
                    [](const ScoreRecord& r) { return !r.subject.empty(); });

    out << "kind,score,q_enrol,q_test";
    if (has_subject) out << ",subject";
    for (const auto& c : scores.extra_columns) out << "," << c;
    out << "\n";
    for (const auto& r : scores.records) {
        out << (r.kind == ScoreKind::Genuine ? "genuine" : "impostor") << ","
            << format_number(r.score) << "," << format_number(r.q_enrol) << ","
            << format_number(r.q_test);
        if (has_subject) out << "," << r.subject;
        for (double v : r.extra) out << "," << format_number(v);
        out << "\n";
    }
    if (!out) throw FormatError(path.string() + ": write failed");
}

}  // namespace fpqual
