#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace fpqual {

enum class ScoreKind { Genuine, Impostor };

/// One match score with the qualities of the two samples involved.
/// `extra` holds optional per-metric paired-quality columns, aligned with
/// ScoreSet::extra_columns.
struct ScoreRecord {
    ScoreKind kind = ScoreKind::Genuine;
    double score = 0.0;
    double q_enrol = 0.0;
    double q_test = 0.0;
    std::string subject;  // empty when the source carries no subject labels
    std::vector<double> extra;
};

struct ScoreSet {
    std::vector<std::string> extra_columns;
    std::vector<ScoreRecord> records;
    std::string source_label;

    int genuine_count() const;
    int impostor_count() const;
};

/// Quality attached to a match score: sqrt(q_enrol * q_test).
double pair_quality(const ScoreRecord& record);

/// Separation of one genuine score from the subject's impostor distribution:
/// (s - mean) / population stddev. Throws EvalError on fewer than two
/// impostor scores or zero spread.
double separation_statistic(double genuine_score, std::span<const double> impostor_scores);

/// Sample Pearson correlation. Throws EvalError on length < 2, length
/// mismatch, or zero variance in either argument.
double pearson_correlation(std::span<const double> x, std::span<const double> y);

/// Symmetric matrix of pairwise Pearson correlations between metric columns
/// over a corpus of images; diagonal 1. A metric with zero variance across
/// the corpus gets NaN in its row/column (undefined, per contract).
struct CorrelationMatrix {
    std::vector<std::string> names;
    std::vector<double> values;  // names.size() x names.size(), row-major

    double at(std::size_t i, std::size_t j) const { return values[i * names.size() + j]; }
};

CorrelationMatrix metric_correlation_matrix(const std::vector<std::string>& metric_names,
                                            const std::vector<std::vector<double>>& per_image_scores);

/// Error rates at a decision threshold t: FAR = fraction of impostor scores
/// >= t, FRR = fraction of genuine scores < t (acceptance at equality).
struct ErrorRates {
    double far = 0.0;
    double frr = 0.0;
};

ErrorRates error_rates_at(const ScoreSet& scores, double threshold);

/// EER by sweeping thresholds over all distinct scores: midpoint of FAR and
/// FRR at the threshold minimizing |FAR - FRR|, ties toward the lower
/// threshold. Throws EvalError when either class is empty.
double compute_eer(const ScoreSet& scores);

struct OperatingPoint {
    enum class Fix { Far, Frr } fix = Fix::Far;
    double rate = 0.01;
};

/// Best complementary rate subject to the fixed rate staying <= the target:
/// fixing FAR returns the FRR at the lowest such threshold, fixing FRR
/// returns the FAR at the highest. Throws EvalError when the target rate is
/// below the resolution of the fixed class (fewer samples than 1/rate).
double error_at_operating_point(const ScoreSet& scores, const OperatingPoint& op);

struct RejectionPoint {
    double fraction = 0.0;
    bool attainable = false;
    double eer = 0.0;
    double far_at_frr = 0.0;
    double frr_at_far = 0.0;
};

struct RejectionCurve {
    std::string quality_key;
    double fixed_frr = 0.01;
    double fixed_far = 0.01;
    std::vector<RejectionPoint> points;
};

/// Recomputes error rates after discarding the lowest-quality fraction of
/// match scores. quality_key "" (or "pair") uses sqrt(q_enrol*q_test);
/// otherwise it names an extra column. Ties in quality are broken by stable
/// input order. Fractions must be ascending in [0, 1). A fraction whose
/// remainder loses a whole class (or the operating point) is marked
/// unattainable and the sweep continues.
RejectionCurve rejection_sweep(const ScoreSet& scores, const std::string& quality_key,
                               std::span<const double> fractions,
                               double fixed_frr = 0.01, double fixed_far = 0.01);

/// Score CSV: header `kind,score,q_enrol,q_test[,subject][,<metric...>]`,
/// kind in {genuine,impostor}, UTF-8, comma-separated, '.' decimal.
ScoreSet read_score_csv(const std::filesystem::path& path);
void write_score_csv(const ScoreSet& scores, const std::filesystem::path& path);

}  // namespace fpqual
