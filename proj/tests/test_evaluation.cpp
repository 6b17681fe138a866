#include <doctest.h>

#include <cmath>

#include "fpqual/errors.hpp"
#include "fpqual/evaluation.hpp"
#include "fpqual/rng.hpp"
#include "fpqual/synth.hpp"
#include "test_helpers.hpp"

using namespace fpqual;
using namespace fpqual::testutil;

namespace {

ScoreSet make_set(const std::vector<double>& genuine, const std::vector<double>& impostor) {
    ScoreSet set;
    for (double s : genuine) set.records.push_back({ScoreKind::Genuine, s, 1.0, 1.0, "", {}});
    for (double s : impostor) set.records.push_back({ScoreKind::Impostor, s, 1.0, 1.0, "", {}});
    return set;
}

// Independent oracle: every rate recounted naively at every candidate
// threshold. Deliberately O(n^2); checks the sorted implementation.
struct BruteForce {
    std::vector<double> genuine;
    std::vector<double> impostor;

    explicit BruteForce(const ScoreSet& set) {
        for (const auto& r : set.records)
            (r.kind == ScoreKind::Genuine ? genuine : impostor).push_back(r.score);
    }

    double far_at(double t) const {
        int n = 0;
        for (double s : impostor) n += s >= t;
        return static_cast<double>(n) / impostor.size();
    }
    double frr_at(double t) const {
        int n = 0;
        for (double s : genuine) n += s < t;
        return static_cast<double>(n) / genuine.size();
    }
    std::vector<double> thresholds() const {
        std::vector<double> all = genuine;
        all.insert(all.end(), impostor.begin(), impostor.end());
        std::sort(all.begin(), all.end());
        all.erase(std::unique(all.begin(), all.end()), all.end());
        return all;
    }

    double eer() const {
        double best_gap = 1e300, eer = 0.0;
        for (double t : thresholds()) {
            const double gap = std::fabs(far_at(t) - frr_at(t));
            if (gap < best_gap) {
                best_gap = gap;
                eer = 0.5 * (far_at(t) + frr_at(t));
            }
        }
        return eer;
    }

    double frr_at_fixed_far(double alpha) const {
        auto all = thresholds();
        all.push_back(all.back() + 1.0);
        for (double t : all)
            if (far_at(t) <= alpha) return frr_at(t);
        return 1.0;
    }
    double far_at_fixed_frr(double alpha) const {
        auto all = thresholds();
        double best = 1.0;
        bool found = false;
        for (double t : all)
            if (frr_at(t) <= alpha) {
                best = far_at(t);  // ascending scan: the last hit is the highest threshold
                found = true;
            }
        REQUIRE(found);
        return best;
    }
};

}  // namespace

TEST_CASE("pair_quality is the geometric mean of the two qualities") {
    CHECK(pair_quality({ScoreKind::Genuine, 0.0, 1.0, 1.0, "", {}}) == 1.0);
    CHECK(pair_quality({ScoreKind::Genuine, 0.0, 0.0, 0.73, "", {}}) == 0.0);
    CHECK(pair_quality({ScoreKind::Genuine, 0.0, 0.25, 0.81, "", {}}) ==
          doctest::Approx(0.45).epsilon(1e-12));
}

TEST_CASE("separation statistic: fixed fixtures") {
    const std::vector<double> impostors{1.0, 2.0, 3.0};
    // (10 - 2) / sqrt(2/3) = 9.797958971...
    CHECK(separation_statistic(10.0, impostors) == doctest::Approx(9.797958971).epsilon(1e-6));
    CHECK(separation_statistic(2.0, impostors) == 0.0);

    const std::vector<double> equal{4.0, 4.0, 4.0};
    CHECK_THROWS_AS(separation_statistic(1.0, equal), EvalError);
    const std::vector<double> single{4.0};
    CHECK_THROWS_AS(separation_statistic(1.0, single), EvalError);
}

TEST_CASE("separation statistic: shift invariance and scale equivariance") {
    Rng rng(17);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = 2 + rng.below(30);
        std::vector<double> impostors;
        for (std::size_t i = 0; i < n; ++i) impostors.push_back(rng.normal(0.0, 3.0));
        const double s = rng.normal(5.0, 2.0);

        double o;
        try {
            o = separation_statistic(s, impostors);
        } catch (const EvalError&) {
            continue;  // degenerate draw
        }

        const double shift = rng.normal(0.0, 10.0);
        std::vector<double> shifted = impostors;
        for (double& v : shifted) v += shift;
        CHECK(separation_statistic(s + shift, shifted) == doctest::Approx(o).epsilon(1e-9));

        const double scale = 0.5 + rng.next_unit() * 3.0;
        std::vector<double> scaled = impostors;
        for (double& v : scaled) v *= scale;
        CHECK(separation_statistic(s * scale, scaled) == doctest::Approx(o).epsilon(1e-9));
    }
}

TEST_CASE("pearson: fixed fixtures and properties") {
    const std::vector<double> x{1.0, 2.0, 3.0};
    CHECK(pearson_correlation(x, x) == doctest::Approx(1.0).epsilon(1e-12));

    const std::vector<double> neg{-1.0, -2.0, -3.0};
    CHECK(pearson_correlation(x, neg) == doctest::Approx(-1.0).epsilon(1e-12));

    const std::vector<double> y{2.0, 2.0, 4.0};
    // brute force: cov/sqrt(varx*vary) = 2/sqrt(2 * 8/3)
    CHECK(pearson_correlation(x, y) == doctest::Approx(0.8660254038).epsilon(1e-6));
    CHECK(pearson_correlation(y, x) == pearson_correlation(x, y));

    std::vector<double> affine;
    for (double v : y) affine.push_back(3.5 * v + 11.0);
    CHECK(std::fabs(pearson_correlation(x, affine) - pearson_correlation(x, y)) <= 1e-9);

    const std::vector<double> constant{5.0, 5.0, 5.0};
    CHECK_THROWS_AS(pearson_correlation(x, constant), EvalError);
    CHECK_THROWS_AS(pearson_correlation(x, std::vector<double>{1.0}), EvalError);
}

TEST_CASE("correlation matrix: duplicates, symmetry, undefined columns") {
    const std::vector<std::string> names{"a", "b", "c"};
    std::vector<std::vector<double>> rows;
    Rng rng(4);
    for (int i = 0; i < 20; ++i) {
        const double v = rng.next_unit();
        rows.push_back({v, v, 0.5});  // c is constant: undefined
    }
    const CorrelationMatrix m = metric_correlation_matrix(names, rows);
    CHECK(m.at(0, 1) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(m.at(0, 0) == 1.0);
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j)
            if (!std::isnan(m.at(i, j))) CHECK(m.at(i, j) == m.at(j, i));
    CHECK(std::isnan(m.at(0, 2)));
    CHECK(std::isnan(m.at(2, 1)));
}

TEST_CASE("eer: fixed fixtures") {
    CHECK(compute_eer(make_set({0.9, 0.8}, {0.1, 0.2})) == 0.0);

    // identical multisets: chance level up to grid resolution
    const std::vector<double> same{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0};
    CHECK(compute_eer(make_set(same, same)) == doctest::Approx(0.5).epsilon(0.1));

    CHECK(compute_eer(make_set({0.9, 0.6, 0.4}, {0.5, 0.3, 0.1})) ==
          doctest::Approx(1.0 / 3.0).epsilon(1e-9));

    CHECK_THROWS_AS(compute_eer(make_set({}, {0.1})), EvalError);
}

TEST_CASE("operating points: fixed fixtures") {
    std::vector<double> genuine, impostor;
    for (int i = 0; i < 100; ++i) {
        genuine.push_back(0.8 + 0.001 * i);
        impostor.push_back(0.1 + 0.001 * i);
    }
    const ScoreSet separable = make_set(genuine, impostor);
    CHECK(error_at_operating_point(separable, {OperatingPoint::Fix::Far, 0.01}) == 0.0);
    CHECK(error_at_operating_point(separable, {OperatingPoint::Fix::Frr, 0.01}) == 0.0);

    // 50 impostors cannot resolve 1%
    std::vector<double> few(impostor.begin(), impostor.begin() + 50);
    CHECK_THROWS_WITH_AS(error_at_operating_point(make_set(genuine, few), {OperatingPoint::Fix::Far, 0.01}),
                         doctest::Contains("0.02"), EvalError);
}

TEST_CASE("eer and operating points agree exactly with the brute-force oracle") {
    Rng rng(99);
    for (int trial = 0; trial < 100; ++trial) {
        const int n_genuine = 101 + static_cast<int>(rng.below(100));
        const int n_impostor = 101 + static_cast<int>(rng.below(100));
        std::vector<double> genuine, impostor;
        for (int i = 0; i < n_genuine; ++i) genuine.push_back(rng.normal(2.0, 1.5));
        for (int i = 0; i < n_impostor; ++i) impostor.push_back(rng.normal(0.0, 1.0));
        // inject ties across the classes
        if (trial % 3 == 0 && !genuine.empty()) impostor[0] = genuine[0];

        const ScoreSet set = make_set(genuine, impostor);
        const BruteForce oracle(set);
        CHECK(compute_eer(set) == oracle.eer());
        CHECK(error_at_operating_point(set, {OperatingPoint::Fix::Far, 0.01}) ==
              oracle.frr_at_fixed_far(0.01));
        CHECK(error_at_operating_point(set, {OperatingPoint::Fix::Frr, 0.01}) ==
              oracle.far_at_fixed_frr(0.01));
    }
}

TEST_CASE("rejection sweep: fraction 0 is bit-identical to whole-set rates") {
    SyntheticScoreSpec spec;
    spec.n_genuine = 2000;
    spec.n_impostor = 2000;
    spec.coupling = 4.0;
    spec.seed = 5;
    const ScoreSet set = generate_score_set(spec);

    const std::vector<double> fractions{0.0, 0.05, 0.1};
    const RejectionCurve curve = rejection_sweep(set, "pair", fractions);
    REQUIRE(curve.points.size() == 3);
    REQUIRE(curve.points[0].attainable);
    CHECK(curve.points[0].eer == compute_eer(set));
    CHECK(curve.points[0].far_at_frr ==
          error_at_operating_point(set, {OperatingPoint::Fix::Frr, 0.01}));
    CHECK(curve.points[0].frr_at_far ==
          error_at_operating_point(set, {OperatingPoint::Fix::Far, 0.01}));
}

TEST_CASE("rejection sweep: named quality column and validation") {
    ScoreSet set = make_set({1.0, 2.0, 3.0}, {0.0, 0.5, 0.6});
    set.extra_columns = {"ocl"};
    for (auto& r : set.records) r.extra = {0.5};

    CHECK_NOTHROW(rejection_sweep(set, "ocl", std::vector<double>{0.0}));
    CHECK_THROWS_WITH_AS(rejection_sweep(set, "bogus", std::vector<double>{0.0}),
                         doctest::Contains("ocl"), EvalError);
    CHECK_THROWS_AS(rejection_sweep(set, "pair", std::vector<double>{0.5, 0.2}), EvalError);
    CHECK_THROWS_AS(rejection_sweep(set, "pair", std::vector<double>{-0.1}), EvalError);
}

TEST_CASE("rejection sweep: a fraction emptying a class is unattainable, sweep continues") {
    // genuine records all carry the lowest qualities: fraction 0.5 removes
    // the whole genuine class (150 per class also keeps the 1% operating
    // points resolvable at fraction 0)
    ScoreSet set;
    for (int i = 0; i < 150; ++i)
        set.records.push_back({ScoreKind::Genuine, 1.0 + 0.01 * i, 0.01, 0.01, "", {}});
    for (int i = 0; i < 150; ++i)
        set.records.push_back({ScoreKind::Impostor, 0.001 * i, 0.9, 0.9, "", {}});
    const std::vector<double> fractions{0.0, 0.5};
    const RejectionCurve curve = rejection_sweep(set, "pair", fractions);
    CHECK(curve.points[0].attainable);
    CHECK_FALSE(curve.points[1].attainable);
}

TEST_CASE("score CSV: round trip, subject column, malformed rows") {
    TempDir dir("scorecsv");
    ScoreSet set;
    set.extra_columns = {"ocl", "qf"};
    set.records.push_back({ScoreKind::Genuine, 1.25, 0.5, 0.75, "s01", {0.9, 0.8}});
    set.records.push_back({ScoreKind::Impostor, -0.5, 0.25, 0.3, "s01", {0.4, 0.3}});

    const auto path = dir.path() / "scores.csv";
    write_score_csv(set, path);
    const ScoreSet loaded = read_score_csv(path);
    REQUIRE(loaded.records.size() == 2);
    CHECK(loaded.extra_columns == set.extra_columns);
    CHECK(loaded.records[0].kind == ScoreKind::Genuine);
    CHECK(loaded.records[0].score == 1.25);
    CHECK(loaded.records[0].subject == "s01");
    CHECK(loaded.records[1].extra == std::vector<double>{0.4, 0.3});

    SUBCASE("bad number reports the row") {
        const auto bad = dir.path() / "bad.csv";
        std::ofstream(bad) << "kind,score,q_enrol,q_test\ngenuine,1.0,0.5,0.5\nimpostor,oops,0.5,0.5\n";
        CHECK_THROWS_WITH_AS(read_score_csv(bad), doctest::Contains("row 3"), FormatError);
    }
    SUBCASE("bad kind rejected") {
        const auto bad = dir.path() / "kind.csv";
        std::ofstream(bad) << "kind,score,q_enrol,q_test\nmaybe,1.0,0.5,0.5\n";
        CHECK_THROWS_AS(read_score_csv(bad), FormatError);
    }
    SUBCASE("quality out of range rejected") {
        const auto bad = dir.path() / "q.csv";
        std::ofstream(bad) << "kind,score,q_enrol,q_test\ngenuine,1.0,1.5,0.5\n";
        CHECK_THROWS_AS(read_score_csv(bad), FormatError);
    }
    SUBCASE("bad header rejected") {
        const auto bad = dir.path() / "h.csv";
        std::ofstream(bad) << "score,kind\n";
        CHECK_THROWS_AS(read_score_csv(bad), FormatError);
    }
}
