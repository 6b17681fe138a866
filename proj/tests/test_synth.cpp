#include <doctest.h>

#include "fpqual/evaluation.hpp"
#include "fpqual/fft.hpp"
#include "fpqual/local_metrics.hpp"
#include "fpqual/orientation.hpp"
#include "fpqual/rng.hpp"
#include "fpqual/synth.hpp"
#include "test_helpers.hpp"

using namespace fpqual;
using namespace fpqual::testutil;

TEST_CASE("grating: zero contrast is a constant 128 image") {
    const GrayImage img = generate_grating(64, 64, 0.7, 8.0, 0.0);
    for (auto p : img.pixels()) CHECK(p == 128);
}

TEST_CASE("grating: ridge orientation 0 means intensity constant along x") {
    const GrayImage img = generate_grating(64, 64, 0.0, 8.0, 1.0);
    for (int y = 0; y < img.height(); ++y)
        for (int x = 1; x < img.width(); ++x) CHECK(img.at(x, y) == img.at(0, y));
    // and the modulation really runs along y with period 8
    CHECK(img.at(0, 0) == img.at(0, 8));
    CHECK(img.at(0, 0) != img.at(0, 4));
}

TEST_CASE("grating: per-block FFT dominant frequency is 1/8 cycles/px") {
    const GrayImage img = generate_grating(128, 128, 0.0, 8.0, 1.0);
    const BlockGrid grid = BlockGrid::over(img, 16);
    for (int by = 0; by < grid.rows; ++by) {
        for (int bx = 0; bx < grid.cols; ++bx) {
            // angle 0 modulates along y: take the block's central column
            std::vector<double> column;
            for (int y = grid.origin_y(by); y < grid.origin_y(by) + 16; ++y)
                column.push_back(img.at(grid.origin_x(bx) + 8, y));
            const double mean = [&] {
                double s = 0.0;
                for (double v : column) s += v;
                return s / column.size();
            }();
            for (double& v : column) v -= mean;
            const std::vector<double> power = dft_power(column);
            int peak = 1;
            for (std::size_t k = 2; k < power.size(); ++k)
                if (power[k] > power[static_cast<std::size_t>(peak)]) peak = static_cast<int>(k);
            // 1/8 cycles/px at n=16 is bin 2; allow one bin either way
            CHECK(peak >= 1);
            CHECK(peak <= 3);
        }
    }
}

TEST_CASE("grating: period outside [3, min/2] is rejected") {
    CHECK_THROWS_AS(generate_grating(64, 64, 0.0, 2.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(generate_grating(64, 64, 0.0, 40.0, 1.0), std::invalid_argument);
    CHECK_NOTHROW(generate_grating(64, 64, 0.0, 32.0, 1.0));
}

TEST_CASE("whorl: ground-truth angle due east of center is vertical") {
    // 240 px with 16 px blocks: 15 block rows, and row 7's centers sit exactly
    // on the image centerline, so the easternmost block is exactly due east
    const WhorlFixture fix = generate_whorl(240, 240, 8.0, 1.0, 16);
    const BlockGrid& grid = fix.truth.grid;
    REQUIRE(grid.rows == 15);
    const int by = 7;
    const int bx = grid.cols - 1;
    REQUIRE(grid.center_y(by) == (240 - 1) / 2.0);
    CHECK(fix.truth.angle[grid.index(bx, by)] == doctest::Approx(90.0 * kDeg).epsilon(1e-12));
}

TEST_CASE("whorl: estimated direction field matches the analytic tangent field") {
    const WhorlFixture fix = generate_whorl(384, 384, 8.0, 1.0, 16);
    const BlockGrid& grid = fix.truth.grid;
    const SegmentationMask mask = segment_foreground(fix.image, grid, 100.0);
    const DirectionField field = direction_field(fix.image, grid);

    const int cbx = grid.cols / 2;
    const int cby = grid.rows / 2;
    int total = 0, within = 0;
    for (int by = 0; by < grid.rows; ++by) {
        for (int bx = 0; bx < grid.cols; ++bx) {
            const int i = grid.index(bx, by);
            if (!mask.foreground(i)) continue;
            if (std::abs(bx - cbx) <= 1 && std::abs(by - cby) <= 1) continue;  // 3x3 center
            ++total;
            if (acute_angle_difference(field.angle[i], fix.truth.angle[i]) <= 4.0 * kDeg) ++within;
        }
    }
    REQUIRE(total > 400);
    CHECK(static_cast<double>(within) / total >= 0.95);
}

TEST_CASE("whorl: zero contrast segments as all background") {
    const WhorlFixture fix = generate_whorl(128, 128, 8.0, 0.0, 16);
    const SegmentationMask mask = segment_foreground(fix.image, fix.truth.grid, 100.0);
    CHECK(mask.foreground_count() == 0);
}

TEST_CASE("degrade: identity spec is a bit-identical no-op") {
    const GrayImage img = generate_grating(128, 96, 0.3, 8.0, 0.9);
    const GrayImage out = degrade(img, DegradationSpec{}, 42);
    CHECK(out == img);
}

TEST_CASE("degrade: noise strictly lowers the OCL global score") {
    const GrayImage clean = generate_grating(256, 256, 30.0 * kDeg, 8.0, 1.0);
    const Pipeline pc = run_pipeline(clean);
    const double clean_ocl = ocl_map(pc.tensor, pc.mask).global;

    double noisy_mean = 0.0;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const GrayImage noisy = degrade(clean, DegradationSpec{40.0, 0, 1.0, 0.0}, seed);
        const Pipeline pn = run_pipeline(noisy);
        noisy_mean += ocl_map(pn.tensor, pn.mask).global;
    }
    noisy_mean /= 20.0;
    CHECK(noisy_mean < clean_ocl);
}

TEST_CASE("degrade: full occlusion blanks every block") {
    const GrayImage img = generate_grating(128, 128, 1.0, 8.0, 1.0);
    const GrayImage out = degrade(img, DegradationSpec{0.0, 0, 1.0, 1.0}, 7);
    const BlockGrid grid = BlockGrid::over(out, 16);
    const SegmentationMask mask = segment_foreground(out, grid, 100.0);
    CHECK(mask.foreground_count() == 0);
    // every full block is constant
    for (int by = 0; by < grid.rows; ++by)
        for (int bx = 0; bx < grid.cols; ++bx)
            CHECK(block_stats(out, grid, bx, by).variance == 0.0);
}

TEST_CASE("degrade: deterministic under a fixed seed") {
    const GrayImage img = generate_grating(128, 128, 0.5, 8.0, 1.0);
    const DegradationSpec spec{25.0, 1, 0.8, 0.25};
    CHECK(degrade(img, spec, 9) == degrade(img, spec, 9));
    CHECK(degrade(img, spec, 9) != degrade(img, spec, 10));
}

TEST_CASE("score set: coupling controls the genuine score/quality correlation") {
    SyntheticScoreSpec spec;
    spec.n_genuine = 10000;
    spec.n_impostor = 10000;
    spec.seed = 11;

    auto genuine_corr = [](const ScoreSet& set) {
        std::vector<double> scores, qualities;
        for (const auto& r : set.records) {
            if (r.kind != ScoreKind::Genuine) continue;
            scores.push_back(r.score);
            qualities.push_back(pair_quality(r));
        }
        return pearson_correlation(scores, qualities);
    };

    spec.coupling = 0.0;
    CHECK(std::fabs(genuine_corr(generate_score_set(spec))) <= 0.05);

    spec.coupling = 4.0 * spec.genuine_sd;
    CHECK(genuine_corr(generate_score_set(spec)) > 0.5);
}

TEST_CASE("score set: impostor scores stay uncorrelated with quality") {
    SyntheticScoreSpec spec;
    spec.n_genuine = 10000;
    spec.n_impostor = 10000;
    spec.coupling = 0.0;
    spec.seed = 3;
    const ScoreSet set = generate_score_set(spec);
    std::vector<double> scores, qualities;
    for (const auto& r : set.records) {
        if (r.kind != ScoreKind::Impostor) continue;
        scores.push_back(r.score);
        qualities.push_back(pair_quality(r));
    }
    CHECK(std::fabs(pearson_correlation(scores, qualities)) < 0.05);
}

TEST_CASE("score set: identical seeds give identical sets, qualities in range") {
    SyntheticScoreSpec spec;
    spec.n_genuine = 500;
    spec.n_impostor = 500;
    spec.coupling = 2.0;
    spec.seed = 21;
    const ScoreSet a = generate_score_set(spec);
    const ScoreSet b = generate_score_set(spec);
    REQUIRE(a.records.size() == b.records.size());
    for (std::size_t i = 0; i < a.records.size(); ++i) {
        CHECK(a.records[i].score == b.records[i].score);
        CHECK(a.records[i].q_enrol == b.records[i].q_enrol);
        CHECK(a.records[i].q_enrol >= 0.0);
        CHECK(a.records[i].q_enrol < 1.0);
        CHECK(std::isfinite(a.records[i].score));
    }
}

TEST_CASE("fixture metadata records the generator and RNG algorithm") {
    const std::string meta = fixture_metadata("grating", {{"period", "8"}});
    CHECK(meta.find("generator=grating\n") != std::string::npos);
    CHECK(meta.find("period=8\n") != std::string::npos);
    CHECK(meta.find("rng=splitmix64+box-muller\n") != std::string::npos);
}

TEST_CASE("rng: splitmix64 reference values") {
    // first outputs for seed 0 of the published splitmix64 algorithm
    Rng rng(0);
    CHECK(rng.next_u64() == 0xE220A8397B1DCDAFULL);
    CHECK(rng.next_u64() == 0x6E789E6AA1B965F4ULL);
    CHECK(rng.next_u64() == 0x06C45D188009454FULL);
}
