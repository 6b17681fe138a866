#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <fstream>
#include <string>

#include "fpqual/image_io.hpp"
#include "fpqual/report.hpp"
#include "fpqual/synth.hpp"
#include "test_helpers.hpp"

using namespace fpqual;
using namespace fpqual::testutil;

namespace {

std::string cli_binary() {
    const char* env = std::getenv("FPQUAL_BIN");
    REQUIRE_MESSAGE(env != nullptr, "FPQUAL_BIN must point at the fpqual binary");
    return env;
}

struct CliResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

CliResult run_cli(const TempDir& dir, const std::string& args) {
    const auto out_path = dir.path() / "cli_stdout.txt";
    const auto err_path = dir.path() / "cli_stderr.txt";
    const std::string cmd = "\"" + cli_binary() + "\" " + args + " > " + out_path.string() +
                            " 2> " + err_path.string();
    const int status = std::system(cmd.c_str());
    CliResult result;
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    result.out = read_file(out_path);
    result.err = read_file(err_path);
    return result;
}

int count_lines(const std::string& text) {
    int n = 0;
    for (char c : text) n += c == '\n';
    return n;
}

}  // namespace

TEST_CASE("cli: synth writes a PGM plus sidecar metadata") {
    TempDir dir("cli_synth");
    const auto img_path = dir.path() / "g.pgm";
    const CliResult r = run_cli(dir, "synth grating --width 96 --height 96 --angle-deg 30 --period 8 --out " +
                                         img_path.string());
    CHECK(r.exit_code == 0);
    const GrayImage img = load_image(img_path);
    CHECK(img.width() == 96);
    const std::string meta = read_file(img_path.string() + ".meta");
    CHECK(meta.find("generator=grating") != std::string::npos);
    CHECK(meta.find("rng=splitmix64+box-muller") != std::string::npos);
}

TEST_CASE("cli: score emits metric,score lines for a single image") {
    TempDir dir("cli_score1");
    const auto img_path = dir.path() / "w.pgm";
    run_cli(dir, "synth whorl --width 256 --height 256 --period 8 --out " + img_path.string());

    const CliResult r = run_cli(dir, "score " + img_path.string());
    CHECK(r.exit_code == 0);
    CHECK(count_lines(r.out) == 12);
    for (const auto& name : canonical_metric_names())
        CHECK(r.out.find(name + ",") != std::string::npos);
}

TEST_CASE("cli: corrupt image in a batch reports the error and keeps going") {
    TempDir dir("cli_batch");
    const auto a = dir.path() / "a.pgm";
    const auto b = dir.path() / "b.pgm";
    run_cli(dir, "synth grating --width 96 --height 96 --period 8 --out " + a.string());
    run_cli(dir, "synth grating --width 96 --height 96 --period 10 --out " + b.string());
    const auto corrupt = dir.path() / "c.pgm";
    std::ofstream(corrupt) << "P5\n96 96\n255\nshort";

    const CliResult r =
        run_cli(dir, "score " + a.string() + " " + b.string() + " " + corrupt.string());
    CHECK(r.exit_code == 1);
    CHECK(count_lines(r.out) == 3);  // header + 2 records
    CHECK(r.err.find("c.pgm") != std::string::npos);
    CHECK(r.err.find("truncated") != std::string::npos);
}

TEST_CASE("cli: the same image twice gives identical records") {
    TempDir dir("cli_twice");
    const auto a = dir.path() / "a.pgm";
    run_cli(dir, "synth grating --width 128 --height 128 --period 8 --out " + a.string());
    const CliResult r = run_cli(dir, "score " + a.string() + " " + a.string());
    CHECK(r.exit_code == 0);
    REQUIRE(count_lines(r.out) == 3);
    const auto first = r.out.find('\n') + 1;
    const auto second = r.out.find('\n', first) + 1;
    CHECK(r.out.substr(first, second - first) == r.out.substr(second));
}

TEST_CASE("cli: map writes a rows x cols CSV and a heatmap") {
    TempDir dir("cli_map");
    const auto img_path = dir.path() / "g.pgm";
    run_cli(dir, "synth grating --width 128 --height 96 --period 8 --out " + img_path.string());
    const auto csv_path = dir.path() / "map.csv";
    const auto heat_path = dir.path() / "heat.pgm";
    const CliResult r = run_cli(dir, "map --metric ocl " + img_path.string() + " --out " +
                                         csv_path.string() + " --heatmap " + heat_path.string());
    CHECK(r.exit_code == 0);
    const std::string csv = read_file(csv_path);
    CHECK(count_lines(csv) == 96 / 16);
    const GrayImage heat = load_image(heat_path);
    CHECK(heat.width() == 128 / 16);
    CHECK(heat.height() == 96 / 16);

    const CliResult bad = run_cli(dir, "map --metric qf " + img_path.string());
    CHECK(bad.exit_code == 2);  // qf has no block map
}

TEST_CASE("cli: compare writes a symmetric matrix with unit diagonal") {
    TempDir dir("cli_compare");
    std::string inputs;
    for (int i = 0; i < 4; ++i) {
        const auto p = dir.path() / ("img" + std::to_string(i) + ".pgm");
        run_cli(dir, "synth whorl --width 128 --height 128 --period 8 --out " + p.string() +
                         " --noise-sigma " + std::to_string(20 * i) + " --seed " + std::to_string(i + 1));
        inputs += " " + p.string();
    }
    const auto out_path = dir.path() / "corr.csv";
    const CliResult r =
        run_cli(dir, "compare" + inputs + " --metrics ocl,qs,gcs --out " + out_path.string());
    CHECK(r.exit_code == 0);
    std::ifstream in(out_path);
    std::string header, line1;
    std::getline(in, header);
    std::getline(in, line1);
    CHECK(header == "metric,ocl,qs,gcs");
    CHECK(line1.substr(0, 6) == "ocl,1,");
}

TEST_CASE("cli: compare on two identical images leaves the matrix undefined") {
    TempDir dir("cli_compare_degenerate");
    const auto p = dir.path() / "img.pgm";
    run_cli(dir, "synth whorl --width 128 --height 128 --period 8 --out " + p.string());
    const auto out_path = dir.path() / "corr.csv";
    const CliResult r = run_cli(dir, "compare " + p.string() + " " + p.string() +
                                         " --metrics ocl,qs --out " + out_path.string());
    CHECK(r.exit_code == 0);
    const std::string csv = read_file(out_path);
    // zero variance everywhere: off-diagonals are empty cells
    CHECK(csv.find("ocl,1,\n") != std::string::npos);
}

TEST_CASE("cli: evaluate emits the curve with row 0 equal to whole-set rates") {
    TempDir dir("cli_eval");
    const auto scores_path = dir.path() / "scores.csv";
    run_cli(dir, "synth scoreset --n-genuine 2000 --n-impostor 2000 --coupling 4 --seed 3 --out " +
                     scores_path.string());
    const auto curve_path = dir.path() / "curve.csv";
    const CliResult r = run_cli(dir, "evaluate --scores " + scores_path.string() +
                                         " --fractions 0,0.05,0.1,0.15,0.2,0.25,0.3 --out " +
                                         curve_path.string());
    CHECK(r.exit_code == 0);
    const std::string csv = read_file(curve_path);
    CHECK(count_lines(csv) == 8);  // header + 7 fractions
    CHECK(csv.substr(0, count_lines(csv) ? csv.find('\n') : 0) == "fraction,eer,far_at_frr,frr_at_far");
    CHECK(r.out.find("# records=4000") != std::string::npos);

    const CliResult bad = run_cli(dir, "evaluate --scores " + scores_path.string() +
                                           " --quality-key nope --out " + curve_path.string());
    CHECK(bad.exit_code == 1);
    CHECK(bad.err.find("pair") != std::string::npos);  // names the available columns
}

TEST_CASE("cli: evaluate writes per-subject separation statistics") {
    TempDir dir("cli_separation");
    const auto scores_path = dir.path() / "scores.csv";
    std::ofstream(scores_path) << "kind,score,q_enrol,q_test,subject\n"
                                  "genuine,10,0.9,0.9,s1\n"
                                  "impostor,1,0.4,0.4,s1\n"
                                  "impostor,2,0.4,0.4,s1\n"
                                  "impostor,3,0.4,0.4,s1\n"
                                  "genuine,5,0.8,0.8,s2\n"
                                  "impostor,4,0.3,0.3,s2\n"
                                  "impostor,4,0.3,0.3,s2\n";
    const auto sep_path = dir.path() / "sep.csv";
    const CliResult r = run_cli(dir, "evaluate --scores " + scores_path.string() +
                                         " --fractions 0 --separation " + sep_path.string() +
                                         " --out " + (dir.path() / "curve.csv").string());
    CHECK(r.exit_code == 0);
    const std::string csv = read_file(sep_path);
    // (10 - 2) / sqrt(2/3) = 9.7979...
    CHECK(csv.find("s1,10,9.7979") != std::string::npos);
    // s2's impostors have zero spread: the row stays empty and a warning is printed
    CHECK(csv.find("s2,5,\n") != std::string::npos);
    CHECK(r.err.find("s2") != std::string::npos);
}

TEST_CASE("cli: config dump/load round-trips and bad config exits 2") {
    TempDir dir("cli_config");
    const CliResult dump = run_cli(dir, "--dump-config");
    CHECK(dump.exit_code == 0);
    const auto cfg_path = dir.path() / "cfg.txt";
    std::ofstream(cfg_path) << dump.out;

    const CliResult dump2 = run_cli(dir, "--dump-config --config " + cfg_path.string());
    CHECK(dump2.exit_code == 0);
    CHECK(dump2.out == dump.out);

    const auto img_path = dir.path() / "g.pgm";
    run_cli(dir, "synth grating --width 96 --height 96 --period 8 --out " + img_path.string());
    const CliResult s1 = run_cli(dir, "score " + img_path.string());
    const CliResult s2 = run_cli(dir, "score --config " + cfg_path.string() + " " + img_path.string());
    CHECK(s1.out == s2.out);

    std::ofstream(cfg_path, std::ios::app) << "bogus_key=1\n";
    const CliResult bad = run_cli(dir, "score --config " + cfg_path.string() + " " + img_path.string());
    CHECK(bad.exit_code == 2);
    CHECK(bad.err.find("bogus_key") != std::string::npos);
}

TEST_CASE("cli: dpi override rescales the analysis grid") {
    TempDir dir("cli_dpi");
    const auto img_path = dir.path() / "g.pgm";
    run_cli(dir, "synth grating --width 128 --height 128 --period 8 --out " + img_path.string());

    const auto map500 = dir.path() / "m500.csv";
    const auto map250 = dir.path() / "m250.csv";
    run_cli(dir, "map --metric ocl " + img_path.string() + " --out " + map500.string());
    run_cli(dir, "map --metric ocl --dpi 250 " + img_path.string() + " --out " + map250.string());
    // 250 dpi scales the 16 px default block to 8 px: twice the rows
    CHECK(count_lines(read_file(map500)) == 8);
    CHECK(count_lines(read_file(map250)) == 16);
}

TEST_CASE("cli: dump-spectrum writes ring energies for a single image") {
    TempDir dir("cli_spectrum");
    const auto img_path = dir.path() / "g.pgm";
    run_cli(dir, "synth grating --width 256 --height 256 --angle-deg 30 --period 8 --out " +
                     img_path.string());
    const auto spec_path = dir.path() / "rings.csv";
    const CliResult r = run_cli(dir, "score " + img_path.string() + " --dump-spectrum " +
                                         spec_path.string());
    CHECK(r.exit_code == 0);
    const std::string csv = read_file(spec_path);
    CHECK(count_lines(csv) == 16);  // header + 15 rings
    CHECK(csv.find("ring,center_frequency,p") == 0);
}
