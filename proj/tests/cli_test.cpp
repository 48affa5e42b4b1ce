#include "pmef/cli.hpp"
#include "pmef/image_io.hpp"
#include "pmef/pipeline.hpp"
#include "pmef/tonemap.hpp"
#include "test_util.hpp"

#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

using namespace pmef;
namespace fs = std::filesystem;

namespace {

struct CliRun {
    int code;
    std::string out;
    std::string err;
};

CliRun pmef_cli(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

void write_text(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

Image test_photo(Eigen::Index w = 48, Eigen::Index h = 36) {
    std::mt19937 rng(42);
    Image img(w, h);
    std::normal_distribution<double> n(0.0, 0.03);
    for (Eigen::Index y = 0; y < h; ++y)
        for (Eigen::Index x = 0; x < w; ++x) {
            const double base = x < w / 2 ? 0.15 : 0.55;
            img.set_pixel(x, y, std::clamp(base + 0.1 * y / h + n(rng), 0.0, 1.0),
                          std::clamp(base * 0.9 + n(rng), 0.0, 1.0), std::clamp(base * 0.7 + n(rng), 0.0, 1.0));
        }
    return quantize8(img);
}

}  // namespace

TEST(Cli, UsageErrors) {
    EXPECT_EQ(pmef_cli({}).code, cli::kExitUsage);
    EXPECT_EQ(pmef_cli({"frobnicate"}).code, cli::kExitUsage);
    EXPECT_EQ(pmef_cli({"enhance", "in.png"}).code, cli::kExitUsage);
    EXPECT_EQ(pmef_cli({"--help"}).code, cli::kExitOk);
    EXPECT_EQ(pmef_cli({"enhance", "--sigma-spatial", "abc", "x.png", "-o", "y.png"}).code, cli::kExitUsage);
}

TEST(Cli, ApproachAWithoutEvIsUsageError) {
    const auto dir = test::scratch_dir("cli_a_no_ev");
    save_image(test_photo(), dir / "in.png");
    const CliRun r = pmef_cli({"enhance", (dir / "in.png").string(), "-o", (dir / "out.png").string(), "--approach", "A"});
    EXPECT_EQ(r.code, cli::kExitUsage);
    EXPECT_NE(r.err.find("--ev"), std::string::npos);
    EXPECT_FALSE(fs::exists(dir / "out.png"));
}

TEST(Cli, MissingInputIsRuntimeFailure) {
    const auto dir = test::scratch_dir("cli_missing");
    EXPECT_EQ(pmef_cli({"enhance", (dir / "nope.png").string(), "-o", (dir / "out.png").string()}).code,
              cli::kExitFailure);
}

TEST(Cli, ConstantGrayStaysConstant) {
    const auto dir = test::scratch_dir("cli_const");
    save_image(Image::constant(24, 20, 0.5, 0.5, 0.5), dir / "gray.png");
    const CliRun r = pmef_cli({"enhance", (dir / "gray.png").string(), "-o", (dir / "out.pfm").string()});
    ASSERT_EQ(r.code, 0) << r.err;
    const Image out = load_image(dir / "out.pfm");
    for (int c = 0; c < 3; ++c) EXPECT_LE(out.channel(c).maxCoeff() - out.channel(c).minCoeff(), 1e-3);
}

TEST(Cli, DeterministicOutputBytes) {
    const auto dir = test::scratch_dir("cli_det");
    save_image(test_photo(), dir / "in.png");
    for (const char* name : {"a.png", "b.png"})
        ASSERT_EQ(pmef_cli({"enhance", (dir / "in.png").string(), "-o", (dir / name).string(), "--emit-intermediates"}).code, 0);
    EXPECT_EQ(read_file(dir / "a.png"), read_file(dir / "b.png"));
    EXPECT_EQ(read_file(dir / "a_lc.pfm"), read_file(dir / "b_lc.pfm"));
    for (const char* ev : {"-1.0", "+0.0", "+1.0"})
        EXPECT_EQ(read_file(dir / (std::string("a_ev") + ev + ".png")), read_file(dir / (std::string("b_ev") + ev + ".png")));
}

TEST(Cli, IntermediatesMatchModuleComposition) {
    const auto dir = test::scratch_dir("cli_stages");
    const Image photo = test_photo();
    save_image(photo, dir / "in.png");
    write_text(dir / "cfg.txt", "# test config\napproach = A\nev = 0.5\nevs = -1,0,1\nsigma_spatial = 4\n");
    const CliRun r = pmef_cli({"enhance", (dir / "in.png").string(), "-o", (dir / "out.png").string(), "--config",
                            (dir / "cfg.txt").string(), "--ev", "0", "--emit-intermediates"});
    ASSERT_EQ(r.code, 0) << r.err;

    // Flags override the file: --ev 0 wins over ev = 0.5.
    const Luminance l = relative_luminance(photo);
    const Luminance lc = local_contrast_enhance(l, BilateralParams::with_default_window(4.0, 3.0 / 255.0));
    const Luminance l0 = estimate_l0_approach_a(lc, 0.0);
    std::vector<Image> members;
    for (double v : {-1.0, 0.0, 1.0}) {
        const Image expected = make_pseudo_exposure(photo, l, apply_ev(l0, v));
        const Image written = load_image(intermediate_path(dir / "out.png", v));
        EXPECT_LE(test::max_abs_diff(written, expected.clamped()), 1.0 / 510.0 + 1e-12) << v;
        members.push_back(expected);
    }
    EXPECT_LE(test::max_abs_diff(load_image(dir / "out.png"), fuse(members).clamped()), 1.0 / 510.0 + 1e-12);
    const Image lc_file = load_image(dir / "out_lc.pfm");
    EXPECT_LE((lc_file.g() - lc).abs().maxCoeff(), 1e-6 * std::max(1.0, lc.maxCoeff()));

    // Approach A at 0 EV: the 0 EV member's luminance is the tone-mapped L_c.
    const Luminance mapped = reinhard_global(lc, pick_l_white(lc));
    const Image zero = make_pseudo_exposure(photo, l, lc);
    EXPECT_LE((relative_luminance(zero) - mapped).abs().maxCoeff(), 1e-12);
}

TEST(Cli, EvLabels) {
    EXPECT_EQ(ev_label(1.0), "+1.0");
    EXPECT_EQ(ev_label(-1.0), "-1.0");
    EXPECT_EQ(ev_label(0.0), "+0.0");
    EXPECT_EQ(ev_label(-0.0), "+0.0");
    EXPECT_EQ(ev_label(1.3), "+1.3");
    EXPECT_EQ(intermediate_path("dir/out.png", -1.0), fs::path("dir/out_ev-1.0.png"));
}

TEST(Cli, SynthAnchorsAndNames) {
    const auto dir = test::scratch_dir("cli_synth");
    auto reported = [](const std::string& text, const std::string& key) {
        const auto pos = text.find(" " + key + "=");
        EXPECT_NE(pos, std::string::npos) << key;
        return std::stod(text.substr(pos + key.size() + 2));
    };
    // A low-range scene does not clip at 0 EV, so the written member keeps the anchor.
    std::mt19937 rng(8);
    save_image(test::random_image(rng, 40, 30, 0.5, 2.0), dir / "soft.pfm");
    const CliRun soft = pmef_cli({"synth", (dir / "soft.pfm").string(), "-o", (dir / "soft").string(), "--evs=0"});
    ASSERT_EQ(soft.code, 0) << soft.err;
    ASSERT_TRUE(fs::exists(dir / "soft_ev+0.0.png"));
    EXPECT_NEAR(reported(soft.out, "geometric_mean"), 0.18, 1e-3);

    // The window of the interior scene clips; the anchor holds before clipping.
    save_image(test::synthetic_hdr_scene(40, 30), dir / "scene.hdr");
    const CliRun r = pmef_cli({"synth", (dir / "scene.hdr").string(), "-o", (dir / "br").string(), "--evs=0"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NEAR(reported(r.out, "geometric_mean_unclipped"), 0.18, 1e-6);
    EXPECT_LT(reported(r.out, "geometric_mean"), 0.18);

    ASSERT_EQ(pmef_cli({"synth", (dir / "scene.hdr").string(), "-o", (dir / "br").string()}).code, 0);
    double prev = -1.0;
    for (const char* ev : {"-1.0", "+0.0", "+1.0"}) {
        const double m = ordered_mean(relative_luminance(load_image(dir / (std::string("br_ev") + ev + ".png"))));
        EXPECT_GT(m, prev);
        prev = m;
    }
}

TEST(Cli, SynthErrors) {
    const auto dir = test::scratch_dir("cli_synth_err");
    save_image(Image(8, 8), dir / "black.hdr");
    const CliRun black = pmef_cli({"synth", (dir / "black.hdr").string()});
    EXPECT_EQ(black.code, cli::kExitFailure);
    EXPECT_NE(black.err.find("positive luminance"), std::string::npos);
    save_image(Image(8, 8), dir / "ldr.png");
    EXPECT_EQ(pmef_cli({"synth", (dir / "ldr.png").string()}).code, cli::kExitFailure);
}

TEST(Cli, Metrics) {
    const auto dir = test::scratch_dir("cli_metrics");
    save_image(test_photo(), dir / "a.png");
    save_image(test_photo(22, 22), dir / "small.png");
    save_image(Image(22, 22), dir / "black.png");
    Image mid(22, 22);
    std::mt19937 rng(3);
    std::normal_distribution<double> n(116.0, 30.0);
    for (Eigen::Index y = 0; y < 22; ++y)
        for (Eigen::Index x = 0; x < 22; ++x) {
            const double v = std::clamp(n(rng), 0.0, 255.0) / 255.0;
            mid.set_pixel(x, y, v, v, v);
        }
    save_image(mid, dir / "mid.png");

    const CliRun same = pmef_cli({"metrics", (dir / "a.png").string(), (dir / "a.png").string(), "--which", "ciede2000"});
    ASSERT_EQ(same.code, 0) << same.err;
    EXPECT_NE(same.out.find("ciede2000=0.000000"), std::string::npos);

    auto nat = [&](const char* name) {
        const CliRun r = pmef_cli({"metrics", (dir / name).string()});
        EXPECT_EQ(r.code, 0) << r.err;
        return std::stod(r.out.substr(r.out.find("naturalness=") + 12));
    };
    EXPECT_GT(nat("mid.png"), nat("black.png"));

    EXPECT_EQ(pmef_cli({"metrics", (dir / "a.png").string(), (dir / "small.png").string()}).code, cli::kExitUsage);
    EXPECT_EQ(pmef_cli({"metrics", (dir / "a.png").string(), "--which", "ciede2000"}).code, cli::kExitUsage);
}

TEST(Cli, BenchEmptyManifest) {
    const auto dir = test::scratch_dir("cli_bench_empty");
    write_text(dir / "m.txt", "# nothing here\n\n");
    const CliRun r = pmef_cli({"bench", (dir / "m.txt").string()});
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(r.out, "scene\tmethod\tciede2000\tnaturalness\tstatus\n");
}

TEST(Cli, BenchApproachOrdering) {
    const auto dir = test::scratch_dir("cli_bench");
    save_image(test::synthetic_hdr_scene(64, 48), dir / "room.hdr");
    write_text(dir / "m.txt", "scene=room hdr=room.hdr methods=A,B sigma_spatial=4\n");
    const CliRun r = pmef_cli({"bench", (dir / "m.txt").string(), "-o", (dir / "table.tsv").string()});
    ASSERT_EQ(r.code, 0) << r.err;
    std::ifstream in(dir / "table.tsv");
    std::string header, row_a, row_b, extra;
    std::getline(in, header);
    std::getline(in, row_a);
    std::getline(in, row_b);
    EXPECT_FALSE(std::getline(in, extra));
    auto field = [](const std::string& row, int k) {
        std::istringstream ss(row);
        std::string f;
        for (int i = 0; i <= k; ++i) std::getline(ss, f, '\t');
        return f;
    };
    EXPECT_EQ(field(row_a, 1), "A");
    EXPECT_EQ(field(row_b, 1), "B");
    EXPECT_LE(std::stod(field(row_a, 2)), std::stod(field(row_b, 2)));
}

TEST(Cli, BenchMissingFileRecordsError) {
    const auto dir = test::scratch_dir("cli_bench_missing");
    save_image(test::synthetic_hdr_scene(32, 24), dir / "ok.hdr");
    write_text(dir / "m.txt",
               "scene=gone hdr=missing.hdr methods=input\nscene=ok hdr=ok.hdr methods=input,mef\n");
    const CliRun r = pmef_cli({"bench", (dir / "m.txt").string()});
    EXPECT_EQ(r.code, cli::kExitFailure);
    EXPECT_NE(r.out.find("gone\tinput\tnan\tnan\terror"), std::string::npos);
    EXPECT_NE(r.out.find("ok\tinput\t0.000000"), std::string::npos);
    EXPECT_NE(r.out.find("ok\tmef\t"), std::string::npos);
}
