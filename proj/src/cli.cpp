#include "pmef/cli.hpp"

#include "pmef/image_io.hpp"
#include "pmef/metrics.hpp"
#include "pmef/pipeline.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

namespace pmef::cli {

namespace {

/// Bad invocation: exit code 2.
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep))
        if (!item.empty()) out.push_back(item);
    return out;
}

// ---------------------------------------------------------------------------
// enhance
// ---------------------------------------------------------------------------

struct EnhanceFlags {
    std::string config;
    std::string input;
    std::string output;
    std::string approach;
    std::optional<double> ev;
    std::string evs;
    std::optional<double> sigma_spatial;
    std::optional<double> sigma_range;
    std::optional<int> window_radius;
    std::optional<double> epsilon;
    std::string fusion;
    bool emit_intermediates = false;
};

PipelineConfig build_config(const EnhanceFlags& f) {
    PipelineConfig cfg;
    try {
        if (!f.config.empty())
            for (const auto& [key, value] : read_key_value_file(f.config)) apply_setting(cfg, key, value);
        // Flags override the file. sigma_spatial resets the window, so it goes first.
        if (f.sigma_spatial) apply_setting(cfg, "sigma_spatial", fmt::format("{}", *f.sigma_spatial));
        if (f.sigma_range) cfg.bilateral.sigma_range = *f.sigma_range;
        if (f.window_radius) cfg.bilateral.window_radius = *f.window_radius;
        if (!f.input.empty()) cfg.input = f.input;
        if (!f.output.empty()) cfg.output = f.output;
        if (!f.approach.empty()) apply_setting(cfg, "approach", f.approach);
        if (f.ev) cfg.exposure.known_ev = *f.ev;
        if (!f.evs.empty()) apply_setting(cfg, "evs", f.evs);
        if (f.epsilon) cfg.exposure.epsilon = *f.epsilon;
        if (!f.fusion.empty()) cfg.fusion = f.fusion;
        if (f.emit_intermediates) cfg.emit_intermediates = true;
    } catch (const ContractViolation& e) {
        throw UsageError(e.what());
    }
    if (cfg.exposure.approach == Approach::A && !cfg.exposure.known_ev)
        throw UsageError("approach A requires the exposure value of the input (--ev)");
    if (cfg.input.empty()) throw UsageError("no input image given");
    if (cfg.output.empty()) throw UsageError("no output path given (-o)");
    try {
        cfg.validate();
    } catch (const ContractViolation& e) {
        throw UsageError(e.what());
    }
    return cfg;
}

int cmd_enhance(const EnhanceFlags& flags, std::ostream& out) {
    const PipelineConfig cfg = build_config(flags);
    const Image input = load_image(cfg.input);
    const PipelineResult result = run_pipeline(input, cfg);
    const ImageFormat out_format = format_from_path(cfg.output);
    save_image(result.fused, cfg.output, out_format);
    out << "wrote " << cfg.output.string() << "\n";
    if (cfg.emit_intermediates) {
        const auto lc_path = enhanced_luminance_path(cfg.output);
        save_luminance_pfm(result.enhanced, lc_path);
        out << "wrote " << lc_path.string() << "\n";
        for (const auto& member : result.pseudo_stack) {
            const auto p = intermediate_path(cfg.output, member.tag.ev);
            save_image(member.image, p, ImageFormat::png8);
            out << "wrote " << p.string() << "\n";
        }
    }
    return kExitOk;
}

// ---------------------------------------------------------------------------
// synth
// ---------------------------------------------------------------------------

int cmd_synth(const std::string& input, const std::string& output, const std::string& evs_text, double epsilon,
              std::ostream& out) {
    std::vector<double> evs;
    try {
        evs = parse_ev_list(evs_text);
    } catch (const ContractViolation& e) {
        throw UsageError(e.what());
    }
    const std::filesystem::path in_path(input);
    ImageFormat format;
    try {
        format = format_from_path(in_path);
    } catch (const IoError&) {
        throw FormatError("synth", 0, fmt::format("'{}' is not an HDR image (.hdr or .pfm)", input));
    }
    if (!is_hdr_format(format))
        throw FormatError("synth", 0, fmt::format("'{}' is not an HDR image (.hdr or .pfm)", input));

    const Image hdr = load_image(in_path, format);
    const Stack raw = synth_exposure_stack_unclamped(hdr, evs, epsilon);
    const std::filesystem::path stem = output.empty() ? std::filesystem::path(in_path.stem()) : std::filesystem::path(output);
    for (const auto& member : raw) {
        const Image clipped = member.image.clamped();
        const auto p = stem.parent_path() / fmt::format("{}_ev{}.png", stem.filename().string(), ev_label(member.tag.ev));
        save_image(clipped, p, ImageFormat::png8);
        // Both means are taken before 8-bit quantization.
        out << fmt::format("wrote {} ev={} geometric_mean={:.6f} geometric_mean_unclipped={:.6f}\n", p.string(),
                           ev_label(member.tag.ev), geometric_mean(relative_luminance(clipped), epsilon),
                           geometric_mean(relative_luminance(member.image), epsilon));
    }
    return kExitOk;
}

// ---------------------------------------------------------------------------
// metrics
// ---------------------------------------------------------------------------

int cmd_metrics(const std::string& a, const std::string& b, const std::string& which_text, std::ostream& out) {
    bool want_de = false;
    bool want_nat = false;
    const auto which = which_text.empty() ? (b.empty() ? std::vector<std::string>{"naturalness"}
                                                       : std::vector<std::string>{"ciede2000", "naturalness"})
                                          : split(which_text, ',');
    for (const auto& w : which) {
        if (w == "ciede2000")
            want_de = true;
        else if (w == "naturalness")
            want_nat = true;
        else
            throw UsageError(fmt::format("unknown metric '{}' (ciede2000, naturalness)", w));
    }
    if (want_de && b.empty()) throw UsageError("ciede2000 needs two images");

    const Image img_a = load_image(a);
    MetricReport report;
    report.image_a = a;
    if (!b.empty()) {
        const Image img_b = load_image(b);
        report.image_b = b;
        if (!img_a.same_size(img_b))
            throw UsageError(fmt::format("image sizes differ: {}x{} vs {}x{}", img_a.width(), img_a.height(),
                                         img_b.width(), img_b.height()));
        if (want_de) report.mean_de2000 = mean_de2000(img_a, img_b);
    }
    if (want_nat) report.statistical_naturalness = statistical_naturalness(img_a);
    out << format_record(report) << "\n";
    return kExitOk;
}

// ---------------------------------------------------------------------------
// bench
// ---------------------------------------------------------------------------

int cmd_bench(const std::string& manifest, const std::string& output, std::ostream& out, std::ostream& err) {
    const auto scenes = read_manifest(manifest);
    std::ostringstream table;
    table << "scene\tmethod\tciede2000\tnaturalness\tstatus\n";
    bool failed = false;
    for (const auto& scene : scenes) {
        try {
            PipelineConfig base;
            for (const auto& [k, v] : scene.settings) apply_setting(base, k, v);
            Stack stack;
            if (!scene.hdr.empty()) {
                stack = synthesize_ldr_stack(load_image(scene.hdr), scene.evs, base.exposure.epsilon);
            } else {
                if (scene.stack.size() != scene.evs.size())
                    throw ContractViolation(fmt::format("scene '{}': {} stack files but {} EVs", scene.name,
                                                        scene.stack.size(), scene.evs.size()));
                for (std::size_t i = 0; i < scene.stack.size(); ++i)
                    stack.push_back({load_image(scene.stack[i]), ExposureTag(scene.evs[i])});
            }
            for (const auto& s : score_methods(stack, scene.methods, base))
                table << fmt::format("{}\t{}\t{:.6f}\t{:.6f}\tok\n", scene.name, s.method, s.de2000, s.naturalness);
        } catch (const std::exception& e) {
            failed = true;
            err << fmt::format("scene '{}' failed: {}\n", scene.name, e.what());
            for (const auto& m : scene.methods)
                table << fmt::format("{}\t{}\tnan\tnan\terror: {}\n", scene.name, m, e.what());
        }
    }
    if (output.empty()) {
        out << table.str();
    } else {
        const std::string s = table.str();
        write_file(output, std::span(reinterpret_cast<const std::uint8_t*>(s.data()), s.size()));
        out << "wrote " << output << "\n";
    }
    return failed ? kExitFailure : kExitOk;
}

}  // namespace

std::vector<BenchScene> read_manifest(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError(fmt::format("cannot open manifest '{}'", path.string()));
    const auto base_dir = path.parent_path();
    auto resolve = [&](const std::string& p) {
        const std::filesystem::path fp(p);
        return fp.is_absolute() ? fp : base_dir / fp;
    };

    std::vector<BenchScene> scenes;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::istringstream tokens(line);
        std::string token;
        BenchScene scene;
        bool any = false;
        while (tokens >> token) {
            any = true;
            const auto eq = token.find('=');
            if (eq == std::string::npos || eq == 0)
                throw UsageError(fmt::format("{}:{}: expected key=value, got '{}'", path.string(), lineno, token));
            const std::string key = token.substr(0, eq);
            const std::string value = token.substr(eq + 1);
            if (key == "scene") {
                scene.name = value;
            } else if (key == "hdr") {
                scene.hdr = resolve(value);
            } else if (key == "stack") {
                for (const auto& p : split(value, ',')) scene.stack.push_back(resolve(p));
            } else if (key == "evs") {
                try {
                    scene.evs = parse_ev_list(value);
                } catch (const ContractViolation& e) {
                    throw UsageError(fmt::format("{}:{}: {}", path.string(), lineno, e.what()));
                }
            } else if (key == "methods") {
                scene.methods = split(value, ',');
            } else {
                scene.settings.emplace_back(key, value);
            }
        }
        if (!any) continue;
        if (scene.name.empty()) scene.name = fmt::format("line{}", lineno);
        if (scene.hdr.empty() == scene.stack.empty())
            throw UsageError(fmt::format("{}:{}: give exactly one of hdr= or stack=", path.string(), lineno));
        scenes.push_back(std::move(scene));
    }
    return scenes;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Single-image enhancement by fusing pseudo multi-exposure images", "pmef"};
    app.require_subcommand(1);

    EnhanceFlags ef;
    auto* enhance = app.add_subcommand("enhance", "Enhance one image: pseudo exposures, tone mapping, fusion");
    enhance->add_option("input", ef.input, "Input image (.png, .ppm, .hdr, .pfm)");
    enhance->add_option("-o,--output", ef.output, "Output image (.png or .ppm)");
    enhance->add_option("--config", ef.config, "key=value config file; flags override it");
    enhance->add_option("--approach", ef.approach, "A (known input EV) or B (geometric-mean anchor)");
    enhance->add_option("--ev", ef.ev, "Exposure value of the input, required by approach A");
    enhance->add_option("--evs", ef.evs, "Pseudo exposure EVs, e.g. --evs=-1,0,1");
    enhance->add_option("--sigma-spatial", ef.sigma_spatial, "Bilateral spatial sigma in pixels (16)");
    enhance->add_option("--sigma-range", ef.sigma_range, "Bilateral range sigma in luminance (3/255)");
    enhance->add_option("--window-radius", ef.window_radius, "Bilateral window radius (ceil(3*sigma_spatial))");
    enhance->add_option("--epsilon", ef.epsilon, "Luminance floor for zero pixels in the log average (1e-6)");
    enhance->add_option("--fusion", ef.fusion, "Fusion backend: mertens");
    enhance->add_flag("--emit-intermediates", ef.emit_intermediates, "Also write L_c and every pseudo exposure");

    std::string synth_in, synth_out, synth_evs = "-1,0,1";
    double synth_eps = kDefaultEpsilon;
    auto* synth = app.add_subcommand("synth", "Synthesize an LDR exposure bracket from an HDR image");
    synth->add_option("input", synth_in, "HDR image (.hdr or .pfm)")->required();
    synth->add_option("-o,--output", synth_out, "Output path stem; files are <stem>_ev<+v.v>.png");
    synth->add_option("--evs", synth_evs, "EVs, e.g. --evs=-1,0,1");
    synth->add_option("--epsilon", synth_eps, "Luminance floor for zero pixels (1e-6)");

    std::string met_a, met_b, met_which;
    auto* metrics = app.add_subcommand("metrics", "Score images: mean CIEDE2000 and statistical naturalness");
    metrics->add_option("image_a", met_a, "Image to score")->required();
    metrics->add_option("image_b", met_b, "Reference for CIEDE2000");
    metrics->add_option("--which", met_which, "Comma list of ciede2000,naturalness");

    std::string bench_manifest, bench_out;
    auto* bench = app.add_subcommand("bench", "Run a manifest of scenes and methods, print a results table");
    bench->add_option("manifest", bench_manifest, "Manifest file")->required();
    bench->add_option("-o,--output", bench_out, "Write the table here instead of stdout");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << "\n" << app.help();
        return kExitUsage;
    }

    try {
        if (enhance->parsed()) return cmd_enhance(ef, out);
        if (synth->parsed()) return cmd_synth(synth_in, synth_out, synth_evs, synth_eps, out);
        if (metrics->parsed()) return cmd_metrics(met_a, met_b, met_which, out);
        if (bench->parsed()) return cmd_bench(bench_manifest, bench_out, out, err);
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitFailure;
    }
    return kExitUsage;
}

}  // namespace pmef::cli
