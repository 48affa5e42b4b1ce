#include "pmef/pipeline.hpp"

#include "pmef/image_io.hpp"
#include "pmef/metrics.hpp"
#include "pmef/tonemap.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

namespace pmef {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        const double v = std::stod(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw ContractViolation(fmt::format("{}: '{}' is not a number", key, value));
    }
}

bool parse_bool(const std::string& key, const std::string& value) {
    if (value == "1" || value == "true" || value == "yes" || value == "on") return true;
    if (value == "0" || value == "false" || value == "no" || value == "off") return false;
    throw ContractViolation(fmt::format("{}: '{}' is not a boolean", key, value));
}

}  // namespace

void PipelineConfig::validate() const {
    exposure.validate();
    bilateral.validate();
    if (std::find(fusion_backend_names().begin(), fusion_backend_names().end(), fusion) ==
        fusion_backend_names().end())
        throw ContractViolation(fmt::format("unknown fusion backend '{}'", fusion));
}

PipelineResult run_pipeline(const Image& input, const PipelineConfig& cfg) {
    validate(input);
    cfg.validate();
    const Luminance lum = relative_luminance(input);
    return run_pipeline_from_enhanced(input, lum, local_contrast_enhance(lum, cfg.bilateral), cfg);
}

PipelineResult run_pipeline_from_enhanced(const Image& input, const Luminance& luminance, const Luminance& enhanced,
                                          const PipelineConfig& cfg) {
    cfg.validate();
    require_same_size(luminance, input.r(), "run_pipeline");
    require_same_size(enhanced, input.r(), "run_pipeline");
    const auto backend = make_fusion_backend(cfg.fusion, cfg.exponents);

    PipelineResult r;
    r.luminance = luminance;
    r.enhanced = enhanced;
    r.zero_ev = estimate_l0(r.enhanced, cfg.exposure);

    std::vector<Image> members;
    for (double ev : cfg.exposure.target_evs) {
        r.exposed.push_back(apply_ev(r.zero_ev, ev));
        Image pseudo = make_pseudo_exposure(input, r.luminance, r.exposed.back());
        members.push_back(pseudo);
        r.pseudo_stack.push_back({std::move(pseudo), ExposureTag(ev)});
    }
    r.fused = backend->fuse(members);
    return r;
}

std::vector<double> parse_ev_list(const std::string& text) {
    std::vector<double> evs;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) throw ContractViolation(fmt::format("evs: empty entry in '{}'", text));
        const double v = parse_double("evs", item);
        if (!std::isfinite(v)) throw ContractViolation("evs: values must be finite");
        evs.push_back(v);
    }
    if (evs.empty()) throw ContractViolation("evs: list is empty");
    return evs;
}

Approach parse_approach(const std::string& text) {
    if (text == "A" || text == "a") return Approach::A;
    if (text == "B" || text == "b") return Approach::B;
    throw ContractViolation(fmt::format("approach: expected A or B, got '{}'", text));
}

void apply_setting(PipelineConfig& cfg, const std::string& key, const std::string& value) {
    if (key == "input") {
        cfg.input = value;
    } else if (key == "output") {
        cfg.output = value;
    } else if (key == "approach") {
        cfg.exposure.approach = parse_approach(value);
    } else if (key == "ev") {
        cfg.exposure.known_ev = parse_double(key, value);
    } else if (key == "evs") {
        cfg.exposure.target_evs = parse_ev_list(value);
    } else if (key == "sigma_spatial") {
        // The window follows sigma unless window_radius is set afterwards.
        cfg.bilateral = BilateralParams::with_default_window(parse_double(key, value), cfg.bilateral.sigma_range);
    } else if (key == "sigma_range") {
        cfg.bilateral.sigma_range = parse_double(key, value);
    } else if (key == "window_radius") {
        const double r = parse_double(key, value);
        if (r != std::floor(r)) throw ContractViolation("window_radius: must be an integer");
        cfg.bilateral.window_radius = static_cast<int>(r);
    } else if (key == "epsilon") {
        cfg.exposure.epsilon = parse_double(key, value);
    } else if (key == "fusion") {
        cfg.fusion = value;
    } else if (key == "emit_intermediates") {
        cfg.emit_intermediates = parse_bool(key, value);
    } else if (key == "w_contrast") {
        cfg.exponents.contrast = parse_double(key, value);
    } else if (key == "w_saturation") {
        cfg.exponents.saturation = parse_double(key, value);
    } else if (key == "w_exposedness") {
        cfg.exponents.exposedness = parse_double(key, value);
    } else {
        throw ContractViolation(fmt::format("unknown setting '{}'", key));
    }
}

std::map<std::string, std::string> read_key_value_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError(fmt::format("cannot open config '{}'", path.string()));
    std::map<std::string, std::string> out;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ContractViolation(fmt::format("{}:{}: expected key=value", path.string(), lineno));
        out[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }
    return out;
}

std::string ev_label(double ev) {
    if (ev == 0.0) ev = 0.0;  // drop the sign of -0.0
    return fmt::format("{:+.1f}", ev);
}

std::filesystem::path intermediate_path(const std::filesystem::path& output, double ev) {
    return output.parent_path() / fmt::format("{}_ev{}.png", output.stem().string(), ev_label(ev));
}

std::filesystem::path enhanced_luminance_path(const std::filesystem::path& output) {
    return output.parent_path() / fmt::format("{}_lc.pfm", output.stem().string());
}

Stack synthesize_ldr_stack(const Image& hdr, const std::vector<double>& evs, double epsilon) {
    Stack stack = synth_exposure_stack(hdr, evs, epsilon);
    for (auto& m : stack) m.image = quantize8(m.image);
    return stack;
}

std::vector<MethodScore> score_methods(const Stack& stack, const std::vector<std::string>& methods,
                                       const PipelineConfig& base) {
    const auto zero = std::find_if(stack.begin(), stack.end(), [](const auto& m) { return m.tag.ev == 0.0; });
    if (zero == stack.end()) throw ContractViolation("score_methods: bracket has no 0 EV member");
    const Image& input = zero->image;

    std::optional<Luminance> lum;
    std::optional<Luminance> enhanced;
    std::vector<MethodScore> scores;
    for (const auto& method : methods) {
        Image out;
        if (method == "input") {
            out = input;
        } else if (method == "mef") {
            std::vector<Image> members;
            for (const auto& m : stack) members.push_back(m.image);
            out = make_fusion_backend(base.fusion, base.exponents)->fuse(members);
        } else if (method == "A" || method == "B") {
            PipelineConfig cfg = base;
            cfg.exposure.approach = parse_approach(method);
            if (cfg.exposure.approach == Approach::A) cfg.exposure.known_ev = 0.0;
            if (!enhanced) {
                validate(input);
                lum = relative_luminance(input);
                enhanced = local_contrast_enhance(*lum, cfg.bilateral);
            }
            out = run_pipeline_from_enhanced(input, *lum, *enhanced, cfg).fused;
        } else {
            throw ContractViolation(fmt::format("unknown method '{}'", method));
        }
        out = quantize8(out);
        scores.push_back({method, mean_de2000(out, input), statistical_naturalness(out)});
    }
    return scores;
}

}  // namespace pmef
