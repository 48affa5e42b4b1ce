#pragma once

#include "pmef/enhance.hpp"
#include "pmef/exposure.hpp"
#include "pmef/fusion.hpp"
#include "pmef/image.hpp"

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace pmef {

/// Everything the single-image enhancement needs, as read from flags and/or a
/// key=value config file.
struct PipelineConfig {
    std::filesystem::path input;
    std::filesystem::path output;
    ExposureCompConfig exposure;
    BilateralParams bilateral = BilateralParams::with_default_window(16.0, 3.0 / 255.0);
    std::string fusion = "mertens";
    QualityExponents exponents;
    bool emit_intermediates = false;

    void validate() const;
};

/// Intermediate and final products of one run.
struct PipelineResult {
    Luminance luminance;         // L
    Luminance enhanced;          // L_c
    Luminance zero_ev;           // L_0EV
    std::vector<Luminance> exposed;  // L_i
    Stack pseudo_stack;          // I'_i, tagged with v_i
    Image fused;                 // I', unclamped
};

/// The six steps: luminance, local contrast enhancement, 0 EV estimate and
/// pseudo exposures, tone mapping, color restoration, fusion.
PipelineResult run_pipeline(const Image& input, const PipelineConfig& cfg);

/// Steps 3 to 6 given L and L_c from an earlier run, so several exposure
/// settings can share one bilateral pass.
PipelineResult run_pipeline_from_enhanced(const Image& input, const Luminance& luminance, const Luminance& enhanced,
                                          const PipelineConfig& cfg);

/// Applies `key=value` settings to a config. Unknown keys and malformed
/// values throw ContractViolation. Keys: input, output, approach, ev, evs,
/// sigma_spatial, sigma_range, window_radius, epsilon, fusion,
/// emit_intermediates, w_contrast, w_saturation, w_exposedness.
void apply_setting(PipelineConfig& cfg, const std::string& key, const std::string& value);

/// Parses a flat key=value text file ('#' starts a comment).
std::map<std::string, std::string> read_key_value_file(const std::filesystem::path& path);

std::vector<double> parse_ev_list(const std::string& text);
Approach parse_approach(const std::string& text);

/// "+1.0", "-1.0", "+0.0" (negative zero prints as +0.0).
std::string ev_label(double ev);

/// `<dir>/<stem>_ev<label>.png` next to `output`.
std::filesystem::path intermediate_path(const std::filesystem::path& output, double ev);
std::filesystem::path enhanced_luminance_path(const std::filesystem::path& output);

// ---------------------------------------------------------------------------
// Evaluation protocol on HDR scenes
// ---------------------------------------------------------------------------

/// One table row: a method's output scored against the 0 EV input.
struct MethodScore {
    std::string method;
    double de2000 = 0.0;
    double naturalness = 0.0;
};

/// Methods: "input" (the 0 EV image itself), "mef" (Mertens fusion of the
/// bracket), "A" and "B" (the pseudo-exposure pipeline with each approach).
/// `stack` must contain a 0 EV member, used as the single input image.
/// Outputs are quantized to 8 bits before scoring.
std::vector<MethodScore> score_methods(const Stack& stack, const std::vector<std::string>& methods,
                                       const PipelineConfig& base);

/// Clamped, 8-bit-quantized bracket synthesized from an HDR image.
Stack synthesize_ldr_stack(const Image& hdr, const std::vector<double>& evs, double epsilon = kDefaultEpsilon);

}  // namespace pmef
