// Directional checks on the Memorial Church HDR scene: the bracket
// synthesized at -1/0/+1 EV is scored for the 0 EV input, plain exposure
// fusion of the bracket, and the single-image pipeline with approaches A
// and B. Needs the scene file; without it both criteria are reported as
// SKIP (exit 77) after an informative run on a procedural scene.

#include "pmef/image_io.hpp"
#include "pmef/pipeline.hpp"
#include "test_util.hpp"

#include <fmt/format.h>

#include <chrono>
#include <cstdlib>
#include <iostream>
#include <map>
#include <optional>

using namespace pmef;
namespace fs = std::filesystem;

namespace {

constexpr int kSkip = 77;

std::optional<fs::path> find_scene() {
    if (const char* env = std::getenv("PMEF_MEMORIAL_HDR"); env && *env) return fs::path(env);
    const fs::path bundled = fs::path(PMEF_SOURCE_DIR) / "data" / "memorial.hdr";
    if (fs::exists(bundled)) return bundled;
    return std::nullopt;
}

std::map<std::string, MethodScore> score(const Image& hdr) {
    const Stack stack = synthesize_ldr_stack(hdr, {-1.0, 0.0, 1.0});
    std::map<std::string, MethodScore> out;
    for (const auto& s : score_methods(stack, {"input", "mef", "A", "B"}, PipelineConfig{}))
        out[s.method] = s;
    return out;
}

void print_table(const std::map<std::string, MethodScore>& s) {
    for (const char* m : {"input", "mef", "A", "B"})
        std::cout << fmt::format("    {:<6} ciede2000={:.4f} naturalness={:.4f}\n", m, s.at(m).de2000,
                                 s.at(m).naturalness);
}

// Reference figures for the scene, for the informative magnitude check.
constexpr double kRefA = 1.762, kRefB = 2.690, kRefMef = 2.984;

bool within_75(double value, double ref) { return std::abs(value - ref) <= 0.75 * ref; }

}  // namespace

int main() {
    const auto scene = find_scene();
    if (!scene) {
        std::cout << "Memorial HDR not found (set PMEF_MEMORIAL_HDR or place data/memorial.hdr)\n";
        const auto t0 = std::chrono::steady_clock::now();
        const auto s = score(test::synthetic_hdr_scene(256, 192));
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::cout << fmt::format("  informative run on a procedural 256x192 interior scene ({:.1f} s):\n", secs);
        print_table(s);
        std::cout << fmt::format("  proxy ordering: A<B {}, A<MEF {}, naturalness A>input {}\n",
                                 s.at("A").de2000 < s.at("B").de2000 ? "yes" : "no",
                                 s.at("A").de2000 < s.at("mef").de2000 ? "yes" : "no",
                                 s.at("A").naturalness > s.at("input").naturalness ? "yes" : "no");
        std::cout << "[SKIP] criterion 7 CIEDE2000 ordering on Memorial: scene file unavailable\n";
        std::cout << "[SKIP] criterion 8 naturalness ordering on Memorial: scene file unavailable\n";
        return kSkip;
    }

    const auto t0 = std::chrono::steady_clock::now();
    Image hdr;
    try {
        hdr = load_image(*scene);
    } catch (const std::exception& e) {
        std::cout << "[FAIL] criterion 7: cannot load " << scene->string() << ": " << e.what() << "\n";
        std::cout << "[FAIL] criterion 8: cannot load scene\n";
        return 1;
    }
    const auto s = score(hdr);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::cout << fmt::format("  {} ({}x{}), {:.1f} s\n", scene->string(), hdr.width(), hdr.height(), secs);
    print_table(s);

    const double a = s.at("A").de2000, b = s.at("B").de2000, mef = s.at("mef").de2000;
    const bool ok7 = a < b && a < mef && secs < 120.0;
    std::cout << fmt::format("  magnitudes within 75% of reference (informative): A {} B {} MEF {}\n",
                             within_75(a, kRefA) ? "yes" : "no", within_75(b, kRefB) ? "yes" : "no",
                             within_75(mef, kRefMef) ? "yes" : "no");
    std::cout << fmt::format("[{}] criterion 7 CIEDE2000 ordering on Memorial: A={:.4f} B={:.4f} MEF={:.4f}, {:.1f} s\n",
                             ok7 ? "PASS" : "FAIL", a, b, mef, secs);

    const double na = s.at("A").naturalness, ni = s.at("input").naturalness;
    const bool ok8 = na > ni;
    std::cout << fmt::format("[{}] criterion 8 naturalness ordering on Memorial: A={:.4f} input={:.4f}\n",
                             ok8 ? "PASS" : "FAIL", na, ni);
    return ok7 && ok8 ? 0 : 1;
}
