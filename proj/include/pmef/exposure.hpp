#pragma once

#include "pmef/image.hpp"

#include <cmath>
#include <optional>
#include <vector>

namespace pmef {

enum class Approach { A, B };

inline constexpr double kMiddleGray = 0.18;
inline constexpr double kDefaultEpsilon = 1e-6;

/// Settings for estimating the properly exposed (0 EV) luminance and the
/// pseudo exposures derived from it.
struct ExposureCompConfig {
    Approach approach = Approach::B;
    /// Exposure of the input image, required by approach A.
    std::optional<double> known_ev;
    std::vector<double> target_evs{-1.0, 0.0, 1.0};
    /// Stand-in luminance for zero pixels in the log average.
    double epsilon = kDefaultEpsilon;
    double middle_gray = kMiddleGray;

    void validate() const {
        if (!(epsilon > 0.0)) throw ContractViolation("ExposureCompConfig: epsilon must be > 0");
        if (target_evs.empty()) throw ContractViolation("ExposureCompConfig: target_evs must be nonempty");
        for (double ev : target_evs)
            if (!std::isfinite(ev)) throw ContractViolation("ExposureCompConfig: target EVs must be finite");
        if (approach == Approach::A && !known_ev)
            throw ContractViolation("ExposureCompConfig: approach A needs the exposure value of the input");
        if (known_ev && !std::isfinite(*known_ev))
            throw ContractViolation("ExposureCompConfig: known EV must be finite");
        if (!(middle_gray > 0.0)) throw ContractViolation("ExposureCompConfig: middle_gray must be > 0");
    }
};

/// Approach A: L_0EV = 2^-v * L_c for an input shot at v EV.
template <typename Scalar>
LuminanceMap<Scalar> estimate_l0_approach_a(const LuminanceMap<Scalar>& lc, double v) {
    if (!std::isfinite(v)) throw ContractViolation("estimate_l0_approach_a: EV must be finite");
    return lc * static_cast<Scalar>(std::exp2(-v));
}

/// exp(mean(log L)), with log(epsilon) standing in for zero pixels.
template <typename Scalar>
double geometric_mean(const LuminanceMap<Scalar>& lum, double epsilon = kDefaultEpsilon) {
    if (!(epsilon > 0.0)) throw ContractViolation("geometric_mean: epsilon must be > 0");
    if (lum.size() == 0) throw ContractViolation("geometric_mean: empty map");
    const double log_eps = std::log(epsilon);
    double acc = 0.0;
    for (Eigen::Index y = 0; y < lum.rows(); ++y)
        for (Eigen::Index x = 0; x < lum.cols(); ++x) {
            const double v = static_cast<double>(lum(y, x));
            acc += v > 0.0 ? std::log(v) : log_eps;
        }
    return std::exp(acc / static_cast<double>(lum.size()));
}

/// Approach B: scale L_c so that its geometric mean lands on middle gray.
template <typename Scalar>
LuminanceMap<Scalar> estimate_l0_approach_b(const LuminanceMap<Scalar>& lc, double epsilon = kDefaultEpsilon,
                                            double middle_gray = kMiddleGray) {
    const double gm = geometric_mean(lc, epsilon);
    return lc * static_cast<Scalar>(middle_gray / gm);
}

/// L_i = 2^v * L_0EV.
template <typename Scalar>
LuminanceMap<Scalar> apply_ev(const LuminanceMap<Scalar>& l0, double v) {
    if (!std::isfinite(v)) throw ContractViolation("apply_ev: EV must be finite");
    return l0 * static_cast<Scalar>(std::exp2(v));
}

template <typename Scalar>
LuminanceMap<Scalar> estimate_l0(const LuminanceMap<Scalar>& lc, const ExposureCompConfig& cfg) {
    cfg.validate();
    if (cfg.approach == Approach::A) return estimate_l0_approach_a(lc, *cfg.known_ev);
    return estimate_l0_approach_b(lc, cfg.epsilon, cfg.middle_gray);
}

/// Gain s for which the geometric mean of luminance(s * hdr) equals
/// `middle_gray`, zero pixels entering the mean as log(epsilon). Solved in
/// closed form since the zero pixels do not scale with s.
template <typename Scalar>
double exposure_anchor_scale(const LuminanceMap<Scalar>& lum, double epsilon = kDefaultEpsilon,
                             double middle_gray = kMiddleGray) {
    double log_sum = 0.0;
    Eigen::Index positive = 0;
    for (Eigen::Index y = 0; y < lum.rows(); ++y)
        for (Eigen::Index x = 0; x < lum.cols(); ++x) {
            const double v = static_cast<double>(lum(y, x));
            if (v > 0.0) {
                log_sum += std::log(v);
                ++positive;
            }
        }
    if (positive == 0) throw DegenerateInput("HDR image has no pixel with positive luminance");
    const auto n = static_cast<double>(lum.size());
    const auto zeros = static_cast<double>(lum.size() - positive);
    const double log_s = (n * std::log(middle_gray) - zeros * std::log(epsilon) - log_sum) / static_cast<double>(positive);
    return std::exp(log_s);
}

/// Members before sensor clipping: 2^v * s * hdr, s from exposure_anchor_scale.
template <typename Scalar>
ExposureStack<Scalar> synth_exposure_stack_unclamped(const RgbImage<Scalar>& hdr, const std::vector<double>& evs,
                                                     double epsilon = kDefaultEpsilon) {
    validate(hdr);
    if (evs.empty()) throw ContractViolation("synth_exposure_stack: EV list is empty");
    const double s = exposure_anchor_scale(relative_luminance(hdr), epsilon);
    const RgbImage<Scalar> zero_ev = hdr.scaled(static_cast<Scalar>(s));
    ExposureStack<Scalar> stack;
    stack.reserve(evs.size());
    for (double ev : evs) {
        const ExposureTag tag(ev);
        stack.push_back({zero_ev.scaled(static_cast<Scalar>(tag.gain())), tag});
    }
    return stack;
}

/// Multi-exposure bracket from an HDR image through a linear camera: the
/// 0 EV member has luminance geometric mean 0.18, the v EV member is
/// clamp(2^v * (0 EV member), 0, 1).
template <typename Scalar>
ExposureStack<Scalar> synth_exposure_stack(const RgbImage<Scalar>& hdr, const std::vector<double>& evs,
                                           double epsilon = kDefaultEpsilon) {
    auto stack = synth_exposure_stack_unclamped(hdr, evs, epsilon);
    for (auto& member : stack) member.image = member.image.clamped();
    return stack;
}

}  // namespace pmef
