#pragma once

#include "pmef/image.hpp"

#include <cmath>

namespace pmef {

/// Reinhard's global operator F(L) = L (1 + L / Lw^2) / (1 + L).
/// F(Lw) = 1, and F is strictly increasing for L >= 0.
template <typename Scalar>
LuminanceMap<Scalar> reinhard_global(const LuminanceMap<Scalar>& lum, double l_white) {
    if (!(l_white > 0.0) || !std::isfinite(l_white))
        throw ContractViolation("reinhard_global: l_white must be finite and > 0");
    const double inv_w2 = 1.0 / (l_white * l_white);
    return lum.unaryExpr([inv_w2, l_white](Scalar l) {
        const double v = static_cast<double>(l);
        const double f = v * (1.0 + v * inv_w2) / (1.0 + v);
        // F <= 1 on [0, Lw]; keep rounding from stepping over it.
        return static_cast<Scalar>(v <= l_white ? std::min(f, 1.0) : f);
    });
}

/// max(L), or 1 for an all-black map.
template <typename Scalar>
double pick_l_white(const LuminanceMap<Scalar>& lum) {
    if (lum.size() == 0) return 1.0;
    const double m = static_cast<double>(lum.maxCoeff());
    return m > 0.0 ? m : 1.0;
}

/// C'(p) = (L'(p) / L(p)) C(p) per channel, black where L(p) = 0.
/// Results are not clamped.
template <typename Scalar>
RgbImage<Scalar> restore_color(const LuminanceMap<Scalar>& mapped, const LuminanceMap<Scalar>& lum,
                               const RgbImage<Scalar>& img) {
    require_same_size(mapped, lum, "restore_color");
    require_same_size(lum, img.r(), "restore_color");
    const Plane<Scalar> ratio = mapped.binaryExpr(lum, [](Scalar lp, Scalar l) {
        return l > Scalar(0) ? static_cast<Scalar>(static_cast<double>(lp) / l) : Scalar(0);
    });
    return RgbImage<Scalar>(ratio * img.r(), ratio * img.g(), ratio * img.b());
}

/// One pseudo exposure: tone map L_i with Lw = max(L_i), then carry the
/// colors of `img` over with the ratio to the original luminance `lum`.
template <typename Scalar>
RgbImage<Scalar> make_pseudo_exposure(const RgbImage<Scalar>& img, const LuminanceMap<Scalar>& lum,
                                      const LuminanceMap<Scalar>& exposed) {
    return restore_color(reinhard_global(exposed, pick_l_white(exposed)), lum, img);
}

}  // namespace pmef
