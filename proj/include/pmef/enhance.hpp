#pragma once

#include "pmef/image.hpp"
#include "pmef/parallel.hpp"

#include <cmath>
#include <vector>

namespace pmef {

/// Bilateral filter parameters. Both kernels are exp(-d^2 / sigma^2), without
/// the usual factor of two in the denominator.
struct BilateralParams {
    double sigma_spatial = 16.0;
    double sigma_range = 3.0 / 255.0;
    int window_radius = 48;

    /// Window radius ceil(3 * sigma_spatial).
    static BilateralParams with_default_window(double sigma_spatial, double sigma_range) {
        return {sigma_spatial, sigma_range, static_cast<int>(std::ceil(3.0 * sigma_spatial))};
    }

    void validate() const {
        if (!(sigma_spatial > 0.0) || !std::isfinite(sigma_spatial))
            throw ContractViolation("BilateralParams: sigma_spatial must be > 0");
        if (!(sigma_range > 0.0) || std::isnan(sigma_range))
            throw ContractViolation("BilateralParams: sigma_range must be > 0");
        if (window_radius < 1) throw ContractViolation("BilateralParams: window_radius must be >= 1");
    }
};

/// Edge-preserving local average of a luminance map.
///
/// Each output pixel is the normalized sum over the square window of radius
/// `window_radius` of L(q) * g_s(q - p) * g_r(L(q) - L(p)). Window positions
/// that fall outside the image are dropped and the remaining weights
/// renormalized, so a window covering the whole image is exactly the
/// full-support sum. Summation order within a window is fixed (row-major).
template <typename Scalar>
LuminanceMap<Scalar> bilateral_filter(const LuminanceMap<Scalar>& lum, const BilateralParams& params) {
    params.validate();
    const Eigen::Index height = lum.rows();
    const Eigen::Index width = lum.cols();
    const int radius = params.window_radius;
    const int span = 2 * radius + 1;

    std::vector<double> spatial(static_cast<std::size_t>(span) * span);
    const double inv_s2 = 1.0 / (params.sigma_spatial * params.sigma_spatial);
    for (int dy = -radius; dy <= radius; ++dy)
        for (int dx = -radius; dx <= radius; ++dx)
            spatial[static_cast<std::size_t>((dy + radius) * span + dx + radius)] =
                std::exp(-static_cast<double>(dx * dx + dy * dy) * inv_s2);

    const double inv_r2 = 1.0 / (params.sigma_range * params.sigma_range);
    // exp(-t) is exactly 0.0 in double beyond this point, so skipping such
    // samples leaves the sums bit-identical.
    constexpr double kUnderflow = 746.0;

    LuminanceMap<Scalar> out(height, width);
    parallel_rows(height, [&](std::ptrdiff_t y) {
        const Eigen::Index y0 = std::max<Eigen::Index>(0, y - radius);
        const Eigen::Index y1 = std::min<Eigen::Index>(height - 1, y + radius);
        for (Eigen::Index x = 0; x < width; ++x) {
            const Eigen::Index x0 = std::max<Eigen::Index>(0, x - radius);
            const Eigen::Index x1 = std::min<Eigen::Index>(width - 1, x + radius);
            const double center = static_cast<double>(lum(y, x));
            double num = 0.0;
            double den = 0.0;
            for (Eigen::Index qy = y0; qy <= y1; ++qy) {
                const double* srow =
                    &spatial[static_cast<std::size_t>((qy - y + radius) * span + (x0 - x + radius))];
                for (Eigen::Index qx = x0; qx <= x1; ++qx) {
                    const double v = static_cast<double>(lum(qy, qx));
                    const double d = v - center;
                    const double t = d * d * inv_r2;
                    if (t > kUnderflow) continue;
                    const double w = srow[qx - x0] * std::exp(-t);
                    num += w * v;
                    den += w;
                }
            }
            // The center sample always has weight 1, so den >= 1.
            out(y, x) = static_cast<Scalar>(num / den);
        }
    });
    return out;
}

/// Dodging and burning: L^2 / L_a, with 0 where the local average is 0.
template <typename Scalar>
LuminanceMap<Scalar> dodge_burn(const LuminanceMap<Scalar>& lum, const LuminanceMap<Scalar>& local_average) {
    require_same_size(lum, local_average, "dodge_burn");
    return lum.binaryExpr(local_average, [](Scalar l, Scalar la) {
        return la > Scalar(0) ? static_cast<Scalar>(static_cast<double>(l) * l / la) : Scalar(0);
    });
}

/// Local contrast enhancement: dodge_burn(L, bilateral_filter(L)).
template <typename Scalar>
LuminanceMap<Scalar> local_contrast_enhance(const LuminanceMap<Scalar>& lum, const BilateralParams& params) {
    return dodge_burn(lum, bilateral_filter(lum, params));
}

}  // namespace pmef
