#pragma once

#include "pmef/image.hpp"

#include <Eigen/Core>

#include <cmath>
#include <map>
#include <numbers>
#include <optional>
#include <string>

namespace pmef {

/// CIELAB triple (L*, a*, b*).
using Lab = Eigen::Vector3d;

namespace detail {

inline double srgb_decode(double v) {
    return v <= 0.04045 ? v / 12.92 : std::pow((v + 0.055) / 1.055, 2.4);
}

inline double lab_f(double t) {
    constexpr double delta = 6.0 / 29.0;
    return t > delta * delta * delta ? std::cbrt(t) : t / (3.0 * delta * delta) + 4.0 / 29.0;
}

inline double deg(double rad) { return rad * 180.0 / std::numbers::pi; }
inline double rad(double deg) { return deg * std::numbers::pi / 180.0; }

}  // namespace detail

/// sRGB (IEC 61966-2-1 transfer curve) to CIELAB, D65 white.
inline Lab rgb_to_lab(const Eigen::Vector3d& rgb) {
    // clang-format off
    static const Eigen::Matrix3d kSrgbToXyz = (Eigen::Matrix3d() <<
        0.4124564, 0.3575761, 0.1804375,
        0.2126729, 0.7151522, 0.0721750,
        0.0193339, 0.1191920, 0.9503041).finished();
    // clang-format on
    static const Eigen::Vector3d kWhite(0.95047, 1.0, 1.08883);

    const Eigen::Vector3d linear = rgb.unaryExpr([](double v) { return detail::srgb_decode(std::clamp(v, 0.0, 1.0)); });
    const Eigen::Vector3d xyz = (kSrgbToXyz * linear).cwiseQuotient(kWhite);
    const double fx = detail::lab_f(xyz.x());
    const double fy = detail::lab_f(xyz.y());
    const double fz = detail::lab_f(xyz.z());
    return {116.0 * fy - 16.0, 500.0 * (fx - fy), 200.0 * (fy - fz)};
}

/// CIEDE2000 color difference with kL = kC = kH = 1. Hue terms are zero when
/// either chroma is zero.
inline double de2000(const Lab& lab1, const Lab& lab2) {
    using detail::deg;
    using detail::rad;
    const double pow25_7 = 6103515625.0;  // 25^7

    const double c1 = std::hypot(lab1[1], lab1[2]);
    const double c2 = std::hypot(lab2[1], lab2[2]);
    const double c_bar7 = std::pow((c1 + c2) / 2.0, 7.0);
    const double g = 0.5 * (1.0 - std::sqrt(c_bar7 / (c_bar7 + pow25_7)));

    const double a1p = (1.0 + g) * lab1[1];
    const double a2p = (1.0 + g) * lab2[1];
    const double c1p = std::hypot(a1p, lab1[2]);
    const double c2p = std::hypot(a2p, lab2[2]);

    auto hue = [](double b, double ap) {
        if (b == 0.0 && ap == 0.0) return 0.0;
        double h = deg(std::atan2(b, ap));
        return h < 0.0 ? h + 360.0 : h;
    };
    const double h1p = hue(lab1[2], a1p);
    const double h2p = hue(lab2[2], a2p);

    const double dl = lab2[0] - lab1[0];
    const double dc = c2p - c1p;
    const bool achromatic = c1p * c2p == 0.0;

    double dh = 0.0;
    if (!achromatic) {
        dh = h2p - h1p;
        if (dh > 180.0)
            dh -= 360.0;
        else if (dh < -180.0)
            dh += 360.0;
    }
    const double d_hue = 2.0 * std::sqrt(c1p * c2p) * std::sin(rad(dh / 2.0));

    const double l_bar = (lab1[0] + lab2[0]) / 2.0;
    const double c_bar_p = (c1p + c2p) / 2.0;
    double h_bar = h1p + h2p;
    if (!achromatic) {
        if (std::abs(h1p - h2p) <= 180.0)
            h_bar /= 2.0;
        else if (h1p + h2p < 360.0)
            h_bar = (h1p + h2p + 360.0) / 2.0;
        else
            h_bar = (h1p + h2p - 360.0) / 2.0;
    }

    const double t = 1.0 - 0.17 * std::cos(rad(h_bar - 30.0)) + 0.24 * std::cos(rad(2.0 * h_bar)) +
                     0.32 * std::cos(rad(3.0 * h_bar + 6.0)) - 0.20 * std::cos(rad(4.0 * h_bar - 63.0));
    const double d_theta = 30.0 * std::exp(-std::pow((h_bar - 275.0) / 25.0, 2.0));
    const double c_bar_p7 = std::pow(c_bar_p, 7.0);
    const double r_c = 2.0 * std::sqrt(c_bar_p7 / (c_bar_p7 + pow25_7));
    const double l50 = (l_bar - 50.0) * (l_bar - 50.0);
    const double s_l = 1.0 + 0.015 * l50 / std::sqrt(20.0 + l50);
    const double s_c = 1.0 + 0.045 * c_bar_p;
    const double s_h = 1.0 + 0.015 * c_bar_p * t;
    const double r_t = -std::sin(rad(2.0 * d_theta)) * r_c;

    const double tl = dl / s_l;
    const double tc = dc / s_c;
    const double th = d_hue / s_h;
    return std::sqrt(std::max(0.0, tl * tl + tc * tc + th * th + r_t * tc * th));
}

/// Arithmetic mean of per-pixel CIEDE2000. Channels are clamped to [0,1]
/// first, as they would be on 8-bit encode.
template <typename Scalar>
double mean_de2000(const RgbImage<Scalar>& a, const RgbImage<Scalar>& b) {
    if (!a.same_size(b)) throw ContractViolation("mean_de2000: dimension mismatch");
    if (a.empty()) throw ContractViolation("mean_de2000: empty images");
    double sum = 0.0;
    for (Eigen::Index y = 0; y < a.height(); ++y)
        for (Eigen::Index x = 0; x < a.width(); ++x)
            sum += de2000(rgb_to_lab(a.pixel(x, y).template cast<double>().matrix()),
                          rgb_to_lab(b.pixel(x, y).template cast<double>().matrix()));
    return sum / static_cast<double>(a.pixel_count());
}

/// Parameters of the no-reference naturalness model: a Gaussian in global
/// mean brightness and a Beta density in mean block contrast, both on the
/// 0..255 gray scale.
struct NaturalnessModel {
    double brightness_mean = 115.94;
    double brightness_std = 27.99;
    double contrast_alpha = 4.4;
    double contrast_beta = 10.1;
    double contrast_scale = 64.29;
    int block_size = 11;

    /// Gaussian density divided by its peak value.
    double brightness_term(double mean) const {
        const double z = (mean - brightness_mean) / brightness_std;
        return std::exp(-0.5 * z * z);
    }

    /// Beta density at sigma / contrast_scale divided by its value at the mode.
    double contrast_term(double sigma) const {
        const double x = sigma / contrast_scale;
        if (!(x > 0.0) || !(x < 1.0)) return 0.0;
        const double mode = (contrast_alpha - 1.0) / (contrast_alpha + contrast_beta - 2.0);
        const double log_ratio = (contrast_alpha - 1.0) * std::log(x / mode) +
                                 (contrast_beta - 1.0) * std::log((1.0 - x) / (1.0 - mode));
        return std::exp(log_ratio);
    }
};

/// 8-bit-scale gray plane: Rec. 709 luminance of the [0,1]-clamped image, x255.
template <typename Scalar>
Plane<double> naturalness_gray(const RgbImage<Scalar>& img) {
    return relative_luminance(img.clamped().template cast<double>()) * 255.0;
}

/// Mean over pixels of the sample standard deviation of the non-overlapping
/// block each pixel belongs to. Edge blocks use only the pixels they cover.
inline double mean_block_std(const Plane<double>& gray, int block) {
    if (block < 1) throw ContractViolation("mean_block_std: block size must be >= 1");
    double weighted = 0.0;
    for (Eigen::Index by = 0; by < gray.rows(); by += block)
        for (Eigen::Index bx = 0; bx < gray.cols(); bx += block) {
            const auto tile = gray.block(by, bx, std::min<Eigen::Index>(block, gray.rows() - by),
                                         std::min<Eigen::Index>(block, gray.cols() - bx));
            const auto n = static_cast<double>(tile.size());
            if (tile.size() < 2) continue;
            const double mean = ordered_mean(tile);
            double ss = 0.0;
            for (Eigen::Index y = 0; y < tile.rows(); ++y)
                for (Eigen::Index x = 0; x < tile.cols(); ++x) ss += (tile(y, x) - mean) * (tile(y, x) - mean);
            weighted += n * std::sqrt(ss / (n - 1.0));
        }
    return weighted / static_cast<double>(gray.size());
}

/// Statistical naturalness in [0,1]; no reference image needed.
template <typename Scalar>
double statistical_naturalness(const RgbImage<Scalar>& img, const NaturalnessModel& model = {}) {
    validate(img);
    const Plane<double> gray = naturalness_gray(img);
    return model.brightness_term(ordered_mean(gray)) * model.contrast_term(mean_block_std(gray, model.block_size));
}

/// One metrics record. Absent metrics are omitted from the text form.
struct MetricReport {
    std::string image_a;
    std::optional<std::string> image_b;
    std::optional<double> mean_de2000;
    std::optional<double> statistical_naturalness;
    std::map<std::string, std::string> params;
};

/// Single-line `key=value` rendering, values with six decimals.
std::string format_record(const MetricReport& report);

}  // namespace pmef
